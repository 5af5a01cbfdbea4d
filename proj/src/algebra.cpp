#include "llab/algebra.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "llab/errors.hpp"

namespace llab {

namespace {

using Json = nlohmann::ordered_json;

Rational json_rational(const Json& j, const std::string& what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
  throw InputError(what + " must be a rational string such as \"-3/2\"");
}

std::size_t json_count(const Json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 1) throw InputError(what + " must be a positive integer");
  return static_cast<std::size_t>(j.get<long long>());
}

// Multiplicity table keyed by (lambda, size).
using BlockTable = std::map<std::pair<Rational, std::size_t>, std::size_t>;

BlockTable tabulate(const JordanSpec& spec) {
  BlockTable t;
  for (const auto& b : spec.blocks) {
    if (b.size == 0 || b.mult == 0) throw InputError("block size and multiplicity must be positive");
    t[{b.lambda, b.size}] += b.mult;
  }
  return t;
}

}  // namespace

JordanSpec parse_spec(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("spec must be a JSON object");
  JordanSpec spec;
  if (j.contains("a")) spec.a = json_rational(j["a"], "\"a\"");
  if (j.contains("allow_nonunimodular")) {
    if (!j["allow_nonunimodular"].is_boolean()) throw InputError("\"allow_nonunimodular\" must be a boolean");
    spec.allow_nonunimodular = j["allow_nonunimodular"].get<bool>();
  }
  if (j.contains("v") && !j["v"].is_null()) {
    if (!j["v"].is_array()) throw InputError("\"v\" must be an array or null");
    for (const auto& x : j["v"]) spec.v.push_back(json_rational(x, "entries of \"v\""));
  }
  if (!j.contains("blocks")) throw InputError("spec is missing \"blocks\"");
  if (!j["blocks"].is_array()) throw InputError("\"blocks\" must be an array");
  for (const auto& b : j["blocks"]) {
    if (!b.is_object() || !b.contains("lambda") || !b.contains("size"))
      throw InputError("each block needs \"lambda\" and \"size\"");
    Block blk;
    blk.lambda = json_rational(b["lambda"], "\"lambda\"");
    blk.size = json_count(b["size"], "\"size\"");
    blk.mult = b.contains("mult") ? json_count(b["mult"], "\"mult\"") : 1;
    spec.blocks.push_back(blk);
  }
  return spec;
}

std::string spec_to_json(const JordanSpec& spec) {
  Json j;
  j["a"] = to_string(spec.a);
  if (spec.v.empty()) {
    j["v"] = nullptr;
  } else {
    Json v = Json::array();
    for (const auto& x : spec.v) v.push_back(to_string(x));
    j["v"] = v;
  }
  Json blocks = Json::array();
  for (const auto& b : spec.blocks)
    blocks.push_back(Json{{"lambda", to_string(b.lambda)}, {"size", b.size}, {"mult", b.mult}});
  j["blocks"] = blocks;
  if (spec.allow_nonunimodular) j["allow_nonunimodular"] = true;
  return j.dump();
}

std::size_t spec_dimension(const JordanSpec& spec) {
  std::size_t d = 2;
  for (const auto& b : spec.blocks) d += b.size * b.mult;
  return d;
}

bool has_zero_eigenvalue(const JordanSpec& spec) {
  return std::any_of(spec.blocks.begin(), spec.blocks.end(), [](const Block& b) { return b.lambda == 0; });
}

bool is_semisimple(const JordanSpec& spec) {
  return is_zero(spec.v) &&
         std::all_of(spec.blocks.begin(), spec.blocks.end(), [](const Block& b) { return b.size == 1; });
}

Admissibility validate_spectrum(const JordanSpec& spec) {
  BlockTable t = tabulate(spec);
  for (const auto& [key, mult] : t) {
    const auto& [lambda, size] = key;
    if (lambda == 0 && size % 2 == 1 && mult % 2 == 1)
      return {false, 1,
              "zero eigenvalue: Jordan blocks of odd size " + std::to_string(size) +
                  " occur with odd multiplicity " + std::to_string(mult)};
  }
  for (const auto& [key, mult] : t) {
    const auto& [lambda, size] = key;
    if (lambda == 0) continue;
    auto it = t.find({-lambda, size});
    std::size_t partner = it == t.end() ? 0 : it->second;
    if (partner != mult)
      return {false, 2,
              "eigenvalue " + to_string(lambda) + " has " + std::to_string(mult) + " block(s) of size " +
                  std::to_string(size) + " but " + to_string(Rational(-lambda)) + " has " +
                  std::to_string(partner)};
  }
  return {true, 0, "admissible"};
}

std::vector<PlacedBlock> BasisLayout::all_blocks() const {
  std::vector<PlacedBlock> out;
  for (const auto& d : doubles) {
    out.push_back({d.lambda, d.size, d.plus_start});
    out.push_back({-d.lambda, d.size, d.minus_start});
  }
  out.insert(out.end(), unpaired.begin(), unpaired.end());
  out.insert(out.end(), zero_blocks.begin(), zero_blocks.end());
  std::sort(out.begin(), out.end(), [](const PlacedBlock& a, const PlacedBlock& b) { return a.start < b.start; });
  return out;
}

namespace {

BasisLayout make_layout(const JordanSpec& spec) {
  BlockTable t = tabulate(spec);
  BasisLayout layout;
  std::size_t next = 2;

  // Positive eigenvalues ascending; within one, sizes descending.
  std::vector<std::pair<Rational, std::size_t>> positive;
  for (const auto& [key, mult] : t)
    if (key.first > 0) positive.push_back(key);
  std::stable_sort(positive.begin(), positive.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  });
  BlockTable left = t;
  for (const auto& [lambda, size] : positive) {
    auto minus = left.find({-lambda, size});
    std::size_t pairs = minus == left.end() ? 0 : std::min(left[{lambda, size}], minus->second);
    for (std::size_t p = 0; p < pairs; ++p) {
      DoubleBlock d{lambda, size, next, next + size};
      layout.doubles.push_back(d);
      next += 2 * size;
    }
    left[{lambda, size}] -= pairs;
    if (minus != left.end()) minus->second -= pairs;
  }

  std::vector<std::pair<Rational, std::size_t>> rest;
  for (const auto& [key, mult] : left)
    if (key.first != 0)
      for (std::size_t p = 0; p < mult; ++p) rest.push_back(key);
  std::stable_sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  });
  for (const auto& [lambda, size] : rest) {
    layout.unpaired.push_back({lambda, size, next});
    next += size;
  }

  layout.v0_begin = next;
  std::vector<std::size_t> zero_sizes;
  for (const auto& [key, mult] : t)
    if (key.first == 0)
      for (std::size_t p = 0; p < mult; ++p) zero_sizes.push_back(key.second);
  std::sort(zero_sizes.rbegin(), zero_sizes.rend());
  for (auto size : zero_sizes) {
    layout.zero_blocks.push_back({Rational(0), size, next});
    next += size;
  }
  layout.dimension = next;

  layout.labels = {"f1", "f2"};
  for (std::size_t i = 2; i < layout.v0_begin; ++i) layout.labels.push_back("x" + std::to_string(i - 1));
  for (std::size_t i = layout.v0_begin; i < next; ++i)
    layout.labels.push_back("e" + std::to_string(i - layout.v0_begin + 1));
  return layout;
}

}  // namespace

Algebra::Algebra(JordanSpec spec) : spec_(std::move(spec)) {
  if (spec_.a != 0 && !spec_.allow_nonunimodular)
    throw InputError("a != 0 (non-unimodular) requires allow_nonunimodular");
  const std::size_t dim = spec_dimension(spec_);
  if (dim % 2) throw InputError("total dimension " + std::to_string(dim) + " is odd");
  if (dim > kMaxDimension) throw InputError("dimension " + std::to_string(dim) + " exceeds 32");
  layout_ = make_layout(spec_);
  if (!spec_.v.empty()) {
    if (spec_.v.size() != layout_.v0_dimension())
      throw InputError("\"v\" has " + std::to_string(spec_.v.size()) + " entries but the zero-eigenvalue part has dimension " +
                       std::to_string(layout_.v0_dimension()));
    if (!is_zero(spec_.v) && layout_.zero_blocks.empty())
      throw InputError("\"v\" must vanish when 0 is not an eigenvalue of A0");
  }

  const std::size_t u = dim - 1;
  a_ = QMatrix(u, u);
  a_.set(0, 0, spec_.a);
  for (std::size_t i = 0; i < spec_.v.size(); ++i) a_.set(0, layout_.v0_begin + i - 1, spec_.v[i]);
  for (const auto& b : layout_.all_blocks()) {
    for (std::size_t j = 0; j < b.size; ++j) {
      std::size_t col = b.start + j - 1;
      a_.set(col, col, b.lambda);
      if (j + 1 < b.size) a_.set(col + 1, col, 1);
    }
  }

  dual_action_.assign(dim, {});
  for (std::size_t r = 0; r < u; ++r)
    for (const auto& [c, x] : a_.row(r)) dual_action_[r + 1].emplace_back(c + 1, x);
}

bool Algebra::is_unimodular() const {
  Rational tr = 0;
  for (std::size_t i = 0; i < a_.rows(); ++i) tr += a_.at(i, i);
  return tr == 0;
}

QVector Algebra::bracket(const QVector& x, const QVector& y) const {
  const std::size_t dim = dimension();
  if (x.size() != dim || y.size() != dim) throw DimensionError("bracket arguments have wrong length");
  QVector xu(x.begin() + 1, x.end()), yu(y.begin() + 1, y.end());
  QVector ax = a_ * xu, ay = a_ * yu;
  QVector out(dim);
  for (std::size_t i = 0; i + 1 < dim; ++i) out[i + 1] = x[0] * ay[i] - y[0] * ax[i];
  return out;
}

KForm Algebra::d(const KForm& form) const {
  if (form.dimension() != dimension()) throw DimensionError("form lives on a different algebra");
  KForm out(dimension(), form.degree() + 1);
  if (out.degree() > dimension()) return out;
  // d(f1 ^ mu) = 0 and d(mu) = -f1 ^ D(mu), D the derivation extending A^T.
  for (const auto& [m, coeff] : form.terms()) {
    if (m & 1u) continue;
    for (Mask bits = m; bits; bits &= bits - 1) {
      Mask c = bits & (~bits + 1);
      Mask rest = m ^ c;
      int s1 = wedge_sign(c, rest);
      for (const auto& [j, a] : dual_action_[static_cast<std::size_t>(__builtin_ctz(c))]) {
        Mask jm = Mask{1} << j;
        int s2 = wedge_sign(jm, rest);
        if (s2 == 0) continue;
        Rational t = coeff * a;
        out.add_term(rest | jm | 1u, s1 * s2 > 0 ? Rational(-t) : t);
      }
    }
  }
  return out;
}

QMatrix Algebra::differential(std::size_t k) const {
  return differential(DegreeBasis(dimension(), k), DegreeBasis(dimension(), k + 1));
}

QMatrix Algebra::differential(const DegreeBasis& source, const DegreeBasis& target) const {
  if (source.dimension() != dimension() || target.dimension() != dimension() ||
      target.degree() != source.degree() + 1)
    throw DimensionError("differential bases do not match");
  std::vector<QMatrix::Row> columns(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    KForm image = d(KForm::monomial(dimension(), source.mask(i)));
    for (const auto& [m, c] : image.terms())
      columns[i].emplace_back(static_cast<std::uint32_t>(target.index_of(m)), c);
  }
  return QMatrix::from_sparse_columns(target.size(), std::move(columns));
}

}  // namespace llab
