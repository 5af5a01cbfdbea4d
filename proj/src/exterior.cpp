#include "llab/exterior.hpp"

#include <algorithm>
#include <cctype>

#include "llab/errors.hpp"

namespace llab {

int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  // Count pairs (p in a, q in b) with p > q: each needs one transposition.
  int swaps = 0;
  while (b) {
    Mask low = b & (~b + 1);
    swaps += popcount(a & ~((low << 1) - 1));
    b ^= low;
  }
  return (swaps & 1) ? -1 : 1;
}

KForm::KForm(std::size_t dimension, std::size_t degree) : dimension_(dimension), degree_(degree) {
  if (dimension > kMaxDimension)
    throw DimensionError("exterior algebra dimension " + std::to_string(dimension) + " exceeds " +
                         std::to_string(kMaxDimension));
}

KForm KForm::scalar(std::size_t dimension, const Rational& c) {
  KForm f(dimension, 0);
  f.add_term(0, c);
  return f;
}

KForm KForm::generator(std::size_t dimension, std::size_t index) {
  if (index >= dimension) throw DimensionError("generator index out of range");
  return monomial(dimension, Mask{1} << index);
}

KForm KForm::monomial(std::size_t dimension, Mask mask, const Rational& c) {
  KForm f(dimension, static_cast<std::size_t>(popcount(mask)));
  if (dimension < kMaxDimension && (mask >> dimension) != 0)
    throw DimensionError("monomial uses a generator beyond the dimension");
  f.add_term(mask, c);
  return f;
}

KForm KForm::product(std::size_t dimension, const std::vector<std::size_t>& generators) {
  KForm f = scalar(dimension, 1);
  for (auto g : generators) f = wedge(f, generator(dimension, g));
  return f;
}

Rational KForm::coefficient(Mask mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? Rational(0) : it->second;
}

void KForm::add_term(Mask mask, const Rational& c) {
  if (static_cast<std::size_t>(popcount(mask)) != degree_)
    throw DimensionError("monomial degree does not match form degree");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(mask, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void KForm::check_compatible(const KForm& other) const {
  if (dimension_ != other.dimension_ || degree_ != other.degree_)
    throw DimensionError("forms of different dimension or degree");
}

KForm& KForm::operator+=(const KForm& other) {
  check_compatible(other);
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

KForm& KForm::operator-=(const KForm& other) {
  check_compatible(other);
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

KForm& KForm::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& [m, x] : terms_) x *= c;
  }
  return *this;
}

KForm wedge(const KForm& a, const KForm& b) {
  if (a.dimension() != b.dimension()) throw DimensionError("wedge of forms on different spaces");
  KForm out(a.dimension(), a.degree() + b.degree());
  if (out.degree() > a.dimension()) return out;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      int s = wedge_sign(ma, mb);
      if (s != 0) out.add_term(ma | mb, s > 0 ? Rational(ca * cb) : Rational(-(ca * cb)));
    }
  return out;
}

KForm power(const KForm& a, std::size_t p) {
  KForm out = KForm::scalar(a.dimension(), 1);
  for (std::size_t i = 0; i < p; ++i) {
    out = wedge(out, a);
    if (out.is_zero()) return KForm(a.dimension(), a.degree() * p);
  }
  return out;
}

KForm divided_power(const KForm& a, std::size_t p) {
  KForm out = KForm::scalar(a.dimension(), 1);
  for (std::size_t i = 1; i <= p; ++i) {
    out = wedge(out, a);
    out *= Rational(1, static_cast<long>(i));
    if (out.is_zero()) return KForm(a.dimension(), a.degree() * p);
  }
  return out;
}

Rational top_coefficient(const KForm& a) {
  if (a.degree() != a.dimension()) throw DimensionError("top_coefficient needs a top-degree form");
  Mask full = a.dimension() == kMaxDimension ? ~Mask{0} : (Mask{1} << a.dimension()) - 1;
  return a.coefficient(full);
}

DegreeBasis::DegreeBasis(std::size_t dimension, std::size_t degree)
    : dimension_(dimension), degree_(degree) {
  if (dimension > kMaxDimension) throw DimensionError("basis dimension exceeds limit");
  if (degree > dimension) return;
  // Enumerate increasing index tuples in lexicographic order.
  std::vector<std::size_t> idx(degree);
  for (std::size_t i = 0; i < degree; ++i) idx[i] = i;
  while (true) {
    Mask m = 0;
    for (auto i : idx) m |= Mask{1} << i;
    index_.emplace(m, static_cast<std::uint32_t>(masks_.size()));
    masks_.push_back(m);
    std::size_t pos = degree;
    while (pos > 0 && idx[pos - 1] == dimension - degree + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < degree; ++j) idx[j] = idx[j - 1] + 1;
  }
}

QVector DegreeBasis::coordinates(const KForm& form) const {
  if (form.dimension() != dimension_ || form.degree() != degree_)
    throw DimensionError("form does not live in this basis");
  QVector v(masks_.size());
  for (const auto& [m, c] : form.terms()) v[index_of(m)] = c;
  return v;
}

KForm DegreeBasis::form(const QVector& coords) const {
  if (coords.size() != masks_.size()) throw DimensionError("coordinate vector has wrong length");
  KForm f(dimension_, degree_);
  for (std::size_t i = 0; i < coords.size(); ++i) f.add_term(masks_[i], coords[i]);
  return f;
}

std::string render(const KForm& form, const std::vector<std::string>& labels) {
  if (labels.size() < form.dimension()) throw DimensionError("not enough generator labels");
  if (form.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : form.terms()) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < form.dimension(); ++i)
      if (m & (Mask{1} << i)) {
        if (!mono.empty()) mono += "^";
        mono += labels[i];
      }
    if (mono.empty())
      out += mag.get_str();
    else if (mag == 1)
      out += mono;
    else
      out += mag.get_str() + " " + mono;
  }
  return out;
}

KForm parse_form(std::string_view text, const std::vector<std::string>& labels) {
  const std::size_t dim = labels.size();
  std::unordered_map<std::string, std::size_t> lookup;
  for (std::size_t i = 0; i < dim; ++i) lookup.emplace(labels[i], i);

  struct Term {
    Rational coeff;
    std::vector<std::size_t> gens;
  };
  std::vector<Term> parsed;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& what) {
    throw InputError("cannot parse form at offset " + std::to_string(pos) + ": " + what);
  };

  skip_ws();
  if (text.substr(pos) == "0") return KForm(dim, 0);
  while (true) {
    skip_ws();
    int sign = 1;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      if (text[pos] == '-') sign = -1;
      ++pos;
      skip_ws();
    } else if (!parsed.empty()) {
      fail("expected '+' or '-'");
    }
    Term term{Rational(sign), {}};
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      std::size_t start = pos;
      while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/'))
        ++pos;
      term.coeff *= parse_rational(text.substr(start, pos - start));
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip_ws();
      }
    }
    while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) {
      std::size_t start = pos;
      while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos;
      std::string name(text.substr(start, pos - start));
      auto it = lookup.find(name);
      if (it == lookup.end()) fail("unknown generator '" + name + "'");
      term.gens.push_back(it->second);
      skip_ws();
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        skip_ws();
        if (pos >= text.size() || !std::isalpha(static_cast<unsigned char>(text[pos])))
          fail("expected generator after '^'");
      } else {
        break;
      }
    }
    parsed.push_back(std::move(term));
    skip_ws();
    if (pos >= text.size()) break;
  }

  const std::size_t degree = parsed.front().gens.size();
  KForm out(dim, degree);
  for (const auto& t : parsed) {
    if (t.gens.size() != degree) throw InputError("terms of different degrees in one form");
    std::vector<std::size_t> sorted = t.gens;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InputError("repeated generator in a monomial");
    out += t.coeff * KForm::product(dim, t.gens);
  }
  return out;
}

}  // namespace llab
