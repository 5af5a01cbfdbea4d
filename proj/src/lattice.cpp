#include "llab/lattice.hpp"

#include <mpfr.h>

#include <algorithm>
#include <set>

#include <json.hpp>

#include "llab/errors.hpp"

namespace llab {

std::string to_string(LatticeCase c) {
  switch (c) {
    case LatticeCase::i: return "i";
    case LatticeCase::ii: return "ii";
    case LatticeCase::iii: return "iii";
  }
  return "?";
}

LatticeSpec parse_lattice_spec(const std::string& json_text) {
  using Json = nlohmann::json;
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("case") || !j["case"].is_string())
    throw InputError("lattice spec needs \"case\": \"i\" | \"ii\" | \"iii\"");
  LatticeSpec s;
  const std::string c = j["case"].get<std::string>();
  if (c == "i")
    s.kind = LatticeCase::i;
  else if (c == "ii")
    s.kind = LatticeCase::ii;
  else if (c == "iii")
    s.kind = LatticeCase::iii;
  else
    throw InputError("unknown lattice case \"" + c + "\"");
  if (j.contains("t")) {
    if (!j["t"].is_number_integer() || j["t"].get<long long>() < 0) throw InputError("\"t\" must be a non-negative integer");
    s.t = static_cast<std::size_t>(j["t"].get<long long>());
  }
  if (j.contains("pairs")) {
    if (!j["pairs"].is_array()) throw InputError("\"pairs\" must be an array");
    for (const auto& p : j["pairs"]) {
      if (!p.is_object() || !p.contains("k") || !p.contains("m") || !p["k"].is_number_integer() ||
          !p["m"].is_number_integer() || p["m"].get<long long>() < 0)
        throw InputError("each pair needs integer \"k\" and \"m\"");
      s.pairs.push_back({p["k"].get<long>(), static_cast<std::size_t>(p["m"].get<long long>())});
    }
  }
  validate_lattice_spec(s);
  return s;
}

void validate_lattice_pairs(const LatticeSpec& s) {
  std::set<long> ks;
  for (const auto& p : s.pairs) {
    if (p.k < 3) throw InputError("lattice pairs need k >= 3");
    if (p.m < 1) throw InputError("lattice pairs need m >= 1");
    if (!ks.insert(p.k).second) throw InputError("lattice pairs need distinct k");
  }
}

void validate_lattice_spec(const LatticeSpec& s) {
  validate_lattice_pairs(s);
  switch (s.kind) {
    case LatticeCase::i:
      if (!s.pairs.empty() || s.t < 1) throw InputError("case (i) needs t >= 1 and no pairs");
      break;
    case LatticeCase::ii:
      if (s.t != 0 || s.pairs.size() != 1) throw InputError("case (ii) needs t = 0 and exactly one pair");
      if (s.pairs.front().m < 2) throw InputError("case (ii) needs m >= 2");
      break;
    case LatticeCase::iii: {
      bool some_m2 = std::any_of(s.pairs.begin(), s.pairs.end(), [](const LatticePair& p) { return p.m >= 2; });
      if (s.t == 0 && !some_m2) throw InputError("case (iii) needs t != 0 or some m >= 2");
      break;
    }
  }
}

IntPoly poly_multiply(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly out(a.size() + b.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

IntPoly poly_power(const IntPoly& a, std::size_t e) {
  IntPoly out{Integer(1)};
  for (std::size_t i = 0; i < e; ++i) out = poly_multiply(out, a);
  return out;
}

IntPoly p_k(long k) { return {Integer(1), Integer(-k), Integer(1)}; }

namespace {

IntPoly assemble(const LatticeSpec& spec, std::size_t ones) {
  IntPoly out = poly_power({Integer(1), Integer(-1)}, ones);
  for (const auto& p : spec.pairs) out = poly_multiply(out, poly_power(p_k(p.k), p.m));
  return out;
}

}  // namespace

IntPoly char_poly_exp(const LatticeSpec& spec) {
  validate_lattice_pairs(spec);
  return assemble(spec, 2 * spec.t + 1);
}

IntPoly min_poly_exp(const LatticeSpec& spec) {
  validate_lattice_pairs(spec);
  return assemble(spec, std::max<std::size_t>(2 * spec.t, 1));
}

QMatrix companion_matrix(const IntPoly& poly) {
  if (poly.size() < 2 || poly.front() != 1) throw InputError("companion matrix needs a monic polynomial of degree >= 1");
  const std::size_t d = poly.size() - 1;
  QMatrix c(d, d);
  for (std::size_t i = 0; i + 1 < d; ++i) c.set(i + 1, i, 1);
  for (std::size_t i = 0; i < d; ++i) c.set(i, d - 1, Rational(-poly[d - i]));
  return c;
}

std::vector<Rational> characteristic_polynomial(const QMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("characteristic polynomial of a non-square matrix");
  const std::size_t n = a.rows();
  std::vector<Rational> coeff(n + 1);
  coeff[0] = 1;
  QMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    QMatrix next = a * m;
    for (std::size_t i = 0; i < n; ++i) next.add_to(i, i, coeff[k - 1]);
    m = std::move(next);
    QMatrix am = a * m;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am.at(i, i);
    coeff[k] = -tr / Rational(static_cast<long>(k));
  }
  return coeff;
}

namespace {

constexpr mpfr_prec_t kPrecision = 256;

// Closed interval with MPFR endpoints, rounded outward.
class Interval {
 public:
  Interval() {
    mpfr_init2(lo_, kPrecision);
    mpfr_init2(hi_, kPrecision);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }
  explicit Interval(const Integer& z) : Interval() {
    mpfr_set_z(lo_, z.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(hi_, z.get_mpz_t(), MPFR_RNDU);
  }
  Interval(const Interval& o) : Interval() {
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  Interval& operator=(const Interval& o) {
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
    return *this;
  }
  ~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  static Interval sqrt_of(const Integer& z) {
    Interval r(z);
    mpfr_sqrt(r.lo_, r.lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, r.hi_, MPFR_RNDU);
    return r;
  }

  friend Interval operator+(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }
  friend Interval operator*(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_t t;
    mpfr_init2(t, kPrecision);
    const mpfr_srcptr as[2] = {a.lo_, a.hi_};
    const mpfr_srcptr bs[2] = {b.lo_, b.hi_};
    bool first = true;
    for (auto x : as)
      for (auto y : bs) {
        mpfr_mul(t, x, y, MPFR_RNDD);
        if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, x, y, MPFR_RNDU);
        if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
        first = false;
      }
    mpfr_clear(t);
    return r;
  }
  Interval half() const {
    Interval r(*this);
    mpfr_div_2ui(r.lo_, r.lo_, 1, MPFR_RNDD);
    mpfr_div_2ui(r.hi_, r.hi_, 1, MPFR_RNDU);
    return r;
  }
  Interval log() const {
    Interval r;
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
  }
  Interval exp() const {
    Interval r;
    mpfr_exp(r.lo_, lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, hi_, MPFR_RNDU);
    return r;
  }
  Interval negated() const {
    Interval r;
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
  }

  bool contains(const Integer& z) const {
    return mpfr_cmp_z(lo_, z.get_mpz_t()) <= 0 && mpfr_cmp_z(hi_, z.get_mpz_t()) >= 0;
  }
  bool intersects(const Interval& o) const { return !mpfr_greater_p(lo_, o.hi_) && !mpfr_greater_p(o.lo_, hi_); }
  double width() const {
    mpfr_t w;
    mpfr_init2(w, kPrecision);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
  }
  double mid() const {
    mpfr_t w;
    mpfr_init2(w, kPrecision);
    mpfr_add(w, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(w, w, 1, MPFR_RNDN);
    double d = mpfr_get_d(w, MPFR_RNDN);
    mpfr_clear(w);
    return d;
  }
  static std::string decimal(mpfr_srcptr x, mpfr_rnd_t rnd) {
    char buf[128];
    mpfr_snprintf(buf, sizeof buf, rnd == MPFR_RNDD ? "%.30RDf" : "%.30RUf", x);
    return buf;
  }
  std::string lower() const { return decimal(lo_, MPFR_RNDD); }
  std::string upper() const { return decimal(hi_, MPFR_RNDU); }

 private:
  mpfr_t lo_, hi_;
};

// a + b sqrt(d) with rational a, b.
struct Surd {
  Rational a, b;
  Integer d;
  friend Surd operator+(const Surd& x, const Surd& y) { return {x.a + y.a, x.b + y.b, x.d}; }
  friend Surd operator*(const Surd& x, const Surd& y) {
    return {x.a * y.a + x.b * y.b * Rational(x.d), x.a * y.b + x.b * y.a, x.d};
  }
};

struct Roots {
  Interval plus, minus;  // e^{t_k}, e^{-t_k} via exp of the t_k enclosure
};

Interval tk_interval(long k, Interval* root_plus, Interval* root_minus) {
  Integer disc = Integer(k) * k - 4;
  Interval s = Interval::sqrt_of(disc);
  Interval kk{Integer(k)};
  *root_plus = (kk + s).half();
  *root_minus = (kk - s).half();
  return root_plus->log();
}

}  // namespace

TkValue t_k(long k) {
  if (k < 3) throw InputError("t_k needs k >= 3");
  TkValue v;
  v.k = k;
  const Integer disc = Integer(k) * k - 4;
  v.expression = "log((" + std::to_string(k) + "+sqrt(" + disc.get_str() + "))/2)";
  Interval rp, rm;
  Interval t = tk_interval(k, &rp, &rm);
  v.lower = t.lower();
  v.upper = t.upper();
  v.approx = t.mid();
  v.width = t.width();
  Surd plus{Rational(k, 2), Rational(1, 2), disc}, minus{Rational(k, 2), Rational(-1, 2), disc};
  Surd sum = plus + minus, prod = plus * minus;
  v.roots_sum_to_k = sum.b == 0 && sum.a == k && mpz_perfect_square_p(disc.get_mpz_t()) == 0;
  v.roots_multiply_to_one = prod.b == 0 && prod.a == 1;
  v.exp_encloses_root = t.exp().intersects(rp) && t.negated().exp().intersects(rm);
  return v;
}

std::string render_poly(const IntPoly& p) {
  std::string out;
  const std::size_t d = p.empty() ? 0 : p.size() - 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    const std::size_t e = d - i;
    Integer mag = abs(p[i]);
    if (out.empty())
      out += p[i] < 0 ? "-" : "";
    else
      out += p[i] < 0 ? " - " : " + ";
    if (mag != 1 || e == 0) out += mag.get_str();
    if (e >= 1) out += "x";
    if (e >= 2) out += "^" + std::to_string(e);
  }
  return out.empty() ? "0" : out;
}

LatticeCertificate certify(const LatticeSpec& spec) {
  validate_lattice_spec(spec);
  LatticeCertificate c;
  c.spec = spec;
  c.char_poly = char_poly_exp(spec);
  c.min_poly = min_poly_exp(spec);
  c.cyclic = c.char_poly == c.min_poly;
  c.companion = companion_matrix(c.char_poly);
  if (c.cyclic) {
    c.integer_form = c.companion;
  } else {
    // Invariant factors (x - 1) | min_poly: block diagonal (1) + companion(min_poly).
    QMatrix tail = companion_matrix(c.min_poly);
    const std::size_t d = c.char_poly.size() - 1;
    c.integer_form = QMatrix(d, d);
    c.integer_form.set(0, 0, 1);
    for (std::size_t i = 0; i < tail.rows(); ++i)
      for (const auto& [j, x] : tail.row(i)) c.integer_form.set(i + 1, j + 1, x);
  }
  auto as_rational = [](const IntPoly& p) {
    std::vector<Rational> out;
    for (const auto& x : p) out.emplace_back(x);
    return out;
  };
  c.companion_char_poly_matches = characteristic_polynomial(c.companion) == as_rational(c.char_poly);
  c.integer_form_char_poly_matches = characteristic_polynomial(c.integer_form) == as_rational(c.char_poly);
  Rational det = determinant(c.integer_form);
  Rational det_companion = determinant(c.companion);
  if (det.get_den() != 1) throw InvariantViolation("integer matrix with non-integer determinant");
  c.det = det.get_num();
  if (det != 1 || det_companion != 1)
    throw InputError("certificate refused: determinant " + to_string(det) + " is not 1");

  // Eigenvalue multiset {1 (2t+1 times), e^{+-t_k} (m times each)} as intervals.
  std::vector<Interval> roots(2 * spec.t + 1, Interval(Integer(1)));
  for (const auto& p : spec.pairs) {
    c.tk_values.push_back(t_k(p.k));
    Interval rp, rm;
    Interval t = tk_interval(p.k, &rp, &rm);
    for (std::size_t i = 0; i < p.m; ++i) {
      roots.push_back(t.exp());
      roots.push_back(t.negated().exp());
    }
  }
  std::vector<Interval> coeffs{Interval(Integer(1))};
  for (const auto& r : roots) {
    std::vector<Interval> next(coeffs.size() + 1);
    next[0] = coeffs[0];
    for (std::size_t j = 1; j < coeffs.size(); ++j) next[j] = coeffs[j] - r * coeffs[j - 1];
    next[coeffs.size()] = Interval() - r * coeffs.back();
    coeffs = std::move(next);
  }
  c.spectral.coefficients_enclosed = coeffs.size() == c.char_poly.size();
  for (std::size_t j = 0; j < coeffs.size() && c.spectral.coefficients_enclosed; ++j) {
    c.spectral.max_interval_width = std::max(c.spectral.max_interval_width, coeffs[j].width());
    if (!coeffs[j].contains(c.char_poly[j])) c.spectral.coefficients_enclosed = false;
  }
  c.spectral.roots_are_zeros = true;
  for (const auto& r : roots) {
    Interval acc(c.char_poly[0]);
    for (std::size_t j = 1; j < c.char_poly.size(); ++j) acc = acc * r + Interval(c.char_poly[j]);
    c.spectral.max_interval_width = std::max(c.spectral.max_interval_width, acc.width());
    if (!acc.contains(Integer(0))) c.spectral.roots_are_zeros = false;
  }
  return c;
}

JordanSpec surrogate_spec(const LatticeSpec& spec) {
  validate_lattice_pairs(spec);
  JordanSpec s;
  if (spec.t > 0) s.blocks.push_back({Rational(0), 2 * spec.t, 1});
  for (const auto& p : spec.pairs) {
    s.blocks.push_back({Rational(p.k), p.m, 1});
    s.blocks.push_back({Rational(-p.k), p.m, 1});
  }
  return s;
}

}  // namespace llab
