#pragma once

// Exterior algebra on the dual of a space of dimension at most 32. A basis
// k-form is the bitmask of its generators; generator 0 is the lowest bit.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "llab/exact_core.hpp"

namespace llab {

using Mask = std::uint32_t;
inline constexpr std::size_t kMaxDimension = 32;

inline int popcount(Mask m) { return __builtin_popcount(m); }

// Sign of e^a ^ e^b relative to e^{a|b}; 0 when a and b share a generator.
int wedge_sign(Mask a, Mask b);

// Lexicographic order of the increasing generator lists. Only meaningful for
// masks of equal size, which is all a KForm ever compares.
struct LexLess {
  bool operator()(Mask a, Mask b) const {
    Mask diff = a ^ b;
    return diff != 0 && (a & diff & (~diff + 1)) != 0;
  }
};

class KForm {
 public:
  using Terms = std::map<Mask, Rational, LexLess>;

  KForm() = default;
  // Throws DimensionError when dimension exceeds kMaxDimension.
  KForm(std::size_t dimension, std::size_t degree);

  static KForm scalar(std::size_t dimension, const Rational& c);
  static KForm generator(std::size_t dimension, std::size_t index);
  static KForm monomial(std::size_t dimension, Mask mask, const Rational& c = 1);
  // Wedge of the listed generators in the listed order.
  static KForm product(std::size_t dimension, const std::vector<std::size_t>& generators);

  std::size_t dimension() const { return dimension_; }
  std::size_t degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(Mask mask) const;

  void add_term(Mask mask, const Rational& c);

  KForm& operator+=(const KForm& other);
  KForm& operator-=(const KForm& other);
  KForm& operator*=(const Rational& c);
  friend KForm operator+(KForm a, const KForm& b) { return a += b; }
  friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
  friend KForm operator-(KForm a) { return a *= -1; }
  friend KForm operator*(const Rational& c, KForm a) { return a *= c; }
  friend bool operator==(const KForm& a, const KForm& b) = default;

 private:
  void check_compatible(const KForm& other) const;

  std::size_t dimension_ = 0;
  std::size_t degree_ = 0;
  Terms terms_;
};

KForm wedge(const KForm& a, const KForm& b);
// a^p by repeated wedging; p = 0 gives the unit 0-form.
KForm power(const KForm& a, std::size_t p);
// a^p / p!.
KForm divided_power(const KForm& a, std::size_t p);
// Coefficient of the volume monomial. Throws DimensionError unless a is a top form.
Rational top_coefficient(const KForm& a);

// The monomials of one degree in lexicographic order, with reverse lookup.
class DegreeBasis {
 public:
  DegreeBasis(std::size_t dimension, std::size_t degree);

  std::size_t dimension() const { return dimension_; }
  std::size_t degree() const { return degree_; }
  std::size_t size() const { return masks_.size(); }
  Mask mask(std::size_t i) const { return masks_[i]; }
  const std::vector<Mask>& masks() const { return masks_; }
  std::size_t index_of(Mask m) const { return index_.at(m); }

  QVector coordinates(const KForm& form) const;
  KForm form(const QVector& coords) const;

 private:
  std::size_t dimension_;
  std::size_t degree_;
  std::vector<Mask> masks_;
  std::unordered_map<Mask, std::uint32_t> index_;
};

// Text form such as "f1^f2 + 3/2 x1^x4 - x2^x3"; labels name the generators.
std::string render(const KForm& form, const std::vector<std::string>& labels);
// Inverse of render. Accepts an optional "*" between coefficient and monomial.
// Throws InputError on unknown labels, repeated generators or mixed degrees.
KForm parse_form(std::string_view text, const std::vector<std::string>& labels);

}  // namespace llab
