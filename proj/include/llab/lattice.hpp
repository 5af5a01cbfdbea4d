#pragma once

// Integer certificates for lattices: characteristic polynomials of exp(A),
// companion matrices and interval enclosures of the eigenvalues e^{+-t_k}.

#include <string>
#include <vector>

#include "llab/algebra.hpp"
#include "llab/exact_core.hpp"

namespace llab {

enum class LatticeCase { i, ii, iii };
std::string to_string(LatticeCase c);

struct LatticePair {
  long k = 3;
  std::size_t m = 1;
};

struct LatticeSpec {
  LatticeCase kind = LatticeCase::i;
  std::size_t t = 0;
  std::vector<LatticePair> pairs;
};

// {"case": "i"|"ii"|"iii", "t": 1, "pairs": [{"k": 3, "m": 2}]}. Throws InputError.
LatticeSpec parse_lattice_spec(const std::string& json_text);
// k >= 3, m >= 1 and distinct k. Throws InputError.
void validate_lattice_pairs(const LatticeSpec& spec);
// The pair conditions plus the case conditions. Throws InputError naming the
// violated condition.
void validate_lattice_spec(const LatticeSpec& spec);

// Integer polynomial, coefficients from the leading one down.
using IntPoly = std::vector<Integer>;

IntPoly poly_multiply(const IntPoly& a, const IntPoly& b);
IntPoly poly_power(const IntPoly& a, std::size_t e);
// x^2 - k x + 1.
IntPoly p_k(long k);

// (x-1)^{2t+1} * prod p_{k_j}^{m_j}. Only the pair conditions are checked.
IntPoly char_poly_exp(const LatticeSpec& spec);
// (x-1)^{max(2t,1)} * prod p_{k_j}^{m_j}: exp(J_2t(0)) and each exp(J_m(+-t_k))
// are single Jordan blocks, but the extra 1 from f2 sits in its own block.
IntPoly min_poly_exp(const LatticeSpec& spec);

// Ones on the subdiagonal, last column -c_0 .. -c_{d-1}. Throws InputError
// unless the polynomial is monic of degree >= 1.
QMatrix companion_matrix(const IntPoly& poly);
// Characteristic polynomial det(xI - M) by the Faddeev-LeVerrier recurrence.
std::vector<Rational> characteristic_polynomial(const QMatrix& m);

struct TkValue {
  long k = 3;
  std::string expression;       // log((k+sqrt(k^2-4))/2)
  std::string lower, upper;     // decimal enclosure of t_k
  double approx = 0;
  double width = 0;
  bool roots_sum_to_k = false;  // e^{t_k} + e^{-t_k} = k, checked on quadratic surds
  bool roots_multiply_to_one = false;
  bool exp_encloses_root = false;  // exp([t_k]) and exp(-[t_k]) enclose the roots of p_k
};

// Throws InputError for k < 3.
TkValue t_k(long k);

struct SpectralCheck {
  double max_interval_width = 0;  // widest coefficient enclosure of prod (x - r_i)
  bool coefficients_enclosed = false;
  bool roots_are_zeros = false;   // char_poly([r]) contains 0 for every root
  bool ok() const { return coefficients_enclosed && roots_are_zeros && max_interval_width <= 1e-9; }
};

struct LatticeCertificate {
  LatticeSpec spec;
  IntPoly char_poly;
  IntPoly min_poly;
  bool cyclic = false;           // char_poly == min_poly
  QMatrix companion;             // companion of char_poly
  QMatrix integer_form;          // rational canonical form of exp(A): conjugate to it
  Integer det;                   // det(integer_form); also det(companion)
  int t0 = 1;
  std::vector<TkValue> tk_values;
  SpectralCheck spectral;
  bool companion_char_poly_matches = false;
  bool integer_form_char_poly_matches = false;
  bool ok() const {
    return det == 1 && companion_char_poly_matches && integer_form_char_poly_matches && spectral.ok();
  }
};

// Throws InputError for invalid specs and when the determinant is not 1.
LatticeCertificate certify(const LatticeSpec& spec);

// The almost abelian algebra with the same eigenvalue pattern, using the
// rational surrogate k_j for t_{k_j}. Only the pair conditions are checked, so
// specs outside the three cases map to their (hard-Lefschetz) algebras too.
JordanSpec surrogate_spec(const LatticeSpec& spec);

std::string render_poly(const IntPoly& p);

}  // namespace llab
