#pragma once

// Symplectic forms on g_A, Lefschetz operators on cohomology and the
// hard-Lefschetz verdict with its first failure degree.

#include <optional>
#include <string>
#include <vector>

#include "llab/cohomology.hpp"

namespace llab {

enum class Provenance { default_normal_form, user_supplied, normalized };
std::string to_string(Provenance p);

struct SymplecticForm {
  KForm form;
  Provenance provenance = Provenance::user_supplied;
};

struct SymplecticCheck {
  bool degree_two = false;
  bool closed = false;
  bool nondegenerate = false;
  KForm d_witness;  // d(candidate) when it is not closed
  std::string reason;
  bool ok() const { return degree_two && closed && nondegenerate; }
};

SymplecticCheck check_symplectic(const Algebra& algebra, const KForm& candidate);
// Throws InputError carrying the check's reason when the candidate fails.
SymplecticForm validate_symplectic(const Algebra& algebra, const KForm& candidate,
                                   Provenance provenance = Provenance::user_supplied);

// delta + the maximal unmixed circuit of every double block + a Darboux-type
// form on the zero-eigenvalue part. Throws InputError for inadmissible spectra
// and "no default form; supply one" if the assembled form fails validation.
SymplecticForm default_symplectic(const Algebra& algebra);

// Pullback by the algebra map whose action on 1-forms has columns phi.
KForm pull_back(const QMatrix& phi, const KForm& form);
// d(phi* m) == phi*(d m) for every monomial of the given degree.
bool commutes_with_d(const Algebra& algebra, const QMatrix& phi, std::size_t degree);

struct Normalization {
  SymplecticForm form;  // phi^{-1}(omega)
  QMatrix phi;          // columns: phi(e^j) in generator coordinates
  Rational delta_coefficient;
  std::vector<std::pair<Circuit, Rational>> circuit_coefficients;
  KForm normal_part;    // delta + sum of maximal unmixed circuits
  bool commutes_with_d = false;       // checked in degrees 1 and 2
  bool maps_back = false;             // phi(form) == omega
  bool differs_by_exact = false;      // form - normal_part is exact
  bool ok() const { return commutes_with_d && maps_back && differs_by_exact; }
};

// Requires a = 0 and 0 not an eigenvalue of A0. Throws InputError otherwise.
Normalization normalize_symplectic(const CochainComplex& complex, const SymplecticForm& omega);

enum class Verdict { hlc, fails };
std::string to_string(Verdict v);

struct Prediction {
  Verdict verdict = Verdict::hlc;
  std::optional<std::size_t> failure_degree;
  bool theorem_covered = true;
  std::string rule;
};

// Throws InputError for a != 0 or an inadmissible spectrum.
Prediction predict_verdict(const JordanSpec& spec);

// Matrix of [alpha] -> [omega^{n-k} ^ alpha] from H^k to H^{2n-k} coordinates.
QMatrix lefschetz_matrix(const CochainComplex& complex, const KForm& omega, std::size_t k);

struct DegreeReport {
  std::size_t k = 0;
  std::size_t rank = 0;
  std::size_t dim_source = 0;
  std::size_t dim_target = 0;
  bool injective = false;
  bool surjective = false;
  bool bijective() const { return injective && surjective; }
};

struct LefschetzReport {
  std::vector<DegreeReport> degrees;  // k = 0..n
  Verdict verdict = Verdict::hlc;
  std::optional<std::size_t> first_failure_degree;
  std::optional<KForm> witness;
  bool canonical_witness = false;
  Prediction predicted;
  bool agree = false;
  std::vector<Rational> eigenvalues;  // the eigenvalues actually used
};

LefschetzReport hard_lefschetz_report(const CochainComplex& complex, const SymplecticForm& omega);

struct KernelWitnessProof {
  std::size_t m = 0;
  // rho^{m-2} ^ (x^1 ^ x^{m+1}) = rho_power_coefficient * Gamma_{m,2m}.
  Rational rho_power_coefficient;
  // The same with the divided power rho^{m-2}/(m-2)!.
  Rational rho_divided_coefficient;
  // omega^{n-2} ^ (x^1 ^ x^{m+1}) = omega_coefficient * delta ^ Gamma_{m,2m}.
  Rational omega_coefficient;
  bool delta_gamma_identity = false;  // delta ^ Gamma_{m,2m} = -d(f2 ^ Gamma_{m,2m-1})
  bool image_exact = false;
  KForm engine_primitive;
  KForm explicit_primitive;  // omega_coefficient * (-f2 ^ Gamma_{m,2m-1})
  bool explicit_primitive_valid = false;
  bool difference_closed = false;
  bool ok() const {
    return abs(rho_divided_coefficient) == 1 && omega_coefficient != 0 && delta_gamma_identity && image_exact &&
           explicit_primitive_valid && difference_closed;
  }
};

// For u0 a single double block of size m >= 2 and omega = delta + g_m.
KernelWitnessProof kernel_witness_check(const CochainComplex& complex);

// Blocks (lambda, m, 1) and (-lambda, m, 1).
JordanSpec single_double_block(std::size_t m, const Rational& lambda = 1);

}  // namespace llab
