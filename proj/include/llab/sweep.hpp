#pragma once

// Enumeration of admissible Jordan specs and the per-spec invariant suites
// run by `llab verify` and the acceptance binary.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "llab/algebra.hpp"
#include "llab/lefschetz.hpp"

namespace llab {

// Positive eigenvalues used for the double blocks.
std::vector<Rational> sweep_palette();

// Every admissible spec with a = 0 and dimension <= max_dim: zero blocks from
// partitions of an even d0 (odd sizes with even multiplicity), v in {0, e_last}
// when d0 > 0, and double blocks from 3-coloured partitions over the palette.
// Sorted by dimension, then by the JSON rendering.
std::vector<JordanSpec> enumerate_specs(std::size_t max_dim);

// Test fixture: corrupt a computation so that the sweep must report failures.
enum class Fault { none, differential_sign };

struct SweepOptions {
  std::size_t max_dim = 12;
  std::size_t conformance_max_dim = 12;
  std::size_t perturbation_max_dim = 8;
  std::size_t perturbations = 20;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0: hardware concurrency capped by LLAB_THREADS
  Fault fault = Fault::none;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SpecResult {
  std::string spec;  // compact JSON
  std::size_t dimension = 0;
  std::vector<CheckResult> checks;
  bool internal_error = false;  // an InvariantViolation escaped a check
  bool passed() const;
};

struct SuiteTally {
  std::size_t run = 0;
  std::size_t passed = 0;
};

struct SweepSummary {
  std::size_t specs_checked = 0;
  std::size_t checks_run = 0;
  std::size_t checks_passed = 0;
  std::map<std::string, SuiteTally> suites;
  std::vector<SpecResult> failures;  // sorted by dimension then spec
  bool conformance_mismatch = false;  // a conformance, invariance or normalization check failed
  bool invariant_failure = false;     // any other check failed
  bool internal_error = false;
  double seconds = 0;
  bool ok() const { return checks_run == checks_passed && !internal_error; }
};

std::size_t thread_count(std::size_t requested);

// Individual suites, also used directly by the acceptance binary.
CheckResult check_d_squared(const CochainComplex& complex);
// d on 1-forms against d theta(x, y) = -theta([x, y]) from the bracket.
CheckResult check_ce_formula(const CochainComplex& complex, Fault fault = Fault::none);
CheckResult check_trace(const Algebra& algebra);
CheckResult check_poincare_duality(const CochainComplex& complex);
CheckResult check_h2_structure(const CochainComplex& complex);
// Verdict and failure degree against predict_verdict for the default form.
CheckResult check_conformance(const CochainComplex& complex, const LefschetzReport& report);
// omega^{n-k} ^ witness is exact for a failing report.
CheckResult check_witness(const CochainComplex& complex, const SymplecticForm& omega, const LefschetzReport& report);
// Verdict and failure degree unchanged under omega + d eta for seeded eta.
CheckResult check_perturbations(const CochainComplex& complex, const SymplecticForm& omega,
                                const LefschetzReport& reference, std::size_t count, std::uint64_t seed);
// Normalized default form: ok() and the same verdict. Only for a = 0, 0 not in spec.
CheckResult check_normalization(const CochainComplex& complex, const SymplecticForm& omega,
                                const LefschetzReport& reference);

// A random exact 2-form d eta with eta a 1-form of small integer coefficients.
KForm random_exact_two_form(const Algebra& algebra, std::uint64_t seed, int bound = 3);

// Adds one spec's checks to the tallies (failures are not re-sorted).
void add_result(SweepSummary& summary, const SpecResult& result);

SpecResult verify_spec(const JordanSpec& spec, const SweepOptions& options, std::uint64_t seed);
SweepSummary run_sweep(const SweepOptions& options);

}  // namespace llab
