#include "llab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <random>
#include <thread>

#include "llab/errors.hpp"

namespace llab {

std::vector<Rational> sweep_palette() { return {Rational(1), Rational(2), Rational(1, 2)}; }

namespace {

// Partitions of n into parts <= max_part, parts in descending order.
void partitions(std::size_t n, std::size_t max_part, std::vector<std::size_t>& cur,
                std::vector<std::vector<std::size_t>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (std::size_t p = std::min(n, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions(n - p, p, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<Block>> zero_parts(std::size_t d0) {
  std::vector<std::vector<std::size_t>> parts;
  std::vector<std::size_t> cur;
  partitions(d0, d0, cur, parts);
  std::vector<std::vector<Block>> out;
  for (const auto& p : parts) {
    std::vector<Block> blocks;
    for (std::size_t s : p) {
      if (!blocks.empty() && blocks.back().size == s)
        ++blocks.back().mult;
      else
        blocks.push_back({Rational(0), s, 1});
    }
    bool ok = std::all_of(blocks.begin(), blocks.end(), [](const Block& b) { return b.size % 2 == 0 || b.mult % 2 == 0; });
    if (ok) out.push_back(std::move(blocks));
  }
  return out;
}

// Multisets of (lambda, size) with total size h; each becomes a +-lambda pair.
void coloured(std::size_t h, std::size_t kind, const std::vector<std::pair<Rational, std::size_t>>& kinds,
              std::vector<Block>& cur, std::vector<std::vector<Block>>& out) {
  if (h == 0) {
    out.push_back(cur);
    return;
  }
  if (kind == kinds.size()) return;
  coloured(h, kind + 1, kinds, cur, out);
  const auto& [lambda, size] = kinds[kind];
  for (std::size_t mult = 1; mult * size <= h; ++mult) {
    cur.push_back({lambda, size, mult});
    cur.push_back({-lambda, size, mult});
    coloured(h - mult * size, kind + 1, kinds, cur, out);
    cur.pop_back();
    cur.pop_back();
  }
}

std::vector<std::vector<Block>> double_parts(std::size_t h) {
  std::vector<std::pair<Rational, std::size_t>> kinds;
  for (std::size_t s = h; s >= 1; --s)
    for (const auto& l : sweep_palette()) kinds.emplace_back(l, s);
  std::vector<std::vector<Block>> out;
  std::vector<Block> cur;
  coloured(h, 0, kinds, cur, out);
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

CheckResult make(std::string name, bool passed, std::string detail = {}) {
  return {std::move(name), passed, std::move(detail)};
}

std::string degree_text(const std::optional<std::size_t>& k) { return k ? std::to_string(*k) : "none"; }

bool same_verdict(const LefschetzReport& a, const LefschetzReport& b) {
  return a.verdict == b.verdict && a.first_failure_degree == b.first_failure_degree;
}

}  // namespace

std::vector<JordanSpec> enumerate_specs(std::size_t max_dim) {
  std::vector<JordanSpec> out;
  if (max_dim < 2) return out;
  const std::size_t budget = max_dim - 2;
  for (std::size_t h = 0; 2 * h <= budget; ++h) {
    auto doubles = double_parts(h);
    for (std::size_t d0 = 0; 2 * h + d0 <= budget; d0 += 2) {
      auto zeros = zero_parts(d0);
      for (const auto& w : doubles)
        for (const auto& z : zeros) {
          JordanSpec s;
          s.blocks = w;
          s.blocks.insert(s.blocks.end(), z.begin(), z.end());
          out.push_back(s);
          if (d0 > 0) {
            s.v.assign(d0, Rational(0));
            s.v.back() = 1;
            out.push_back(s);
          }
        }
    }
  }
  std::vector<std::pair<std::string, JordanSpec>> keyed;
  for (auto& s : out) keyed.emplace_back(spec_to_json(s), std::move(s));
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
    std::size_t dx = spec_dimension(x.second), dy = spec_dimension(y.second);
    return dx != dy ? dx < dy : x.first < y.first;
  });
  out.clear();
  for (auto& [k, s] : keyed) out.push_back(std::move(s));
  return out;
}

bool SpecResult::passed() const {
  return !internal_error && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::size_t thread_count(std::size_t requested) {
  std::size_t n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LLAB_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
  }
  return n;
}

CheckResult check_d_squared(const CochainComplex& complex) {
  const std::size_t top = complex.top_degree();
  for (std::size_t k = 0; k < top; ++k) {
    QMatrix prod = complex.d(k + 1) * complex.d(k);
    if (prod.nonzeros() != 0)
      return make("d_squared", false, "d_" + std::to_string(k + 1) + " d_" + std::to_string(k) + " has " +
                                          std::to_string(prod.nonzeros()) + " nonzero entries");
  }
  return make("d_squared", true);
}

CheckResult check_ce_formula(const CochainComplex& complex, Fault fault) {
  const Algebra& alg = complex.algebra();
  const std::size_t n = alg.dimension();
  QMatrix d1 = complex.d(1);
  if (fault == Fault::differential_sign)
    for (std::size_t r = 0; r < d1.rows(); ++r)
      if (!d1.row(r).empty()) {
        auto [c, x] = d1.row(r).front();
        d1.set(r, c, -x);
        break;
      }
  const DegreeBasis& b1 = complex.basis(1);
  const DegreeBasis& b2 = complex.basis(2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      QVector ei(n), ej(n);
      ei[i] = 1;
      ej[j] = 1;
      QVector br = alg.bracket(ei, ej);
      const std::size_t row = b2.index_of((Mask(1) << i) | (Mask(1) << j));
      for (std::size_t c = 0; c < n; ++c)
        if (d1.at(row, b1.index_of(Mask(1) << c)) != -br[c])
          return make("ce_formula", false,
                      "d e^" + std::to_string(c) + " disagrees with -e^" + std::to_string(c) + "([e_" + std::to_string(i) +
                          ", e_" + std::to_string(j) + "])");
    }
  return make("ce_formula", true);
}

CheckResult check_trace(const Algebra& algebra) {
  const QMatrix& a = algebra.structure_matrix();
  Rational tr = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) tr += a.at(i, i);
  bool expect_zero = algebra.spec().a == 0;
  return make("trace", !expect_zero || tr == 0, "trace " + to_string(tr));
}

CheckResult check_poincare_duality(const CochainComplex& complex) {
  auto b = betti_numbers(complex);
  const std::size_t top = b.size() - 1;
  for (std::size_t k = 0; k <= top; ++k)
    if (b[k] != b[top - k])
      return make("poincare", false,
                  "b_" + std::to_string(k) + " = " + std::to_string(b[k]) + " but b_" + std::to_string(top - k) +
                      " = " + std::to_string(b[top - k]));
  return make("poincare", true);
}

CheckResult check_h2_structure(const CochainComplex& complex) {
  H2Decomposition h = verify_h2_structure(complex);
  std::string detail;
  for (const auto& f : h.failures) detail += (detail.empty() ? "" : "; ") + f;
  return make("h2_structure", h.ok() && h.direct_sum, detail);
}

CheckResult check_conformance(const CochainComplex& complex, const LefschetzReport& report) {
  const Prediction& p = report.predicted;
  std::string detail = "computed " + to_string(report.verdict) + "@" + degree_text(report.first_failure_degree) +
                       ", predicted " + to_string(p.verdict) + "@" + degree_text(p.failure_degree);
  bool ok = report.agree && report.verdict == p.verdict && report.first_failure_degree == p.failure_degree;
  if (ok && p.verdict == Verdict::hlc)
    ok = std::all_of(report.degrees.begin(), report.degrees.end(), [](const DegreeReport& d) { return d.bijective(); });
  if (ok && p.failure_degree == 2 && !has_zero_eigenvalue(complex.algebra().spec()))
    ok = report.degrees.size() > 1 && report.degrees[1].bijective();
  return make("conformance", ok, detail);
}

CheckResult check_witness(const CochainComplex& complex, const SymplecticForm& omega, const LefschetzReport& report) {
  if (report.verdict == Verdict::hlc) return make("witness", true, "no failure");
  if (!report.witness || !report.first_failure_degree) return make("witness", false, "failing report without witness");
  const std::size_t n = complex.algebra().half_dimension();
  const std::size_t k = *report.first_failure_degree;
  KForm image = wedge(power(omega.form, n - k), *report.witness);
  bool exact = is_exact(complex, image).has_value();
  bool nonexact_witness = !is_exact(complex, *report.witness).has_value();
  return make("witness", exact && nonexact_witness,
              exact ? (nonexact_witness ? "" : "witness is exact") : "image of witness is not exact");
}

KForm random_exact_two_form(const Algebra& algebra, std::uint64_t seed, int bound) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coeff(-bound, bound);
  KForm eta(algebra.dimension(), 1);
  for (std::size_t i = 0; i < algebra.dimension(); ++i) eta = eta + Rational(coeff(rng)) * algebra.generator(i);
  return algebra.d(eta);
}

CheckResult check_perturbations(const CochainComplex& complex, const SymplecticForm& omega,
                                const LefschetzReport& reference, std::size_t count, std::uint64_t seed) {
  const Algebra& algebra = complex.algebra();
  std::size_t trivial = 0;
  for (std::size_t i = 0; i < count; ++i) {
    std::optional<KForm> perturbed;
    for (std::uint64_t attempt = 0; attempt < 32 && !perturbed; ++attempt) {
      KForm candidate = omega.form + random_exact_two_form(algebra, seed * 1000003ULL + i * 64 + attempt);
      if (check_symplectic(algebra, candidate).ok()) perturbed = candidate;
    }
    if (!perturbed) return make("invariance", false, "no non-degenerate perturbation found for sample " + std::to_string(i));
    if (*perturbed == omega.form) ++trivial;
    LefschetzReport r = hard_lefschetz_report(complex, {*perturbed, Provenance::user_supplied});
    if (!same_verdict(r, reference))
      return make("invariance", false,
                  "sample " + std::to_string(i) + " gives " + to_string(r.verdict) + "@" +
                      degree_text(r.first_failure_degree));
  }
  return make("invariance", true,
              std::to_string(count) + " samples" + (trivial ? ", " + std::to_string(trivial) + " with d eta = 0" : ""));
}

CheckResult check_normalization(const CochainComplex& complex, const SymplecticForm& omega,
                                const LefschetzReport& reference) {
  Normalization n = normalize_symplectic(complex, omega);
  if (!n.ok()) return make("normalization", false, "basis change or exact difference check failed");
  LefschetzReport r = hard_lefschetz_report(complex, n.form);
  if (!same_verdict(r, reference))
    return make("normalization", false, "normalized form gives " + to_string(r.verdict));
  return make("normalization", true);
}

SpecResult verify_spec(const JordanSpec& spec, const SweepOptions& options, std::uint64_t seed) {
  SpecResult out;
  out.spec = spec_to_json(spec);
  out.dimension = spec_dimension(spec);
  auto guarded = [&](const std::string& name, const std::function<CheckResult()>& f) -> bool {
    try {
      out.checks.push_back(f());
      return out.checks.back().passed;
    } catch (const InputError& e) {
      out.checks.push_back(make(name, false, e.what()));
    } catch (const InvariantViolation& e) {
      out.checks.push_back(make(name, false, std::string("invariant violation: ") + e.what()));
      out.internal_error = true;
    }
    return false;
  };

  std::optional<CochainComplex> complex;
  if (!guarded("construct", [&] {
        complex.emplace(Algebra(spec));
        return make("construct", true);
      }))
    return out;
  const Algebra& algebra = complex->algebra();
  guarded("d_squared", [&] { return check_d_squared(*complex); });
  guarded("ce_formula", [&] { return check_ce_formula(*complex, options.fault); });
  guarded("trace", [&] { return check_trace(algebra); });
  if (algebra.is_unimodular()) guarded("poincare", [&] { return check_poincare_duality(*complex); });
  if (out.dimension > options.conformance_max_dim) return out;

  guarded("h2_structure", [&] { return check_h2_structure(*complex); });
  std::optional<SymplecticForm> omega;
  std::optional<LefschetzReport> report;
  if (!guarded("conformance", [&] {
        omega = default_symplectic(algebra);
        report = hard_lefschetz_report(*complex, *omega);
        return check_conformance(*complex, *report);
      }))
    return out;
  guarded("witness", [&] { return check_witness(*complex, *omega, *report); });
  if (!has_zero_eigenvalue(spec))
    guarded("normalization", [&] { return check_normalization(*complex, *omega, *report); });
  if (out.dimension <= options.perturbation_max_dim && options.perturbations > 0)
    guarded("invariance", [&] { return check_perturbations(*complex, *omega, *report, options.perturbations, seed); });
  return out;
}

void add_result(SweepSummary& s, const SpecResult& r) {
  ++s.specs_checked;
  for (const auto& c : r.checks) {
    ++s.checks_run;
    auto& tally = s.suites[c.name];
    ++tally.run;
    if (c.passed) {
      ++s.checks_passed;
      ++tally.passed;
    } else if (c.name == "conformance" || c.name == "invariance" || c.name == "normalization") {
      s.conformance_mismatch = true;
    } else {
      s.invariant_failure = true;
    }
  }
  if (r.internal_error) s.internal_error = true;
  if (!r.passed()) s.failures.push_back(r);
}

SweepSummary run_sweep(const SweepOptions& options) {
  if (options.max_dim > kMaxDimension) throw InputError("dimension cap exceeds " + std::to_string(kMaxDimension));
  auto start = std::chrono::steady_clock::now();
  const auto specs = enumerate_specs(options.max_dim);
  std::vector<SpecResult> results(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      std::uint64_t seed = options.seed ^ fnv1a(spec_to_json(specs[i]));
      results[i] = verify_spec(specs[i], options, seed);
    }
  };
  std::size_t nthreads = std::min(thread_count(options.threads), std::max<std::size_t>(1, specs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SweepSummary s;
  for (const auto& r : results) add_result(s, r);
  std::sort(s.failures.begin(), s.failures.end(), [](const SpecResult& a, const SpecResult& b) {
    return a.dimension != b.dimension ? a.dimension < b.dimension : a.spec < b.spec;
  });
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

}  // namespace llab
