#include "llab/lefschetz.hpp"

#include <algorithm>

#include "llab/errors.hpp"

namespace llab {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::default_normal_form: return "default-normal-form";
    case Provenance::user_supplied: return "user-supplied";
    case Provenance::normalized: return "normalized";
  }
  return "?";
}

std::string to_string(Verdict v) { return v == Verdict::hlc ? "HLC" : "fails"; }

SymplecticCheck check_symplectic(const Algebra& algebra, const KForm& candidate) {
  SymplecticCheck c;
  if (candidate.dimension() != algebra.dimension()) throw DimensionError("form lives on a different algebra");
  c.degree_two = candidate.degree() == 2;
  if (!c.degree_two) {
    c.reason = "degree " + std::to_string(candidate.degree()) + ", expected 2";
    return c;
  }
  c.d_witness = algebra.d(candidate);
  c.closed = c.d_witness.is_zero();
  c.nondegenerate = !power(candidate, algebra.half_dimension()).is_zero();
  if (!c.closed)
    c.reason = "not closed: d(omega) = " + render(c.d_witness, algebra.layout().labels);
  else if (!c.nondegenerate)
    c.reason = "degenerate: omega^" + std::to_string(algebra.half_dimension()) + " = 0";
  else
    c.reason = "symplectic";
  return c;
}

SymplecticForm validate_symplectic(const Algebra& algebra, const KForm& candidate, Provenance provenance) {
  SymplecticCheck c = check_symplectic(algebra, candidate);
  if (!c.ok()) throw InputError("not a symplectic form: " + c.reason);
  return {candidate, provenance};
}

SymplecticForm default_symplectic(const Algebra& algebra) {
  if (algebra.spec().a != 0) throw InputError("default symplectic form needs a = 0");
  Admissibility adm = validate_spectrum(algebra.spec());
  if (!adm.admissible) throw InputError("spectrum not symplectically admissible: " + adm.reason);
  const auto& layout = algebra.layout();
  KForm omega = delta_form(algebra);
  for (std::size_t b = 0; b < layout.doubles.size(); ++b)
    omega += circuit_form(algebra, b, b, layout.doubles[b].size);

  auto pair_term = [&](std::size_t i, std::size_t j, int sign) {
    KForm t = wedge(algebra.generator(i), algebra.generator(j));
    if (sign < 0) t *= -1;
    omega += t;
  };
  const auto& zero = layout.zero_blocks;
  for (std::size_t b = 0; b < zero.size(); ++b) {
    const std::size_t r = zero[b].size, s = zero[b].start;
    if (r % 2 == 0) {
      for (std::size_t i = 1; i <= r / 2; ++i) pair_term(s + i - 1, s + r - i, i % 2 ? 1 : -1);
    } else {
      if (b + 1 >= zero.size() || zero[b + 1].size != r) throw InputError("no default form; supply one");
      const std::size_t t = zero[b + 1].start;
      for (std::size_t i = 1; i <= r; ++i) pair_term(s + i - 1, t + r - i, i % 2 ? 1 : -1);
      ++b;
    }
  }
  if (!check_symplectic(algebra, omega).ok()) throw InputError("no default form; supply one");
  return {omega, Provenance::default_normal_form};
}

KForm pull_back(const QMatrix& phi, const KForm& form) {
  const std::size_t dim = form.dimension();
  if (phi.rows() != dim || phi.cols() != dim) throw DimensionError("basis change has wrong size");
  std::vector<KForm> images;
  for (std::size_t j = 0; j < dim; ++j) {
    KForm img(dim, 1);
    for (std::size_t i = 0; i < dim; ++i) {
      Rational c = phi.at(i, j);
      if (c != 0) img.add_term(Mask{1} << i, c);
    }
    images.push_back(std::move(img));
  }
  KForm out(dim, form.degree());
  for (const auto& [m, c] : form.terms()) {
    KForm term = KForm::scalar(dim, c);
    for (Mask bits = m; bits; bits &= bits - 1) term = wedge(term, images[static_cast<std::size_t>(__builtin_ctz(bits))]);
    out += term;
  }
  return out;
}

bool commutes_with_d(const Algebra& algebra, const QMatrix& phi, std::size_t degree) {
  DegreeBasis basis(algebra.dimension(), degree);
  for (auto m : basis.masks()) {
    KForm mono = KForm::monomial(algebra.dimension(), m);
    if (algebra.d(pull_back(phi, mono)) != pull_back(phi, algebra.d(mono))) return false;
  }
  return true;
}

namespace {

QMatrix inverse(const QMatrix& m) {
  std::vector<QVector> rhs;
  for (std::size_t j = 0; j < m.rows(); ++j) {
    QVector e(m.rows());
    e[j] = 1;
    rhs.push_back(std::move(e));
  }
  auto sol = solve_columns(m, rhs);
  std::vector<QVector> cols;
  for (auto& s : sol) {
    if (!s) throw InvariantViolation("basis change is singular");
    cols.push_back(std::move(*s));
  }
  return QMatrix::from_columns(m.rows(), cols);
}

}  // namespace

Normalization normalize_symplectic(const CochainComplex& complex, const SymplecticForm& omega) {
  const Algebra& algebra = complex.algebra();
  const auto& layout = algebra.layout();
  if (algebra.spec().a != 0) throw InputError("normalization needs a = 0");
  if (!layout.zero_blocks.empty() || !layout.unpaired.empty())
    throw InputError("normalization needs 0 outside spec(A0) and an admissible spectrum");
  validate_symplectic(algebra, omega.form);

  // [omega] = c delta + sum b_l(a,b) g_l(x_a, x_b) + exact.
  Normalization out;
  std::vector<KForm> generators{delta_form(algebra)};
  std::vector<Circuit> circuits;
  for (std::size_t a = 0; a < layout.doubles.size(); ++a)
    for (std::size_t b = 0; b < layout.doubles.size(); ++b) {
      if (layout.doubles[a].lambda != layout.doubles[b].lambda) continue;
      const std::size_t len = std::min(layout.doubles[a].size, layout.doubles[b].size);
      for (std::size_t l = 1; l <= len; ++l) {
        CircuitKind kind = a == b ? CircuitKind::xx : (a < b ? CircuitKind::xy : CircuitKind::yx);
        circuits.push_back({kind, l, a, b, circuit_form(algebra, a, b, l)});
        generators.push_back(circuits.back().form);
      }
    }
  const DegreeBasis& b2 = complex.basis(2);
  std::vector<QVector> cols;
  for (const auto& g : generators) cols.push_back(b2.coordinates(g));
  const QMatrix& d1 = complex.d(1);
  QMatrix d1t = d1.transposed();
  for (std::size_t j = 0; j < d1.cols(); ++j) {
    QVector col(d1.rows());
    for (const auto& [r, v] : d1t.row(j)) col[r] = v;
    cols.push_back(std::move(col));
  }
  auto coeffs = in_column_space(QMatrix::from_columns(b2.size(), cols), b2.coordinates(omega.form));
  if (!coeffs) throw InvariantViolation("omega is not a combination of delta, circuits and exact forms");
  out.delta_coefficient = (*coeffs)[0];
  // b_l(a, b) lookup.
  auto coefficient = [&](std::size_t a, std::size_t b, std::size_t l) -> Rational {
    for (std::size_t i = 0; i < circuits.size(); ++i)
      if (circuits[i].first_block == a && circuits[i].second_block == b && circuits[i].length == l)
        return (*coeffs)[i + 1];
    return 0;
  };
  for (std::size_t i = 0; i < circuits.size(); ++i) out.circuit_coefficients.emplace_back(circuits[i], (*coeffs)[i + 1]);

  // phi fixes f1 and the plus covectors, scales f2 by c and mixes minus
  // covectors so that phi(delta + sum g_max) = c delta + sum b_l g_l.
  const std::size_t dim = algebra.dimension();
  QMatrix phi = QMatrix::identity(dim);
  phi.set(1, 1, out.delta_coefficient);
  for (std::size_t a = 0; a < layout.doubles.size(); ++a) {
    const DoubleBlock& xa = layout.doubles[a];
    for (std::size_t k = 1; k <= xa.size; ++k) {
      const std::size_t col = xa.minus_start + k - 1;
      phi.set(col, col, 0);
      for (std::size_t b = 0; b < layout.doubles.size(); ++b) {
        const DoubleBlock& xb = layout.doubles[b];
        if (xb.lambda != xa.lambda) continue;
        for (std::size_t l = xa.size + 1 - k; l <= std::min(xa.size, xb.size); ++l) {
          Rational c = coefficient(a, b, l);
          if (c != 0) phi.add_to(xb.minus_start + (l + k - xa.size) - 1, col, c);
        }
      }
    }
  }
  if (determinant(phi) == 0)
    throw InvariantViolation("circuit coefficient matrix is singular for a non-degenerate form");
  out.phi = phi;

  out.normal_part = delta_form(algebra);
  for (std::size_t a = 0; a < layout.doubles.size(); ++a)
    out.normal_part += circuit_form(algebra, a, a, layout.doubles[a].size);

  KForm normalized = pull_back(inverse(phi), omega.form);
  out.form = {normalized, Provenance::normalized};
  out.commutes_with_d = commutes_with_d(algebra, phi, 1) && commutes_with_d(algebra, phi, 2);
  out.maps_back = pull_back(phi, normalized) == omega.form;
  KForm diff = normalized - out.normal_part;
  out.differs_by_exact = algebra.d(diff).is_zero() && is_exact(complex, diff).has_value();
  return out;
}

Prediction predict_verdict(const JordanSpec& spec) {
  if (spec.a != 0) throw InputError("predictions assume a = 0");
  Admissibility adm = validate_spectrum(spec);
  if (!adm.admissible) throw InputError("spectrum not symplectically admissible: " + adm.reason);
  Prediction p;
  if (is_semisimple(spec)) {
    p.verdict = Verdict::hlc;
    p.rule = "A semisimple: hard-Lefschetz for every symplectic form";
    return p;
  }
  p.verdict = Verdict::fails;
  if (has_zero_eigenvalue(spec)) {
    bool m_nonzero = !is_zero(spec.v) || std::any_of(spec.blocks.begin(), spec.blocks.end(), [](const Block& b) {
                       return b.lambda == 0 && b.size >= 2;
                     });
    if (m_nonzero) {
      p.failure_degree = 1;
      p.rule = "0 in spec(A0) and M != 0: fails at degree 1";
    } else {
      p.failure_degree = 2;
      p.theorem_covered = false;
      p.rule = "0 in spec(A0), M = 0, nilpotent part on W: fails (degree 2 expected, not covered by a degree statement)";
    }
  } else {
    p.failure_degree = 2;
    p.rule = "0 not in spec(A0), Jordan block of size >= 2: fails at degree 2, bijective at degree 1";
  }
  return p;
}

namespace {

std::vector<QVector> images_in(const CohomologySpace& target, const std::vector<KForm>& forms) {
  return target.classes_of(forms);
}

QMatrix lefschetz_between(const CohomologySpace& source, const CohomologySpace& target, const KForm& omega_power) {
  std::vector<KForm> imgs;
  for (const auto& r : source.representatives()) imgs.push_back(wedge(omega_power, r));
  return QMatrix::from_columns(target.betti(), images_in(target, imgs));
}

}  // namespace

QMatrix lefschetz_matrix(const CochainComplex& complex, const KForm& omega, std::size_t k) {
  const std::size_t n = complex.algebra().half_dimension();
  if (k > n) throw InputError("Lefschetz degree exceeds half the dimension");
  CohomologySpace src(complex, k), dst(complex, 2 * n - k);
  return lefschetz_between(src, dst, power(omega, n - k));
}

LefschetzReport hard_lefschetz_report(const CochainComplex& complex, const SymplecticForm& omega) {
  const Algebra& algebra = complex.algebra();
  validate_symplectic(algebra, omega.form, omega.provenance);
  const std::size_t n = algebra.half_dimension();
  LefschetzReport rep;
  for (const auto& b : algebra.spec().blocks) rep.eigenvalues.push_back(b.lambda);

  std::vector<KForm> powers{KForm::scalar(algebra.dimension(), 1)};
  for (std::size_t j = 1; j <= n; ++j) powers.push_back(wedge(powers.back(), omega.form));

  std::optional<QMatrix> failing;
  std::vector<CohomologySpace> low;
  for (std::size_t k = 0; k <= n; ++k) {
    low.emplace_back(complex, k);
    CohomologySpace high(complex, 2 * n - k);
    QMatrix l = lefschetz_between(low.back(), high, powers[n - k]);
    DegreeReport d;
    d.k = k;
    d.dim_source = low.back().betti();
    d.dim_target = high.betti();
    d.rank = rank(l);
    d.injective = d.rank == d.dim_source;
    d.surjective = d.rank == d.dim_target;
    rep.degrees.push_back(d);
    if (!d.bijective() && !rep.first_failure_degree) {
      rep.first_failure_degree = k;
      failing = l;
    }
  }
  rep.verdict = rep.first_failure_degree ? Verdict::fails : Verdict::hlc;

  if (rep.first_failure_degree) {
    const std::size_t k = *rep.first_failure_degree;
    const KForm& wpow = powers[n - k];
    const auto& layout = algebra.layout();
    if (k == 2 && layout.zero_blocks.empty()) {
      // Prefer [x^1 ^ x^{m+1}] of a largest double block when it is in the kernel.
      auto best = std::max_element(layout.doubles.begin(), layout.doubles.end(),
                                   [](const DoubleBlock& a, const DoubleBlock& b) { return a.size < b.size; });
      if (best != layout.doubles.end() && best->size >= 2) {
        KForm cand = circuit_form(algebra, static_cast<std::size_t>(best - layout.doubles.begin()),
                                  static_cast<std::size_t>(best - layout.doubles.begin()), 1);
        if (is_exact(complex, wedge(wpow, cand))) {
          rep.witness = cand;
          rep.canonical_witness = true;
        }
      }
    }
    if (!rep.witness) {
      auto kernel = nullspace_basis(*failing);
      if (!kernel.empty()) rep.witness = low[k].form_of(kernel.front());
    }
    if (rep.witness) {
      if (!algebra.d(*rep.witness).is_zero() || is_exact(complex, *rep.witness) ||
          !is_exact(complex, wedge(wpow, *rep.witness)))
        throw InvariantViolation("kernel witness is not a non-exact cocycle killed by the Lefschetz map");
    }
  }

  rep.predicted = predict_verdict(algebra.spec());
  rep.agree = rep.predicted.verdict == rep.verdict && rep.predicted.failure_degree == rep.first_failure_degree;
  return rep;
}

JordanSpec single_double_block(std::size_t m, const Rational& lambda) {
  JordanSpec s;
  s.blocks = {{lambda, m, 1}, {-lambda, m, 1}};
  return s;
}

KernelWitnessProof kernel_witness_check(const CochainComplex& complex) {
  const Algebra& algebra = complex.algebra();
  const auto& layout = algebra.layout();
  if (layout.doubles.size() != 1 || !layout.zero_blocks.empty() || !layout.unpaired.empty() ||
      layout.doubles.front().size < 2)
    throw InputError("kernel witness check needs u0 to be one double block of size >= 2");
  KernelWitnessProof p;
  const std::size_t m = layout.doubles.front().size;
  const std::size_t n = algebra.half_dimension();
  p.m = m;
  const KForm rho = circuit_form(algebra, 0, 0, m);
  const KForm omega = delta_form(algebra) + rho;
  const KForm w = circuit_form(algebra, 0, 0, 1);  // x^1 ^ x^{m+1}
  const KForm gamma_m2m = gamma_form(algebra, {m, 2 * m});
  const KForm delta_gamma = wedge(delta_form(algebra), gamma_m2m);

  auto ratio = [](const KForm& a, const KForm& b) -> Rational {
    // a = c * b for a single-term b; 0 when a is not a multiple.
    if (b.terms().size() != 1 || a.terms().size() > 1) return 0;
    if (a.is_zero()) return 0;
    if (a.terms().begin()->first != b.terms().begin()->first) return 0;
    return a.terms().begin()->second / b.terms().begin()->second;
  };
  p.rho_power_coefficient = ratio(wedge(power(rho, m - 2), w), gamma_m2m);
  p.rho_divided_coefficient = ratio(wedge(divided_power(rho, m - 2), w), gamma_m2m);
  const KForm image = wedge(power(omega, n - 2), w);
  p.omega_coefficient = ratio(image, delta_gamma);

  const KForm f2_gamma = wedge(algebra.generator(1), gamma_form(algebra, {m, 2 * m - 1}));
  p.delta_gamma_identity = delta_gamma == -algebra.d(f2_gamma);

  auto prim = is_exact(complex, image);
  p.image_exact = prim.has_value();
  if (prim) p.engine_primitive = *prim;
  p.explicit_primitive = p.omega_coefficient * (-f2_gamma);
  p.explicit_primitive_valid = algebra.d(p.explicit_primitive) == image;
  p.difference_closed = prim && algebra.d(*prim - p.explicit_primitive).is_zero();
  return p;
}

}  // namespace llab
