#include "llab/cohomology.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "llab/errors.hpp"

namespace llab {

// ---------------------------------------------------------------------------
// CochainComplex

CochainComplex::CochainComplex(Algebra algebra) : algebra_(std::move(algebra)) {
  for (std::size_t k = 0; k <= algebra_.dimension() + 1; ++k) levels_.push_back(std::make_unique<Level>());
}

CochainComplex::Level& CochainComplex::level(std::size_t k) const {
  if (k >= levels_.size()) throw DimensionError("degree " + std::to_string(k) + " out of range");
  return *levels_[k];
}

const DegreeBasis& CochainComplex::basis(std::size_t k) const {
  Level& l = level(k);
  std::call_once(l.basis_once, [&] { l.basis = std::make_unique<DegreeBasis>(algebra_.dimension(), k); });
  return *l.basis;
}

const QMatrix& CochainComplex::d(std::size_t k) const {
  if (k > top_degree()) throw DimensionError("degree " + std::to_string(k) + " out of range");
  Level& l = level(k);
  std::call_once(l.d_once, [&] { l.d = std::make_unique<QMatrix>(algebra_.differential(basis(k), basis(k + 1))); });
  return *l.d;
}

const std::vector<std::size_t>& CochainComplex::image_pivots(std::size_t k) const {
  Level& l = level(k);
  std::call_once(l.pivots_once, [&] { l.pivots = pivot_columns(d(k)); });
  return l.pivots;
}

const std::vector<std::size_t>& CochainComplex::free_columns(std::size_t k) const {
  Level& l = level(k);
  std::call_once(l.free_once, [&] {
    const auto& piv = image_pivots(k);
    for (std::size_t c = 0, j = 0; c < basis(k).size(); ++c) {
      if (j < piv.size() && piv[j] == c)
        ++j;
      else
        l.free.push_back(c);
    }
  });
  return l.free;
}

QVector CochainComplex::kernel_coordinates(std::size_t k, const QVector& cocycle) const {
  const auto& free = free_columns(k);
  QVector out;
  out.reserve(free.size());
  for (auto c : free) out.push_back(cocycle[c]);
  return out;
}

const QMatrix& CochainComplex::exact_in_kernel(std::size_t k) const {
  Level& l = level(k);
  std::call_once(l.exact_once, [&] {
    const auto& free = free_columns(k);
    std::vector<QMatrix::Row> cols;
    if (k > 0) {
      std::vector<int> slot(basis(k).size(), -1);
      for (std::size_t j = 0; j < free.size(); ++j) slot[free[j]] = static_cast<int>(j);
      QMatrix t = d(k - 1).transposed();
      for (auto p : image_pivots(k - 1)) {
        QMatrix::Row col;
        for (const auto& [r, v] : t.row(p))
          if (slot[r] >= 0) col.emplace_back(static_cast<std::uint32_t>(slot[r]), v);
        cols.push_back(std::move(col));
      }
    }
    l.exact = std::make_unique<QMatrix>(QMatrix::from_sparse_columns(free.size(), std::move(cols)));
  });
  return *l.exact;
}

std::size_t CochainComplex::rank_d(std::size_t k) const { return image_pivots(k).size(); }

std::size_t betti(const CochainComplex& complex, std::size_t k) {
  if (k > complex.top_degree()) throw DimensionError("degree out of range");
  std::size_t cycles = complex.basis(k).size() - complex.rank_d(k);
  return cycles - (k > 0 ? complex.rank_d(k - 1) : 0);
}

std::vector<std::size_t> betti_numbers(const CochainComplex& complex) {
  std::vector<std::size_t> b;
  for (std::size_t k = 0; k <= complex.top_degree(); ++k) b.push_back(betti(complex, k));
  return b;
}

namespace {

void require_closed(const CochainComplex& complex, const KForm& form) {
  if (!complex.algebra().d(form).is_zero()) throw InputError("form is not closed");
}

// Indices of cocycles whose classes extend a basis of the earlier ones.
std::vector<std::size_t> independent_classes(const CochainComplex& complex, std::size_t k,
                                             const std::vector<QVector>& cocycles) {
  const QMatrix& exact = complex.exact_in_kernel(k);
  QMatrix t = exact.transposed();
  std::vector<QMatrix::Row> cols;
  for (std::size_t j = 0; j < exact.cols(); ++j) cols.push_back(t.row(j));
  for (const auto& z : cocycles) {
    QVector kc = complex.kernel_coordinates(k, z);
    QMatrix::Row col;
    for (std::size_t i = 0; i < kc.size(); ++i)
      if (kc[i] != 0) col.emplace_back(static_cast<std::uint32_t>(i), kc[i]);
    cols.push_back(std::move(col));
  }
  const std::size_t nb = exact.cols();
  auto piv = pivot_columns(QMatrix::from_sparse_columns(exact.rows(), std::move(cols)));
  std::vector<std::size_t> out;
  for (auto p : piv)
    if (p >= nb) out.push_back(p - nb);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// CohomologySpace

CohomologySpace::CohomologySpace(const CochainComplex& complex, std::size_t k) : complex_(&complex), degree_(k) {
  if (k > complex.top_degree()) throw DimensionError("degree out of range");
  const DegreeBasis& basis = complex.basis(k);
  std::vector<QVector> cycles = nullspace_basis(complex.d(k));
  const QMatrix& exact = complex.exact_in_kernel(k);
  const std::size_t nfree = exact.rows(), nexact = exact.cols();
  // [exact | identity] in kernel coordinates; the identity columns that are
  // pivots pick the cycles completing a basis of ker d_k.
  QMatrix t = exact.transposed();
  std::vector<QMatrix::Row> cols;
  for (std::size_t j = 0; j < nexact; ++j) cols.push_back(t.row(j));
  for (std::size_t i = 0; i < nfree; ++i) cols.push_back({{static_cast<std::uint32_t>(i), Rational(1)}});
  std::vector<std::size_t> picked;
  for (auto p : pivot_columns(QMatrix::from_sparse_columns(nfree, cols)))
    if (p >= nexact) picked.push_back(p - nexact);
  if (picked.size() != llab::betti(complex, k))
    throw InvariantViolation("representative count differs from the Betti number in degree " + std::to_string(k));
  std::vector<QMatrix::Row> proj;
  for (auto i : picked) {
    representatives_.push_back(basis.form(cycles[i]));
    proj.push_back({{static_cast<std::uint32_t>(i), Rational(1)}});
  }
  for (std::size_t j = 0; j < nexact; ++j) proj.push_back(t.row(j));
  projector_ = QMatrix::from_sparse_columns(nfree, std::move(proj));
}

std::vector<QVector> CohomologySpace::classes_of(const std::vector<KForm>& zs) const {
  std::vector<QVector> rhs;
  for (const auto& z : zs) {
    require_closed(*complex_, z);
    rhs.push_back(complex_->kernel_coordinates(degree_, complex_->basis(degree_).coordinates(z)));
  }
  auto sol = solve_columns(projector_, rhs);
  std::vector<QVector> out;
  for (auto& s : sol) {
    if (!s) throw InvariantViolation("closed form outside cycles = representatives + exact");
    out.emplace_back(s->begin(), s->begin() + static_cast<std::ptrdiff_t>(betti()));
  }
  return out;
}

QVector CohomologySpace::class_of(const KForm& z) const { return classes_of({z}).front(); }

KForm CohomologySpace::form_of(const QVector& coords) const {
  if (coords.size() != betti()) throw DimensionError("class coordinates have wrong length");
  KForm out(complex_->algebra().dimension(), degree_);
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] != 0) out += coords[i] * representatives_[i];
  return out;
}

std::optional<KForm> is_exact(const CochainComplex& complex, const KForm& form) {
  require_closed(complex, form);
  const std::size_t k = form.degree();
  if (k == 0) {
    if (form.is_zero()) return KForm(complex.algebra().dimension(), 0);
    return std::nullopt;
  }
  // A closed form with zero kernel coordinates vanishes, so matching them
  // with exact pivot columns of d_{k-1} suffices.
  auto c = in_column_space(complex.exact_in_kernel(k),
                           complex.kernel_coordinates(k, complex.basis(k).coordinates(form)));
  if (!c) return std::nullopt;
  QVector full(complex.basis(k - 1).size());
  const auto& piv = complex.image_pivots(k - 1);
  for (std::size_t j = 0; j < piv.size(); ++j) full[piv[j]] = (*c)[j];
  return complex.basis(k - 1).form(full);
}

std::size_t class_rank(const CochainComplex& complex, const std::vector<KForm>& cocycles) {
  if (cocycles.empty()) return 0;
  const std::size_t k = cocycles.front().degree();
  std::vector<QVector> coords;
  for (const auto& z : cocycles) {
    require_closed(complex, z);
    coords.push_back(complex.basis(k).coordinates(z));
  }
  return independent_classes(complex, k, coords).size();
}

// ---------------------------------------------------------------------------
// Circuits

std::string to_string(CircuitKind kind) {
  switch (kind) {
    case CircuitKind::xx: return "xx";
    case CircuitKind::xy: return "xy";
    case CircuitKind::yx: return "yx";
    case CircuitKind::yy: return "yy";
  }
  return "?";
}

KForm circuit_form(const Algebra& algebra, std::size_t first_block, std::size_t second_block, std::size_t length) {
  const auto& doubles = algebra.layout().doubles;
  if (first_block >= doubles.size() || second_block >= doubles.size())
    throw InputError("double block index out of range");
  const DoubleBlock& x = doubles[first_block];
  const DoubleBlock& y = doubles[second_block];
  if (length == 0 || length > std::min(x.size, y.size)) throw InputError("circuit length out of range");
  KForm out = algebra.zero(2);
  for (std::size_t i = 1; i <= length; ++i) {
    KForm term = wedge(algebra.generator(x.covector(i)), algebra.generator(y.covector(y.size + length + 1 - i)));
    if (i % 2 == 1)
      out += term;
    else
      out -= term;
  }
  return out;
}

std::vector<Circuit> circuits_of(const Algebra& algebra, std::size_t block_a, std::size_t block_b) {
  const auto& doubles = algebra.layout().doubles;
  if (block_a >= doubles.size() || block_b >= doubles.size()) throw InputError("double block index out of range");
  if (doubles[block_a].lambda != doubles[block_b].lambda)
    throw InputError("circuits need two double blocks of the same eigenvalue pair");
  std::vector<Circuit> out;
  auto add = [&](CircuitKind kind, std::size_t a, std::size_t b, std::size_t count) {
    for (std::size_t l = 1; l <= count; ++l) out.push_back({kind, l, a, b, circuit_form(algebra, a, b, l)});
  };
  const std::size_t r = doubles[block_a].size, s = doubles[block_b].size;
  add(CircuitKind::xx, block_a, block_a, r);
  if (block_a == block_b) return out;
  add(CircuitKind::yy, block_b, block_b, s);
  add(CircuitKind::xy, block_a, block_b, std::min(r, s));
  add(CircuitKind::yx, block_b, block_a, std::min(r, s));
  return out;
}

// ---------------------------------------------------------------------------
// Special forms

namespace {

void require_single_double_block(const Algebra& algebra) {
  const auto& l = algebra.layout();
  if (l.doubles.size() != 1 || !l.unpaired.empty() || !l.zero_blocks.empty())
    throw InputError("companions need u0 to be a single double block with 0 not an eigenvalue");
}

}  // namespace

KForm delta_form(const Algebra& algebra) { return wedge(algebra.generator(0), algebra.generator(1)); }

KForm gamma_form(const Algebra& algebra, const std::vector<std::size_t>& omit) {
  std::vector<std::size_t> gens;
  for (std::size_t i = 1; i + 1 < algebra.dimension(); ++i)
    if (std::find(omit.begin(), omit.end(), i) == omit.end()) gens.push_back(i + 1);
  return KForm::product(algebra.dimension(), gens);
}

KForm volume_form(const Algebra& algebra) { return wedge(delta_form(algebra), gamma_form(algebra)); }

KForm companion_unnormalized(const Algebra& algebra, std::size_t l) {
  require_single_double_block(algebra);
  const std::size_t m = algebra.layout().doubles.front().size;
  if (l == 0 || l > m) throw InputError("companion index out of range");
  KForm out(algebra.dimension(), algebra.dimension() - 2);
  const KForm delta = delta_form(algebra);
  for (std::size_t i = 1; i <= l; ++i) {
    KForm term = wedge(delta, gamma_form(algebra, {i, m + l + 1 - i}));
    if ((l + i + 1) % 2 == 0)
      out += term;
    else
      out -= term;
  }
  return out;
}

KForm companion(const Algebra& algebra, std::size_t l) {
  KForm h = companion_unnormalized(algebra, l);
  if (algebra.layout().doubles.front().size % 2 == 1) h *= -1;
  return h;
}

Rational poincare_pairing(const Algebra& algebra, const KForm& theta, const KForm& eta) {
  if (theta.degree() + eta.degree() != algebra.dimension())
    throw InputError("pairing degrees must add up to the dimension");
  if (!algebra.d(theta).is_zero() || !algebra.d(eta).is_zero()) throw InputError("pairing needs closed forms");
  return top_coefficient(wedge(theta, eta));
}

// ---------------------------------------------------------------------------
// H^2 structure

namespace {

// Eigenspace group of each generator: -2 for f1, -1 for W0 = span{f2} + V0,
// otherwise an index per |lambda|.
std::vector<int> generator_groups(const Algebra& algebra, std::vector<Rational>* group_lambda) {
  const auto& layout = algebra.layout();
  std::vector<int> g(algebra.dimension(), -1);
  g[0] = -2;
  std::map<Rational, int> ids;
  for (const auto& b : layout.all_blocks()) {
    if (b.lambda == 0) continue;
    Rational key = abs(b.lambda);
    auto [it, inserted] = ids.try_emplace(key, static_cast<int>(ids.size()));
    for (std::size_t j = 0; j < b.size; ++j) g[b.start + j] = it->second;
  }
  group_lambda->assign(ids.size(), Rational(0));
  for (const auto& [lam, id] : ids) (*group_lambda)[static_cast<std::size_t>(id)] = lam;
  return g;
}

// Closed 2-forms supported on the selected monomials.
std::vector<KForm> closed_forms_on(const CochainComplex& complex, const std::vector<std::size_t>& columns) {
  const QMatrix& d2 = complex.d(2);
  QMatrix t = d2.transposed();
  std::vector<QMatrix::Row> cols;
  for (auto c : columns) cols.push_back(t.row(c));
  QMatrix sub = QMatrix::from_sparse_columns(d2.rows(), cols);
  std::vector<KForm> out;
  const DegreeBasis& basis = complex.basis(2);
  for (const auto& v : nullspace_basis(sub)) {
    KForm f = complex.algebra().zero(2);
    for (std::size_t i = 0; i < columns.size(); ++i) f.add_term(basis.mask(columns[i]), v[i]);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<KForm> select_independent(const CochainComplex& complex, const std::vector<KForm>& forms) {
  if (forms.empty()) return {};
  std::vector<QVector> coords;
  for (const auto& f : forms) coords.push_back(complex.basis(2).coordinates(f));
  std::vector<KForm> out;
  for (auto i : independent_classes(complex, 2, coords)) out.push_back(forms[i]);
  return out;
}

}  // namespace

H2Decomposition verify_h2_structure(const CochainComplex& complex) {
  const Algebra& algebra = complex.algebra();
  if (algebra.spec().a != 0) throw InputError("H^2 decomposition needs a = 0");
  H2Decomposition out;
  out.b2 = betti(complex, 2);

  std::vector<Rational> group_lambda;
  std::vector<int> group = generator_groups(algebra, &group_lambda);
  const DegreeBasis& basis = complex.basis(2);

  std::vector<std::size_t> v_cols, w0_cols;
  std::vector<std::vector<std::size_t>> w_cols(group_lambda.size());
  std::vector<KForm> u_all;
  for (std::size_t c = 0; c < basis.size(); ++c) {
    Mask m = basis.mask(c);
    int lo = __builtin_ctz(m);
    int hi = 31 - __builtin_clz(m);
    int g1 = group[static_cast<std::size_t>(lo)], g2 = group[static_cast<std::size_t>(hi)];
    if (g1 == -2) {
      u_all.push_back(KForm::monomial(algebra.dimension(), m));
    } else if (g1 == -1 && g2 == -1) {
      w0_cols.push_back(c);
    } else if (g1 == -1 || g2 == -1) {
      v_cols.push_back(c);
    } else if (g1 == g2) {
      w_cols[static_cast<std::size_t>(g1)].push_back(c);
    }
  }

  out.u_generators = select_independent(complex, u_all);
  out.v_generators = select_independent(complex, closed_forms_on(complex, v_cols));
  out.w0_generators = select_independent(complex, closed_forms_on(complex, w0_cols));
  out.u_dim = out.u_generators.size();
  out.v_dim = out.v_generators.size();
  out.w0_dim = out.w0_generators.size();

  std::vector<KForm> all = out.u_generators;
  all.insert(all.end(), out.v_generators.begin(), out.v_generators.end());
  all.insert(all.end(), out.w0_generators.begin(), out.w0_generators.end());
  std::size_t dim_sum = out.u_dim + out.v_dim + out.w0_dim;

  const auto& doubles = algebra.layout().doubles;
  for (std::size_t gi = 0; gi < group_lambda.size(); ++gi) {
    EigenspacePart part;
    part.lambda = group_lambda[gi];
    auto gens = select_independent(complex, closed_forms_on(complex, w_cols[gi]));
    part.dimension = gens.size();
    all.insert(all.end(), gens.begin(), gens.end());
    dim_sum += part.dimension;

    std::vector<std::size_t> members;
    for (std::size_t b = 0; b < doubles.size(); ++b)
      if (doubles[b].lambda == part.lambda) members.push_back(b);
    std::vector<KForm> circuit_forms;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const std::size_t ri = doubles[members[i]].size;
      part.expected += ri;
      for (std::size_t j = i; j < members.size(); ++j) {
        auto cs = circuits_of(algebra, members[i], members[j]);
        if (i != j) {
          part.expected += 2 * std::min(ri, doubles[members[j]].size);
          // circuits_of(i, j) repeats both unmixed families; keep only the mixed ones.
          std::erase_if(cs, [](const Circuit& c) { return c.kind == CircuitKind::xx || c.kind == CircuitKind::yy; });
        }
        for (auto& c : cs) {
          circuit_forms.push_back(c.form);
          out.circuits.push_back(std::move(c));
        }
      }
    }
    part.circuit_count = circuit_forms.size();
    part.circuit_rank = class_rank(complex, circuit_forms);
    if (part.circuit_rank != part.circuit_count)
      out.failures.push_back("circuit classes for lambda=" + to_string(part.lambda) + " are dependent");
    if (part.circuit_count != part.expected || part.dimension != part.expected)
      out.failures.push_back("Lambda^2 W* part for lambda=" + to_string(part.lambda) + " has dimension " +
                             std::to_string(part.dimension) + ", circuit count " + std::to_string(part.circuit_count) +
                             ", expected " + std::to_string(part.expected));
    out.w_parts.push_back(part);
  }

  out.direct_sum = dim_sum == out.b2 && class_rank(complex, all) == out.b2;
  if (!out.direct_sum)
    out.failures.push_back("parts do not form a direct sum decomposition of H^2 (sum of dimensions " +
                           std::to_string(dim_sum) + ", b2 " + std::to_string(out.b2) + ")");
  if (is_zero(algebra.spec().v) && out.v_dim != 0) out.failures.push_back("v = 0 but the V part is nonzero");

  const bool zero_free = algebra.layout().zero_blocks.empty();
  out.u_basis_canonical = zero_free;
  if (zero_free) {
    if (out.u_dim != 1) out.failures.push_back("0 not an eigenvalue but dim U = " + std::to_string(out.u_dim));
    if (class_rank(complex, {delta_form(algebra)}) != 1) out.failures.push_back("[delta] vanishes");
    if (out.w0_dim != 0) out.failures.push_back("0 not an eigenvalue but Lambda^2 W0* is nonzero");
    out.u_generators = {delta_form(algebra)};
  }
  return out;
}

ClosedFormStructure closed_two_form_structure(const CochainComplex& complex) {
  const Algebra& algebra = complex.algebra();
  if (algebra.spec().a != 0) throw InputError("closed 2-form structure needs a = 0");
  ClosedFormStructure out;
  const DegreeBasis& basis = complex.basis(2);
  std::vector<KForm> kernel;
  for (const auto& v : nullspace_basis(complex.d(2))) kernel.push_back(basis.form(v));
  out.kernel_dimension = kernel.size();

  auto value = [](const KForm& a, std::size_t i, std::size_t j) -> Rational {
    if (i == j) return 0;
    Rational c = a.coefficient((Mask{1} << i) | (Mask{1} << j));
    return i < j ? c : Rational(-c);
  };
  const bool v_zero = is_zero(algebra.spec().v);
  const auto blocks = algebra.layout().all_blocks();
  const auto& labels = algebra.layout().labels;

  for (const auto& b1 : blocks) {
    if (b1.lambda == 0) continue;
    for (const auto& b2 : blocks) {
      if (b2.lambda == -b1.lambda) continue;
      if (b2.lambda == 0 && !v_zero) continue;
      for (std::size_t ki = 0; ki < kernel.size(); ++ki)
        for (std::size_t i = 0; i < b1.size; ++i)
          for (std::size_t j = 0; j < b2.size; ++j)
            if (value(kernel[ki], b1.start + i, b2.start + j) != 0)
              out.violations.push_back("closed form #" + std::to_string(ki) + " pairs " + labels[b1.start + i] +
                                       " (lambda " + to_string(b1.lambda) + ") with " + labels[b2.start + j] +
                                       " (lambda " + to_string(b2.lambda) + ")");
    }
  }

  for (const auto& x : blocks) {
    if (x.lambda <= 0) continue;
    for (const auto& y : blocks) {
      if (y.lambda != -x.lambda) continue;
      PairingPattern p;
      p.plus_start = x.start;
      p.plus_size = x.size;
      p.minus_start = y.start;
      p.minus_size = y.size;
      p.lambda = x.lambda;
      const std::size_t r = x.size, s = y.size, m = std::min(r, s);
      std::vector<QVector> restricted;
      std::set<std::pair<std::size_t, std::size_t>> support;
      for (std::size_t ki = 0; ki < kernel.size(); ++ki) {
        QVector entries(r * s);
        auto P = [&](std::size_t j, std::size_t k) { return value(kernel[ki], x.start + j - 1, y.start + k - 1); };
        for (std::size_t j = 1; j <= r; ++j)
          for (std::size_t k = 1; k <= s; ++k) {
            Rational pv = P(j, k);
            entries[(j - 1) * s + (k - 1)] = pv;
            if (pv != 0) support.insert({j, k});
            if (j + k >= m + 2 && pv != 0)
              out.violations.push_back("closed form #" + std::to_string(ki) + " has nonzero entry (" +
                                       std::to_string(j) + "," + std::to_string(k) + ") beyond the antidiagonal band");
            if (j < r && k < s && P(j + 1, k) + P(j, k + 1) != 0)
              out.violations.push_back("closed form #" + std::to_string(ki) + " breaks the alternating Hankel relation at (" +
                                       std::to_string(j) + "," + std::to_string(k) + ")");
          }
        restricted.push_back(std::move(entries));
      }
      p.free_parameters = restricted.empty() ? 0 : rank(QMatrix::from_columns(r * s, restricted));
      p.support.assign(support.begin(), support.end());
      std::size_t band = 0;
      for (std::size_t j = 1; j <= r; ++j)
        for (std::size_t k = 1; k <= s; ++k)
          if (j + k <= m + 1) ++band;
      if (p.free_parameters != m)
        out.violations.push_back("pairing " + labels[x.start] + ".. x " + labels[y.start] + ".. has " +
                                 std::to_string(p.free_parameters) + " free parameters, expected " + std::to_string(m));
      if (p.support.size() != band)
        out.violations.push_back("pairing " + labels[x.start] + ".. x " + labels[y.start] +
                                 ".. does not fill the antidiagonal band");
      out.pairings.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace llab
