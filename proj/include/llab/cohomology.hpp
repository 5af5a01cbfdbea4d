#pragma once

// Chevalley-Eilenberg cohomology of an almost abelian algebra: Betti numbers,
// representative cocycles, exactness, circuits and their companions.

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "llab/algebra.hpp"

namespace llab {

// The differentials d_k, built lazily per degree. Safe to query from several
// threads.
class CochainComplex {
 public:
  explicit CochainComplex(Algebra algebra);

  const Algebra& algebra() const { return algebra_; }
  std::size_t top_degree() const { return algebra_.dimension(); }

  const DegreeBasis& basis(std::size_t k) const;
  // d_k : degree k -> degree k+1. d_{top} is the zero map into a 0-dim space.
  const QMatrix& d(std::size_t k) const;
  std::size_t rank_d(std::size_t k) const;
  // Pivot columns of d_k; the corresponding columns form a basis of im d_k.
  const std::vector<std::size_t>& image_pivots(std::size_t k) const;
  // Non-pivot columns of d_k. A cocycle is determined by its entries there
  // (its kernel coordinates), since the nullspace basis is reduced.
  const std::vector<std::size_t>& free_columns(std::size_t k) const;
  QVector kernel_coordinates(std::size_t k, const QVector& cocycle) const;
  // The basis of im d_{k-1} given by the pivot columns of d_{k-1}, written in
  // kernel coordinates of degree k.
  const QMatrix& exact_in_kernel(std::size_t k) const;

 private:
  struct Level {
    std::once_flag basis_once, d_once, pivots_once, free_once, exact_once;
    std::unique_ptr<DegreeBasis> basis;
    std::unique_ptr<QMatrix> d;
    std::vector<std::size_t> pivots;
    std::vector<std::size_t> free;
    std::unique_ptr<QMatrix> exact;
  };
  Level& level(std::size_t k) const;

  Algebra algebra_;
  std::vector<std::unique_ptr<Level>> levels_;
};

std::size_t betti(const CochainComplex& complex, std::size_t k);
std::vector<std::size_t> betti_numbers(const CochainComplex& complex);
inline std::size_t betti(const Algebra& algebra, std::size_t k) { return betti(CochainComplex(algebra), k); }

// H^k with a fixed basis of representative cocycles: the kernel vectors of
// d_k that extend the pivot basis of im d_{k-1}.
class CohomologySpace {
 public:
  CohomologySpace(const CochainComplex& complex, std::size_t k);

  std::size_t degree() const { return degree_; }
  std::size_t betti() const { return representatives_.size(); }
  const std::vector<KForm>& representatives() const { return representatives_; }

  // Coordinates of [z] on the representatives. Throws InputError when z is
  // not closed.
  QVector class_of(const KForm& z) const;
  std::vector<QVector> classes_of(const std::vector<KForm>& zs) const;
  // Sum of coefficient * representative.
  KForm form_of(const QVector& coords) const;

 private:
  const CochainComplex* complex_;
  std::size_t degree_;
  std::vector<KForm> representatives_;
  QMatrix projector_;  // kernel coordinates; columns: representatives, then im d_{k-1}
};

// A primitive eta with d eta = form, or nullopt. Throws InputError when the
// form is not closed.
std::optional<KForm> is_exact(const CochainComplex& complex, const KForm& form);
inline std::optional<KForm> is_exact(const Algebra& algebra, const KForm& form) {
  return is_exact(CochainComplex(algebra), form);
}

// Rank of the span of the classes of the given cocycles.
std::size_t class_rank(const CochainComplex& complex, const std::vector<KForm>& cocycles);

// ---------------------------------------------------------------------------
// Circuits

enum class CircuitKind { xx, xy, yx, yy };
std::string to_string(CircuitKind kind);

struct Circuit {
  CircuitKind kind = CircuitKind::xx;
  std::size_t length = 0;
  // Indices into layout().doubles; first supplies the plus-part covectors.
  std::size_t first_block = 0;
  std::size_t second_block = 0;
  KForm form;
};

// sum_{i=1}^{l} (-1)^{i+1} first^i ^ second^{s+l+1-i}, where s is the size of
// the second block (so the second factor is its (l+1-i)-th minus covector).
KForm circuit_form(const Algebra& algebra, std::size_t first_block, std::size_t second_block, std::size_t length);

// All circuits of two double blocks sharing the same eigenvalue pair. Equal
// indices give the unmixed circuits only. Throws InputError otherwise.
std::vector<Circuit> circuits_of(const Algebra& algebra, std::size_t block_a, std::size_t block_b);

// ---------------------------------------------------------------------------
// Special forms for one double block of size m (0 not an eigenvalue of A0).

KForm delta_form(const Algebra& algebra);  // f1 ^ f2
// Product of all u0 covectors in order; omit lists circuit indices to drop.
KForm gamma_form(const Algebra& algebra, const std::vector<std::size_t>& omit = {});
// The volume form f1 ^ f2 ^ Gamma.
KForm volume_form(const Algebra& algebra);

// Companion of g_l: (-1)^m * sum_{i=1}^{l} (-1)^{l+i+1} delta ^ Gamma_{i, m+l+1-i}.
// The (-1)^m factor makes the pairing with g_l equal to +l for every m.
KForm companion(const Algebra& algebra, std::size_t l);
// The same sum without the (-1)^m normalisation.
KForm companion_unnormalized(const Algebra& algebra, std::size_t l);

// Scalar C with theta ^ eta = C * volume. Throws InputError unless both are
// closed and the degrees add up to the dimension.
Rational poincare_pairing(const Algebra& algebra, const KForm& theta, const KForm& eta);

// ---------------------------------------------------------------------------
// Structure of H^2 and of closed 2-forms

struct EigenspacePart {
  Rational lambda;  // positive representative of the pair
  std::size_t dimension = 0;       // classes of closed forms in Lambda^2 W_i*
  std::size_t circuit_count = 0;   // all circuits of all block pairs in W_i
  std::size_t circuit_rank = 0;    // rank of their classes
  std::size_t expected = 0;        // sum of r (one block) or r+s+2min(r,s) (two blocks)
};

struct H2Decomposition {
  std::size_t b2 = 0;
  std::size_t u_dim = 0;
  std::size_t v_dim = 0;
  std::size_t w0_dim = 0;
  std::vector<EigenspacePart> w_parts;
  std::vector<KForm> u_generators;
  std::vector<KForm> v_generators;
  std::vector<KForm> w0_generators;
  std::vector<Circuit> circuits;
  bool u_basis_canonical = false;  // true only when U = span{[delta]}
  bool direct_sum = false;         // parts independent and spanning H^2
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

H2Decomposition verify_h2_structure(const CochainComplex& complex);

// Pattern of the restriction of closed 2-forms to X(lambda) x Y(-lambda).
struct PairingPattern {
  std::size_t plus_start = 0, plus_size = 0;    // X in V_lambda
  std::size_t minus_start = 0, minus_size = 0;  // Y in V_{-lambda}
  Rational lambda;
  std::size_t free_parameters = 0;              // dim of the restricted space
  std::vector<std::pair<std::size_t, std::size_t>> support;  // 1-based (j, k)
};

struct ClosedFormStructure {
  std::size_t kernel_dimension = 0;
  std::vector<PairingPattern> pairings;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ClosedFormStructure closed_two_form_structure(const CochainComplex& complex);

}  // namespace llab
