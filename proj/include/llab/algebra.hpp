#pragma once

// Almost abelian Lie algebras g_A = R f1 x|_A u built from Jordan data, with
// their bracket and Chevalley-Eilenberg differentials.

#include <optional>
#include <string>
#include <vector>

#include "llab/exact_core.hpp"
#include "llab/exterior.hpp"

namespace llab {

struct Block {
  Rational lambda;
  std::size_t size = 1;
  std::size_t mult = 1;
  friend bool operator==(const Block&, const Block&) = default;
};

struct JordanSpec {
  Rational a = 0;
  // Coefficients of the f2-component of [f1, e] over the zero-eigenvalue
  // Jordan basis, in layout order. Empty means v = 0.
  QVector v;
  std::vector<Block> blocks;
  // Needed before a != 0 is accepted; only negative tests use it.
  bool allow_nonunimodular = false;

  friend bool operator==(const JordanSpec&, const JordanSpec&) = default;
};

// Parses {"a": "0", "v": [...] | null, "blocks": [{"lambda","size","mult"}]}.
// Throws InputError.
JordanSpec parse_spec(const std::string& json_text);
std::string spec_to_json(const JordanSpec& spec);

std::size_t spec_dimension(const JordanSpec& spec);
bool has_zero_eigenvalue(const JordanSpec& spec);
// All blocks of size 1 and v = 0.
bool is_semisimple(const JordanSpec& spec);

struct Admissibility {
  bool admissible = true;
  // 0 when admissible, otherwise the first failing condition: 1 for the
  // zero-eigenvalue parity condition, 2 for the +-lambda pairing condition.
  int failed_condition = 0;
  std::string reason;
};

// Whether A0 is conjugate into sp(n-1, R).
Admissibility validate_spectrum(const JordanSpec& spec);

// One Jordan block placed in generator coordinates; basis vectors occupy
// generators start .. start+size-1 with [f1, x_j] = lambda x_j + x_{j+1}.
struct PlacedBlock {
  Rational lambda;
  std::size_t size = 0;
  std::size_t start = 0;
};

// X(lambda) + X(-lambda) of equal size, lambda > 0. The plus part holds
// x^1..x^r and the minus part x^{r+1}..x^{2r} in circuit numbering.
struct DoubleBlock {
  Rational lambda;
  std::size_t size = 0;
  std::size_t plus_start = 0;
  std::size_t minus_start = 0;
  // Generator index of the circuit-numbered covector x^i, 1 <= i <= 2r.
  std::size_t covector(std::size_t i) const {
    return i <= size ? plus_start + i - 1 : minus_start + (i - size) - 1;
  }
};

struct BasisLayout {
  std::size_t dimension = 2;
  std::vector<std::string> labels;
  std::vector<DoubleBlock> doubles;
  // Nonzero-eigenvalue blocks without a partner (inadmissible specs only).
  std::vector<PlacedBlock> unpaired;
  std::vector<PlacedBlock> zero_blocks;
  std::size_t v0_begin = 2;  // zero-eigenvalue generators are [v0_begin, dimension)

  std::size_t v0_dimension() const { return dimension - v0_begin; }
  // Every placed block, in generator order.
  std::vector<PlacedBlock> all_blocks() const;
};

class Algebra {
 public:
  // Throws InputError for odd dimension, v on a zero-free spectrum, a != 0
  // without the override flag, or dimension above the exterior limit.
  explicit Algebra(JordanSpec spec);

  const JordanSpec& spec() const { return spec_; }
  const BasisLayout& layout() const { return layout_; }
  std::size_t dimension() const { return layout_.dimension; }
  std::size_t half_dimension() const { return layout_.dimension / 2; }

  // A on u = span{f2, u0}; u-index i is generator i + 1.
  const QMatrix& structure_matrix() const { return a_; }
  bool is_unimodular() const;

  // Bracket of two vectors in generator coordinates.
  QVector bracket(const QVector& x, const QVector& y) const;

  KForm d(const KForm& form) const;
  // Matrix of d on degree-k monomials (rows: degree k+1 monomials).
  QMatrix differential(std::size_t k) const;
  QMatrix differential(const DegreeBasis& source, const DegreeBasis& target) const;

  KForm generator(std::size_t index) const { return KForm::generator(dimension(), index); }
  KForm zero(std::size_t degree) const { return KForm(dimension(), degree); }

 private:
  JordanSpec spec_;
  BasisLayout layout_;
  QMatrix a_;
  // Rows of A as (u-column, value) pairs, keyed by generator index.
  std::vector<std::vector<std::pair<std::size_t, Rational>>> dual_action_;
};

inline Algebra build(const JordanSpec& spec) { return Algebra(spec); }

}  // namespace llab
