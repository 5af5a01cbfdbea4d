#pragma once

// Exact rational scalars and the linear-algebra kernels everything else is
// built on: rank, nullspace, column-space membership, determinant.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace llab {

using Rational = mpq_class;
using Integer = mpz_class;
using QVector = std::vector<Rational>;

// Parses "p", "-p" or "p/q" (no decimals). Throws InputError.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

bool is_zero(const QVector& v);

// Sparse row-major matrix over Q. Rows hold (column, value) pairs sorted by
// column with no stored zeros.
class QMatrix {
 public:
  using Entry = std::pair<std::uint32_t, Rational>;
  using Row = std::vector<Entry>;

  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols);

  static QMatrix identity(std::size_t n);
  static QMatrix from_dense(const std::vector<QVector>& rows);
  // Columns given as dense vectors of length `rows`.
  static QMatrix from_columns(std::size_t rows, std::span<const QVector> columns);
  // Columns given sparsely; entries of each column need not be sorted.
  static QMatrix from_sparse_columns(std::size_t rows, std::vector<Row> columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational at(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const Rational& value);
  void add_to(std::size_t r, std::size_t c, const Rational& value);
  const Row& row(std::size_t r) const { return data_[r]; }

  std::size_t nonzeros() const;
  double density() const;
  bool is_zero() const { return nonzeros() == 0; }

  QMatrix transposed() const;
  QVector column(std::size_t c) const;
  std::vector<QVector> to_dense() const;

  QVector operator*(const QVector& v) const;
  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend bool operator==(const QMatrix& a, const QMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Row> data_;
};

// Which elimination kernel to run. `automatic` picks dense fraction-free
// (Bareiss) elimination when more than half the entries are nonzero and
// sparse integer-row elimination otherwise. Both produce the same pivot
// columns, so every derived basis is independent of the choice.
enum class Strategy { automatic, sparse, dense };

std::size_t rank(const QMatrix& m, Strategy s = Strategy::automatic);

// Column rank profile: the lexicographically first set of independent
// columns (equivalently the pivot columns of the reduced echelon form).
std::vector<std::size_t> pivot_columns(const QMatrix& m,
                                       Strategy s = Strategy::automatic);

// cols - rank vectors, one per non-pivot column f, with entry 1 at f and 0 at
// every other non-pivot column.
std::vector<QVector> nullspace_basis(const QMatrix& m,
                                     Strategy s = Strategy::automatic);

// c with m*c = v (non-pivot coordinates zero), or nullopt when v is not in
// the column space. Throws DimensionError when v has the wrong length.
std::optional<QVector> in_column_space(const QMatrix& m, const QVector& v,
                                       Strategy s = Strategy::automatic);

// Batched in_column_space sharing one elimination.
std::vector<std::optional<QVector>> solve_columns(
    const QMatrix& m, std::span<const QVector> rhs,
    Strategy s = Strategy::automatic);

Rational determinant(const QMatrix& m);

}  // namespace llab
