#include "llab/exact_core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "llab/errors.hpp"

namespace llab {

Rational parse_rational(std::string_view text) {
  auto fail = [&] {
    throw InputError("not an exact rational \"p/q\": '" + std::string(text) + "'");
  };
  std::size_t pos = 0;
  auto digits = [&](bool allow_sign) {
    std::size_t start = pos;
    if (allow_sign && pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    std::size_t first_digit = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == first_digit) fail();
    return std::string(text.substr(start, pos - start));
  };
  std::string num = digits(true);
  std::string den = "1";
  if (pos < text.size()) {
    if (text[pos] != '/') fail();
    ++pos;
    den = digits(false);
  }
  if (pos != text.size()) fail();
  if (!num.empty() && num.front() == '+') num.erase(0, 1);
  Integer d(den);
  if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  Rational q(Integer(num), d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

bool is_zero(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

// ---------------------------------------------------------------------------
// QMatrix

QMatrix::QMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows) {}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace_back(static_cast<std::uint32_t>(i), 1);
  return m;
}

QMatrix QMatrix::from_dense(const std::vector<QVector>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  QMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionError("ragged dense matrix");
    for (std::size_t c = 0; c < cols; ++c)
      if (rows[r][c] != 0) m.data_[r].emplace_back(static_cast<std::uint32_t>(c), rows[r][c]);
  }
  return m;
}

QMatrix QMatrix::from_columns(std::size_t rows, std::span<const QVector> columns) {
  QMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw DimensionError("column length mismatch");
    for (std::size_t r = 0; r < rows; ++r)
      if (columns[c][r] != 0) m.data_[r].emplace_back(static_cast<std::uint32_t>(c), columns[c][r]);
  }
  return m;
}

QMatrix QMatrix::from_sparse_columns(std::size_t rows, std::vector<Row> columns) {
  QMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (auto& [r, v] : columns[c]) {
      if (r >= rows) throw DimensionError("sparse column entry out of range");
      if (v != 0) m.data_[r].emplace_back(static_cast<std::uint32_t>(c), std::move(v));
    }
  }
  // Columns were visited in increasing order, so each row is already sorted;
  // duplicate (r, c) pairs within one column are merged here.
  for (auto& row : m.data_) {
    Row merged;
    merged.reserve(row.size());
    for (auto& e : row) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second += e.second;
      else
        merged.push_back(std::move(e));
    }
    std::erase_if(merged, [](const Entry& e) { return e.second == 0; });
    row = std::move(merged);
  }
  return m;
}

Rational QMatrix::at(std::size_t r, std::size_t c) const {
  const Row& row = data_.at(r);
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, std::size_t col) { return e.first < col; });
  if (it != row.end() && it->first == c) return it->second;
  return 0;
}

void QMatrix::set(std::size_t r, std::size_t c, const Rational& value) {
  if (r >= rows_ || c >= cols_) throw DimensionError("QMatrix::set out of range");
  Row& row = data_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, std::size_t col) { return e.first < col; });
  if (it != row.end() && it->first == c) {
    if (value == 0)
      row.erase(it);
    else
      it->second = value;
  } else if (value != 0) {
    row.emplace(it, static_cast<std::uint32_t>(c), value);
  }
}

void QMatrix::add_to(std::size_t r, std::size_t c, const Rational& value) {
  if (value == 0) return;
  set(r, c, at(r, c) + value);
}

std::size_t QMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& row : data_) n += row.size();
  return n;
}

double QMatrix::density() const {
  if (rows_ == 0 || cols_ == 0) return 0.0;
  return static_cast<double>(nonzeros()) / (static_cast<double>(rows_) * static_cast<double>(cols_));
}

QMatrix QMatrix::transposed() const {
  QMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& [c, v] : data_[r]) t.data_[c].emplace_back(static_cast<std::uint32_t>(r), v);
  return t;
}

QVector QMatrix::column(std::size_t c) const {
  QVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
  return v;
}

std::vector<QVector> QMatrix::to_dense() const {
  std::vector<QVector> out(rows_, QVector(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& [c, v] : data_[r]) out[r][c] = v;
  return out;
}

QVector QMatrix::operator*(const QVector& v) const {
  if (v.size() != cols_) throw DimensionError("matrix-vector size mismatch");
  QVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& [c, x] : data_[r])
      if (v[c] != 0) out[r] += x * v[c];
  return out;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product size mismatch");
  QMatrix out(a.rows_, b.cols_);
  std::vector<Rational> acc(b.cols_);
  std::vector<std::uint32_t> touched;
  std::vector<char> mark(b.cols_, 0);
  for (std::size_t r = 0; r < a.rows_; ++r) {
    touched.clear();
    for (const auto& [k, x] : a.data_[r]) {
      for (const auto& [c, y] : b.data_[k]) {
        if (!mark[c]) {
          mark[c] = 1;
          touched.push_back(c);
          acc[c] = 0;
        }
        acc[c] += x * y;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto c : touched) {
      mark[c] = 0;
      if (acc[c] != 0) out.data_[r].emplace_back(c, acc[c]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Elimination

namespace {

using IntEntry = std::pair<std::uint32_t, Integer>;
using IntRow = std::vector<IntEntry>;

struct Echelon {
  std::size_t cols = 0;
  std::vector<IntRow> pivot_rows;  // ordered by pivot column
  std::vector<std::uint32_t> pivots;
  std::vector<IntRow> residual;    // coefficient part vanished, rhs part not
};

// Scales a rational row to a primitive integer row. Returns the factor f with
// integer_row = f * rational_row.
IntRow to_primitive(const std::vector<std::pair<std::uint32_t, Rational>>& entries,
                    Rational* factor = nullptr) {
  Integer l = 1;
  for (const auto& e : entries) l = lcm(l, Integer(e.second.get_den()));
  IntRow row;
  row.reserve(entries.size());
  Integer g = 0;
  for (const auto& [c, q] : entries) {
    Integer v = q.get_num() * (l / q.get_den());
    g = gcd(g, v);
    row.emplace_back(c, std::move(v));
  }
  if (g > 1)
    for (auto& e : row) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
  if (factor) {
    *factor = Rational(l, g == 0 ? Integer(1) : g);
    factor->canonicalize();
  }
  return row;
}

void make_primitive(IntRow& row) {
  Integer g = 0;
  for (const auto& e : row) {
    g = gcd(g, e.second);
    if (g == 1) return;
  }
  if (g > 1)
    for (auto& e : row) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
}

// row <- a*row - b*pivot where a, b cancel the leading entry of row.
void eliminate(IntRow& row, const IntRow& pivot, IntRow& scratch) {
  Integer g = gcd(pivot.front().second, row.front().second);
  Integer a = pivot.front().second / g;
  Integer b = row.front().second / g;
  scratch.clear();
  scratch.reserve(row.size() + pivot.size());
  auto i = row.begin(), ie = row.end();
  auto j = pivot.begin(), je = pivot.end();
  Integer t;
  while (i != ie || j != je) {
    if (j == je || (i != ie && i->first < j->first)) {
      scratch.emplace_back(i->first, a * i->second);
      ++i;
    } else if (i == ie || j->first < i->first) {
      scratch.emplace_back(j->first, -b * j->second);
      ++j;
    } else {
      t = a * i->second - b * j->second;
      if (t != 0) scratch.emplace_back(i->first, t);
      ++i;
      ++j;
    }
  }
  std::swap(row, scratch);
  make_primitive(row);
}

std::vector<IntRow> augmented_rows(const QMatrix& m, std::span<const QVector> rhs) {
  for (const auto& v : rhs)
    if (v.size() != m.rows()) throw DimensionError("right-hand side length does not match matrix rows");
  std::vector<IntRow> rows;
  rows.reserve(m.rows());
  const auto cols = static_cast<std::uint32_t>(m.cols());
  std::vector<std::pair<std::uint32_t, Rational>> buf;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    buf.assign(m.row(r).begin(), m.row(r).end());
    for (std::size_t j = 0; j < rhs.size(); ++j)
      if (rhs[j][r] != 0) buf.emplace_back(cols + static_cast<std::uint32_t>(j), rhs[j][r]);
    rows.push_back(to_primitive(buf));
  }
  return rows;
}

Echelon sparse_echelon(std::vector<IntRow> rows, std::size_t cols) {
  Echelon e;
  e.cols = cols;
  std::vector<int> pivot_of(cols, -1);
  std::vector<IntRow> pivot_rows;
  IntRow scratch;
  for (auto& row : rows) {
    while (!row.empty() && row.front().first < cols) {
      int p = pivot_of[row.front().first];
      if (p < 0) break;
      eliminate(row, pivot_rows[static_cast<std::size_t>(p)], scratch);
    }
    if (row.empty()) continue;
    if (row.front().first >= cols) {
      e.residual.push_back(std::move(row));
      continue;
    }
    pivot_of[row.front().first] = static_cast<int>(pivot_rows.size());
    pivot_rows.push_back(std::move(row));
  }
  std::vector<std::size_t> order(pivot_rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return pivot_rows[x].front().first < pivot_rows[y].front().first;
  });
  for (auto i : order) {
    e.pivots.push_back(pivot_rows[i].front().first);
    e.pivot_rows.push_back(std::move(pivot_rows[i]));
  }
  return e;
}

// Fraction-free Bareiss elimination on a dense copy. `swaps` receives the
// number of row interchanges (needed for determinants).
Echelon dense_echelon(const std::vector<IntRow>& rows, std::size_t cols, std::size_t width,
                      std::size_t* swaps = nullptr) {
  const std::size_t R = rows.size();
  std::vector<std::vector<Integer>> a(R, std::vector<Integer>(width));
  for (std::size_t r = 0; r < R; ++r)
    for (const auto& [c, v] : rows[r]) a[r][c] = v;
  Integer prev = 1;
  std::size_t r = 0, nswaps = 0;
  Echelon e;
  e.cols = cols;
  Integer t;
  for (std::size_t c = 0; c < cols && r < R; ++c) {
    std::size_t p = r;
    while (p < R && a[p][c] == 0) ++p;
    if (p == R) continue;
    if (p != r) {
      std::swap(a[p], a[r]);
      ++nswaps;
    }
    const Integer& piv = a[r][c];
    for (std::size_t i = r + 1; i < R; ++i) {
      const Integer lead = a[i][c];
      for (std::size_t j = c + 1; j < width; ++j) {
        t = piv * a[i][j];
        if (lead != 0) t -= lead * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    e.pivots.push_back(static_cast<std::uint32_t>(c));
    ++r;
  }
  auto to_row = [&](std::size_t i) {
    IntRow row;
    for (std::size_t j = 0; j < width; ++j)
      if (a[i][j] != 0) row.emplace_back(static_cast<std::uint32_t>(j), a[i][j]);
    return row;
  };
  for (std::size_t i = 0; i < r; ++i) e.pivot_rows.push_back(to_row(i));
  for (std::size_t i = r; i < R; ++i) {
    IntRow row = to_row(i);
    if (!row.empty()) e.residual.push_back(std::move(row));
  }
  if (swaps) *swaps = nswaps;
  return e;
}

bool use_dense(const QMatrix& m, Strategy s) {
  if (s == Strategy::dense) return true;
  if (s == Strategy::sparse) return false;
  return m.density() > 0.5;
}

Echelon echelon(const QMatrix& m, std::span<const QVector> rhs, Strategy s) {
  auto rows = augmented_rows(m, rhs);
  if (use_dense(m, s)) return dense_echelon(rows, m.cols(), m.cols() + rhs.size());
  return sparse_echelon(std::move(rows), m.cols());
}

// Solves the echelon system with the given free column set to 1 (or none),
// all other free columns 0, against right-hand side `rhs_index` (or zero).
QVector back_substitute(const Echelon& e, std::optional<std::uint32_t> free_col,
                        std::optional<std::size_t> rhs_index) {
  QVector x(e.cols);
  if (free_col) x[*free_col] = 1;
  const std::size_t rhs_col = rhs_index ? e.cols + *rhs_index : static_cast<std::size_t>(-1);
  Rational s;
  for (std::size_t k = e.pivot_rows.size(); k-- > 0;) {
    const IntRow& row = e.pivot_rows[k];
    s = 0;
    for (auto it = row.begin() + 1; it != row.end(); ++it) {
      if (it->first < e.cols) {
        if (x[it->first] != 0) s -= it->second * x[it->first];
      } else if (it->first == rhs_col) {
        s += it->second;
      }
    }
    if (s != 0) x[e.pivots[k]] = s / row.front().second;
  }
  return x;
}

}  // namespace

std::size_t rank(const QMatrix& m, Strategy s) { return echelon(m, {}, s).pivots.size(); }

std::vector<std::size_t> pivot_columns(const QMatrix& m, Strategy s) {
  auto e = echelon(m, {}, s);
  return {e.pivots.begin(), e.pivots.end()};
}

std::vector<QVector> nullspace_basis(const QMatrix& m, Strategy s) {
  auto e = echelon(m, {}, s);
  std::vector<char> is_pivot(m.cols(), 0);
  for (auto p : e.pivots) is_pivot[p] = 1;
  std::vector<QVector> basis;
  for (std::uint32_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) basis.push_back(back_substitute(e, c, std::nullopt));
  return basis;
}

std::vector<std::optional<QVector>> solve_columns(const QMatrix& m, std::span<const QVector> rhs,
                                                  Strategy s) {
  auto e = echelon(m, rhs, s);
  std::vector<char> inconsistent(rhs.size(), 0);
  for (const auto& row : e.residual)
    for (const auto& [c, v] : row) inconsistent[c - e.cols] = 1;
  std::vector<std::optional<QVector>> out;
  out.reserve(rhs.size());
  for (std::size_t j = 0; j < rhs.size(); ++j) {
    if (inconsistent[j])
      out.emplace_back(std::nullopt);
    else
      out.emplace_back(back_substitute(e, std::nullopt, j));
  }
  return out;
}

std::optional<QVector> in_column_space(const QMatrix& m, const QVector& v, Strategy s) {
  if (v.size() != m.rows()) throw DimensionError("in_column_space: vector length does not match matrix rows");
  std::vector<QVector> rhs{v};
  return std::move(solve_columns(m, rhs, s).front());
}

Rational determinant(const QMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  std::vector<IntRow> rows;
  Rational scale = 1;
  for (std::size_t r = 0; r < n; ++r) {
    if (m.row(r).empty()) return 0;
    Rational f;
    rows.push_back(to_primitive({m.row(r).begin(), m.row(r).end()}, &f));
    scale *= f;
  }
  std::size_t swaps = 0;
  auto e = dense_echelon(rows, n, n, &swaps);
  if (e.pivots.size() < n) return 0;
  Rational det(e.pivot_rows.back().front().second);
  if (swaps % 2) det = -det;
  return det / scale;
}

}  // namespace llab
