#pragma once

#include <qpsurf/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpsurf {

// Which end of a row the echelon form pivots on. Rightmost is the
// mirror image of leftmost: reverse the columns, reduce, reverse back.
enum class PivotRule { leftmost, rightmost };

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return q == 0; });
  }

  bool is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o, "+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o, "-");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const Rational& s) {
    for (auto& q : data_) q *= s;
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const Rational& s) { return a *= s; }
  friend Matrix operator*(const Rational& s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= Rational(-1); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw std::invalid_argument("matrix product shape mismatch: " + a.shape() + " * " + b.shape());
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& x = a(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (b(k, j) != 0) c(i, j) += x * b(k, j);
      }
    return c;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix select_rows(const std::vector<std::size_t>& idx) const {
    Matrix m(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(idx[i], j);
    return m;
  }

  Matrix select_cols(const std::vector<std::size_t>& idx) const {
    Matrix m(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
    return m;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("matrix block out of range");
    Matrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& m) {
    if (r0 + m.rows_ > rows_ || c0 + m.cols_ > cols_) throw std::out_of_range("matrix block out of range");
    for (std::size_t i = 0; i < m.rows_; ++i)
      for (std::size_t j = 0; j < m.cols_; ++j) (*this)(r0 + i, c0 + j) = m(i, j);
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void check_same_shape(const Matrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument(std::string("matrix shape mismatch in ") + op + ": " + shape() +
                                  " vs " + o.shape());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

inline Matrix hstack(const std::vector<Matrix>& parts, std::size_t rows) {
  std::size_t cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw std::invalid_argument("hstack row mismatch");
    cols += p.cols();
  }
  Matrix m(rows, cols);
  std::size_t c = 0;
  for (const auto& p : parts) {
    m.set_block(0, c, p);
    c += p.cols();
  }
  return m;
}

inline Matrix vstack(const std::vector<Matrix>& parts, std::size_t cols) {
  std::size_t rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != cols) throw std::invalid_argument("vstack column mismatch");
    rows += p.rows();
  }
  Matrix m(rows, cols);
  std::size_t r = 0;
  for (const auto& p : parts) {
    m.set_block(r, 0, p);
    r += p.rows();
  }
  return m;
}

inline Matrix block_diagonal(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

struct Echelon {
  Matrix reduced;                    // reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;   // pivot column of each row
};

namespace detail {

inline Matrix reverse_cols(const Matrix& m) {
  std::vector<std::size_t> idx(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) idx[j] = m.cols() - 1 - j;
  return m.select_cols(idx);
}

inline Matrix reverse_rows(const Matrix& m) {
  std::vector<std::size_t> idx(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) idx[i] = m.rows() - 1 - i;
  return m.select_rows(idx);
}

inline Echelon rref_leftmost(Matrix m) {
  Echelon e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, col) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
    Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (m(row, j) != 0) m(i, j) -= f * m(row, j);
    }
    e.pivots.push_back(col);
    ++row;
  }
  e.reduced = m.block(0, 0, row, m.cols());
  return e;
}

}  // namespace detail

inline Echelon rref(const Matrix& m, PivotRule rule = PivotRule::leftmost) {
  if (rule == PivotRule::leftmost) return detail::rref_leftmost(m);
  Echelon e = detail::rref_leftmost(detail::reverse_cols(m));
  e.reduced = detail::reverse_cols(e.reduced);
  for (auto& p : e.pivots) p = m.cols() - 1 - p;
  return e;
}

inline std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

// Columns form a basis of {x : m x = 0}; one basis vector per free column.
inline Matrix kernel_basis(const Matrix& m, PivotRule rule = PivotRule::leftmost) {
  Echelon e = rref(m, rule);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  if (rule == PivotRule::rightmost) std::reverse(free_cols.begin(), free_cols.end());
  Matrix k(m.cols(), free_cols.size());
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    k(free_cols[f], f) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) k(e.pivots[r], f) = -e.reduced(r, free_cols[f]);
  }
  return k;
}

// Basis of the column space made of the pivot columns of m itself.
inline Matrix column_space_basis(const Matrix& m, PivotRule rule = PivotRule::leftmost) {
  Echelon e = rref(m, rule);
  std::vector<std::size_t> cols = e.pivots;
  std::sort(cols.begin(), cols.end());
  if (rule == PivotRule::rightmost) std::reverse(cols.begin(), cols.end());
  return m.select_cols(cols);
}

// Some X with a X = b, if one exists.
inline std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: row mismatch");
  Matrix aug = hstack({a, b}, a.rows());
  Echelon e = rref(aug);
  Matrix x(a.cols(), b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] >= a.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[r], j) = e.reduced(r, a.cols() + j);
  }
  return x;
}

inline std::optional<Matrix> inverse(const Matrix& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  if (rank(a) != a.rows()) return std::nullopt;
  return solve(a, Matrix::identity(a.rows()));
}

inline bool is_invertible(const Matrix& a) { return a.rows() == a.cols() && rank(a) == a.rows(); }

// Quotient of K^n by the span of the columns of `span`, presented by
// coordinates: the complement is spanned by the standard vectors at the
// non-pivot coordinates of the echelon form of span^T.
struct QuotientMaps {
  Matrix projection;  // (n - r) x n, kills span
  Matrix lift;        // n x (n - r), projection * lift = 1
};

inline QuotientMaps quotient_by(const Matrix& span, std::size_t n, PivotRule rule = PivotRule::leftmost) {
  if (span.rows() != n) throw std::invalid_argument("quotient_by: ambient dimension mismatch");
  Echelon e = rref(span.transpose(), rule);
  std::vector<bool> is_pivot(n, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_pivot[i]) keep.push_back(i);
  if (rule == PivotRule::rightmost) std::reverse(keep.begin(), keep.end());
  // v - sum_p v_p row_p vanishes at pivots; read off the kept coordinates.
  Matrix reducer = Matrix::identity(n);
  for (std::size_t r = 0; r < e.pivots.size(); ++r)
    for (std::size_t j = 0; j < n; ++j) reducer(j, e.pivots[r]) -= e.reduced(r, j);
  QuotientMaps q;
  q.projection = reducer.select_rows(keep);
  q.lift = Matrix(n, keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) q.lift(keep[k], k) = 1;
  return q;
}

// Extends the independent columns of `basis` to a basis of K^n with
// standard vectors taken greedily in pivot-rule order.
inline Matrix extend_to_basis(const Matrix& basis, std::size_t n, PivotRule rule = PivotRule::leftmost) {
  Matrix cur = basis;
  std::size_t have = rank(basis);
  for (std::size_t s = 0; s < n && have < n; ++s) {
    std::size_t i = rule == PivotRule::leftmost ? s : n - 1 - s;
    Matrix e(n, 1);
    e(i, 0) = 1;
    Matrix trial = hstack({cur, e}, n);
    std::size_t rk = rank(trial);
    if (rk > have) {
      cur = std::move(trial);
      have = rk;
    }
  }
  return cur;
}

inline std::size_t intersection_dim(const Matrix& u, const Matrix& w) {
  return rank(u) + rank(w) - rank(hstack({u, w}, u.rows()));
}

inline std::string to_string(const Matrix& m) {
  if (m.empty()) return "[]";
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

// Parses "[[a,b],[c,d]]". "[]" yields an empty matrix of the expected
// shape when one is given (rows or cols zero).
inline Matrix parse_matrix(const std::string& text, std::size_t expect_rows, std::size_t expect_cols) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s == "[]") {
    if (expect_rows != 0 && expect_cols != 0)
      throw std::invalid_argument("empty matrix given where " + std::to_string(expect_rows) + "x" +
                                  std::to_string(expect_cols) + " expected");
    return Matrix(expect_rows, expect_cols);
  }
  if (s.size() < 4 || s.front() != '[' || s.back() != ']')
    throw std::invalid_argument("malformed matrix: " + text);
  std::vector<std::vector<Rational>> rows;
  std::size_t pos = 1;
  while (pos < s.size() - 1) {
    if (s[pos] == ',') {
      ++pos;
      continue;
    }
    if (s[pos] != '[') throw std::invalid_argument("malformed matrix: " + text);
    std::size_t close = s.find(']', pos);
    if (close == std::string::npos) throw std::invalid_argument("malformed matrix: " + text);
    std::vector<Rational> row;
    std::string body = s.substr(pos + 1, close - pos - 1);
    std::size_t b = 0;
    while (b <= body.size()) {
      std::size_t comma = body.find(',', b);
      if (comma == std::string::npos) comma = body.size();
      row.push_back(parse_rational(body.substr(b, comma - b)));
      b = comma + 1;
    }
    rows.push_back(std::move(row));
    pos = close + 1;
  }
  if (rows.size() != expect_rows) throw std::invalid_argument("matrix has wrong number of rows: " + text);
  Matrix m(expect_rows, expect_cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != expect_cols) throw std::invalid_argument("matrix has wrong number of columns: " + text);
    for (std::size_t j = 0; j < expect_cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace qpsurf
