#include "massey/exactla.hpp"

#include <string>

#include "massey/errors.hpp"

namespace massey {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_columns(std::span<const Vector> columns, std::size_t rows) {
  Matrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw UsageError("from_columns: ragged column");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

Matrix Matrix::from_rows(std::span<const Vector> rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw UsageError("from_rows: ragged row");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Rational& Matrix::at(std::size_t r, std::size_t c) {
  if (r >= rows_ || c >= cols_) throw UsageError("matrix index out of range");
  return (*this)(r, c);
}

const Rational& Matrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw UsageError("matrix index out of range");
  return (*this)(r, c);
}

Vector Matrix::row(std::size_t r) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vector Matrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Vector Matrix::operator*(const Vector& v) const {
  if (v.size() != cols_) throw UsageError("matrix-vector dimension mismatch");
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      const Rational& a = (*this)(r, c);
      if (!a.is_zero() && !v[c].is_zero()) out[r] += a * v[c];
    }
  }
  return out;
}

Matrix Matrix::operator*(const Matrix& m) const {
  if (m.rows_ != cols_) throw UsageError("matrix-matrix dimension mismatch");
  Matrix out(rows_, m.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(r, k);
      if (a.is_zero()) continue;
      for (std::size_t c = 0; c < m.cols_; ++c) {
        if (!m(k, c).is_zero()) out(r, c) += a * m(k, c);
      }
    }
  }
  return out;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_) {
    if (!x.is_zero()) return false;
  }
  return true;
}

RrefResult rref(const Matrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  Matrix a = m;
  Matrix t = Matrix::identity(rows);
  std::vector<std::size_t> pivots;

  std::size_t lead = 0;
  for (std::size_t c = 0; c < cols && lead < rows; ++c) {
    std::size_t p = lead;
    while (p < rows && a(p, c).is_zero()) ++p;
    if (p == rows) continue;
    if (p != lead) {
      for (std::size_t k = 0; k < cols; ++k) std::swap(a(p, k), a(lead, k));
      for (std::size_t k = 0; k < rows; ++k) std::swap(t(p, k), t(lead, k));
    }
    const Rational inv = Rational(1) / a(lead, c);
    if (!inv.is_one()) {
      for (std::size_t k = 0; k < cols; ++k) a(lead, k) *= inv;
      for (std::size_t k = 0; k < rows; ++k) t(lead, k) *= inv;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == lead || a(r, c).is_zero()) continue;
      const Rational f = a(r, c);
      for (std::size_t k = 0; k < cols; ++k) {
        if (!a(lead, k).is_zero()) a(r, k) -= f * a(lead, k);
      }
      for (std::size_t k = 0; k < rows; ++k) {
        if (!t(lead, k).is_zero()) t(r, k) -= f * t(lead, k);
      }
    }
    pivots.push_back(c);
    ++lead;
  }
  return {std::move(a), std::move(pivots), std::move(t)};
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

std::optional<Vector> solve(const Matrix& m, const Vector& b) {
  if (b.size() != m.rows()) {
    throw UsageError("solve: rhs has dimension " + std::to_string(b.size()) + ", expected " +
                     std::to_string(m.rows()));
  }
  const RrefResult r = rref(m);
  const Vector tb = r.transform * b;
  for (std::size_t row = r.pivots.size(); row < m.rows(); ++row) {
    if (!tb[row].is_zero()) return std::nullopt;
  }
  Vector x(m.cols());
  for (std::size_t row = 0; row < r.pivots.size(); ++row) x[r.pivots[row]] = tb[row];
  return x;
}

std::vector<Vector> kernel_basis(const Matrix& m) {
  const RrefResult r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : r.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols());
    v[f] = 1;
    for (std::size_t row = 0; row < r.pivots.size(); ++row) v[r.pivots[row]] = -r.reduced(row, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Vector> image_basis(const Matrix& m) {
  const RrefResult r = rref(m);
  std::vector<Vector> basis;
  basis.reserve(r.pivots.size());
  for (auto p : r.pivots) basis.push_back(m.column(p));
  return basis;
}

std::optional<Vector> membership(std::span<const Vector> span, const Vector& v, std::size_t dim) {
  if (!span.empty()) dim = span.front().size();
  if (v.size() != dim) throw UsageError("membership: dimension mismatch");
  return solve(Matrix::from_columns(span, dim), v);
}

QuotientData quotient_data(std::span<const Vector> sub, std::size_t ambient_dim) {
  const std::size_t k = sub.size();
  Matrix aug(ambient_dim, k + ambient_dim);
  for (std::size_t c = 0; c < k; ++c) {
    if (sub[c].size() != ambient_dim) throw UsageError("quotient_data: dimension mismatch");
    for (std::size_t r = 0; r < ambient_dim; ++r) aug(r, c) = sub[c][r];
  }
  for (std::size_t r = 0; r < ambient_dim; ++r) aug(r, k + r) = 1;
  const RrefResult rr = rref(aug);

  QuotientData out;
  std::vector<Vector> basis(sub.begin(), sub.end());
  std::size_t sub_pivots = 0;
  for (auto p : rr.pivots) {
    if (p < k) {
      ++sub_pivots;
      continue;
    }
    Vector e(ambient_dim);
    e[p - k] = 1;
    out.complement.push_back(e);
    basis.push_back(std::move(e));
  }
  if (sub_pivots != k) throw UsageError("quotient_data: subspace vectors are dependent");

  // B = [sub | complement] is invertible; projection = B · diag(0,…,0,1,…,1) · B⁻¹.
  const Matrix b = Matrix::from_columns(basis, ambient_dim);
  const Matrix b_inv = rref(b).transform;
  Matrix keep(ambient_dim, ambient_dim);
  for (std::size_t i = k; i < ambient_dim; ++i) keep(i, i) = 1;
  out.projection = b * keep * b_inv;
  return out;
}

std::vector<Vector> canonical_span(std::span<const Vector> vectors, std::size_t dim) {
  const RrefResult r = rref(Matrix::from_rows(vectors, dim));
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < r.pivots.size(); ++i) rows.push_back(r.reduced.row(i));
  return rows;
}

bool is_zero(const Vector& v) {
  for (const auto& x : v) {
    if (!x.is_zero()) return false;
  }
  return true;
}

Vector operator+(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw UsageError("vector dimension mismatch");
  Vector out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

Vector operator-(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw UsageError("vector dimension mismatch");
  Vector out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

Vector operator*(const Rational& s, const Vector& v) {
  Vector out(v);
  for (auto& x : out) x *= s;
  return out;
}

}  // namespace massey
