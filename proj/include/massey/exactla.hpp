#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "massey/rational.hpp"

namespace massey {

using Vector = std::vector<Rational>;

/// Dense row-major rational matrix.  0×n and n×0 shapes are legal.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n);
  /// Columns are the given vectors; `rows` is needed when `columns` is empty.
  static Matrix from_columns(std::span<const Vector> columns, std::size_t rows);
  static Matrix from_rows(std::span<const Vector> rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Rational& at(std::size_t r, std::size_t c);
  const Rational& at(std::size_t r, std::size_t c) const;

  Vector row(std::size_t r) const;
  Vector column(std::size_t c) const;

  Vector operator*(const Vector& v) const;
  Matrix operator*(const Matrix& m) const;

  bool is_zero() const;
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

struct RrefResult {
  Matrix reduced;                    // R
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row of R
  Matrix transform;                  // invertible T with T·M = R
};

RrefResult rref(const Matrix& m);
std::size_t rank(const Matrix& m);

/// One particular solution of M·x = b (free variables set to zero), or nullopt
/// when b is not in the image.  Throws UsageError if dim(b) ≠ rows(M).
std::optional<Vector> solve(const Matrix& m, const Vector& b);

std::vector<Vector> kernel_basis(const Matrix& m);
/// Pivot columns of M; a basis of its column space.
std::vector<Vector> image_basis(const Matrix& m);

/// Coordinates c with Σ c_j span_j = v, or nullopt.  `dim` is only consulted
/// when `span` is empty.
std::optional<Vector> membership(std::span<const Vector> span, const Vector& v, std::size_t dim);

struct QuotientData {
  std::vector<Vector> complement;  // standard basis vectors completing `sub`
  Matrix projection;               // kills sub, identity on the complement
};

QuotientData quotient_data(std::span<const Vector> sub, std::size_t ambient_dim);

/// Nonzero rows of the RREF of the stacked vectors: a canonical basis of their span.
std::vector<Vector> canonical_span(std::span<const Vector> vectors, std::size_t dim);

bool is_zero(const Vector& v);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(const Rational& s, const Vector& v);

}  // namespace massey
