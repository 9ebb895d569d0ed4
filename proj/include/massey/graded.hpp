#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "massey/exactla.hpp"
#include "massey/rational.hpp"

namespace massey {

/// All degrees handled by the library are homological: the differential lowers
/// degree by one.  Cochain data is stored with H^n = H_{-n}.
struct BasisElement {
  std::string name;
  int degree = 0;

  friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

class GradedBasis {
 public:
  GradedBasis() = default;
  /// Throws UsageError on duplicate or empty names.
  explicit GradedBasis(std::vector<BasisElement> elements);

  std::size_t size() const { return elements_.size(); }
  const BasisElement& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<BasisElement>& elements() const { return elements_; }

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;
  int degree(std::size_t i) const { return elements_[i].degree; }

  /// Indices of the elements of degree d, in basis order.
  std::span<const std::size_t> in_degree(int d) const;
  std::size_t dimension(int d) const { return in_degree(d).size(); }
  /// Position of element i inside in_degree(degree(i)).
  std::size_t position(std::size_t i) const { return position_[i]; }
  /// Distinct degrees, ascending.
  std::vector<int> degrees() const;

  friend bool operator==(const GradedBasis& a, const GradedBasis& b) {
    return a.elements_ == b.elements_;
  }

 private:
  std::vector<BasisElement> elements_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<int, std::vector<std::size_t>> by_degree_;
  std::vector<std::size_t> position_;
};

/// Homogeneous vector: sparse coefficients over basis indices of one degree.
/// The zero vector compares equal to every other zero vector.
class HVector {
 public:
  using Terms = std::map<std::size_t, Rational>;

  HVector() = default;
  explicit HVector(int degree) : degree_(degree) {}
  HVector(int degree, Terms terms);

  static HVector unit(int degree, std::size_t index, Rational coeff = 1);

  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(std::size_t index) const;

  void add(std::size_t index, const Rational& coeff);
  void add_scaled(const HVector& other, const Rational& scale);

  HVector& operator+=(const HVector& other) { add_scaled(other, 1); return *this; }
  HVector& operator-=(const HVector& other) { add_scaled(other, -1); return *this; }
  HVector& operator*=(const Rational& s);

  friend HVector operator+(HVector a, const HVector& b) { return a += b; }
  friend HVector operator-(HVector a, const HVector& b) { return a -= b; }
  friend HVector operator-(HVector a) { return a *= Rational(-1); }
  friend HVector operator*(const Rational& s, HVector a) { return a *= s; }

  friend bool operator==(const HVector& a, const HVector& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

 private:
  int degree_ = 0;
  Terms terms_;
};

/// Coordinates of v in the degree block of its basis (length = dimension(degree)).
Vector to_dense(const GradedBasis& basis, const HVector& v);
HVector from_dense(const GradedBasis& basis, int degree, const Vector& coords);
/// Human-readable linear combination, e.g. "2*xz - yz"; zero prints "0".
std::string format(const GradedBasis& basis, const HVector& v);
/// Throws UsageError unless every term references an element of v.degree().
void require_homogeneous(const GradedBasis& basis, const HVector& v);

/// Chain complex on a named basis with a degree −1 differential.
class GradedComplex {
 public:
  GradedComplex() = default;
  /// `differential[i]` is d(e_i).  Throws UsageError if an image is not of
  /// degree(e_i) − 1.  d∘d = 0 is not assumed here; see check_differential.
  GradedComplex(GradedBasis basis, std::vector<HVector> differential);

  const GradedBasis& basis() const { return basis_; }
  const std::vector<HVector>& differential() const { return differential_; }
  const HVector& d(std::size_t i) const { return differential_[i]; }
  HVector apply(const HVector& v) const;

  /// Matrix of d_n : C_n → C_{n−1} (rows = dim C_{n−1}, cols = dim C_n).
  Matrix matrix(int n) const;

  friend bool operator==(const GradedComplex&, const GradedComplex&) = default;

 private:
  GradedBasis basis_;
  std::vector<HVector> differential_;
};

struct DifferentialReport {
  std::vector<std::size_t> failures;  // basis elements e with d(d(e)) ≠ 0
  bool passed() const { return failures.empty(); }
};

DifferentialReport check_differential(const GradedComplex& complex);

struct Homology {
  GradedBasis basis;                    // one element per class, named "[rep]"
  std::vector<HVector> representatives; // cycles in the complex, by class index

  std::map<int, std::size_t> betti() const;
};

/// Betti numbers (reported for every degree carrying basis elements) and
/// rref-canonical representative cycles.  Throws StructuralError if d∘d ≠ 0.
Homology compute_homology(const GradedComplex& complex);

/// Deformation retract (i, p, h) of a complex onto its homology.
class Contraction {
 public:
  Contraction() = default;
  Contraction(GradedComplex complex, Homology homology, std::vector<HVector> section,
              std::vector<HVector> projection, std::vector<HVector> homotopy);

  const GradedComplex& complex() const { return complex_; }
  const Homology& homology() const { return homology_; }

  /// i: homology class → representing cycle.
  HVector include(const HVector& cls) const;
  /// p: chain → homology class coordinates.
  HVector project(const HVector& chain) const;
  /// h: degree +1 homotopy with d h + h d = id − i p.
  HVector homotopy(const HVector& chain) const;

 private:
  GradedComplex complex_;
  Homology homology_;
  std::vector<HVector> section_;     // by homology index
  std::vector<HVector> projection_;  // by complex index
  std::vector<HVector> homotopy_;    // by complex index
};

Contraction build_contraction(const GradedComplex& complex, const Homology& homology);

/// Descriptions of every violated contraction identity; empty means all of
/// p∘i = id, d∘i = 0, p∘d = 0, d h + h d = id − i p, h∘i = 0, p∘h = 0, h∘h = 0 hold.
std::vector<std::string> verify_contraction(const Contraction& c);

/// Some w with d(w) = v, or nullopt when v is not a boundary.
std::optional<HVector> is_boundary(const GradedComplex& complex, const HVector& v);

}  // namespace massey
