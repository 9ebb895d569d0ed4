#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "massey/dgalg.hpp"
#include "massey/graded.hpp"

namespace massey {

/// Structure constants [e_i, e_j] = Σ_k c^k_{ij} e_k of a finite-dimensional Lie algebra.
struct LieData {
  std::vector<std::string> names;
  std::vector<Rational> constants;  // c^k_{ij} at (i·n + j)·n + k

  static LieData zero(std::vector<std::string> names);

  std::size_t dimension() const { return names.size(); }
  const Rational& c(std::size_t i, std::size_t j, std::size_t k) const;
  Rational& c(std::size_t i, std::size_t j, std::size_t k);
  std::size_t index_of(std::string_view name) const;

  /// Sets [a, b] = value and [b, a] = −value.
  void set_bracket(std::string_view a, std::string_view b,
                   const std::vector<std::pair<std::string, Rational>>& value);

  friend bool operator==(const LieData&, const LieData&) = default;
};

/// Description of the first antisymmetry or Jacobi failure, if any.
std::optional<std::string> lie_failure(const LieData& data);

struct LieBialgebraData {
  LieData lie;           // induces the CE differential
  LieData dual_bracket;  // Lie bracket on the dual space, same names

  friend bool operator==(const LieBialgebraData&, const LieBialgebraData&) = default;
};

/// Square-free monomials in odd generators, ordered by length then
/// lexicographically by generator position.  The empty monomial is "1".
class ExteriorBasis {
 public:
  ExteriorBasis() = default;
  explicit ExteriorBasis(std::vector<std::string> generators,
                         std::size_t max_length = std::numeric_limits<std::size_t>::max());

  const GradedBasis& basis() const { return basis_; }
  const std::vector<std::string>& generators() const { return generators_; }
  std::uint32_t mask(std::size_t index) const { return masks_[index]; }
  std::optional<std::size_t> index_of_mask(std::uint32_t mask) const;

  /// e_a · e_b as a signed basis element; nullopt when the product is zero
  /// (shared generator or beyond the truncation).
  std::optional<std::pair<int, std::size_t>> product(std::size_t a, std::size_t b) const;
  HVector multiply(const HVector& a, const HVector& b) const;

 private:
  std::vector<std::string> generators_;
  std::vector<std::uint32_t> masks_;
  std::vector<std::size_t> by_mask_;  // mask → index, or npos
  GradedBasis basis_;
};

/// An operator lowering cohomological degree by 2, stored by basis image.
struct DegreeMinus2Operator {
  std::vector<HVector> images;  // one per basis element; zero vectors allowed

  HVector apply(const HVector& v) const;
};

/// Basis elements e with d(i(e)) ≠ i(d(e)).
std::vector<std::size_t> chain_map_failures(const GradedComplex& complex, const DegreeMinus2Operator& op);

/// The CE complex alone, without the Jacobi check; d∘d = 0 exactly when the
/// constants satisfy Jacobi.
GradedComplex chevalley_eilenberg_complex(const LieData& data,
                                          std::size_t max_length = std::numeric_limits<std::size_t>::max());

/// Λg* with the CE differential d(ξ^k) = Σ_{i<j} c^k_{ij} ξ^i ξ^j, over the
/// builtin "com" presentation.  With `max_length` the algebra is the quotient by
/// monomials longer than that, which is again a DG-commutative algebra.
/// Throws ConstructionError if `data` is not a Lie algebra.
DgAlgebra chevalley_eilenberg(const LieData& data,
                              std::size_t max_length = std::numeric_limits<std::size_t>::max());

/// The Gerstenhaber algebra on Λg* whose bracket extends the dual bracket.
/// Throws ConstructionError when either side fails Jacobi or the bracket is
/// not a derivation of d (the pair is not a Lie bialgebra).
DgAlgebra gerstenhaber_from_bialgebra(const LieBialgebraData& data);

struct CochainExpectation {
  std::array<std::string, 3> inputs;
  std::vector<std::pair<std::string, Rational>> value;
};

/// m3 on the representing cycles of three classes agrees in homology with m2
/// on the representing cycles of two others.
struct HomologyExpectation {
  std::array<std::string, 3> m3_inputs;  // cycle names in the complex
  std::array<std::string, 2> m2_inputs;
};

struct Hypercom3Gate {
  std::vector<Tuple> relation_scope;  // tuples on which relation "hypercom" must vanish
  std::vector<CochainExpectation> values;
  std::vector<HomologyExpectation> products;
};

/// m2 = the commutative product of `ce` and m3 the third Koszul deviation of
/// `i` (Δ = 0), or `m3_override` when given.  Throws ConstructionError naming
/// the first failing gate identity: symmetry, derivation, relation scope,
/// cochain values, homology products.
DgAlgebra bv_trivialized_hypercom3(const DgAlgebra& ce, const DegreeMinus2Operator& i, const Hypercom3Gate& gate,
                                   const std::optional<MultilinearOp>& m3_override = std::nullopt);

/// The third Koszul deviation K3(a, b, c) of an even operator with respect to
/// the product of `ce`, on basis elements.
HVector koszul_deviation3(const DgAlgebra& ce, const DegreeMinus2Operator& i, std::size_t a, std::size_t b,
                          std::size_t c);

// Canned data.
LieData heisenberg_lie();
LieBialgebraData heisenberg_bialgebra();
LieData k2_plus_heisenberg_lie();
DegreeMinus2Operator heisenberg_i_operator(const GradedBasis& k2h_basis);
Hypercom3Gate heisenberg_hypercom_gate(const GradedBasis& k2h_basis);

DgAlgebra heisenberg_ce();
DgAlgebra heisenberg_gerstenhaber();
DgAlgebra heisenberg_hypercom();

/// The cycle names used in the relation scope of heisenberg_hypercom_gate.
std::vector<std::string> heisenberg_hypercom_scope_names();

}  // namespace massey
