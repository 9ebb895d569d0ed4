#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "massey/dgalg.hpp"
#include "massey/graded.hpp"
#include "massey/operads.hpp"

namespace massey {

/// Coordinates over the homology basis of a Contraction (indices into
/// Contraction::homology().basis), homogeneous of one degree.
using HomologyClass = HVector;

/// Data of one Massey product ⟨x₁, …, x_r⟩_Γ.
struct MasseyProblem {
  Relation relation;
  std::vector<HomologyClass> inputs;
};

/// Representing cycles y_i and one bounding chain ρ per relation term.
struct Choices {
  std::vector<HVector> cocycles;
  std::vector<HVector> bounding_chains;
};

enum class ChainMode { canonical, random };

struct TermVanishing {
  std::size_t term = 0;
  HVector composite;           // z = μ⁽²⁾(y_{σ⁻¹(l)}, …) in the complex
  HomologyClass homology_class;  // p(z)
  bool is_cycle = true;
  bool vanishes() const { return is_cycle && homology_class.is_zero(); }
};

struct VanishingReport {
  std::vector<TermVanishing> terms;
  bool defined() const;
};

/// A Massey product as a subset of homology: representative + span(indeterminacy).
struct Coset {
  int degree = 0;
  HomologyClass representative;
  std::vector<HomologyClass> indeterminacy;  // rref-canonical basis
};

struct AffineIntersection {
  bool empty = true;
  HomologyClass point;                    // valid when !empty
  std::vector<HomologyClass> directions;  // basis of span(indeterminacy) ∩ span(subspace)
  bool is_point() const { return !empty && directions.empty(); }
};

/// Massey products in the homology of a DG-algebra.  Canonical choices come
/// from the contraction: y_i = i(x_i) and ρ = h(z), which is a valid bounding
/// chain because d h z = z − i p z − h d z = z whenever p z = 0 = d z.
class MasseyEngine {
 public:
  /// Computes homology and the contraction.  Throws StructuralError if d∘d ≠ 0.
  explicit MasseyEngine(DgAlgebra algebra);

  const DgAlgebra& algebra() const { return algebra_; }
  const Contraction& contraction() const { return contraction_; }
  const GradedBasis& homology_basis() const { return contraction_.homology().basis; }

  /// p(cycle).  Throws UsageError if d(cycle) ≠ 0.
  HomologyClass class_of(const HVector& cycle) const;

  /// p(μ(i(x₁), …, i(x_r))): the operation induced on homology.
  HomologyClass induced(std::string_view generator, std::span<const HomologyClass> classes) const;

  /// |Γ| + Σ|x_i| + 1.
  int massey_degree(const MasseyProblem& problem) const;

  Choices canonical_choices(const MasseyProblem& problem) const;
  /// y_i = i(x_i) + d(w_i) and ρ = h(z) + ζ for random w_i and random cycles ζ,
  /// coefficients drawn from {−3, …, 3}.  Deterministic in the seed.
  Choices random_choices(const MasseyProblem& problem, std::uint64_t seed) const;
  /// Throws UsageError unless p(y_i) = x_i, d(y_i) = 0 and d(ρ_t) = z_t exactly.
  void validate_choices(const MasseyProblem& problem, const Choices& choices) const;

  VanishingReport check_vanishing(const MasseyProblem& problem) const;
  VanishingReport check_vanishing(const MasseyProblem& problem, std::span<const HVector> cocycles) const;

  /// A chain ρ with d(ρ) = z_term for the given representing cycles.  Throws
  /// UndefinedMasseyError if z_term is not null-homologous.
  HVector bounding_chain(const MasseyProblem& problem, std::size_t term, std::span<const HVector> cocycles,
                         ChainMode mode = ChainMode::canonical, std::uint64_t seed = 0) const;

  /// Σ_terms coeff · (−1)^γ · μ⁽¹⁾(…, ρ, …).  Throws InvariantViolation if the
  /// result is not an exact cycle.
  HVector representative(const MasseyProblem& problem, const Choices& choices) const;

  std::vector<HomologyClass> indeterminacy(const MasseyProblem& problem) const;

  /// Throws UndefinedMasseyError if some inner composite survives in homology.
  Coset massey_product(const MasseyProblem& problem) const;
  Coset massey_product(const MasseyProblem& problem, const Choices& choices) const;

  /// The class of the representative built from canonical choices.
  HomologyClass transfer_value(const MasseyProblem& problem) const;

 private:
  void validate_problem(const MasseyProblem& problem) const;

  DgAlgebra algebra_;
  Contraction contraction_;
};

/// Canonical (rref) basis of the span of classes of one degree.
std::vector<HomologyClass> canonical_classes(const GradedBasis& homology_basis, int degree,
                                             std::span<const HomologyClass> classes);

/// Throws UsageError on a degree mismatch.
bool coset_contains(const GradedBasis& homology_basis, const Coset& coset, const HomologyClass& cls);
bool coset_equal(const GradedBasis& homology_basis, const Coset& a, const Coset& b);
AffineIntersection coset_intersect_subspace(const GradedBasis& homology_basis, const Coset& coset,
                                            std::span<const HomologyClass> subspace);

}  // namespace massey
