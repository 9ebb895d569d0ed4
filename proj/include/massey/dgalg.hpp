#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "massey/graded.hpp"
#include "massey/operads.hpp"

namespace massey {

/// Ordered tuple of basis indices.
using Tuple = std::vector<std::size_t>;

struct TupleHash {
  std::size_t operator()(const Tuple& t) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto v : t) h = (h ^ v) * 0x100000001b3ull;
    return h;
  }
};

/// Structure operation stored as a sparse table on basis tuples.
///
/// With `orbit_compressed` set the table holds one entry per orbit (inputs
/// sorted by basis index) and other orderings are reconstructed through the
/// generator's equivariance rule.  Otherwise absent tuples evaluate to zero.
class MultilinearOp {
 public:
  using Table = std::unordered_map<Tuple, HVector, TupleHash>;

  MultilinearOp() = default;
  explicit MultilinearOp(Generator generator, bool orbit_compressed = false);

  const Generator& generator() const { return generator_; }
  bool orbit_compressed() const { return orbit_compressed_; }
  const Table& table() const { return table_; }

  /// Stores (or erases, for a zero value) the value on a basis tuple.
  void set(Tuple inputs, HVector value);
  HVector lookup(const GradedBasis& basis, std::span<const std::size_t> inputs) const;
  /// Nonzero entries sorted by tuple, for deterministic output.
  std::vector<std::pair<Tuple, HVector>> sorted_entries() const;

  friend bool operator==(const MultilinearOp& a, const MultilinearOp& b) {
    return a.generator_ == b.generator_ && a.orbit_compressed_ == b.orbit_compressed_ &&
           a.table_ == b.table_;
  }

 private:
  Generator generator_;
  bool orbit_compressed_ = false;
  Table table_;
};

/// A chain complex carrying one structure operation per generator of a presentation.
class DgAlgebra {
 public:
  DgAlgebra() = default;
  /// Throws UsageError unless ops match the generators one-to-one and every
  /// stored value has degree |μ| + Σ input degrees.
  DgAlgebra(GradedComplex complex, Presentation presentation, std::vector<MultilinearOp> ops);

  const GradedComplex& complex() const { return complex_; }
  const GradedBasis& basis() const { return complex_.basis(); }
  const Presentation& presentation() const { return presentation_; }
  const std::vector<MultilinearOp>& ops() const { return ops_; }
  const MultilinearOp& op(std::string_view generator) const;

  friend bool operator==(const DgAlgebra&, const DgAlgebra&) = default;

 private:
  GradedComplex complex_;
  Presentation presentation_;
  std::vector<MultilinearOp> ops_;
};

/// Multilinear extension of the table.  Output degree = |gen| + Σ arg degrees.
HVector evaluate(const DgAlgebra& alg, std::string_view generator, std::span<const HVector> args);
HVector evaluate(const DgAlgebra& alg, const MultilinearOp& op, std::span<const HVector> args);

/// One relation summand applied to args y_1…y_r.
///
/// With a substitute payload ρ this is coefficient · (−1)^γ ·
/// outer(y_{σ⁻¹(1)}, …, ρ, …, y_{σ⁻¹(r)}), ρ in slot l.  Without one, the inner
/// operation is evaluated in place and the composite carries its evaluation
/// sign α + |μ⁽²⁾|·Σ_{m<l}|y_{σ⁻¹(m)}| (see composite_sign); summing these over a
/// relation gives zero in any algebra satisfying it.
HVector evaluate_term(const DgAlgebra& alg, const RelationTerm& term, std::span<const HVector> args,
                      const HVector* substitute = nullptr);

/// inner(y_{σ⁻¹(l)}, …, y_{σ⁻¹(l+r₂−1)}), unsigned.
HVector inner_composite(const DgAlgebra& alg, const RelationTerm& term, std::span<const HVector> args);

struct TupleFailure {
  Tuple tuple;
  HVector residual;
  std::string detail;

  friend bool operator==(const TupleFailure&, const TupleFailure&) = default;
};

struct ValidationReport {
  static constexpr std::size_t kMaxRecorded = 32;

  std::string check;    // "differential", "derivation", "symmetry", "relation"
  std::string subject;  // generator or relation name
  std::size_t checked = 0;
  std::size_t failure_count = 0;
  std::vector<TupleFailure> failures = {};  // the first kMaxRecorded, in tuple order

  bool passed() const { return failure_count == 0; }
  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

enum class Execution { serial, parallel };

/// d(μ(e₁,…,e_r)) = Σ_s (−1)^β μ(e₁,…,d e_s,…,e_r) on every basis tuple.
ValidationReport check_derivation(const DgAlgebra& alg, std::string_view generator,
                                  Execution exec = Execution::parallel);

/// Σ_terms of the signed composites vanishes on every tuple in scope; the
/// scope is all basis r-tuples when `scope` is empty.
ValidationReport check_relation(const DgAlgebra& alg, const Relation& relation,
                                std::optional<std::span<const Tuple>> scope = std::nullopt,
                                Execution exec = Execution::parallel);

/// μ(e_{σ⁻¹(1)},…) = ε(σ)(−1)^α μ(e₁,…) for every tuple and permutation, ε the
/// sign character for antisymmetric generators.  Passes trivially for
/// Symmetry::none.
ValidationReport check_symmetry(const DgAlgebra& alg, std::string_view generator,
                                Execution exec = Execution::parallel);

/// Degrees of the given basis tuple.
std::vector<int> tuple_degrees(const GradedBasis& basis, std::span<const std::size_t> tuple);
std::string format_tuple(const GradedBasis& basis, std::span<const std::size_t> tuple);

}  // namespace massey
