#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "massey/rational.hpp"

namespace massey {

/// Bijection of {0, …, n−1}.  Serialized one-line as 1-based images
/// [σ(1), …, σ(n)].
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> images);  // 0-based, validated

  static Permutation identity(std::size_t n);
  static Permutation from_one_based(std::span<const int> images);
  /// Product of disjoint-or-not cycles in 1-based cycle notation, e.g. "(1 2 3)"
  /// or "(1 2)(3 4)"; "()" is the identity.  Cycles compose right to left.
  static Permutation from_cycles(std::string_view cycles, std::size_t n);

  std::size_t size() const { return images_.size(); }
  std::size_t operator()(std::size_t i) const { return images_[i]; }
  Permutation inverse() const;
  /// (this ∘ other)(i) = this(other(i)).
  Permutation compose(const Permutation& other) const;
  bool is_identity() const;
  /// 0 for even permutations, 1 for odd.
  int parity() const;
  std::vector<int> one_based() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> images_;
};

enum class Symmetry { none, symmetric, antisymmetric };

std::string_view to_string(Symmetry s);
Symmetry symmetry_from_string(std::string_view s);

/// Generating operation of a quadratic presentation.  `degree` is homological.
struct Generator {
  std::string name;
  int arity = 2;
  int degree = 0;
  Symmetry symmetry = Symmetry::none;

  friend bool operator==(const Generator&, const Generator&) = default;
};

/// One summand coefficient · (outer ∘_slot inner) · perm of a relation.
/// `slot` is 1-based, matching the infinitesimal composition index.
struct RelationTerm {
  Rational coefficient{1};
  Generator outer;
  Generator inner;
  int slot = 1;
  Permutation perm;

  int arity() const { return outer.arity + inner.arity - 1; }
  int degree() const { return outer.degree + inner.degree; }

  friend bool operator==(const RelationTerm&, const RelationTerm&) = default;
};

struct Relation {
  std::string name;
  std::vector<RelationTerm> terms;

  int arity() const { return terms.front().arity(); }
  int degree() const { return terms.front().degree(); }

  friend bool operator==(const Relation&, const Relation&) = default;
};

class Presentation {
 public:
  Presentation() = default;
  /// Validates generators (arity ≥ 1, unique names), term shape (slot range,
  /// permutation size, declared generators) and relation homogeneity.
  Presentation(std::string name, std::vector<Generator> generators, std::vector<Relation> relations);

  const std::string& name() const { return name_; }
  const std::vector<Generator>& generators() const { return generators_; }
  const std::vector<Relation>& relations() const { return relations_; }

  const Generator* find_generator(std::string_view name) const;
  const Generator& generator(std::string_view name) const;
  const Relation& relation(std::string_view name) const;

  friend bool operator==(const Presentation&, const Presentation&) = default;

 private:
  std::string name_;
  std::vector<Generator> generators_;
  std::vector<Relation> relations_;
};

/// Built-in presentations: "assoc", "com", "lie", "gerstenhaber", "hypercom3".
/// Throws UsageError for unknown names.
Presentation builtin(std::string_view name);
std::vector<std::string> builtin_names();

// Sign calculus.  Every function returns a parity (0 or 1); only degree
// parities matter.

/// Σ_{s<t, σ(s)>σ(t)} |x_s||x_t|: the Koszul sign of moving x_s to slot σ(s).
int alpha_sign(std::span<const int> degrees, const Permutation& sigma);

/// |μ| + Σ_{t<s} |x_t| for the derivation rule; `slot` is 1-based.
int beta_sign(int op_degree, std::span<const int> degrees, int slot);

/// α + |μ⁽¹⁾| + (|μ⁽²⁾| − 1)·Σ_{m<l} |x_{σ⁻¹(m)}|: the sign of a term in the
/// Massey representative.
int gamma_sign(const RelationTerm& term, std::span<const int> degrees);

/// α + |μ⁽²⁾|·Σ_{m<l} |x_{σ⁻¹(m)}|: the sign of a term when the relation is
/// evaluated on elements (the composite's own Koszul sign included).
int composite_sign(const RelationTerm& term, std::span<const int> degrees);

/// Degrees permuted into argument order: result[i] = degrees[σ⁻¹(i)].
std::vector<int> permuted_degrees(std::span<const int> degrees, const Permutation& sigma);

}  // namespace massey
