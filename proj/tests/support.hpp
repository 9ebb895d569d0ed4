#pragma once

// Helpers shared by the unit and acceptance tests.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "massey/construct.hpp"
#include "massey/engine.hpp"
#include "massey/exactla.hpp"

namespace testing_support {

using namespace massey;

inline HVector unit(const GradedBasis& basis, const std::string& name) {
  const std::size_t i = basis.index_of(name);
  return HVector::unit(basis.degree(i), i);
}

/// Homology class of the basis cycle `name`.
inline HomologyClass cls(const MasseyEngine& e, const std::string& name) {
  return e.class_of(unit(e.algebra().basis(), name));
}

inline HVector vec(const GradedBasis& basis, std::initializer_list<std::pair<const char*, long>> terms) {
  HVector out;
  for (const auto& [name, c] : terms) out += Rational(c) * unit(basis, name);
  return out;
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Rational(dist(rng));
  }
  return m;
}

/// Structure constants after the change of basis f_a = Σ_i g(i, a) e_i.
inline LieData change_basis(const LieData& data, const Matrix& g) {
  const std::size_t n = data.dimension();
  const auto r = rref(g);
  if (r.pivots.size() != n) throw std::invalid_argument("singular change of basis");
  const Matrix& inv = r.transform;
  LieData out = LieData::zero(data.names);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const Rational gij = g(i, a) * g(j, b);
          if (gij.is_zero()) continue;
          for (std::size_t k = 0; k < n; ++k) {
            if (data.c(i, j, k).is_zero()) continue;
            for (std::size_t c = 0; c < n; ++c) out.c(a, b, c) = out.c(a, b, c) + gij * data.c(i, j, k) * inv(c, k);
          }
        }
      }
    }
  }
  return out;
}

/// Known three-dimensional real Lie algebras on generators x, y, z.
inline std::vector<LieData> three_dimensional_lie_algebras() {
  std::vector<LieData> out;
  out.push_back(heisenberg_lie());
  LieData sl2 = LieData::zero({"x", "y", "z"});
  sl2.set_bracket("x", "y", {{"y", Rational(2)}});
  sl2.set_bracket("x", "z", {{"z", Rational(-2)}});
  sl2.set_bracket("y", "z", {{"x", Rational(1)}});
  out.push_back(sl2);
  LieData so3 = LieData::zero({"x", "y", "z"});
  so3.set_bracket("x", "y", {{"z", Rational(1)}});
  so3.set_bracket("y", "z", {{"x", Rational(1)}});
  so3.set_bracket("z", "x", {{"y", Rational(1)}});
  out.push_back(so3);
  LieData r3 = LieData::zero({"x", "y", "z"});
  r3.set_bracket("x", "y", {{"y", Rational(1)}});
  r3.set_bracket("x", "z", {{"y", Rational(1)}, {"z", Rational(1)}});
  out.push_back(r3);
  LieData r31 = LieData::zero({"x", "y", "z"});
  r31.set_bracket("x", "y", {{"y", Rational(1)}});
  r31.set_bracket("x", "z", {{"z", Rational(1)}});
  out.push_back(r31);
  LieData aff = LieData::zero({"x", "y", "z"});
  aff.set_bracket("x", "y", {{"y", Rational(1)}});
  out.push_back(aff);
  out.push_back(LieData::zero({"x", "y", "z"}));
  return out;
}

/// A small DG-commutative algebra: the (possibly truncated) CE algebra of a
/// random basis change of a known three-dimensional Lie algebra.  At most 8
/// basis elements.
inline DgAlgebra random_small_algebra(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto family = three_dimensional_lie_algebras();
  const LieData& base = family[rng() % family.size()];
  Matrix g(3, 3);
  do {
    g = random_matrix(rng, 3, 3, -2, 2);
  } while (rank(g) != 3);
  return chevalley_eilenberg(change_basis(base, g), rng() % 2 == 0 ? 2 : 3);
}

inline DgAlgebra with_op_entry(const DgAlgebra& alg, const std::string& generator, const Tuple& t, HVector value) {
  std::vector<MultilinearOp> ops = alg.ops();
  for (auto& op : ops) {
    if (op.generator().name == generator) op.set(t, std::move(value));
  }
  return DgAlgebra(alg.complex(), alg.presentation(), std::move(ops));
}

inline DgAlgebra with_differential(const DgAlgebra& alg, std::size_t e, HVector image) {
  std::vector<HVector> d = alg.complex().differential();
  d[e] = std::move(image);
  return DgAlgebra(GradedComplex(alg.basis(), std::move(d)), alg.presentation(), alg.ops());
}

struct Mutation {
  std::string description;
  DgAlgebra algebra;
};

/// Adds ±(a random basis element of the right degree) to one differential
/// image or one table entry.  Only nonempty target degrees are used, so
/// every mutation changes the structure.
inline std::vector<Mutation> random_mutations(const DgAlgebra& alg, std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  const auto& basis = alg.basis();
  std::vector<Mutation> out;
  while (out.size() < count) {
    const Rational sign(rng() % 2 ? 1 : -1);
    const std::size_t which = rng() % (alg.ops().size() + 1);
    if (which == alg.ops().size()) {
      const std::size_t e = rng() % basis.size();
      const auto targets = basis.in_degree(basis.degree(e) - 1);
      if (targets.empty()) continue;
      const std::size_t f = targets[rng() % targets.size()];
      HVector image = alg.complex().d(e);
      image += sign * HVector::unit(basis.degree(f), f);
      out.push_back({"d(" + basis[e].name + ") += " + sign.str() + "*" + basis[f].name,
                     with_differential(alg, e, std::move(image))});
    } else {
      const auto& op = alg.ops()[which];
      Tuple t(static_cast<std::size_t>(op.generator().arity));
      int degree = op.generator().degree;
      for (auto& i : t) {
        i = rng() % basis.size();
        degree += basis.degree(i);
      }
      const auto targets = basis.in_degree(degree);
      if (targets.empty()) continue;
      const std::size_t f = targets[rng() % targets.size()];
      HVector value = op.lookup(basis, t);
      value += sign * HVector::unit(degree, f);
      out.push_back({op.generator().name + format_tuple(basis, t) + " += " + sign.str() + "*" + basis[f].name,
                     with_op_entry(alg, op.generator().name, t, std::move(value))});
    }
  }
  return out;
}

/// Runs every validator on the full scope, or on `scope` for the named relation.
inline bool all_validators_pass(const DgAlgebra& alg, const std::string& scoped_relation = "",
                                const std::vector<Tuple>* scope = nullptr) {
  if (!check_differential(alg.complex()).passed()) return false;
  for (const auto& g : alg.presentation().generators()) {
    if (!check_derivation(alg, g.name).passed() || !check_symmetry(alg, g.name).passed()) return false;
  }
  for (const auto& rel : alg.presentation().relations()) {
    const bool scoped = scope && rel.name == scoped_relation;
    const auto report = scoped ? check_relation(alg, rel, std::span<const Tuple>(*scope)) : check_relation(alg, rel);
    if (!report.passed()) return false;
  }
  return true;
}

}  // namespace testing_support
