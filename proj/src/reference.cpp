#include "massey/reference.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "massey/errors.hpp"

namespace massey::reference {

namespace {

void for_each_tuple(std::size_t n, std::size_t arity, const std::function<void(const Tuple&)>& fn) {
  Tuple t(arity, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == arity) {
      fn(t);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      t[pos] = i;
      rec(pos + 1);
    }
  };
  rec(0);
}

void record(ValidationReport& report, const Tuple& tuple, HVector residual, std::string detail) {
  ++report.failure_count;
  if (report.failures.size() < ValidationReport::kMaxRecorded) {
    report.failures.push_back({tuple, std::move(residual), std::move(detail)});
  }
}

HVector unit_of(const GradedBasis& basis, std::size_t i) { return HVector::unit(basis.degree(i), i); }

}  // namespace

ValidationReport check_derivation(const DgAlgebra& alg, std::string_view generator) {
  const auto& op = alg.op(generator);
  const auto& g = op.generator();
  const auto& basis = alg.basis();
  const auto& complex = alg.complex();
  ValidationReport report{"derivation", g.name};
  for_each_tuple(basis.size(), static_cast<std::size_t>(g.arity), [&](const Tuple& t) {
    ++report.checked;
    const HVector lhs = complex.apply(op.lookup(basis, t));
    HVector rhs;
    int prefix = g.degree;
    for (std::size_t s = 0; s < t.size(); ++s) {
      std::vector<HVector> args;
      for (std::size_t k = 0; k < t.size(); ++k) {
        args.push_back(k == s ? complex.d(t[k]) : unit_of(basis, t[k]));
      }
      HVector term = evaluate(alg, op, args);
      if (prefix % 2 != 0) term *= Rational(-1);
      rhs += term;
      prefix += basis.degree(t[s]);
    }
    if (!(lhs == rhs)) record(report, t, lhs - rhs, "d∘μ ≠ Σ ±μ∘d");
  });
  return report;
}

ValidationReport check_relation(const DgAlgebra& alg, const Relation& relation,
                                std::optional<std::span<const Tuple>> scope) {
  const auto& basis = alg.basis();
  ValidationReport report{"relation", relation.name};
  auto check = [&](const Tuple& t) {
    if (static_cast<int>(t.size()) != relation.arity()) throw UsageError("relation scope tuple has wrong length");
    ++report.checked;
    std::vector<HVector> args;
    for (auto i : t) {
      if (i >= basis.size()) throw UsageError("relation scope references unknown basis index");
      args.push_back(unit_of(basis, i));
    }
    HVector total;
    for (const auto& term : relation.terms) total += evaluate_term(alg, term, args);
    if (!total.is_zero()) record(report, t, total, "relation does not vanish");
  };
  if (scope) {
    for (const auto& t : *scope) check(t);
  } else {
    for_each_tuple(basis.size(), static_cast<std::size_t>(relation.arity()), check);
  }
  return report;
}

ValidationReport check_symmetry(const DgAlgebra& alg, std::string_view generator) {
  const auto& op = alg.op(generator);
  const auto& g = op.generator();
  const auto& basis = alg.basis();
  ValidationReport report{"symmetry", g.name};
  if (g.symmetry == Symmetry::none) return report;
  const auto r = static_cast<std::size_t>(g.arity);
  for_each_tuple(basis.size(), r, [&](const Tuple& t) {
    ++report.checked;
    const HVector base = op.lookup(basis, t);
    std::vector<std::size_t> img(r);
    std::iota(img.begin(), img.end(), 0);
    while (std::next_permutation(img.begin(), img.end())) {
      // Argument i receives t[σ⁻¹(i)]; the sign counts inverted pairs of odd inputs.
      Tuple moved(r);
      for (std::size_t s = 0; s < r; ++s) moved[img[s]] = t[s];
      int odd_swaps = 0;
      int inversions = 0;
      for (std::size_t s = 0; s < r; ++s) {
        for (std::size_t u = s + 1; u < r; ++u) {
          if (img[s] > img[u]) {
            ++inversions;
            if (basis.degree(t[s]) % 2 != 0 && basis.degree(t[u]) % 2 != 0) ++odd_swaps;
          }
        }
      }
      int parity = odd_swaps;
      if (g.symmetry == Symmetry::antisymmetric) parity += inversions;
      HVector expected = base;
      if (parity % 2 != 0) expected *= Rational(-1);
      const HVector actual = op.lookup(basis, moved);
      if (!(actual == expected)) {
        std::string detail = "equivariance fails for σ = [";
        for (std::size_t k = 0; k < r; ++k) detail += (k ? "," : "") + std::to_string(img[k] + 1);
        record(report, t, actual - expected, detail + "]");
        return;
      }
    }
  });
  return report;
}

}  // namespace massey::reference
