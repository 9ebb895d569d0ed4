#include <doctest.h>

#include <random>

#include "massey/construct.hpp"
#include "massey/dgalg.hpp"
#include "massey/errors.hpp"
#include "massey/reference.hpp"
#include "support.hpp"

using namespace massey;
using namespace testing_support;

namespace {

HVector random_vector(std::mt19937_64& rng, const GradedBasis& basis, int degree) {
  HVector v(degree);
  for (auto i : basis.in_degree(degree)) v.add(i, Rational(static_cast<long>(rng() % 7) - 3));
  return v;
}

// Keeps one entry per orbit of a symmetric table.
MultilinearOp compress(const MultilinearOp& op) {
  MultilinearOp out(op.generator(), true);
  for (const auto& [t, v] : op.sorted_entries()) {
    if (std::is_sorted(t.begin(), t.end())) out.set(t, v);
  }
  return out;
}

void check_same_reports(const DgAlgebra& alg) {
  for (const auto& g : alg.presentation().generators()) {
    CHECK(check_derivation(alg, g.name, Execution::parallel) == check_derivation(alg, g.name, Execution::serial));
    CHECK(check_symmetry(alg, g.name, Execution::parallel) == check_symmetry(alg, g.name, Execution::serial));
  }
  for (const auto& rel : alg.presentation().relations()) {
    CHECK(check_relation(alg, rel, std::nullopt, Execution::parallel) ==
          check_relation(alg, rel, std::nullopt, Execution::serial));
  }
}

}  // namespace

TEST_SUITE("dgalg") {
  TEST_CASE("evaluation is multilinear") {
    std::mt19937_64 rng(21);
    const DgAlgebra g = heisenberg_gerstenhaber();
    const auto& basis = g.basis();
    const auto degrees = basis.degrees();
    for (int t = 0; t < 200; ++t) {
      const int da = degrees[rng() % degrees.size()];
      const int db = degrees[rng() % degrees.size()];
      const HVector a = random_vector(rng, basis, da);
      const HVector a2 = random_vector(rng, basis, da);
      const HVector b = random_vector(rng, basis, db);
      const Rational lambda(static_cast<long>(rng() % 5) - 2);
      for (const char* op : {"c", "l"}) {
        const HVector lhs_args[2] = {a + lambda * a2, b};
        const HVector a_args[2] = {a, b};
        const HVector a2_args[2] = {a2, b};
        CHECK(evaluate(g, op, lhs_args) == evaluate(g, op, a_args) + lambda * evaluate(g, op, a2_args));
      }
    }
  }

  TEST_CASE("relations vanish on random homogeneous inputs") {
    std::mt19937_64 rng(22);
    const DgAlgebra g = heisenberg_gerstenhaber();
    const auto& basis = g.basis();
    const auto degrees = basis.degrees();
    for (int t = 0; t < 60; ++t) {
      std::vector<HVector> args;
      for (int k = 0; k < 3; ++k) args.push_back(random_vector(rng, basis, degrees[rng() % degrees.size()]));
      for (const auto& rel : g.presentation().relations()) {
        HVector total;
        for (const auto& term : rel.terms) total += evaluate_term(g, term, args);
        CHECK(total.is_zero());
      }
    }
  }

  TEST_CASE("orbit-compressed tables evaluate like full tables") {
    const DgAlgebra g = heisenberg_gerstenhaber();
    const DgAlgebra compressed(g.complex(), g.presentation(), {compress(g.op("c")), compress(g.op("l"))});
    CHECK(compressed.op("l").table().size() < g.op("l").table().size());
    const auto& basis = g.basis();
    for (std::size_t a = 0; a < basis.size(); ++a) {
      for (std::size_t b = 0; b < basis.size(); ++b) {
        const Tuple t{a, b};
        CHECK(compressed.op("c").lookup(basis, t) == g.op("c").lookup(basis, t));
        CHECK(compressed.op("l").lookup(basis, t) == g.op("l").lookup(basis, t));
      }
    }
    CHECK(all_validators_pass(compressed));
    MultilinearOp op(g.presentation().generator("c"), true);
    CHECK_THROWS_AS(op.set({2, 1}, HVector()), UsageError);
  }

  TEST_CASE("algebra construction checks operations") {
    const DgAlgebra ce = heisenberg_ce();
    CHECK_THROWS_AS(DgAlgebra(ce.complex(), ce.presentation(), {}), UsageError);
    MultilinearOp bad(ce.presentation().generator("c"));
    const auto& basis = ce.basis();
    bad.set({basis.index_of("x"), basis.index_of("y")}, unit(basis, "x"));
    CHECK_THROWS_AS(DgAlgebra(ce.complex(), ce.presentation(), {bad}), UsageError);
    MultilinearOp wrong(Generator{"c", 2, 0, Symmetry::none});
    CHECK_THROWS_AS(DgAlgebra(ce.complex(), ce.presentation(), {wrong}), UsageError);
  }

  TEST_CASE("parallel kernels match the serial reference") {
    for (const auto& alg : {heisenberg_ce(), heisenberg_gerstenhaber()}) {
      check_same_reports(alg);
      for (const auto& m : random_mutations(alg, 7, 6)) check_same_reports(m.algebra);
    }
    const DgAlgebra h = heisenberg_hypercom();
    const auto gate = heisenberg_hypercom_gate(h.basis());
    const Relation& rel = h.presentation().relation("hypercom");
    const std::span<const Tuple> scope(gate.relation_scope);
    CHECK(check_relation(h, rel, scope, Execution::parallel) == check_relation(h, rel, scope, Execution::serial));
    for (const auto& m : random_mutations(h, 8, 3)) {
      CHECK(check_derivation(m.algebra, "m3", Execution::parallel) ==
            check_derivation(m.algebra, "m3", Execution::serial));
      CHECK(check_symmetry(m.algebra, "m3", Execution::parallel) ==
            check_symmetry(m.algebra, "m3", Execution::serial));
      CHECK(check_relation(m.algebra, rel, scope, Execution::parallel) ==
            check_relation(m.algebra, rel, scope, Execution::serial));
    }
  }

  TEST_CASE("failure reports are capped and ordered") {
    const DgAlgebra ce = heisenberg_ce();
    const auto& basis = ce.basis();
    // Doubling the product of x and y breaks associativity on many tuples.
    const DgAlgebra bad = with_op_entry(ce, "c", {basis.index_of("x"), basis.index_of("y")},
                                        Rational(2) * unit(basis, "xy"));
    const auto report = check_relation(bad, bad.presentation().relation("associativity"));
    CHECK_FALSE(report.passed());
    CHECK(report.checked == 512);
    CHECK(report.failures.size() == std::min<std::size_t>(report.failure_count, ValidationReport::kMaxRecorded));
    for (std::size_t k = 1; k < report.failures.size(); ++k) {
      CHECK(report.failures[k - 1].tuple < report.failures[k].tuple);
    }
    const auto sym = check_symmetry(bad, "c");
    REQUIRE_FALSE(sym.passed());
    CHECK(sym.failures.front().detail == "equivariance fails for σ = [2,1]");
  }

  TEST_CASE("scope tuples are validated") {
    const DgAlgebra ce = heisenberg_ce();
    const std::vector<Tuple> wrong_length{{0, 1}};
    CHECK_THROWS_AS(check_relation(ce, ce.presentation().relation("associativity"), std::span<const Tuple>(wrong_length)),
                    UsageError);
    const std::vector<Tuple> out_of_range{{0, 1, 99}};
    CHECK_THROWS_AS(check_relation(ce, ce.presentation().relation("associativity"), std::span<const Tuple>(out_of_range)),
                    UsageError);
  }

  TEST_CASE("derivation failure on a corrupted differential") {
    const DgAlgebra ce = heisenberg_ce();
    const auto& basis = ce.basis();
    const DgAlgebra bad = with_differential(ce, basis.index_of("xz"), unit(basis, "xyz"));
    CHECK(check_differential(bad.complex()).passed());
    CHECK_FALSE(check_derivation(bad, "c").passed());
  }
}
