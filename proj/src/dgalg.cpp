#include "massey/dgalg.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "massey/errors.hpp"
#include "massey/reference.hpp"

namespace massey {

// ---------------------------------------------------------------------------
// MultilinearOp

MultilinearOp::MultilinearOp(Generator generator, bool orbit_compressed)
    : generator_(std::move(generator)), orbit_compressed_(orbit_compressed) {}

void MultilinearOp::set(Tuple inputs, HVector value) {
  if (static_cast<int>(inputs.size()) != generator_.arity) {
    throw UsageError("operation '" + generator_.name + "': tuple length differs from arity");
  }
  if (orbit_compressed_ && !std::is_sorted(inputs.begin(), inputs.end())) {
    throw UsageError("operation '" + generator_.name + "': compressed tables store sorted tuples only");
  }
  if (value.is_zero()) {
    table_.erase(inputs);
  } else {
    table_[std::move(inputs)] = std::move(value);
  }
}

HVector MultilinearOp::lookup(const GradedBasis& basis, std::span<const std::size_t> inputs) const {
  int degree = generator_.degree;
  for (auto i : inputs) degree += basis.degree(i);
  const Tuple key(inputs.begin(), inputs.end());
  if (!orbit_compressed_ || std::is_sorted(key.begin(), key.end())) {
    auto it = table_.find(key);
    return it == table_.end() ? HVector(degree) : it->second;
  }
  // inputs = canonical ∘ σ⁻¹ where canonical is the sorted tuple; find σ.
  const std::size_t r = key.size();
  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  Tuple canonical(r);
  for (std::size_t k = 0; k < r; ++k) canonical[k] = key[order[k]];
  auto it = table_.find(canonical);
  if (it == table_.end()) return HVector(degree);
  const Permutation sigma(order);  // canonical_k = inputs_{σ(k)}, so inputs_i = canonical_{σ⁻¹(i)}
  int parity = alpha_sign(tuple_degrees(basis, canonical), sigma);
  if (generator_.symmetry == Symmetry::antisymmetric) parity ^= sigma.parity();
  return sign_of_parity(parity) * it->second;
}

std::vector<std::pair<Tuple, HVector>> MultilinearOp::sorted_entries() const {
  std::vector<std::pair<Tuple, HVector>> out(table_.begin(), table_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

// ---------------------------------------------------------------------------
// DgAlgebra

DgAlgebra::DgAlgebra(GradedComplex complex, Presentation presentation, std::vector<MultilinearOp> ops)
    : complex_(std::move(complex)), presentation_(std::move(presentation)), ops_(std::move(ops)) {
  if (ops_.size() != presentation_.generators().size()) {
    throw UsageError("algebra must provide exactly one operation per generator");
  }
  std::set<std::string> seen;
  const auto& basis = complex_.basis();
  for (const auto& op : ops_) {
    const auto& g = op.generator();
    const Generator* declared = presentation_.find_generator(g.name);
    if (!declared || !(*declared == g)) {
      throw UsageError("operation '" + g.name + "' does not match the presentation");
    }
    if (!seen.insert(g.name).second) throw UsageError("duplicate operation '" + g.name + "'");
    for (const auto& [tuple, value] : op.table()) {
      int degree = g.degree;
      for (auto i : tuple) {
        if (i >= basis.size()) throw UsageError("operation '" + g.name + "' references unknown basis index");
        degree += basis.degree(i);
      }
      if (value.degree() != degree) {
        throw UsageError("operation '" + g.name + "' on " + format_tuple(basis, tuple) +
                         " has degree " + std::to_string(value.degree()) + ", expected " +
                         std::to_string(degree));
      }
      require_homogeneous(basis, value);
    }
  }
}

const MultilinearOp& DgAlgebra::op(std::string_view generator) const {
  for (const auto& op : ops_) {
    if (op.generator().name == generator) return op;
  }
  throw UsageError("algebra has no operation '" + std::string(generator) + "'");
}

// ---------------------------------------------------------------------------
// Evaluation

std::vector<int> tuple_degrees(const GradedBasis& basis, std::span<const std::size_t> tuple) {
  std::vector<int> out;
  out.reserve(tuple.size());
  for (auto i : tuple) out.push_back(basis.degree(i));
  return out;
}

std::string format_tuple(const GradedBasis& basis, std::span<const std::size_t> tuple) {
  std::string s = "(";
  for (std::size_t k = 0; k < tuple.size(); ++k) {
    if (k) s += ", ";
    s += basis[tuple[k]].name;
  }
  return s + ")";
}

HVector evaluate(const DgAlgebra& alg, const MultilinearOp& op, std::span<const HVector> args) {
  const auto& g = op.generator();
  if (static_cast<int>(args.size()) != g.arity) {
    throw UsageError("operation '" + g.name + "' takes " + std::to_string(g.arity) + " arguments");
  }
  int degree = g.degree;
  for (const auto& a : args) degree += a.degree();
  HVector out(degree);
  for (const auto& a : args) {
    if (a.is_zero()) return out;
  }
  const auto& basis = alg.basis();
  Tuple tuple(args.size());
  std::vector<HVector::Terms::const_iterator> it(args.size());
  for (std::size_t k = 0; k < args.size(); ++k) it[k] = args[k].terms().begin();
  while (true) {
    Rational coeff = 1;
    for (std::size_t k = 0; k < args.size(); ++k) {
      tuple[k] = it[k]->first;
      coeff *= it[k]->second;
    }
    out.add_scaled(op.lookup(basis, tuple), coeff);
    std::size_t k = args.size();
    while (k > 0) {
      --k;
      if (++it[k] != args[k].terms().end()) break;
      it[k] = args[k].terms().begin();
      if (k == 0) return out;
    }
  }
}

HVector evaluate(const DgAlgebra& alg, std::string_view generator, std::span<const HVector> args) {
  return evaluate(alg, alg.op(generator), args);
}

namespace {

std::vector<HVector> permuted_args(const RelationTerm& term, std::span<const HVector> args) {
  if (static_cast<int>(args.size()) != term.arity()) {
    throw UsageError("relation term expects " + std::to_string(term.arity()) + " arguments");
  }
  const Permutation inv = term.perm.inverse();
  std::vector<HVector> out(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) out[i] = args[inv(i)];
  return out;
}

std::vector<int> arg_degrees(std::span<const HVector> args) {
  std::vector<int> d;
  d.reserve(args.size());
  for (const auto& a : args) d.push_back(a.degree());
  return d;
}

}  // namespace

HVector inner_composite(const DgAlgebra& alg, const RelationTerm& term, std::span<const HVector> args) {
  const auto a = permuted_args(term, args);
  const auto l = static_cast<std::size_t>(term.slot - 1);
  return evaluate(alg, term.inner.name,
                  std::span<const HVector>(a).subspan(l, static_cast<std::size_t>(term.inner.arity)));
}

HVector evaluate_term(const DgAlgebra& alg, const RelationTerm& term, std::span<const HVector> args,
                      const HVector* substitute) {
  const auto a = permuted_args(term, args);
  const auto degrees = arg_degrees(args);
  const auto l = static_cast<std::size_t>(term.slot - 1);
  const auto r2 = static_cast<std::size_t>(term.inner.arity);

  std::vector<HVector> outer_args(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(l));
  int parity = 0;
  if (substitute) {
    outer_args.push_back(*substitute);
    parity = gamma_sign(term, degrees);
  } else {
    outer_args.push_back(evaluate(alg, term.inner.name, std::span<const HVector>(a).subspan(l, r2)));
    parity = composite_sign(term, degrees);
  }
  outer_args.insert(outer_args.end(), a.begin() + static_cast<std::ptrdiff_t>(l + r2), a.end());
  HVector value = evaluate(alg, term.outer.name, outer_args);
  value *= term.coefficient * sign_of_parity(parity);
  return value;
}

// ---------------------------------------------------------------------------
// Parallel validation kernels

namespace {

void decode(std::size_t index, std::size_t base, Tuple& tuple) {
  for (std::size_t k = tuple.size(); k > 0; --k) {
    tuple[k - 1] = index % base;
    index /= base;
  }
}

std::size_t power(std::size_t base, std::size_t exp) {
  std::size_t p = 1;
  for (std::size_t k = 0; k < exp; ++k) p *= base;
  return p;
}

/// Runs `check` on `count` tuples produced by `make(index, tuple)`, keeping the
/// failures with the smallest indices.  Each thread walks its dynamic chunks in
/// increasing order, so per-thread first-K lists contain the global first K.
template <class Make, class Check>
void run_tuples(std::size_t count, std::size_t arity, Make&& make, Check&& check, ValidationReport& report) {
  constexpr std::size_t K = ValidationReport::kMaxRecorded;
  std::vector<std::pair<std::size_t, TupleFailure>> merged;
  std::size_t failures = 0;

#pragma omp parallel
  {
    std::vector<std::pair<std::size_t, TupleFailure>> local;
    std::size_t local_count = 0;
    Tuple tuple(arity);
#pragma omp for schedule(dynamic, 512) nowait
    for (std::size_t idx = 0; idx < count; ++idx) {
      make(idx, tuple);
      if (auto f = check(tuple)) {
        ++local_count;
        if (local.size() < K) local.emplace_back(idx, std::move(*f));
      }
    }
#pragma omp critical(massey_merge_failures)
    {
      failures += local_count;
      for (auto& f : local) merged.push_back(std::move(f));
    }
  }

  std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (merged.size() > K) merged.resize(K);
  report.checked = count;
  report.failure_count = failures;
  for (auto& [_, f] : merged) report.failures.push_back(std::move(f));
}

template <class Check>
void run_all_tuples(std::size_t n, std::size_t arity, Check&& check, ValidationReport& report) {
  const std::size_t count = power(n, arity);
  run_tuples(
      count, arity, [n](std::size_t idx, Tuple& t) { decode(idx, n, t); }, std::forward<Check>(check), report);
}

std::vector<HVector> basis_args(const GradedBasis& basis, const Tuple& tuple) {
  std::vector<HVector> args;
  args.reserve(tuple.size());
  for (auto i : tuple) args.push_back(HVector::unit(basis.degree(i), i));
  return args;
}

}  // namespace

ValidationReport check_derivation(const DgAlgebra& alg, std::string_view generator, Execution exec) {
  if (exec == Execution::serial) return reference::check_derivation(alg, generator);
  const MultilinearOp& op = alg.op(generator);
  const auto& basis = alg.basis();
  const auto& complex = alg.complex();
  const auto& g = op.generator();

  ValidationReport report{"derivation", g.name};
  run_all_tuples(
      basis.size(), static_cast<std::size_t>(g.arity),
      [&](const Tuple& tuple) -> std::optional<TupleFailure> {
        const auto degrees = tuple_degrees(basis, tuple);
        HVector residual = complex.apply(op.lookup(basis, tuple));
        auto args = basis_args(basis, tuple);
        for (std::size_t s = 0; s < tuple.size(); ++s) {
          const HVector& ds = complex.d(tuple[s]);
          if (ds.is_zero()) continue;
          const HVector saved = args[s];
          args[s] = ds;
          residual.add_scaled(evaluate(alg, op, args),
                              -sign_of_parity(beta_sign(g.degree, degrees, static_cast<int>(s + 1))));
          args[s] = saved;
        }
        if (residual.is_zero()) return std::nullopt;
        return TupleFailure{tuple, std::move(residual), "d∘μ ≠ Σ ±μ∘d"};
      },
      report);
  return report;
}

ValidationReport check_relation(const DgAlgebra& alg, const Relation& relation,
                                std::optional<std::span<const Tuple>> scope, Execution exec) {
  if (exec == Execution::serial) return reference::check_relation(alg, relation, scope);
  const auto& basis = alg.basis();
  const auto arity = static_cast<std::size_t>(relation.arity());
  ValidationReport report{"relation", relation.name};

  auto check = [&](const Tuple& tuple) -> std::optional<TupleFailure> {
    const auto args = basis_args(basis, tuple);
    HVector residual;
    for (const auto& term : relation.terms) residual += evaluate_term(alg, term, args);
    if (residual.is_zero()) return std::nullopt;
    return TupleFailure{tuple, std::move(residual), "relation does not vanish"};
  };

  if (scope) {
    for (const auto& t : *scope) {
      if (t.size() != arity) throw UsageError("relation scope tuple has wrong length");
      for (auto i : t) {
        if (i >= basis.size()) throw UsageError("relation scope references unknown basis index");
      }
    }
    const auto tuples = *scope;
    run_tuples(
        tuples.size(), arity, [&](std::size_t idx, Tuple& t) { t = tuples[idx]; }, check, report);
  } else {
    run_all_tuples(basis.size(), arity, check, report);
  }
  return report;
}

ValidationReport check_symmetry(const DgAlgebra& alg, std::string_view generator, Execution exec) {
  if (exec == Execution::serial) return reference::check_symmetry(alg, generator);
  const MultilinearOp& op = alg.op(generator);
  const auto& basis = alg.basis();
  const auto& g = op.generator();
  ValidationReport report{"symmetry", g.name};
  if (g.symmetry == Symmetry::none) return report;

  const auto r = static_cast<std::size_t>(g.arity);
  std::vector<Permutation> perms;
  std::vector<Permutation> inverses;
  {
    std::vector<std::size_t> img(r);
    std::iota(img.begin(), img.end(), 0);
    while (std::next_permutation(img.begin(), img.end())) {
      perms.emplace_back(img);
      inverses.push_back(perms.back().inverse());
    }
  }

  run_all_tuples(
      basis.size(), r,
      [&](const Tuple& tuple) -> std::optional<TupleFailure> {
        const auto degrees = tuple_degrees(basis, tuple);
        const HVector base = op.lookup(basis, tuple);
        Tuple moved(r);
        for (std::size_t p = 0; p < perms.size(); ++p) {
          const Permutation& sigma = perms[p];
          for (std::size_t i = 0; i < r; ++i) moved[i] = tuple[inverses[p](i)];
          int parity = alpha_sign(degrees, sigma);
          if (g.symmetry == Symmetry::antisymmetric) parity ^= sigma.parity();
          const HVector actual = op.lookup(basis, moved);
          // Fast path: no arithmetic unless the entry disagrees.
          if (parity % 2 == 0 ? actual == base : (actual.is_zero() && base.is_zero())) continue;
          HVector residual = actual - sign_of_parity(parity) * base;
          if (!residual.is_zero()) {
            std::string detail = "equivariance fails for σ = [";
            const auto ob = sigma.one_based();
            for (std::size_t k = 0; k < ob.size(); ++k) detail += (k ? "," : "") + std::to_string(ob[k]);
            return TupleFailure{tuple, std::move(residual), detail + "]"};
          }
        }
        return std::nullopt;
      },
      report);
  return report;
}

}  // namespace massey
