#include "massey/construct.hpp"

#include <bit>
#include <map>

#include "massey/errors.hpp"

namespace massey {

// ---------------------------------------------------------------------------
// LieData

LieData LieData::zero(std::vector<std::string> names) {
  LieData d;
  const std::size_t n = names.size();
  d.names = std::move(names);
  d.constants.assign(n * n * n, Rational(0));
  return d;
}

const Rational& LieData::c(std::size_t i, std::size_t j, std::size_t k) const {
  const std::size_t n = names.size();
  return constants.at((i * n + j) * n + k);
}

Rational& LieData::c(std::size_t i, std::size_t j, std::size_t k) {
  const std::size_t n = names.size();
  return constants.at((i * n + j) * n + k);
}

std::size_t LieData::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw UsageError("unknown Lie generator '" + std::string(name) + "'");
}

void LieData::set_bracket(std::string_view a, std::string_view b,
                          const std::vector<std::pair<std::string, Rational>>& value) {
  const std::size_t i = index_of(a);
  const std::size_t j = index_of(b);
  if (i == j) throw UsageError("[" + std::string(a) + ", " + std::string(a) + "] is forced to be zero");
  for (std::size_t k = 0; k < names.size(); ++k) {
    c(i, j, k) = Rational(0);
    c(j, i, k) = Rational(0);
  }
  for (const auto& [name, coeff] : value) {
    const std::size_t k = index_of(name);
    c(i, j, k) = c(i, j, k) + coeff;
    c(j, i, k) = c(j, i, k) - coeff;
  }
}

std::optional<std::string> lie_failure(const LieData& data) {
  const std::size_t n = data.dimension();
  if (data.constants.size() != n * n * n) return "structure constant table has the wrong size";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (data.c(i, j, k) + data.c(j, i, k) != Rational(0)) {
          return "antisymmetry fails for [" + data.names[i] + ", " + data.names[j] + "]";
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        for (std::size_t m = 0; m < n; ++m) {
          Rational s(0);
          for (std::size_t l = 0; l < n; ++l) {
            s = s + data.c(j, k, l) * data.c(i, l, m) + data.c(k, i, l) * data.c(j, l, m) +
                data.c(i, j, l) * data.c(k, l, m);
          }
          if (!s.is_zero()) {
            return "Jacobi fails for (" + data.names[i] + ", " + data.names[j] + ", " + data.names[k] + ")";
          }
        }
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// ExteriorBasis

ExteriorBasis::ExteriorBasis(std::vector<std::string> generators, std::size_t max_length)
    : generators_(std::move(generators)) {
  const std::size_t n = generators_.size();
  if (n > 20) throw UsageError("exterior algebras on more than 20 generators are not supported");
  const std::uint32_t count = std::uint32_t{1} << n;
  std::vector<std::uint32_t> all(count);
  for (std::uint32_t m = 0; m < count; ++m) all[m] = m;
  // Length first, then lexicographic in generator positions.
  auto key = [n](std::uint32_t m) {
    std::vector<std::size_t> pos;
    for (std::size_t g = 0; g < n; ++g) {
      if (m & (std::uint32_t{1} << g)) pos.push_back(g);
    }
    return pos;
  };
  std::stable_sort(all.begin(), all.end(), [&](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    return key(a) < key(b);
  });
  by_mask_.assign(count, std::numeric_limits<std::size_t>::max());
  std::vector<BasisElement> elements;
  for (auto m : all) {
    if (static_cast<std::size_t>(std::popcount(m)) > max_length) continue;
    std::string name;
    for (auto g : key(m)) name += generators_[g];
    if (name.empty()) name = "1";
    by_mask_[m] = masks_.size();
    masks_.push_back(m);
    elements.push_back({name, -std::popcount(m)});
  }
  basis_ = GradedBasis(std::move(elements));
}

std::optional<std::size_t> ExteriorBasis::index_of_mask(std::uint32_t mask) const {
  if (mask >= by_mask_.size() || by_mask_[mask] == std::numeric_limits<std::size_t>::max()) return std::nullopt;
  return by_mask_[mask];
}

std::optional<std::pair<int, std::size_t>> ExteriorBasis::product(std::size_t a, std::size_t b) const {
  const std::uint32_t ma = masks_[a];
  const std::uint32_t mb = masks_[b];
  if (ma & mb) return std::nullopt;
  auto idx = index_of_mask(ma | mb);
  if (!idx) return std::nullopt;
  // Sorting sign: pairs (g in a, h in b) with g > h.
  int swaps = 0;
  for (std::uint32_t rest = mb; rest; rest &= rest - 1) {
    const std::uint32_t bit = rest & (~rest + 1);
    swaps += std::popcount(ma & ~((bit << 1) - 1));
  }
  return std::pair{swaps % 2 == 0 ? 1 : -1, *idx};
}

HVector ExteriorBasis::multiply(const HVector& a, const HVector& b) const {
  HVector out(a.degree() + b.degree());
  for (const auto& [i, ci] : a.terms()) {
    for (const auto& [j, cj] : b.terms()) {
      if (auto p = product(i, j)) out.add(p->second, p->first > 0 ? ci * cj : Rational(0) - ci * cj);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// DegreeMinus2Operator

HVector DegreeMinus2Operator::apply(const HVector& v) const {
  HVector out(v.degree() + 2);
  for (const auto& [i, ci] : v.terms()) out.add_scaled(images.at(i), ci);
  return out;
}

std::vector<std::size_t> chain_map_failures(const GradedComplex& complex, const DegreeMinus2Operator& op) {
  std::vector<std::size_t> out;
  const auto& basis = complex.basis();
  if (op.images.size() != basis.size()) throw UsageError("operator must give one image per basis element");
  for (std::size_t e = 0; e < basis.size(); ++e) {
    const HVector unit = HVector::unit(basis.degree(e), e);
    if (!(complex.apply(op.apply(unit)) == op.apply(complex.apply(unit)))) out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chevalley–Eilenberg

namespace {

MultilinearOp product_table(const ExteriorBasis& ext, const Generator& g) {
  MultilinearOp op(g);
  const auto& basis = ext.basis();
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (auto p = ext.product(a, b)) {
        op.set({a, b}, HVector::unit(basis.degree(p->second), p->second, Rational(p->first)));
      }
    }
  }
  return op;
}

std::vector<HVector> ce_differential(const ExteriorBasis& ext, const LieData& data) {
  const auto& basis = ext.basis();
  const std::size_t n = data.dimension();
  std::vector<HVector> dgen;
  for (std::size_t k = 0; k < n; ++k) {
    HVector v(-2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (data.c(i, j, k).is_zero()) continue;
        if (auto idx = ext.index_of_mask((std::uint32_t{1} << i) | (std::uint32_t{1} << j))) {
          v.add(*idx, data.c(i, j, k));
        }
      }
    }
    dgen.push_back(std::move(v));
  }
  std::vector<HVector> d;
  for (std::size_t e = 0; e < basis.size(); ++e) {
    const std::uint32_t m = ext.mask(e);
    HVector out(basis.degree(e) - 1);
    int position = 0;
    for (std::size_t g = 0; g < n; ++g) {
      const std::uint32_t bit = std::uint32_t{1} << g;
      if (!(m & bit)) continue;
      const std::uint32_t below = m & (bit - 1);
      const std::uint32_t above = m & ~((bit << 1) - 1);
      const auto pre = ext.index_of_mask(below);
      const auto post = ext.index_of_mask(above);
      HVector term = ext.multiply(ext.multiply(HVector::unit(basis.degree(*pre), *pre), dgen[g]),
                                  HVector::unit(basis.degree(*post), *post));
      out.add_scaled(term, position % 2 == 0 ? Rational(1) : Rational(-1));
      ++position;
    }
    d.push_back(std::move(out));
  }
  return d;
}

std::vector<std::string> failure_summary(const std::vector<ValidationReport>& reports) {
  std::vector<std::string> out;
  for (const auto& r : reports) {
    if (!r.passed()) out.push_back(r.check + " check of '" + r.subject + "'");
  }
  return out;
}

}  // namespace

GradedComplex chevalley_eilenberg_complex(const LieData& data, std::size_t max_length) {
  const ExteriorBasis ext(data.names, max_length);
  return GradedComplex(ext.basis(), ce_differential(ext, data));
}

DgAlgebra chevalley_eilenberg(const LieData& data, std::size_t max_length) {
  if (auto failure = lie_failure(data)) throw ConstructionError("not a Lie algebra: " + *failure);
  const ExteriorBasis ext(data.names, max_length);
  GradedComplex complex(ext.basis(), ce_differential(ext, data));
  const Presentation pres = builtin("com");
  std::vector<MultilinearOp> ops{product_table(ext, pres.generator("c"))};
  return DgAlgebra(std::move(complex), pres, std::move(ops));
}

// ---------------------------------------------------------------------------
// Gerstenhaber structure

namespace {

class BracketExtension {
 public:
  BracketExtension(const ExteriorBasis& ext, const LieData& dual) : ext_(ext), dual_(dual) {}

  /// [e_a, e_b] on monomials.
  HVector bracket(std::size_t a, std::size_t b) {
    const auto key = std::pair{a, b};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    HVector value = compute(a, b);
    memo_.emplace(key, value);
    return value;
  }

 private:
  HVector unit(std::size_t i) const { return HVector::unit(ext_.basis().degree(i), i); }
  std::size_t index(std::uint32_t mask) const { return *ext_.index_of_mask(mask); }

  HVector compute(std::size_t a, std::size_t b) {
    const std::uint32_t ma = ext_.mask(a);
    const std::uint32_t mb = ext_.mask(b);
    const int la = std::popcount(ma);
    const int lb = std::popcount(mb);
    HVector out(-(la + lb) + 1);
    if (la == 0 || lb == 0) return out;
    if (lb >= 2) {
      // e_b = g · rest with g the first generator; no sorting sign.
      const std::uint32_t g = mb & (~mb + 1);
      const std::size_t gi = index(g);
      const std::size_t ri = index(mb & ~g);
      out += ext_.multiply(bracket(a, gi), unit(ri));
      HVector second = ext_.multiply(unit(gi), bracket(a, ri));
      if ((la - 1) % 2 != 0) second *= Rational(-1);
      out += second;
      return out;
    }
    if (la >= 2) {
      // [A, g] = −(−1)^{(|A|−1)(|g|−1)} [g, A] with |g| = 1.
      out -= bracket(b, a);
      return out;
    }
    const auto i = static_cast<std::size_t>(std::countr_zero(ma));
    const auto j = static_cast<std::size_t>(std::countr_zero(mb));
    for (std::size_t k = 0; k < dual_.dimension(); ++k) {
      if (!dual_.c(i, j, k).is_zero()) out.add(index(std::uint32_t{1} << k), dual_.c(i, j, k));
    }
    return out;
  }

  const ExteriorBasis& ext_;
  const LieData& dual_;
  std::map<std::pair<std::size_t, std::size_t>, HVector> memo_;
};

}  // namespace

DgAlgebra gerstenhaber_from_bialgebra(const LieBialgebraData& data) {
  if (auto failure = lie_failure(data.lie)) throw ConstructionError("not a Lie algebra: " + *failure);
  if (auto failure = lie_failure(data.dual_bracket)) {
    throw ConstructionError("dual bracket is not a Lie bracket: " + *failure);
  }
  if (data.lie.names != data.dual_bracket.names) {
    throw UsageError("Lie bialgebra sides must use the same generator names");
  }
  const ExteriorBasis ext(data.lie.names);
  const auto& basis = ext.basis();
  GradedComplex complex(basis, ce_differential(ext, data.lie));
  const Presentation pres = builtin("gerstenhaber");

  MultilinearOp l(pres.generator("l"));
  BracketExtension ext_bracket(ext, data.dual_bracket);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      HVector v = ext_bracket.bracket(a, b);
      if (basis.degree(a) % 2 != 0) v *= Rational(-1);  // l(a,b) = (−1)^{|a|}[a,b]
      l.set({a, b}, std::move(v));
    }
  }
  DgAlgebra alg(std::move(complex), pres, {product_table(ext, pres.generator("c")), std::move(l)});

  if (!check_derivation(alg, "l").passed()) {
    throw ConstructionError("not a Lie bialgebra (compatibility fails): bracket is not a derivation of d");
  }
  std::vector<ValidationReport> reports{check_derivation(alg, "c"), check_symmetry(alg, "c"),
                                        check_symmetry(alg, "l")};
  for (const auto& rel : pres.relations()) reports.push_back(check_relation(alg, rel));
  if (auto failed = failure_summary(reports); !failed.empty()) {
    throw ConstructionError("Gerstenhaber extension fails the " + failed.front());
  }
  return alg;
}

// ---------------------------------------------------------------------------
// Hypercommutative arity 3

HVector koszul_deviation3(const DgAlgebra& ce, const DegreeMinus2Operator& i, std::size_t a, std::size_t b,
                          std::size_t c) {
  const auto& basis = ce.basis();
  auto mul = [&](const HVector& x, const HVector& y) {
    const HVector args[2] = {x, y};
    return evaluate(ce, "c", args);
  };
  const HVector A = HVector::unit(basis.degree(a), a);
  const HVector B = HVector::unit(basis.degree(b), b);
  const HVector C = HVector::unit(basis.degree(c), c);
  const HVector one = HVector::unit(0, basis.index_of("1"));
  const HVector ab = mul(A, B);
  const HVector ac = mul(A, C);
  const HVector bc = mul(B, C);
  const HVector abc = mul(ab, C);

  HVector out(basis.degree(a) + basis.degree(b) + basis.degree(c) + 2);
  out += i.apply(abc);
  out -= mul(i.apply(ab), C);
  HVector swapped = mul(i.apply(ac), B);
  if ((basis.degree(b) * basis.degree(c)) % 2 != 0) swapped *= Rational(-1);
  out -= swapped;
  out -= mul(A, i.apply(bc));
  out += mul(i.apply(A), bc);
  out += mul(mul(A, i.apply(B)), C);
  out += mul(ab, i.apply(C));
  out -= mul(i.apply(one), abc);
  return out;
}

DgAlgebra bv_trivialized_hypercom3(const DgAlgebra& ce, const DegreeMinus2Operator& i, const Hypercom3Gate& gate,
                                   const std::optional<MultilinearOp>& m3_override) {
  const auto& complex = ce.complex();
  const auto& basis = ce.basis();
  if (auto bad = chain_map_failures(complex, i); !bad.empty()) {
    throw ConstructionError("operator i is not a chain map at '" + basis[bad.front()].name + "'");
  }
  const Presentation pres = builtin("hypercom3");

  MultilinearOp m2(pres.generator("m2"));
  for (const auto& [t, v] : ce.op("c").sorted_entries()) m2.set(t, v);

  MultilinearOp m3(pres.generator("m3"));
  if (m3_override) {
    if (!(m3_override->generator() == pres.generator("m3"))) {
      throw UsageError("m3 override must carry the hypercom3 generator m3");
    }
    m3 = *m3_override;
  } else {
    for (std::size_t a = 0; a < basis.size(); ++a) {
      for (std::size_t b = 0; b < basis.size(); ++b) {
        for (std::size_t c = 0; c < basis.size(); ++c) m3.set({a, b, c}, koszul_deviation3(ce, i, a, b, c));
      }
    }
  }
  DgAlgebra alg(complex, pres, {std::move(m2), std::move(m3)});

  auto reject = [](const std::string& what) { throw ConstructionError("hypercommutative gate fails: " + what); };
  if (!check_symmetry(alg, "m3").passed()) reject("graded symmetry of m3");
  if (!check_derivation(alg, "m3").passed()) reject("m3 is not compatible with d");
  if (!check_relation(alg, pres.relation("hypercom"), std::span<const Tuple>(gate.relation_scope)).passed()) {
    reject("relation hypercom on the declared scope");
  }
  for (const auto& e : gate.values) {
    const Tuple t{basis.index_of(e.inputs[0]), basis.index_of(e.inputs[1]), basis.index_of(e.inputs[2])};
    const HVector actual = alg.op("m3").lookup(basis, t);
    HVector expected(actual.degree());
    for (const auto& [name, coeff] : e.value) expected.add(basis.index_of(name), coeff);
    if (!(actual == expected)) {
      reject("m3" + format_tuple(basis, t) + " = " + format(basis, actual) + ", expected " +
             format(basis, expected));
    }
  }
  if (!gate.products.empty()) {
    const Contraction k = build_contraction(complex, compute_homology(complex));
    auto unit = [&](const std::string& name) {
      const std::size_t idx = basis.index_of(name);
      const HVector u = HVector::unit(basis.degree(idx), idx);
      if (!complex.apply(u).is_zero()) throw UsageError("'" + name + "' is not a cycle");
      return u;
    };
    for (const auto& e : gate.products) {
      const HVector lhs_args[3] = {unit(e.m3_inputs[0]), unit(e.m3_inputs[1]), unit(e.m3_inputs[2])};
      const HVector rhs_args[2] = {unit(e.m2_inputs[0]), unit(e.m2_inputs[1])};
      if (!(k.project(evaluate(alg, "m3", lhs_args)) == k.project(evaluate(alg, "m2", rhs_args)))) {
        reject("homology product m3(" + e.m3_inputs[0] + ", " + e.m3_inputs[1] + ", " + e.m3_inputs[2] +
               ") differs from m2(" + e.m2_inputs[0] + ", " + e.m2_inputs[1] + ")");
      }
    }
  }
  return alg;
}

// ---------------------------------------------------------------------------
// Canned data

LieData heisenberg_lie() {
  LieData d = LieData::zero({"x", "y", "z"});
  d.set_bracket("x", "y", {{"z", Rational(1)}});
  return d;
}

LieBialgebraData heisenberg_bialgebra() {
  LieData dual = LieData::zero({"x", "y", "z"});
  dual.set_bracket("z", "x", {{"x", Rational(1)}});
  dual.set_bracket("z", "y", {{"x", Rational(1)}, {"y", Rational(1)}});
  return {heisenberg_lie(), dual};
}

LieData k2_plus_heisenberg_lie() {
  LieData d = LieData::zero({"v", "w", "x", "y", "z"});
  d.set_bracket("x", "y", {{"z", Rational(1)}});
  return d;
}

DegreeMinus2Operator heisenberg_i_operator(const GradedBasis& basis) {
  DegreeMinus2Operator op;
  for (std::size_t e = 0; e < basis.size(); ++e) op.images.emplace_back(basis.degree(e) + 2);
  const std::size_t y = basis.index_of("y");
  op.images[basis.index_of("vwx")] = HVector::unit(basis.degree(y), y);
  return op;
}

std::vector<std::string> heisenberg_hypercom_scope_names() {
  return {"x", "vw", "vx", "vy", "wx", "wy", "xz", "yz"};
}

Hypercom3Gate heisenberg_hypercom_gate(const GradedBasis& basis) {
  Hypercom3Gate gate;
  std::vector<std::size_t> scope;
  for (const auto& name : heisenberg_hypercom_scope_names()) scope.push_back(basis.index_of(name));
  for (auto a : scope) {
    for (auto b : scope) {
      for (auto c : scope) {
        for (auto d : scope) gate.relation_scope.push_back({a, b, c, d});
      }
    }
  }
  gate.values = {
      {{"vw", "vx", "x"}, {{"vxy", Rational(-1)}}},
      {{"vw", "wx", "x"}, {{"wxy", Rational(-1)}}},
      {{"vw", "xz", "x"}, {{"xyz", Rational(1)}}},
  };
  gate.products = {{{"vw", "xz", "x"}, {"x", "yz"}}};
  return gate;
}

DgAlgebra heisenberg_ce() { return chevalley_eilenberg(heisenberg_lie()); }

DgAlgebra heisenberg_gerstenhaber() { return gerstenhaber_from_bialgebra(heisenberg_bialgebra()); }

DgAlgebra heisenberg_hypercom() {
  const DgAlgebra ce = chevalley_eilenberg(k2_plus_heisenberg_lie());
  return bv_trivialized_hypercom3(ce, heisenberg_i_operator(ce.basis()), heisenberg_hypercom_gate(ce.basis()));
}

}  // namespace massey
