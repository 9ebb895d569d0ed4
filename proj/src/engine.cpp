#include "massey/engine.hpp"

#include <random>

#include "massey/errors.hpp"

namespace massey {

bool VanishingReport::defined() const {
  for (const auto& t : terms) {
    if (!t.vanishes()) return false;
  }
  return true;
}

MasseyEngine::MasseyEngine(DgAlgebra algebra) : algebra_(std::move(algebra)) {
  const Homology homology = compute_homology(algebra_.complex());
  contraction_ = build_contraction(algebra_.complex(), homology);
}

HomologyClass MasseyEngine::class_of(const HVector& cycle) const {
  require_homogeneous(algebra_.basis(), cycle);
  if (!algebra_.complex().apply(cycle).is_zero()) {
    throw UsageError("'" + format(algebra_.basis(), cycle) + "' is not a cycle");
  }
  return contraction_.project(cycle);
}

HomologyClass MasseyEngine::induced(std::string_view generator, std::span<const HomologyClass> classes) const {
  std::vector<HVector> args;
  for (const auto& x : classes) {
    require_homogeneous(homology_basis(), x);
    args.push_back(contraction_.include(x));
  }
  return class_of(evaluate(algebra_, generator, args));
}

void MasseyEngine::validate_problem(const MasseyProblem& problem) const {
  if (problem.relation.terms.empty()) throw UsageError("relation has no terms");
  if (static_cast<int>(problem.inputs.size()) != problem.relation.arity()) {
    throw UsageError("relation '" + problem.relation.name + "' takes " +
                     std::to_string(problem.relation.arity()) + " inputs, got " +
                     std::to_string(problem.inputs.size()));
  }
  for (const auto& x : problem.inputs) require_homogeneous(homology_basis(), x);
}

int MasseyEngine::massey_degree(const MasseyProblem& problem) const {
  int d = problem.relation.degree() + 1;
  for (const auto& x : problem.inputs) d += x.degree();
  return d;
}

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  Rational small() { return Rational(static_cast<long>(rng_() % 7) - 3); }

 private:
  std::mt19937_64 rng_;
};

HVector random_combination(Sampler& s, std::span<const HVector> vectors, int degree) {
  HVector out(degree);
  for (const auto& v : vectors) out.add_scaled(v, s.small());
  return out;
}

std::vector<HVector> cycle_basis(const GradedComplex& complex, int degree) {
  std::vector<HVector> out;
  for (const auto& v : kernel_basis(complex.matrix(degree))) out.push_back(from_dense(complex.basis(), degree, v));
  return out;
}

std::vector<HVector> chain_basis(const GradedBasis& basis, int degree) {
  std::vector<HVector> out;
  for (auto i : basis.in_degree(degree)) out.push_back(HVector::unit(degree, i));
  return out;
}

}  // namespace

Choices MasseyEngine::canonical_choices(const MasseyProblem& problem) const {
  validate_problem(problem);
  Choices c;
  for (const auto& x : problem.inputs) c.cocycles.push_back(contraction_.include(x));
  for (std::size_t t = 0; t < problem.relation.terms.size(); ++t) {
    c.bounding_chains.push_back(bounding_chain(problem, t, c.cocycles, ChainMode::canonical));
  }
  return c;
}

Choices MasseyEngine::random_choices(const MasseyProblem& problem, std::uint64_t seed) const {
  validate_problem(problem);
  Sampler sampler(seed);
  const auto& complex = algebra_.complex();
  Choices c;
  for (const auto& x : problem.inputs) {
    HVector y = contraction_.include(x);
    const int deg = x.degree();
    const HVector w = random_combination(sampler, chain_basis(complex.basis(), deg + 1), deg + 1);
    y += complex.apply(w);
    c.cocycles.push_back(std::move(y));
  }
  for (std::size_t t = 0; t < problem.relation.terms.size(); ++t) {
    c.bounding_chains.push_back(
        bounding_chain(problem, t, c.cocycles, ChainMode::random, seed * 1000003u + t + 1));
  }
  return c;
}

VanishingReport MasseyEngine::check_vanishing(const MasseyProblem& problem) const {
  validate_problem(problem);
  std::vector<HVector> cocycles;
  for (const auto& x : problem.inputs) cocycles.push_back(contraction_.include(x));
  return check_vanishing(problem, cocycles);
}

VanishingReport MasseyEngine::check_vanishing(const MasseyProblem& problem,
                                              std::span<const HVector> cocycles) const {
  VanishingReport report;
  for (std::size_t t = 0; t < problem.relation.terms.size(); ++t) {
    TermVanishing tv;
    tv.term = t;
    tv.composite = inner_composite(algebra_, problem.relation.terms[t], cocycles);
    tv.is_cycle = algebra_.complex().apply(tv.composite).is_zero();
    tv.homology_class = contraction_.project(tv.composite);
    report.terms.push_back(std::move(tv));
  }
  return report;
}

HVector MasseyEngine::bounding_chain(const MasseyProblem& problem, std::size_t term,
                                     std::span<const HVector> cocycles, ChainMode mode,
                                     std::uint64_t seed) const {
  const auto& rel_term = problem.relation.terms.at(term);
  const HVector z = inner_composite(algebra_, rel_term, cocycles);
  const auto& complex = algebra_.complex();
  if (!complex.apply(z).is_zero() || !contraction_.project(z).is_zero()) {
    throw UndefinedMasseyError("Massey product undefined: term " + std::to_string(term + 1) + " (" +
                               rel_term.outer.name + " ∘" + std::to_string(rel_term.slot) + " " +
                               rel_term.inner.name + ") has composite class " +
                               format(homology_basis(), contraction_.project(z)));
  }
  HVector rho = z.is_zero() ? HVector(z.degree() + 1) : contraction_.homotopy(z);
  if (!(complex.apply(rho) == z)) {
    throw InvariantViolation("bounding chain does not bound its composite");
  }
  if (mode == ChainMode::random) {
    Sampler sampler(seed);
    rho += random_combination(sampler, cycle_basis(complex, z.degree() + 1), z.degree() + 1);
  }
  return rho;
}

void MasseyEngine::validate_choices(const MasseyProblem& problem, const Choices& choices) const {
  validate_problem(problem);
  const auto& complex = algebra_.complex();
  if (choices.cocycles.size() != problem.inputs.size()) throw UsageError("one cocycle per input required");
  if (choices.bounding_chains.size() != problem.relation.terms.size()) {
    throw UsageError("one bounding chain per relation term required");
  }
  for (std::size_t i = 0; i < problem.inputs.size(); ++i) {
    const auto& y = choices.cocycles[i];
    require_homogeneous(algebra_.basis(), y);
    if (!complex.apply(y).is_zero()) throw UsageError("chosen y_" + std::to_string(i + 1) + " is not a cycle");
    if (!(contraction_.project(y) == problem.inputs[i])) {
      throw UsageError("chosen y_" + std::to_string(i + 1) + " does not represent x_" + std::to_string(i + 1));
    }
  }
  for (std::size_t t = 0; t < problem.relation.terms.size(); ++t) {
    const HVector z = inner_composite(algebra_, problem.relation.terms[t], choices.cocycles);
    if (!(complex.apply(choices.bounding_chains[t]) == z)) {
      throw UsageError("chosen ρ for term " + std::to_string(t + 1) + " does not bound its composite");
    }
  }
}

HVector MasseyEngine::representative(const MasseyProblem& problem, const Choices& choices) const {
  HVector rep(massey_degree(problem));
  for (std::size_t t = 0; t < problem.relation.terms.size(); ++t) {
    rep += evaluate_term(algebra_, problem.relation.terms[t], choices.cocycles, &choices.bounding_chains[t]);
  }
  if (!rep.is_zero() && rep.degree() != massey_degree(problem)) {
    throw InvariantViolation("Massey representative has degree " + std::to_string(rep.degree()) +
                             ", expected " + std::to_string(massey_degree(problem)));
  }
  if (!algebra_.complex().apply(rep).is_zero()) {
    throw InvariantViolation("Massey representative is not a cycle: d = " +
                             format(algebra_.basis(), algebra_.complex().apply(rep)));
  }
  return rep;
}

std::vector<HomologyClass> MasseyEngine::indeterminacy(const MasseyProblem& problem) const {
  validate_problem(problem);
  const int degree = massey_degree(problem);
  std::vector<HVector> y;
  for (const auto& x : problem.inputs) y.push_back(contraction_.include(x));
  const auto& hb = homology_basis();

  std::vector<HomologyClass> spanning;
  for (const auto& term : problem.relation.terms) {
    const Permutation inv = term.perm.inverse();
    int slot_degree = term.inner.degree + 1;
    for (int j = 0; j < term.inner.arity; ++j) {
      slot_degree += problem.inputs[inv(static_cast<std::size_t>(term.slot - 1 + j))].degree();
    }
    for (auto u : hb.in_degree(slot_degree)) {
      const HVector cycle = contraction_.include(HVector::unit(slot_degree, u));
      const HVector value = evaluate_term(algebra_, term, y, &cycle);
      spanning.push_back(class_of(value));
    }
  }
  return canonical_classes(hb, degree, spanning);
}

Coset MasseyEngine::massey_product(const MasseyProblem& problem) const {
  return massey_product(problem, canonical_choices(problem));
}

Coset MasseyEngine::massey_product(const MasseyProblem& problem, const Choices& choices) const {
  validate_choices(problem, choices);
  Coset c;
  c.degree = massey_degree(problem);
  c.representative = contraction_.project(representative(problem, choices));
  c.representative = HomologyClass(c.degree, c.representative.terms());
  c.indeterminacy = indeterminacy(problem);
  return c;
}

HomologyClass MasseyEngine::transfer_value(const MasseyProblem& problem) const {
  const HVector rep = representative(problem, canonical_choices(problem));
  return HomologyClass(massey_degree(problem), contraction_.project(rep).terms());
}

// ---------------------------------------------------------------------------
// Coset arithmetic

std::vector<HomologyClass> canonical_classes(const GradedBasis& hb, int degree,
                                             std::span<const HomologyClass> classes) {
  std::vector<Vector> dense;
  for (const auto& c : classes) {
    if (!c.is_zero() && c.degree() != degree) throw UsageError("class of the wrong degree");
    dense.push_back(to_dense(hb, HomologyClass(degree, c.terms())));
  }
  std::vector<HomologyClass> out;
  for (const auto& row : canonical_span(dense, hb.dimension(degree))) out.push_back(from_dense(hb, degree, row));
  return out;
}

namespace {

void require_degree(const Coset& coset, const HomologyClass& cls) {
  if (!cls.is_zero() && cls.degree() != coset.degree) {
    throw UsageError("class of degree " + std::to_string(cls.degree()) + " compared with a coset of degree " +
                     std::to_string(coset.degree));
  }
}

std::vector<Vector> dense_all(const GradedBasis& hb, int degree, std::span<const HomologyClass> v) {
  std::vector<Vector> out;
  for (const auto& c : v) out.push_back(to_dense(hb, HomologyClass(degree, c.terms())));
  return out;
}

}  // namespace

bool coset_contains(const GradedBasis& hb, const Coset& coset, const HomologyClass& cls) {
  require_degree(coset, cls);
  const HomologyClass diff = HomologyClass(coset.degree, cls.terms()) - coset.representative;
  const auto span = dense_all(hb, coset.degree, coset.indeterminacy);
  return membership(span, to_dense(hb, HomologyClass(coset.degree, diff.terms())), hb.dimension(coset.degree))
      .has_value();
}

bool coset_equal(const GradedBasis& hb, const Coset& a, const Coset& b) {
  if (a.degree != b.degree) throw UsageError("comparing cosets of different degrees");
  const std::size_t dim = hb.dimension(a.degree);
  const auto sa = canonical_span(dense_all(hb, a.degree, a.indeterminacy), dim);
  const auto sb = canonical_span(dense_all(hb, b.degree, b.indeterminacy), dim);
  if (sa != sb) return false;
  return coset_contains(hb, a, b.representative) && coset_contains(hb, b, a.representative);
}

AffineIntersection coset_intersect_subspace(const GradedBasis& hb, const Coset& coset,
                                            std::span<const HomologyClass> subspace) {
  for (const auto& s : subspace) require_degree(coset, s);
  const int degree = coset.degree;
  const std::size_t dim = hb.dimension(degree);
  const auto ind = dense_all(hb, degree, coset.indeterminacy);
  const auto sub = dense_all(hb, degree, subspace);

  // Σ b_k S_k − Σ a_j I_j = representative.
  std::vector<Vector> cols;
  for (const auto& v : ind) cols.push_back(Rational(-1) * v);
  cols.insert(cols.end(), sub.begin(), sub.end());
  const Matrix system = Matrix::from_columns(cols, dim);
  const Vector rhs = to_dense(hb, HomologyClass(degree, coset.representative.terms()));

  AffineIntersection out;
  const auto x = solve(system, rhs);
  if (!x) return out;
  out.empty = false;
  Vector point(dim);
  for (std::size_t k = 0; k < sub.size(); ++k) point = point + (*x)[ind.size() + k] * sub[k];
  out.point = from_dense(hb, degree, point);

  std::vector<Vector> directions;
  for (const auto& kv : kernel_basis(system)) {
    Vector d(dim);
    for (std::size_t k = 0; k < sub.size(); ++k) d = d + kv[ind.size() + k] * sub[k];
    directions.push_back(std::move(d));
  }
  for (const auto& row : canonical_span(directions, dim)) out.directions.push_back(from_dense(hb, degree, row));
  return out;
}

}  // namespace massey
