#include "massey/operads.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "massey/errors.hpp"

namespace massey {

// ---------------------------------------------------------------------------
// Permutation

Permutation::Permutation(std::vector<std::size_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (auto i : images_) {
    if (i >= images_.size() || seen[i]) throw UsageError("not a permutation");
    seen[i] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = i;
  return Permutation(std::move(img));
}

Permutation Permutation::from_one_based(std::span<const int> images) {
  std::vector<std::size_t> img;
  img.reserve(images.size());
  for (int v : images) {
    if (v < 1) throw UsageError("permutation images are 1-based");
    img.push_back(static_cast<std::size_t>(v - 1));
  }
  return Permutation(std::move(img));
}

Permutation Permutation::from_cycles(std::string_view text, std::size_t n) {
  Permutation result = identity(n);
  std::vector<std::vector<std::size_t>> cycles;
  std::vector<std::size_t>* current = nullptr;
  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '(') {
      if (current) throw UsageError("nested cycle in '" + std::string(text) + "'");
      cycles.emplace_back();
      current = &cycles.back();
      ++i;
    } else if (ch == ')') {
      if (!current) throw UsageError("unbalanced cycle in '" + std::string(text) + "'");
      current = nullptr;
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      if (!current) throw UsageError("cycle entry outside parentheses");
      std::size_t v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + static_cast<std::size_t>(text[i] - '0');
        ++i;
      }
      if (v < 1 || v > n) throw UsageError("cycle entry out of range");
      current->push_back(v - 1);
    } else {
      ++i;
    }
  }
  if (current) throw UsageError("unterminated cycle in '" + std::string(text) + "'");
  for (auto it = cycles.rbegin(); it != cycles.rend(); ++it) {
    const auto& cyc = *it;
    std::vector<std::size_t> img(n);
    for (std::size_t k = 0; k < n; ++k) img[k] = k;
    for (std::size_t k = 0; k < cyc.size(); ++k) img[cyc[k]] = cyc[(k + 1) % cyc.size()];
    // Cycles are applied right to left: the rightmost acts first.
    result = Permutation(std::move(img)).compose(result);
  }
  return result;
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = i;
  return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& other) const {
  if (other.size() != size()) throw UsageError("composing permutations of different sizes");
  std::vector<std::size_t> img(size());
  for (std::size_t i = 0; i < size(); ++i) img[i] = images_[other.images_[i]];
  return Permutation(std::move(img));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != i) return false;
  }
  return true;
}

int Permutation::parity() const {
  int p = 0;
  for (std::size_t s = 0; s < images_.size(); ++s) {
    for (std::size_t t = s + 1; t < images_.size(); ++t) {
      if (images_[s] > images_[t]) p ^= 1;
    }
  }
  return p;
}

std::vector<int> Permutation::one_based() const {
  std::vector<int> out;
  out.reserve(images_.size());
  for (auto i : images_) out.push_back(static_cast<int>(i) + 1);
  return out;
}

// ---------------------------------------------------------------------------
// Symmetry

std::string_view to_string(Symmetry s) {
  switch (s) {
    case Symmetry::none: return "none";
    case Symmetry::symmetric: return "symmetric";
    case Symmetry::antisymmetric: return "antisymmetric";
  }
  return "none";
}

Symmetry symmetry_from_string(std::string_view s) {
  if (s == "none") return Symmetry::none;
  if (s == "symmetric") return Symmetry::symmetric;
  if (s == "antisymmetric") return Symmetry::antisymmetric;
  throw UsageError("unknown symmetry '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Presentation

Presentation::Presentation(std::string name, std::vector<Generator> generators,
                           std::vector<Relation> relations)
    : name_(std::move(name)), generators_(std::move(generators)), relations_(std::move(relations)) {
  std::set<std::string> names;
  for (const auto& g : generators_) {
    if (g.arity < 1) throw UsageError("generator '" + g.name + "' has arity < 1");
    if (!names.insert(g.name).second) throw UsageError("duplicate generator '" + g.name + "'");
  }
  std::set<std::string> rel_names;
  for (const auto& rel : relations_) {
    if (!rel_names.insert(rel.name).second) throw UsageError("duplicate relation '" + rel.name + "'");
    if (rel.terms.empty()) throw UsageError("relation '" + rel.name + "' has no terms");
    for (const auto& t : rel.terms) {
      for (const Generator* g : {&t.outer, &t.inner}) {
        const Generator* declared = find_generator(g->name);
        if (!declared || !(*declared == *g)) {
          throw UsageError("relation '" + rel.name + "' references undeclared generator '" +
                           g->name + "'");
        }
      }
      if (t.slot < 1 || t.slot > t.outer.arity) {
        throw UsageError("relation '" + rel.name + "': slot out of range");
      }
      if (static_cast<int>(t.perm.size()) != t.arity()) {
        throw UsageError("relation '" + rel.name + "': permutation size differs from arity");
      }
      if (t.arity() != rel.arity() || t.degree() != rel.degree()) {
        throw UsageError("relation '" + rel.name + "' is not homogeneous");
      }
    }
  }
}

const Generator* Presentation::find_generator(std::string_view name) const {
  for (const auto& g : generators_) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

const Generator& Presentation::generator(std::string_view name) const {
  const Generator* g = find_generator(name);
  if (!g) throw UsageError("unknown generator '" + std::string(name) + "'");
  return *g;
}

const Relation& Presentation::relation(std::string_view name) const {
  for (const auto& r : relations_) {
    if (r.name == name) return r;
  }
  throw UsageError("unknown relation '" + std::string(name) + "'");
}

namespace {

RelationTerm term(Rational coeff, const Generator& outer, const Generator& inner, int slot,
                  std::string_view cycles = "()") {
  const auto n = static_cast<std::size_t>(outer.arity + inner.arity - 1);
  return RelationTerm{std::move(coeff), outer, inner, slot, Permutation::from_cycles(cycles, n)};
}

Relation associativity(const Generator& mu) {
  return {"associativity", {term(1, mu, mu, 1), term(-1, mu, mu, 2)}};
}

Relation jacobi(const Generator& l) {
  return {"jacobi", {term(1, l, l, 1), term(1, l, l, 1, "(1 2 3)"), term(1, l, l, 1, "(3 2 1)")}};
}

}  // namespace

Presentation builtin(std::string_view name) {
  if (name == "assoc") {
    const Generator mu{"mu", 2, 0, Symmetry::none};
    return Presentation("assoc", {mu}, {associativity(mu)});
  }
  if (name == "com") {
    const Generator c{"c", 2, 0, Symmetry::symmetric};
    return Presentation("com", {c}, {associativity(c)});
  }
  if (name == "lie") {
    const Generator l{"l", 2, 0, Symmetry::antisymmetric};
    return Presentation("lie", {l}, {jacobi(l)});
  }
  if (name == "gerstenhaber") {
    const Generator c{"c", 2, 0, Symmetry::symmetric};
    const Generator l{"l", 2, 1, Symmetry::symmetric};
    Relation leibniz{"gerstenhaber",
                     {term(1, l, c, 2), term(-1, c, l, 1), term(-1, c, l, 2, "(1 2)")}};
    return Presentation("gerstenhaber", {c, l}, {associativity(c), jacobi(l), std::move(leibniz)});
  }
  if (name == "hypercom3") {
    const Generator m2{"m2", 2, 0, Symmetry::symmetric};
    const Generator m3{"m3", 3, 2, Symmetry::symmetric};
    Relation rel{"hypercom",
                 {term(1, m3, m2, 1), term(1, m2, m3, 1, "(3 4)"), term(-1, m3, m2, 2),
                  term(-1, m2, m3, 2)}};
    return Presentation("hypercom3", {m2, m3}, {std::move(rel)});
  }
  throw UsageError("unknown builtin presentation '" + std::string(name) + "'");
}

std::vector<std::string> builtin_names() { return {"assoc", "com", "lie", "gerstenhaber", "hypercom3"}; }

// ---------------------------------------------------------------------------
// Signs

int alpha_sign(std::span<const int> degrees, const Permutation& sigma) {
  if (degrees.size() != sigma.size()) throw UsageError("alpha_sign: size mismatch");
  int p = 0;
  for (std::size_t s = 0; s < degrees.size(); ++s) {
    if ((degrees[s] & 1) == 0) continue;
    for (std::size_t t = s + 1; t < degrees.size(); ++t) {
      if ((degrees[t] & 1) && sigma(s) > sigma(t)) p ^= 1;
    }
  }
  return p;
}

int beta_sign(int op_degree, std::span<const int> degrees, int slot) {
  if (slot < 1 || slot > static_cast<int>(degrees.size())) throw UsageError("beta_sign: slot out of range");
  int p = op_degree & 1;
  for (int t = 0; t < slot - 1; ++t) p ^= degrees[static_cast<std::size_t>(t)] & 1;
  return p;
}

std::vector<int> permuted_degrees(std::span<const int> degrees, const Permutation& sigma) {
  if (degrees.size() != sigma.size()) throw UsageError("permuted_degrees: size mismatch");
  const Permutation inv = sigma.inverse();
  std::vector<int> out(degrees.size());
  for (std::size_t i = 0; i < degrees.size(); ++i) out[i] = degrees[inv(i)];
  return out;
}

namespace {

int prefix_parity(const RelationTerm& term, std::span<const int> degrees) {
  const auto args = permuted_degrees(degrees, term.perm);
  int p = 0;
  for (int m = 0; m < term.slot - 1; ++m) p ^= args[static_cast<std::size_t>(m)] & 1;
  return p;
}

}  // namespace

int gamma_sign(const RelationTerm& term, std::span<const int> degrees) {
  if (static_cast<int>(degrees.size()) != term.arity()) throw UsageError("gamma_sign: arity mismatch");
  const int prefix = prefix_parity(term, degrees);
  return (alpha_sign(degrees, term.perm) + term.outer.degree + (term.inner.degree - 1) * prefix) & 1;
}

int composite_sign(const RelationTerm& term, std::span<const int> degrees) {
  if (static_cast<int>(degrees.size()) != term.arity()) throw UsageError("composite_sign: arity mismatch");
  const int prefix = prefix_parity(term, degrees);
  return (alpha_sign(degrees, term.perm) + term.inner.degree * prefix) & 1;
}

}  // namespace massey
