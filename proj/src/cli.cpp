#include "massey/cli.hpp"

#include <algorithm>
#include <sstream>

#include "massey/construct.hpp"

namespace massey::cli {

bool operator==(const Query& a, const Query& b) {
  auto same_choices = [](const std::optional<Choices>& x, const std::optional<Choices>& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x || (x->cocycles == y->cocycles && x->bounding_chains == y->bounding_chains);
  };
  return a.name == b.name && a.relation == b.relation && a.inputs == b.inputs && a.subspace == b.subspace &&
         a.seed == b.seed && same_choices(a.choices, b.choices);
}

bool operator==(const Document& a, const Document& b) {
  return a.grading == b.grading && a.construct == b.construct && a.construct_params == b.construct_params &&
         a.algebra == b.algebra && a.scopes == b.scopes && a.queries == b.queries;
}

namespace {

constexpr const char* kFormat = "massey-document/1";

// Degrees are an involution between the two conventions.
int convert(Grading g, int degree) { return g == Grading::cohomological ? -degree : degree; }

const char* grading_name(Grading g) { return g == Grading::cohomological ? "cohomological" : "homological"; }

Json degree_json(int homological) { return Json{{"homological", homological}, {"cohomological", -homological}}; }

// ---------------------------------------------------------------------------
// Reading

const Json& require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path, std::string("missing field '") + key + "'");
  return *it;
}

const Json* optional_field(const Json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::string get_string(const Json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a string");
  return v.get<std::string>();
}

long get_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
  return v.get<long>();
}

const Json& get_array(const Json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array");
  return v;
}

Rational get_rational(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (!v.is_string()) throw SchemaError(path, "expected a rational as a string such as \"-3/2\"");
  try {
    return Rational::parse(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, "malformed rational \"" + v.get<std::string>() + "\"");
  }
}

std::size_t basis_index(const GradedBasis& basis, const std::string& name, const std::string& path) {
  auto idx = basis.find(name);
  if (!idx) throw SchemaError(path, "unknown basis element '" + name + "'");
  return *idx;
}

/// A basis name or a {name: coefficient} map.
HVector get_vector(const Json& v, const GradedBasis& basis, std::optional<int> degree, const std::string& path) {
  if (v.is_string()) {
    const std::size_t i = basis_index(basis, v.get<std::string>(), path);
    if (degree && basis.degree(i) != *degree) throw SchemaError(path, "element has the wrong degree");
    return HVector::unit(basis.degree(i), i);
  }
  if (!v.is_object()) throw SchemaError(path, "expected a basis name or a {name: coefficient} object");
  std::optional<int> deg = degree;
  HVector out(deg.value_or(0));
  for (const auto& [name, coeff] : v.items()) {
    const std::string p = path + "." + name;
    const std::size_t i = basis_index(basis, name, p);
    if (!deg) {
      deg = basis.degree(i);
      out = HVector(*deg);
    }
    if (basis.degree(i) != *deg) throw SchemaError(p, "vector mixes degrees");
    out.add(i, get_rational(coeff, p));
  }
  return out;
}

std::vector<HVector> get_vectors(const Json& v, const GradedBasis& basis, const std::string& path) {
  std::vector<HVector> out;
  const Json& arr = get_array(v, path);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    out.push_back(get_vector(arr[k], basis, std::nullopt, path + "[" + std::to_string(k) + "]"));
  }
  return out;
}

Presentation get_presentation(const Json& v, Grading g, const std::string& path) {
  if (v.is_string()) {
    try {
      return builtin(v.get<std::string>());
    } catch (const UsageError& e) {
      throw SchemaError(path, e.what());
    }
  }
  const std::string name = get_string(require(v, "name", path), path + ".name");
  std::vector<Generator> gens;
  const Json& ga = get_array(require(v, "generators", path), path + ".generators");
  for (std::size_t k = 0; k < ga.size(); ++k) {
    const std::string p = path + ".generators[" + std::to_string(k) + "]";
    Generator gen;
    gen.name = get_string(require(ga[k], "name", p), p + ".name");
    gen.arity = static_cast<int>(get_int(require(ga[k], "arity", p), p + ".arity"));
    gen.degree = convert(g, static_cast<int>(get_int(require(ga[k], "degree", p), p + ".degree")));
    if (auto s = optional_field(ga[k], "symmetry")) {
      try {
        gen.symmetry = symmetry_from_string(get_string(*s, p + ".symmetry"));
      } catch (const UsageError& e) {
        throw SchemaError(p + ".symmetry", e.what());
      }
    }
    gens.push_back(std::move(gen));
  }
  auto find_gen = [&](const std::string& n, const std::string& p) {
    for (const auto& gen : gens) {
      if (gen.name == n) return gen;
    }
    throw SchemaError(p, "unknown generator '" + n + "'");
  };
  std::vector<Relation> rels;
  const Json& ra = get_array(require(v, "relations", path), path + ".relations");
  for (std::size_t k = 0; k < ra.size(); ++k) {
    const std::string p = path + ".relations[" + std::to_string(k) + "]";
    Relation rel;
    rel.name = get_string(require(ra[k], "name", p), p + ".name");
    const Json& ta = get_array(require(ra[k], "terms", p), p + ".terms");
    for (std::size_t t = 0; t < ta.size(); ++t) {
      const std::string tp = p + ".terms[" + std::to_string(t) + "]";
      RelationTerm term;
      term.coefficient = get_rational(require(ta[t], "coefficient", tp), tp + ".coefficient");
      term.outer = find_gen(get_string(require(ta[t], "outer", tp), tp + ".outer"), tp + ".outer");
      term.inner = find_gen(get_string(require(ta[t], "inner", tp), tp + ".inner"), tp + ".inner");
      term.slot = static_cast<int>(get_int(require(ta[t], "slot", tp), tp + ".slot"));
      std::vector<int> images;
      const Json& pa = get_array(require(ta[t], "perm", tp), tp + ".perm");
      for (const auto& x : pa) images.push_back(static_cast<int>(get_int(x, tp + ".perm")));
      try {
        term.perm = Permutation::from_one_based(images);
      } catch (const UsageError& e) {
        throw SchemaError(tp + ".perm", e.what());
      }
      rel.terms.push_back(std::move(term));
    }
    rels.push_back(std::move(rel));
  }
  try {
    return Presentation(name, std::move(gens), std::move(rels));
  } catch (const UsageError& e) {
    throw SchemaError(path, e.what());
  }
}

DgAlgebra get_explicit_algebra(const Json& v, const Presentation& pres, Grading g, const std::string& path) {
  std::vector<BasisElement> elements;
  const Json& ba = get_array(require(v, "basis", path), path + ".basis");
  for (std::size_t k = 0; k < ba.size(); ++k) {
    const std::string p = path + ".basis[" + std::to_string(k) + "]";
    elements.push_back({get_string(require(ba[k], "name", p), p + ".name"),
                        convert(g, static_cast<int>(get_int(require(ba[k], "degree", p), p + ".degree")))});
  }
  GradedBasis basis;
  try {
    basis = GradedBasis(std::move(elements));
  } catch (const UsageError& e) {
    throw SchemaError(path + ".basis", e.what());
  }
  std::vector<HVector> d;
  for (std::size_t i = 0; i < basis.size(); ++i) d.emplace_back(basis.degree(i) - 1);
  if (auto diff = optional_field(v, "differential")) {
    if (!diff->is_object()) throw SchemaError(path + ".differential", "expected an object");
    for (const auto& [name, image] : diff->items()) {
      const std::string p = path + ".differential." + name;
      const std::size_t i = basis_index(basis, name, p);
      d[i] = get_vector(image, basis, basis.degree(i) - 1, p);
    }
  }
  GradedComplex complex;
  try {
    complex = GradedComplex(basis, std::move(d));
  } catch (const UsageError& e) {
    throw SchemaError(path + ".differential", e.what());
  }
  const Json& ops_json = require(v, "operations", path);
  std::vector<MultilinearOp> ops;
  for (const auto& gen : pres.generators()) {
    const std::string p = path + ".operations." + gen.name;
    const Json& oj = require(ops_json, gen.name.c_str(), path + ".operations");
    bool compressed = false;
    if (auto c = optional_field(oj, "orbit_compressed")) {
      if (!c->is_boolean()) throw SchemaError(p + ".orbit_compressed", "expected a boolean");
      compressed = c->get<bool>();
    }
    MultilinearOp op(gen, compressed);
    const Json& ea = get_array(require(oj, "entries", p), p + ".entries");
    for (std::size_t k = 0; k < ea.size(); ++k) {
      const std::string ep = p + ".entries[" + std::to_string(k) + "]";
      Tuple t;
      int degree = gen.degree;
      for (const auto& name : get_array(require(ea[k], "inputs", ep), ep + ".inputs")) {
        t.push_back(basis_index(basis, get_string(name, ep + ".inputs"), ep + ".inputs"));
        degree += basis.degree(t.back());
      }
      try {
        op.set(t, get_vector(require(ea[k], "output", ep), basis, degree, ep + ".output"));
      } catch (const UsageError& e) {
        if (dynamic_cast<const SchemaError*>(&e)) throw;
        throw SchemaError(ep, e.what());
      }
    }
    ops.push_back(std::move(op));
  }
  try {
    return DgAlgebra(std::move(complex), pres, std::move(ops));
  } catch (const UsageError& e) {
    throw SchemaError(path, e.what());
  }
}

LieData get_lie(const Json& v, const std::string& path) {
  std::vector<std::string> names;
  for (const auto& n : get_array(require(v, "generators", path), path + ".generators")) {
    names.push_back(get_string(n, path + ".generators"));
  }
  LieData data = LieData::zero(names);
  if (auto br = optional_field(v, "brackets")) {
    const Json& arr = get_array(*br, path + ".brackets");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string p = path + ".brackets[" + std::to_string(k) + "]";
      std::vector<std::pair<std::string, Rational>> value;
      const Json& val = require(arr[k], "value", p);
      if (!val.is_object()) throw SchemaError(p + ".value", "expected an object");
      for (const auto& [name, coeff] : val.items()) value.emplace_back(name, get_rational(coeff, p + ".value." + name));
      try {
        data.set_bracket(get_string(require(arr[k], "a", p), p + ".a"), get_string(require(arr[k], "b", p), p + ".b"),
                         value);
      } catch (const UsageError& e) {
        throw SchemaError(p, e.what());
      }
    }
  }
  return data;
}

DgAlgebra build_directive(const std::string& name, const Json& params, const std::map<std::string, ScopeSpec>& scopes,
                          const std::string& path) {
  if (name == "heisenberg-ce") return heisenberg_ce();
  if (name == "heisenberg-gerstenhaber") return heisenberg_gerstenhaber();
  if (name == "heisenberg-hypercom") return heisenberg_hypercom();
  if (name == "chevalley-eilenberg") {
    const LieData lie = get_lie(require(params, "lie", path), path + ".lie");
    std::size_t max_length = std::numeric_limits<std::size_t>::max();
    if (auto m = optional_field(params, "max_length")) {
      const long n = get_int(*m, path + ".max_length");
      if (n < 0) throw SchemaError(path + ".max_length", "must be non-negative");
      max_length = static_cast<std::size_t>(n);
    }
    return chevalley_eilenberg(lie, max_length);
  }
  if (name == "gerstenhaber-from-bialgebra") {
    return gerstenhaber_from_bialgebra({get_lie(require(params, "lie", path), path + ".lie"),
                                        get_lie(require(params, "dual_bracket", path), path + ".dual_bracket")});
  }
  if (name == "bv-hypercom3") {
    const DgAlgebra ce = chevalley_eilenberg(get_lie(require(params, "lie", path), path + ".lie"));
    const auto& basis = ce.basis();
    DegreeMinus2Operator i;
    for (std::size_t e = 0; e < basis.size(); ++e) i.images.emplace_back(basis.degree(e) + 2);
    const Json& ij = require(params, "i", path);
    if (!ij.is_object()) throw SchemaError(path + ".i", "expected an object");
    for (const auto& [src, image] : ij.items()) {
      const std::size_t e = basis_index(basis, src, path + ".i." + src);
      i.images[e] = get_vector(image, basis, basis.degree(e) + 2, path + ".i." + src);
    }
    Hypercom3Gate gate;
    if (auto it = scopes.find("hypercom"); it != scopes.end()) {
      gate.relation_scope = resolve_scope(basis, it->second, 4);
    }
    if (auto gj = optional_field(params, "gate")) {
      const std::string gp = path + ".gate";
      if (auto vals = optional_field(*gj, "values")) {
        const Json& arr = get_array(*vals, gp + ".values");
        for (std::size_t k = 0; k < arr.size(); ++k) {
          const std::string p = gp + ".values[" + std::to_string(k) + "]";
          CochainExpectation ex;
          const Json& in = get_array(require(arr[k], "inputs", p), p + ".inputs");
          if (in.size() != 3) throw SchemaError(p + ".inputs", "expected three inputs");
          for (std::size_t j = 0; j < 3; ++j) {
            ex.inputs[j] = get_string(in[j], p + ".inputs");
            basis_index(basis, ex.inputs[j], p + ".inputs");
          }
          const Json& out = require(arr[k], "output", p);
          if (!out.is_object()) throw SchemaError(p + ".output", "expected an object");
          for (const auto& [n, c] : out.items()) {
            basis_index(basis, n, p + ".output." + n);
            ex.value.emplace_back(n, get_rational(c, p + ".output." + n));
          }
          gate.values.push_back(std::move(ex));
        }
      }
      if (auto prods = optional_field(*gj, "products")) {
        const Json& arr = get_array(*prods, gp + ".products");
        for (std::size_t k = 0; k < arr.size(); ++k) {
          const std::string p = gp + ".products[" + std::to_string(k) + "]";
          HomologyExpectation ex;
          const Json& a = get_array(require(arr[k], "m3", p), p + ".m3");
          const Json& b = get_array(require(arr[k], "m2", p), p + ".m2");
          if (a.size() != 3 || b.size() != 2) throw SchemaError(p, "expected three m3 and two m2 inputs");
          for (std::size_t j = 0; j < 3; ++j) ex.m3_inputs[j] = get_string(a[j], p + ".m3");
          for (std::size_t j = 0; j < 2; ++j) ex.m2_inputs[j] = get_string(b[j], p + ".m2");
          gate.products.push_back(std::move(ex));
        }
      }
    }
    std::optional<MultilinearOp> override_op;
    if (auto ov = optional_field(params, "m3_override")) {
      const std::string p = path + ".m3_override";
      MultilinearOp op(builtin("hypercom3").generator("m3"));
      const Json& arr = get_array(require(*ov, "entries", p), p + ".entries");
      for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string ep = p + ".entries[" + std::to_string(k) + "]";
        Tuple t;
        int degree = 2;
        for (const auto& n : get_array(require(arr[k], "inputs", ep), ep + ".inputs")) {
          t.push_back(basis_index(basis, get_string(n, ep + ".inputs"), ep + ".inputs"));
          degree += basis.degree(t.back());
        }
        if (t.size() != 3) throw SchemaError(ep + ".inputs", "expected three inputs");
        op.set(t, get_vector(require(arr[k], "output", ep), basis, degree, ep + ".output"));
      }
      override_op = std::move(op);
    }
    return bv_trivialized_hypercom3(ce, i, gate, override_op);
  }
  throw SchemaError(path + ".construct", "unknown construction '" + name + "'");
}

ScopeSpec get_scope(const Json& v, const std::string& path) {
  ScopeSpec spec;
  if (auto c = optional_field(v, "cartesian")) {
    for (const auto& n : get_array(*c, path + ".cartesian")) spec.cartesian.push_back(get_string(n, path + ".cartesian"));
  }
  if (auto t = optional_field(v, "tuples")) {
    for (const auto& row : get_array(*t, path + ".tuples")) {
      std::vector<std::string> names;
      for (const auto& n : get_array(row, path + ".tuples")) names.push_back(get_string(n, path + ".tuples"));
      spec.tuples.push_back(std::move(names));
    }
  }
  if (spec.cartesian.empty() && spec.tuples.empty()) throw SchemaError(path, "scope needs 'cartesian' or 'tuples'");
  return spec;
}

// ---------------------------------------------------------------------------
// Writing

Json vector_json(const GradedBasis& basis, const HVector& v) {
  Json out = Json::object();
  for (const auto& [i, c] : v.terms()) out[basis[i].name] = c.str();
  return out;
}

Json presentation_json(const Presentation& pres, Grading g) {
  for (const auto& name : builtin_names()) {
    if (builtin(name) == pres) return name;
  }
  Json gens = Json::array();
  for (const auto& gen : pres.generators()) {
    gens.push_back(Json{{"name", gen.name},
                        {"arity", gen.arity},
                        {"degree", convert(g, gen.degree)},
                        {"symmetry", std::string(to_string(gen.symmetry))}});
  }
  Json rels = Json::array();
  for (const auto& rel : pres.relations()) {
    Json terms = Json::array();
    for (const auto& t : rel.terms) {
      terms.push_back(Json{{"coefficient", t.coefficient.str()},
                           {"outer", t.outer.name},
                           {"inner", t.inner.name},
                           {"slot", t.slot},
                           {"perm", t.perm.one_based()}});
    }
    rels.push_back(Json{{"name", rel.name}, {"terms", terms}});
  }
  return Json{{"name", pres.name()}, {"generators", gens}, {"relations", rels}};
}

Json algebra_json(const DgAlgebra& alg, Grading g) {
  const auto& basis = alg.basis();
  Json b = Json::array();
  for (const auto& e : basis.elements()) b.push_back(Json{{"name", e.name}, {"degree", convert(g, e.degree)}});
  Json d = Json::object();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (!alg.complex().d(i).is_zero()) d[basis[i].name] = vector_json(basis, alg.complex().d(i));
  }
  Json ops = Json::object();
  for (const auto& op : alg.ops()) {
    Json entries = Json::array();
    for (const auto& [t, v] : op.sorted_entries()) {
      Json inputs = Json::array();
      for (auto i : t) inputs.push_back(basis[i].name);
      entries.push_back(Json{{"inputs", inputs}, {"output", vector_json(basis, v)}});
    }
    ops[op.generator().name] = Json{{"orbit_compressed", op.orbit_compressed()}, {"entries", entries}};
  }
  return Json{{"basis", b}, {"differential", d}, {"operations", ops}};
}

Json scope_json(const ScopeSpec& spec) {
  Json out = Json::object();
  if (!spec.cartesian.empty()) out["cartesian"] = spec.cartesian;
  if (!spec.tuples.empty()) out["tuples"] = spec.tuples;
  return out;
}

}  // namespace

std::vector<Tuple> resolve_scope(const GradedBasis& basis, const ScopeSpec& spec, std::size_t arity) {
  std::vector<Tuple> out;
  for (const auto& row : spec.tuples) {
    if (row.size() != arity) throw SchemaError("$.scopes", "tuple length differs from the relation arity");
    Tuple t;
    for (const auto& n : row) t.push_back(basis_index(basis, n, "$.scopes"));
    out.push_back(std::move(t));
  }
  if (!spec.cartesian.empty()) {
    std::vector<std::size_t> idx;
    for (const auto& n : spec.cartesian) idx.push_back(basis_index(basis, n, "$.scopes"));
    const std::size_t n = idx.size();
    std::size_t total = 1;
    for (std::size_t k = 0; k < arity; ++k) total *= n;
    Tuple t(arity, 0);
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      for (std::size_t pos = arity; pos-- > 0;) {
        t[pos] = idx[c % n];
        c /= n;
      }
      out.push_back(t);
    }
  }
  return out;
}

Document parse_document(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("$", e.what());
  }
  if (!root.is_object()) throw SchemaError("$", "document must be a JSON object");
  if (auto f = optional_field(root, "format"); f && get_string(*f, "$.format") != kFormat) {
    throw SchemaError("$.format", "unsupported document format '" + f->get<std::string>() + "'");
  }
  Document doc;
  const std::string grading = get_string(require(root, "grading", "$"), "$.grading");
  if (grading == "cohomological") {
    doc.grading = Grading::cohomological;
  } else if (grading == "homological") {
    doc.grading = Grading::homological;
  } else {
    throw SchemaError("$.grading", "expected \"cohomological\" or \"homological\"");
  }

  if (auto s = optional_field(root, "scopes")) {
    if (!s->is_object()) throw SchemaError("$.scopes", "expected an object");
    for (const auto& [rel, spec] : s->items()) doc.scopes[rel] = get_scope(spec, "$.scopes." + rel);
  }

  const Json& alg = require(root, "algebra", "$");
  if (!alg.is_object()) throw SchemaError("$.algebra", "expected an object");
  if (auto c = optional_field(alg, "construct")) {
    doc.construct = get_string(*c, "$.algebra.construct");
    for (const auto& [k, v] : alg.items()) {
      if (k != "construct") doc.construct_params[k] = v;
    }
    doc.algebra = build_directive(*doc.construct, doc.construct_params, doc.scopes, "$.algebra");
    if (auto p = optional_field(root, "presentation")) {
      const Presentation declared = get_presentation(*p, doc.grading, "$.presentation");
      if (!(declared == doc.algebra.presentation())) {
        throw SchemaError("$.presentation", "construction '" + *doc.construct + "' produces presentation '" +
                                                doc.algebra.presentation().name() + "'");
      }
    }
  } else {
    const Presentation pres = get_presentation(require(root, "presentation", "$"), doc.grading, "$.presentation");
    doc.algebra = get_explicit_algebra(alg, pres, doc.grading, "$.algebra");
  }

  const auto& basis = doc.algebra.basis();
  const auto& pres = doc.algebra.presentation();
  for (auto& [rel, spec] : doc.scopes) {
    std::vector<std::string> all = spec.cartesian;
    for (const auto& row : spec.tuples) all.insert(all.end(), row.begin(), row.end());
    for (const auto& n : all) basis_index(basis, n, "$.scopes." + rel);
    const Relation* r = nullptr;
    for (const auto& x : pres.relations()) {
      if (x.name == rel) r = &x;
    }
    if (!r) throw SchemaError("$.scopes." + rel, "unknown relation '" + rel + "'");
    for (const auto& row : spec.tuples) {
      if (static_cast<int>(row.size()) != r->arity()) {
        throw SchemaError("$.scopes." + rel, "tuple length differs from the relation arity");
      }
    }
  }

  if (auto qs = optional_field(root, "queries")) {
    const Json& arr = get_array(*qs, "$.queries");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string p = "$.queries[" + std::to_string(k) + "]";
      Query q;
      q.name = "query-" + std::to_string(k + 1);
      if (auto n = optional_field(arr[k], "name")) q.name = get_string(*n, p + ".name");
      q.relation = get_string(require(arr[k], "relation", p), p + ".relation");
      const Relation* rel = nullptr;
      for (const auto& x : pres.relations()) {
        if (x.name == q.relation) rel = &x;
      }
      if (!rel) throw SchemaError(p + ".relation", "unknown relation '" + q.relation + "'");
      q.inputs = get_vectors(require(arr[k], "inputs", p), basis, p + ".inputs");
      if (static_cast<int>(q.inputs.size()) != rel->arity()) {
        throw SchemaError(p + ".inputs", "relation '" + q.relation + "' takes " + std::to_string(rel->arity()) +
                                             " inputs");
      }
      if (auto s = optional_field(arr[k], "subspace")) q.subspace = get_vectors(*s, basis, p + ".subspace");
      if (auto s = optional_field(arr[k], "seed")) {
        if (!s->is_number_unsigned()) throw SchemaError(p + ".seed", "expected a non-negative integer");
        q.seed = s->get<std::uint64_t>();
      }
      if (auto c = optional_field(arr[k], "choices")) {
        Choices ch;
        ch.cocycles = get_vectors(require(*c, "cocycles", p + ".choices"), basis, p + ".choices.cocycles");
        ch.bounding_chains =
            get_vectors(require(*c, "bounding_chains", p + ".choices"), basis, p + ".choices.bounding_chains");
        q.choices = std::move(ch);
      }
      doc.queries.push_back(std::move(q));
    }
  }
  return doc;
}

Json to_json(const Document& doc) {
  const auto& basis = doc.algebra.basis();
  Json root;
  root["format"] = kFormat;
  root["grading"] = grading_name(doc.grading);
  root["presentation"] = presentation_json(doc.algebra.presentation(), doc.grading);
  if (doc.construct) {
    Json alg{{"construct", *doc.construct}};
    for (const auto& [k, v] : doc.construct_params.items()) alg[k] = v;
    root["algebra"] = alg;
  } else {
    root["algebra"] = algebra_json(doc.algebra, doc.grading);
  }
  if (!doc.scopes.empty()) {
    Json s = Json::object();
    for (const auto& [rel, spec] : doc.scopes) s[rel] = scope_json(spec);
    root["scopes"] = s;
  }
  Json qs = Json::array();
  for (const auto& q : doc.queries) {
    Json j{{"name", q.name}, {"relation", q.relation}};
    Json in = Json::array();
    for (const auto& v : q.inputs) in.push_back(vector_json(basis, v));
    j["inputs"] = in;
    if (q.subspace) {
      Json s = Json::array();
      for (const auto& v : *q.subspace) s.push_back(vector_json(basis, v));
      j["subspace"] = s;
    }
    if (q.seed) j["seed"] = *q.seed;
    if (q.choices) {
      Json y = Json::array();
      Json rho = Json::array();
      for (const auto& v : q.choices->cocycles) y.push_back(vector_json(basis, v));
      for (const auto& v : q.choices->bounding_chains) rho.push_back(vector_json(basis, v));
      j["choices"] = Json{{"cocycles", y}, {"bounding_chains", rho}};
    }
    qs.push_back(j);
  }
  root["queries"] = qs;
  return root;
}

std::string serialize_document(const Document& doc) { return to_json(doc).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Commands

namespace {

Json algebra_summary(const Document& doc) {
  Json s{{"presentation", doc.algebra.presentation().name()}, {"dimension", doc.algebra.basis().size()},
         {"grading", grading_name(doc.grading)}};
  s["construct"] = doc.construct ? Json(*doc.construct) : Json(nullptr);
  return s;
}

Json report_json(const GradedBasis& basis, const ValidationReport& r, const char* scope) {
  Json j{{"check", r.check}, {"subject", r.subject}};
  if (scope) j["scope"] = scope;
  j["checked"] = r.checked;
  j["failures"] = r.failure_count;
  j["passed"] = r.passed();
  Json ex = Json::array();
  for (const auto& f : r.failures) {
    Json names = Json::array();
    for (auto i : f.tuple) names.push_back(basis[i].name);
    ex.push_back(Json{{"tuple", names}, {"residual", format(basis, f.residual)}, {"detail", f.detail}});
  }
  j["examples"] = ex;
  return j;
}

Json error_body(const std::string& command, const std::string& kind, const std::string& message) {
  return Json{{"command", command}, {"error", Json{{"kind", kind}, {"message", message}}}};
}

/// Degrees in the order the document's grading reads naturally.
std::vector<int> display_degrees(const GradedBasis& basis, Grading g) {
  std::vector<int> degrees = basis.degrees();
  if (g == Grading::cohomological) std::reverse(degrees.begin(), degrees.end());
  return degrees;
}

}  // namespace

Report cmd_validate(const Document& doc, const RunOptions& options) {
  const auto& alg = doc.algebra;
  const auto& basis = alg.basis();
  Json checks = Json::array();
  bool passed = true;

  const DifferentialReport dr = check_differential(alg.complex());
  {
    Json failing = Json::array();
    for (auto e : dr.failures) failing.push_back(basis[e].name);
    checks.push_back(Json{{"check", "differential"},
                          {"subject", "d"},
                          {"checked", basis.size()},
                          {"failures", dr.failures.size()},
                          {"passed", dr.passed()},
                          {"failing_elements", failing}});
    passed = passed && dr.passed();
  }
  for (const auto& gen : alg.presentation().generators()) {
    for (const auto& r : {check_derivation(alg, gen.name), check_symmetry(alg, gen.name)}) {
      checks.push_back(report_json(basis, r, nullptr));
      passed = passed && r.passed();
    }
  }
  for (const auto& rel : alg.presentation().relations()) {
    auto it = doc.scopes.find(rel.name);
    ValidationReport r;
    const char* scope = "full";
    if (options.scope == Scope::declared && it != doc.scopes.end()) {
      const std::vector<Tuple> tuples = resolve_scope(basis, it->second, static_cast<std::size_t>(rel.arity()));
      r = check_relation(alg, rel, std::span<const Tuple>(tuples));
      scope = "declared";
    } else {
      r = check_relation(alg, rel);
    }
    checks.push_back(report_json(basis, r, scope));
    passed = passed && r.passed();
  }
  Json body{{"command", "validate"}, {"algebra", algebra_summary(doc)}, {"checks", checks}, {"passed", passed}};
  return {body, passed ? kOk : kValidationFailure};
}

Report cmd_homology(const Document& doc, const RunOptions&) {
  std::optional<MasseyEngine> engine;
  try {
    engine.emplace(doc.algebra);
  } catch (const StructuralError& e) {
    return {error_body("homology", "structural", e.what()), kValidationFailure};
  }
  const auto& hom = engine->contraction().homology();
  const auto& hb = hom.basis;
  const auto& basis = doc.algebra.basis();

  Json betti = Json::array();
  for (int d : display_degrees(basis, doc.grading)) {
    Json classes = Json::array();
    for (auto c : hb.in_degree(d)) {
      classes.push_back(Json{{"name", hb[c].name}, {"representative", format(basis, hom.representatives[c])}});
    }
    Json row = degree_json(d);
    row["dimension"] = hb.dimension(d);
    row["classes"] = classes;
    betti.push_back(row);
  }

  Json products = Json::array();
  for (const auto& gen : doc.algebra.presentation().generators()) {
    if (gen.arity != 2) continue;
    Json table = Json::array();
    for (std::size_t a = 0; a < hb.size(); ++a) {
      for (std::size_t b = 0; b < hb.size(); ++b) {
        const HomologyClass args[2] = {HVector::unit(hb.degree(a), a), HVector::unit(hb.degree(b), b)};
        const HomologyClass v = engine->induced(gen.name, args);
        if (!v.is_zero()) table.push_back(Json{{"inputs", {hb[a].name, hb[b].name}}, {"value", format(hb, v)}});
      }
    }
    products.push_back(Json{{"generator", gen.name}, {"nonzero", table}});
  }
  Json body{{"command", "homology"}, {"algebra", algebra_summary(doc)}, {"betti", betti}, {"products", products}};
  return {body, kOk};
}

Report cmd_massey(const Document& doc, const RunOptions& options) {
  std::optional<MasseyEngine> engine;
  try {
    engine.emplace(doc.algebra);
  } catch (const StructuralError& e) {
    return {error_body("massey", "structural", e.what()), kValidationFailure};
  }
  const auto& basis = doc.algebra.basis();
  const auto& hb = engine->homology_basis();
  int exit_code = kOk;
  Json results = Json::array();

  for (const auto& q : doc.queries) {
    Json j{{"name", q.name}, {"relation", q.relation}};
    try {
      MasseyProblem problem{doc.algebra.presentation().relation(q.relation), {}};
      Json inputs = Json::array();
      for (const auto& y : q.inputs) {
        problem.inputs.push_back(engine->class_of(y));
        inputs.push_back(Json{{"cocycle", format(basis, y)}, {"class", format(hb, problem.inputs.back())}});
      }
      j["inputs"] = inputs;
      j["degree"] = degree_json(engine->massey_degree(problem));

      const VanishingReport vr = q.choices ? engine->check_vanishing(problem, q.choices->cocycles)
                                           : engine->check_vanishing(problem);
      Json vanishing = Json::array();
      for (const auto& t : vr.terms) {
        const auto& term = problem.relation.terms[t.term];
        vanishing.push_back(Json{{"term", t.term + 1},
                                 {"outer", term.outer.name},
                                 {"inner", term.inner.name},
                                 {"slot", term.slot},
                                 {"composite", format(basis, t.composite)},
                                 {"class", format(hb, t.homology_class)},
                                 {"vanishes", t.vanishes()}});
      }
      j["vanishing"] = vanishing;
      j["defined"] = vr.defined();
      if (!vr.defined()) {
        engine->canonical_choices(problem);  // raises the descriptive error
      }

      const Choices choices = q.choices ? *q.choices : engine->canonical_choices(problem);
      const Coset coset = engine->massey_product(problem, choices);
      j["representative"] = format(hb, coset.representative);
      Json ind = Json::array();
      for (const auto& v : coset.indeterminacy) ind.push_back(format(hb, v));
      j["indeterminacy"] = ind;
      const HomologyClass transfer = engine->transfer_value(problem);
      j["transfer_value"] = format(hb, transfer);
      j["transfer_in_coset"] = coset_contains(hb, coset, transfer);

      if (q.subspace) {
        std::vector<HomologyClass> sub;
        for (const auto& v : *q.subspace) sub.push_back(engine->class_of(v));
        const AffineIntersection ai = coset_intersect_subspace(hb, coset, sub);
        Json inter{{"status", ai.empty ? "empty" : (ai.is_point() ? "point" : "affine")}};
        if (!ai.empty) {
          inter["point"] = format(hb, ai.point);
          Json dirs = Json::array();
          for (const auto& v : ai.directions) dirs.push_back(format(hb, v));
          inter["directions"] = dirs;
        }
        j["intersection"] = inter;
      }

      const std::optional<std::uint64_t> seed = q.seed ? q.seed : options.seed;
      if (seed) {
        const Choices random = engine->random_choices(problem, *seed);
        const Coset rc = engine->massey_product(problem, random);
        j["random_run"] = Json{{"seed", *seed},
                               {"representative", format(hb, rc.representative)},
                               {"coset_equal", coset_equal(hb, rc, coset)}};
      }

      if (options.verbose) {
        Json y = Json::array();
        Json rho = Json::array();
        for (const auto& v : choices.cocycles) y.push_back(format(basis, v));
        for (const auto& v : choices.bounding_chains) rho.push_back(format(basis, v));
        j["choices"] = Json{{"source", q.choices ? "explicit" : "canonical"},
                            {"cocycles", y},
                            {"bounding_chains", rho},
                            {"representative_cochain", format(basis, engine->representative(problem, choices))}};
      }
    } catch (const UndefinedMasseyError& e) {
      j["defined"] = false;
      j["error"] = Json{{"kind", "undefined"}, {"message", e.what()}};
      exit_code = std::max(exit_code, static_cast<int>(kUndefinedMassey));
    } catch (const UsageError& e) {
      j["error"] = Json{{"kind", "usage"}, {"message", e.what()}};
      exit_code = std::max(exit_code, static_cast<int>(kUsage));
    }
    results.push_back(j);
  }
  Json body{{"command", "massey"}, {"algebra", algebra_summary(doc)}, {"queries", results}};
  return {body, exit_code};
}

// ---------------------------------------------------------------------------
// Canned documents

std::vector<std::pair<std::string, std::string>> example_documents() {
  std::vector<std::pair<std::string, std::string>> out;

  Json ce{{"format", kFormat},
          {"grading", "cohomological"},
          {"presentation", "com"},
          {"algebra", {{"construct", "heisenberg-ce"}}},
          {"queries",
           {{{"name", "classical-x-x-y"}, {"relation", "associativity"}, {"inputs", {"x", "x", "y"}}, {"seed", 1}},
            {{"name", "classical-x-y-y"}, {"relation", "associativity"}, {"inputs", {"x", "y", "y"}}}}}};
  out.emplace_back("heisenberg-ce.json", ce.dump(2) + "\n");

  Json ge{{"format", kFormat},
          {"grading", "cohomological"},
          {"presentation", "gerstenhaber"},
          {"algebra", {{"construct", "heisenberg-gerstenhaber"}}},
          {"queries",
           {{{"name", "lie-yz-x-y"}, {"relation", "gerstenhaber"}, {"inputs", {"yz", "x", "y"}}, {"seed", 1}}}}};
  out.emplace_back("heisenberg-gerstenhaber.json", ge.dump(2) + "\n");

  Json scope_names = heisenberg_hypercom_scope_names();
  Json hc{{"format", kFormat},
          {"grading", "cohomological"},
          {"presentation", "hypercom3"},
          {"algebra", {{"construct", "heisenberg-hypercom"}}},
          {"scopes", {{"hypercom", {{"cartesian", scope_names}}}}},
          {"queries",
           {{{"name", "hypercom-vw-vx-x-x"},
             {"relation", "hypercom"},
             {"inputs", {"vw", "vx", "x", "x"}},
             {"subspace", {"vxz", "vyz", "wxz", "wyz"}},
             {"seed", 1}}}}};
  out.emplace_back("heisenberg-hypercom.json", hc.dump(2) + "\n");
  return out;
}

// ---------------------------------------------------------------------------
// Text rendering

namespace {

std::string join(const Json& arr, const char* sep) {
  std::string out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    if (k) out += sep;
    out += arr[k].is_string() ? arr[k].get<std::string>() : arr[k].dump();
  }
  return out;
}

}  // namespace

std::string render_text(const Report& report) {
  const Json& b = report.body;
  std::ostringstream os;
  const std::string command = b.value("command", "");
  if (b.contains("error")) {
    os << command << ": " << b["error"]["kind"].get<std::string>() << " error: "
       << b["error"]["message"].get<std::string>() << "\n";
    return os.str();
  }
  const Json& alg = b["algebra"];
  os << "algebra: " << (alg["construct"].is_null() ? "explicit" : alg["construct"].get<std::string>()) << " ("
     << alg["presentation"].get<std::string>() << ", dimension " << alg["dimension"].get<std::size_t>() << ")\n";

  if (command == "validate") {
    for (const auto& c : b["checks"]) {
      os << (c["passed"].get<bool>() ? "  ok    " : "  FAIL  ") << c["check"].get<std::string>() << " "
         << c["subject"].get<std::string>();
      if (c.contains("scope")) os << " [" << c["scope"].get<std::string>() << "]";
      os << ": " << c["checked"].get<std::size_t>() << " checked, " << c["failures"].get<std::size_t>()
         << " failing\n";
      if (c.contains("failing_elements") && !c["failing_elements"].empty()) {
        os << "        d(d(e)) != 0 for " << join(c["failing_elements"], ", ") << "\n";
      }
      if (c.contains("examples")) {
        for (const auto& e : c["examples"]) {
          os << "        (" << join(e["tuple"], ", ") << "): " << e["detail"].get<std::string>() << ", residual "
             << e["residual"].get<std::string>() << "\n";
        }
      }
    }
    os << (b["passed"].get<bool>() ? "all checks passed\n" : "validation failed\n");
  } else if (command == "homology") {
    const bool coh = alg["grading"] == "cohomological";
    for (const auto& row : b["betti"]) {
      os << "  " << (coh ? "H^" : "H_") << row[coh ? "cohomological" : "homological"].get<int>() << ": dimension "
         << row["dimension"].get<std::size_t>();
      if (!row["classes"].empty()) {
        os << "  {";
        for (std::size_t k = 0; k < row["classes"].size(); ++k) {
          os << (k ? ", " : "") << row["classes"][k]["name"].get<std::string>();
        }
        os << "}";
      }
      os << "\n";
    }
    for (const auto& p : b["products"]) {
      os << "  induced " << p["generator"].get<std::string>() << ":\n";
      for (const auto& e : p["nonzero"]) {
        os << "    " << p["generator"].get<std::string>() << "(" << join(e["inputs"], ", ")
           << ") = " << e["value"].get<std::string>() << "\n";
      }
    }
  } else if (command == "massey") {
    for (const auto& q : b["queries"]) {
      os << q["name"].get<std::string>() << " [" << q["relation"].get<std::string>() << "]";
      if (q.contains("inputs")) {
        os << " <";
        for (std::size_t k = 0; k < q["inputs"].size(); ++k) {
          os << (k ? ", " : "") << q["inputs"][k]["class"].get<std::string>();
        }
        os << ">";
      }
      os << "\n";
      if (q.contains("error")) {
        os << "  " << q["error"]["message"].get<std::string>() << "\n";
        continue;
      }
      os << "  degree " << q["degree"]["cohomological"].get<int>() << " (cohomological)\n";
      os << "  representative: " << q["representative"].get<std::string>() << "\n";
      os << "  indeterminacy: "
         << (q["indeterminacy"].empty() ? std::string("0") : "span{" + join(q["indeterminacy"], ", ") + "}") << "\n";
      os << "  transfer value: " << q["transfer_value"].get<std::string>()
         << (q["transfer_in_coset"].get<bool>() ? " (in coset)" : " (NOT in coset)") << "\n";
      if (q.contains("intersection")) {
        const Json& in = q["intersection"];
        os << "  intersection with subspace: " << in["status"].get<std::string>();
        if (in.contains("point")) os << " " << in["point"].get<std::string>();
        if (in.contains("directions") && !in["directions"].empty()) os << " + span{" << join(in["directions"], ", ") << "}";
        os << "\n";
      }
      if (q.contains("random_run")) {
        const Json& r = q["random_run"];
        os << "  seed " << r["seed"].get<std::uint64_t>() << ": representative " << r["representative"].get<std::string>()
           << (r["coset_equal"].get<bool>() ? ", same coset" : ", DIFFERENT coset") << "\n";
      }
      if (q.contains("choices")) {
        const Json& c = q["choices"];
        os << "  cocycles: " << join(c["cocycles"], "; ") << "\n";
        os << "  bounding chains: " << join(c["bounding_chains"], "; ") << "\n";
        os << "  representative cochain: " << c["representative_cochain"].get<std::string>() << "\n";
      }
    }
  }
  return os.str();
}

}  // namespace massey::cli
