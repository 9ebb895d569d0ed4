#include "massey/graded.hpp"

#include <algorithm>
#include <sstream>

#include "massey/errors.hpp"

namespace massey {

// ---------------------------------------------------------------------------
// GradedBasis

GradedBasis::GradedBasis(std::vector<BasisElement> elements) : elements_(std::move(elements)) {
  position_.resize(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    const auto& e = elements_[i];
    if (e.name.empty()) throw UsageError("basis element with empty name");
    if (!index_.emplace(e.name, i).second) throw UsageError("duplicate basis name '" + e.name + "'");
    auto& slot = by_degree_[e.degree];
    position_[i] = slot.size();
    slot.push_back(i);
  }
}

std::optional<std::size_t> GradedBasis::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t GradedBasis::index_of(std::string_view name) const {
  auto idx = find(name);
  if (!idx) throw UsageError("unknown basis element '" + std::string(name) + "'");
  return *idx;
}

std::span<const std::size_t> GradedBasis::in_degree(int d) const {
  auto it = by_degree_.find(d);
  if (it == by_degree_.end()) return {};
  return it->second;
}

std::vector<int> GradedBasis::degrees() const {
  std::vector<int> out;
  for (const auto& [d, _] : by_degree_) out.push_back(d);
  return out;
}

// ---------------------------------------------------------------------------
// HVector

HVector::HVector(int degree, Terms terms) : degree_(degree), terms_(std::move(terms)) {
  std::erase_if(terms_, [](const auto& kv) { return kv.second.is_zero(); });
}

HVector HVector::unit(int degree, std::size_t index, Rational coeff) {
  HVector v(degree);
  v.add(index, coeff);
  return v;
}

Rational HVector::coefficient(std::size_t index) const {
  auto it = terms_.find(index);
  return it == terms_.end() ? Rational(0) : it->second;
}

void HVector::add(std::size_t index, const Rational& coeff) {
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(index, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void HVector::add_scaled(const HVector& other, const Rational& scale) {
  if (other.is_zero() || scale.is_zero()) return;
  if (is_zero()) {
    degree_ = other.degree_;
  } else if (degree_ != other.degree_) {
    throw UsageError("adding vectors of degrees " + std::to_string(degree_) + " and " +
                     std::to_string(other.degree_));
  }
  for (const auto& [i, c] : other.terms_) add(i, c * scale);
}

HVector& HVector::operator*=(const Rational& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [_, c] : terms_) c *= s;
  return *this;
}

Vector to_dense(const GradedBasis& basis, const HVector& v) {
  Vector out(basis.dimension(v.degree()));
  for (const auto& [i, c] : v.terms()) {
    if (i >= basis.size() || basis.degree(i) != v.degree()) {
      throw UsageError("vector term outside its degree block");
    }
    out[basis.position(i)] = c;
  }
  return out;
}

HVector from_dense(const GradedBasis& basis, int degree, const Vector& coords) {
  const auto idx = basis.in_degree(degree);
  if (coords.size() != idx.size()) throw UsageError("from_dense: dimension mismatch");
  HVector v(degree);
  for (std::size_t k = 0; k < idx.size(); ++k) v.add(idx[k], coords[k]);
  return v;
}

std::string format(const GradedBasis& basis, const HVector& v) {
  if (v.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : v.terms()) {
    Rational mag = c.sign() < 0 ? -c : c;
    if (first) {
      if (c.sign() < 0) os << "-";
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    if (!mag.is_one()) os << mag << "*";
    os << basis[i].name;
    first = false;
  }
  return os.str();
}

void require_homogeneous(const GradedBasis& basis, const HVector& v) {
  for (const auto& [i, _] : v.terms()) {
    if (i >= basis.size()) throw UsageError("vector references an unknown basis index");
    if (basis.degree(i) != v.degree()) {
      throw UsageError("inhomogeneous vector: '" + basis[i].name + "' has degree " +
                       std::to_string(basis.degree(i)) + ", expected " +
                       std::to_string(v.degree()));
    }
  }
}

// ---------------------------------------------------------------------------
// GradedComplex

GradedComplex::GradedComplex(GradedBasis basis, std::vector<HVector> differential)
    : basis_(std::move(basis)), differential_(std::move(differential)) {
  if (differential_.size() != basis_.size()) {
    throw UsageError("differential must list one image per basis element");
  }
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    auto& img = differential_[i];
    if (img.is_zero()) {
      img = HVector(basis_.degree(i) - 1);
      continue;
    }
    if (img.degree() != basis_.degree(i) - 1) {
      throw UsageError("d('" + basis_[i].name + "') must have degree " +
                       std::to_string(basis_.degree(i) - 1));
    }
    require_homogeneous(basis_, img);
  }
}

HVector GradedComplex::apply(const HVector& v) const {
  HVector out(v.degree() - 1);
  for (const auto& [i, c] : v.terms()) out.add_scaled(differential_.at(i), c);
  return out;
}

Matrix GradedComplex::matrix(int n) const {
  const auto src = basis_.in_degree(n);
  Matrix m(basis_.dimension(n - 1), src.size());
  for (std::size_t col = 0; col < src.size(); ++col) {
    for (const auto& [j, c] : differential_[src[col]].terms()) m(basis_.position(j), col) = c;
  }
  return m;
}

DifferentialReport check_differential(const GradedComplex& complex) {
  DifferentialReport report;
  for (std::size_t i = 0; i < complex.basis().size(); ++i) {
    if (!complex.apply(complex.d(i)).is_zero()) report.failures.push_back(i);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Homology

std::map<int, std::size_t> Homology::betti() const {
  std::map<int, std::size_t> out;
  for (const auto& e : basis.elements()) ++out[e.degree];
  return out;
}

namespace {

struct DegreeSplit {
  std::vector<Vector> boundaries;  // d of `lifts`, in C_n
  std::vector<Vector> lifts;       // standard vectors in C_{n+1}, complement of cycles
  std::vector<Vector> complement;  // standard vectors in C_n mapped injectively by d
};

std::vector<Vector> standard_vectors(std::size_t dim, std::span<const std::size_t> positions) {
  std::vector<Vector> out;
  for (auto p : positions) {
    Vector e(dim);
    e[p] = 1;
    out.push_back(std::move(e));
  }
  return out;
}

DegreeSplit split_degree(const GradedComplex& complex, int n) {
  DegreeSplit s;
  const Matrix d_up = complex.matrix(n + 1);
  const auto up = rref(d_up);
  s.lifts = standard_vectors(d_up.cols(), up.pivots);
  for (auto p : up.pivots) s.boundaries.push_back(d_up.column(p));
  const Matrix d_here = complex.matrix(n);
  s.complement = standard_vectors(d_here.cols(), rref(d_here).pivots);
  return s;
}

}  // namespace

Homology compute_homology(const GradedComplex& complex) {
  const auto report = check_differential(complex);
  if (!report.passed()) {
    throw StructuralError("d∘d ≠ 0 on '" + complex.basis()[report.failures.front()].name + "'");
  }
  const auto& basis = complex.basis();
  std::vector<BasisElement> names;
  Homology h;
  for (int n : basis.degrees()) {
    const std::size_t dim = basis.dimension(n);
    const auto boundaries = image_basis(complex.matrix(n + 1));
    const auto cycles = kernel_basis(complex.matrix(n));
    std::vector<Vector> stacked = boundaries;
    stacked.insert(stacked.end(), cycles.begin(), cycles.end());
    const auto r = rref(Matrix::from_columns(stacked, dim));
    for (auto p : r.pivots) {
      if (p < boundaries.size()) continue;
      HVector rep = from_dense(basis, n, cycles[p - boundaries.size()]);
      std::string name = format(basis, rep);
      name = "[" + name + "]";
      names.push_back({std::move(name), n});
      h.representatives.push_back(std::move(rep));
    }
  }
  h.basis = GradedBasis(std::move(names));
  return h;
}

// ---------------------------------------------------------------------------
// Contraction

Contraction::Contraction(GradedComplex complex, Homology homology, std::vector<HVector> section,
                         std::vector<HVector> projection, std::vector<HVector> homotopy)
    : complex_(std::move(complex)),
      homology_(std::move(homology)),
      section_(std::move(section)),
      projection_(std::move(projection)),
      homotopy_(std::move(homotopy)) {}

HVector Contraction::include(const HVector& cls) const {
  HVector out(cls.degree());
  for (const auto& [i, c] : cls.terms()) out.add_scaled(section_.at(i), c);
  return out;
}

HVector Contraction::project(const HVector& chain) const {
  HVector out(chain.degree());
  for (const auto& [i, c] : chain.terms()) out.add_scaled(projection_.at(i), c);
  return out;
}

HVector Contraction::homotopy(const HVector& chain) const {
  HVector out(chain.degree() + 1);
  for (const auto& [i, c] : chain.terms()) out.add_scaled(homotopy_.at(i), c);
  return out;
}

Contraction build_contraction(const GradedComplex& complex, const Homology& homology) {
  const auto& basis = complex.basis();
  const auto& hbasis = homology.basis;
  std::vector<HVector> projection(basis.size());
  std::vector<HVector> homotopy(basis.size());

  for (int n : basis.degrees()) {
    const std::size_t dim = basis.dimension(n);
    const DegreeSplit s = split_degree(complex, n);
    const auto hidx = hbasis.in_degree(n);

    // Columns [boundaries | harmonic representatives | complement] span C_n.
    std::vector<Vector> cols = s.boundaries;
    for (auto k : hidx) cols.push_back(to_dense(basis, homology.representatives[k]));
    cols.insert(cols.end(), s.complement.begin(), s.complement.end());
    if (cols.size() != dim) {
      throw InvariantViolation("contraction split has wrong size in degree " + std::to_string(n));
    }
    const Matrix change = Matrix::from_columns(cols, dim);
    const auto r = rref(change);
    if (r.pivots.size() != dim) {
      throw UsageError("homology representatives are not independent modulo boundaries in degree " +
                       std::to_string(n));
    }
    const Matrix& inverse = r.transform;

    const auto idx = basis.in_degree(n);
    const std::size_t nb = s.boundaries.size();
    for (std::size_t col = 0; col < dim; ++col) {
      HVector p(n);
      HVector h(n + 1);
      for (std::size_t t = 0; t < nb; ++t) {
        const Rational& c = inverse(t, col);
        if (!c.is_zero()) h.add_scaled(from_dense(basis, n + 1, s.lifts[t]), c);
      }
      for (std::size_t t = 0; t < hidx.size(); ++t) p.add(hidx[t], inverse(nb + t, col));
      projection[idx[col]] = std::move(p);
      homotopy[idx[col]] = std::move(h);
    }
  }
  return Contraction(complex, homology, homology.representatives, std::move(projection),
                     std::move(homotopy));
}

std::vector<std::string> verify_contraction(const Contraction& c) {
  std::vector<std::string> failures;
  const auto& complex = c.complex();
  const auto& basis = complex.basis();
  const auto& hbasis = c.homology().basis;

  for (std::size_t k = 0; k < hbasis.size(); ++k) {
    const HVector u = HVector::unit(hbasis.degree(k), k);
    const HVector iu = c.include(u);
    if (!(c.project(iu) == u)) failures.push_back("p∘i ≠ id on " + hbasis[k].name);
    if (!complex.apply(iu).is_zero()) failures.push_back("d∘i ≠ 0 on " + hbasis[k].name);
    if (!c.homotopy(iu).is_zero()) failures.push_back("h∘i ≠ 0 on " + hbasis[k].name);
  }
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const HVector e = HVector::unit(basis.degree(j), j);
    const std::string& name = basis[j].name;
    const HVector de = complex.apply(e);
    const HVector he = c.homotopy(e);
    if (!c.project(de).is_zero()) failures.push_back("p∘d ≠ 0 on " + name);
    if (!(complex.apply(he) + c.homotopy(de) == e - c.include(c.project(e)))) {
      failures.push_back("d h + h d ≠ id − i p on " + name);
    }
    if (!c.project(he).is_zero()) failures.push_back("p∘h ≠ 0 on " + name);
    if (!c.homotopy(he).is_zero()) failures.push_back("h∘h ≠ 0 on " + name);
  }
  return failures;
}

std::optional<HVector> is_boundary(const GradedComplex& complex, const HVector& v) {
  const int n = v.degree();
  if (v.is_zero()) return HVector(n + 1);
  require_homogeneous(complex.basis(), v);
  auto x = solve(complex.matrix(n + 1), to_dense(complex.basis(), v));
  if (!x) return std::nullopt;
  return from_dense(complex.basis(), n + 1, *x);
}

}  // namespace massey
