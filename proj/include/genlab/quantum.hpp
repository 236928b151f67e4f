#pragma once

// Propositions as orthogonal projections on small complex Hilbert spaces.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "genlab/boolean_algebra.hpp"
#include "genlab/error.hpp"

namespace genlab {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

inline constexpr double kTol = 1e-9;

class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n) {}
  Matrix(std::size_t n, std::initializer_list<cplx> rowmajor) : Matrix(n) {
    if (rowmajor.size() != n * n) throw InputError("matrix literal has wrong size");
    std::copy(rowmajor.begin(), rowmajor.end(), a_.begin());
  }
  Matrix(std::size_t n, const std::vector<cplx>& rowmajor) : Matrix(n) {
    if (rowmajor.size() != n * n) throw InputError("matrix literal has wrong size");
    std::copy(rowmajor.begin(), rowmajor.end(), a_.begin());
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static Matrix diag(const std::vector<double>& d) {
    Matrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  /// |v⟩⟨v| / ⟨v|v⟩.
  static Matrix ray(const CVector& v) {
    double nn = 0;
    for (auto c : v) nn += std::norm(c);
    if (nn <= kTol) throw InputError("zero vector has no ray");
    Matrix m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]) / nn;
    return m;
  }

  std::size_t dim() const noexcept { return n_; }
  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  Matrix adjoint() const {
    Matrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = std::conj((*this)(j, i));
    return m;
  }
  cplx trace() const {
    cplx t = 0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }
  /// Largest entry modulus.
  double norm_inf() const {
    double r = 0;
    for (auto c : a_) r = std::max(r, std::abs(c));
    return r;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    same_dim(a, b);
    for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] += b.a_[k];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    same_dim(a, b);
    for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] -= b.a_[k];
    return a;
  }
  friend Matrix operator*(cplx s, Matrix a) {
    for (auto& c : a.a_) c *= s;
    return a;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    same_dim(a, b);
    Matrix m(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t k = 0; k < a.n_; ++k) {
        const cplx x = a(i, k);
        if (x == cplx{}) continue;
        for (std::size_t j = 0; j < a.n_; ++j) m(i, j) += x * b(k, j);
      }
    return m;
  }
  CVector apply(const CVector& v) const {
    if (v.size() != n_) throw InputError("dimension mismatch");
    CVector r(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  static void same_dim(const Matrix& a, const Matrix& b) {
    if (a.n_ != b.n_) throw InputError("dimension mismatch");
  }

 private:
  std::size_t n_ = 0;
  std::vector<cplx> a_;
};

inline bool approx_equal(const Matrix& a, const Matrix& b, double tol = kTol) { return (a - b).norm_inf() <= tol; }

/// Orthogonal projection, validated on construction.
class Projection {
 public:
  explicit Projection(Matrix m) : m_(std::move(m)) {
    if (m_.dim() == 0) throw InputError("projection must have positive dimension");
    if ((m_ - m_.adjoint()).norm_inf() > kTol) throw InputError("matrix is not Hermitian");
    if ((m_ * m_ - m_).norm_inf() > kTol) throw InputError("matrix is not idempotent");
  }
  static Projection zero(std::size_t n) { return Projection(Matrix(n)); }
  static Projection identity(std::size_t n) { return Projection(Matrix::identity(n)); }

  const Matrix& matrix() const noexcept { return m_; }
  std::size_t dim() const { return m_.dim(); }
  std::size_t rank() const { return static_cast<std::size_t>(std::lround(m_.trace().real())); }
  Projection complement() const { return Projection(Matrix::identity(dim()) - m_); }

 private:
  Matrix m_;
};

inline bool commutes(const Projection& P, const Projection& Q) {
  Matrix::same_dim(P.matrix(), Q.matrix());
  return (P.matrix() * Q.matrix() - Q.matrix() * P.matrix()).norm_inf() <= kTol;
}

inline Projection meet_commuting(const Projection& P, const Projection& Q) {
  if (!commutes(P, Q)) throw DomainError("meet of noncommuting projections");
  return Projection(P.matrix() * Q.matrix());
}

inline bool leq(const Projection& P, const Projection& Q) {
  return approx_equal(P.matrix() * Q.matrix(), P.matrix());
}

inline bool same_projection(const Projection& P, const Projection& Q) { return approx_equal(P.matrix(), Q.matrix()); }

/// Tolerance-bucketed identity for deduplication.
inline std::vector<std::int64_t> projection_key(const Projection& P) {
  std::vector<std::int64_t> k;
  const auto& m = P.matrix();
  k.reserve(2 * m.dim() * m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) {
      k.push_back(std::llround(m(i, j).real() * 1e6));
      k.push_back(std::llround(m(i, j).imag() * 1e6));
    }
  return k;
}

/// A finite set of projections closed under complement and commuting meet.
/// Element 0 is the zero projection and element 1 the identity.
struct PropSystem {
  std::size_t dim = 0;
  std::vector<Projection> elements;
  std::vector<std::string> names;

  std::size_t size() const { return elements.size(); }
  /// Index of a projection equal to P, or size() when absent.
  std::size_t find(const Projection& P) const {
    for (std::size_t i = 0; i < elements.size(); ++i)
      if (same_projection(elements[i], P)) return i;
    return elements.size();
  }
};

inline constexpr std::size_t kDefaultCloseCap = 4096;

/// Least superset of the seeds (plus 0 and 1) closed under complement and
/// binary meet of commuting members.
inline PropSystem close_system(const std::vector<Projection>& seeds, const std::vector<std::string>& seed_names = {},
                               std::size_t cap = kDefaultCloseCap) {
  if (seeds.empty()) throw InputError("close_system needs at least one seed");
  const std::size_t n = seeds.front().dim();
  PropSystem R;
  R.dim = n;
  std::map<std::vector<std::int64_t>, std::size_t> index;
  auto add = [&](const Projection& P, const std::string& name) {
    if (P.dim() != n) throw InputError("seed projections differ in dimension");
    auto [it, fresh] = index.emplace(projection_key(P), R.elements.size());
    if (!fresh) return it->second;
    if (R.elements.size() >= cap) throw CapRefusal("proposition system closure too large", cap);
    R.elements.push_back(P);
    R.names.push_back(name);
    return it->second;
  };
  add(Projection::zero(n), "0");
  add(Projection::identity(n), "1");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const std::string nm = i < seed_names.size() ? seed_names[i] : "P" + std::to_string(i);
    add(seeds[i], nm);
    add(seeds[i].complement(), "~" + nm);
  }
  // Process every pair once; new elements join the queue at the back.
  for (std::size_t j = 0; j < R.elements.size(); ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      if (!commutes(R.elements[i], R.elements[j])) continue;
      Projection m = meet_commuting(R.elements[i], R.elements[j]);
      const std::size_t before = R.elements.size();
      const std::size_t k = add(m, "(" + R.names[i] + "&" + R.names[j] + ")");
      if (k == before) add(R.elements[k].complement(), "~" + R.names[k]);
    }
  }
  return R;
}

inline double born_expectation(const Projection& P, const CVector& psi) {
  double nn = 0;
  for (auto c : psi) nn += std::norm(c);
  if (nn <= kTol) throw DomainError("zero state vector");
  double pp = 0;
  for (auto c : P.matrix().apply(psi)) pp += std::norm(c);
  return pp / nn;
}

/// Hermitian, positive semidefinite, unit trace.
class DensityOperator {
 public:
  explicit DensityOperator(Matrix m) : m_(std::move(m)) {
    if ((m_ - m_.adjoint()).norm_inf() > kTol) throw InputError("density operator is not Hermitian");
    if (std::abs(m_.trace() - cplx(1.0)) > kTol) throw InputError("density operator trace is not 1");
    if (!positive_semidefinite(m_)) throw InputError("density operator is not positive semidefinite");
  }
  static DensityOperator pure(const CVector& psi) { return DensityOperator(Matrix::ray(psi)); }
  static DensityOperator maximally_mixed(std::size_t n) {
    return DensityOperator(cplx(1.0 / static_cast<double>(n)) * Matrix::identity(n));
  }
  const Matrix& matrix() const noexcept { return m_; }

  /// Cholesky of D + 10ε·I; a nonpositive pivot means an eigenvalue below −10ε.
  static bool positive_semidefinite(const Matrix& D) {
    const std::size_t n = D.dim();
    Matrix A = D + cplx(10 * kTol) * Matrix::identity(n);
    Matrix L(n);
    for (std::size_t j = 0; j < n; ++j) {
      double d = A(j, j).real();
      for (std::size_t k = 0; k < j; ++k) d -= std::norm(L(j, k));
      if (d <= 0) return false;
      L(j, j) = std::sqrt(d);
      for (std::size_t i = j + 1; i < n; ++i) {
        cplx s = A(i, j);
        for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * std::conj(L(j, k));
        L(i, j) = s / L(j, j).real();
      }
    }
    return true;
  }

 private:
  Matrix m_;
};

inline double density_expectation(const DensityOperator& D, const Projection& P) {
  return (D.matrix() * P.matrix()).trace().real();
}

/// E(1) = 1 and E(⋁Pₙ) = ΣE(Pₙ) for a pairwise orthogonal family.
inline bool additivity_check(const DensityOperator& D, const std::vector<Projection>& family) {
  if (family.empty()) return std::abs(density_expectation(D, Projection::identity(D.matrix().dim())) - 1.0) <= kTol;
  const std::size_t n = family.front().dim();
  Matrix sum(n);
  double total = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j)
      if ((family[i].matrix() * family[j].matrix()).norm_inf() > kTol)
        throw DomainError("family is not pairwise orthogonal");
    sum = sum + family[i].matrix();
    total += density_expectation(D, family[i]);
  }
  const Projection join(sum);
  const double one = density_expectation(D, Projection::identity(n));
  return std::abs(one - 1.0) <= 10 * kTol && std::abs(density_expectation(D, join) - total) <= 10 * kTol;
}

/// PDP / tr(DP).
inline DensityOperator vn_conditional(const DensityOperator& D, const Projection& P) {
  const double t = density_expectation(D, P);
  if (t <= kTol) throw DomainError("conditioning on null event");
  Matrix m = P.matrix() * D.matrix() * P.matrix();
  return DensityOperator(cplx(1.0 / t) * m);
}

/// Σ_{ijkl} D_ij A_jk B_kl C_li, computed entry by entry without matrix products.
inline double trace_product_elementwise(const Matrix& D, const Matrix& A, const Matrix& B, const Matrix& C) {
  const std::size_t n = D.dim();
  cplx s = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) s += D(i, j) * A(j, k) * B(k, l) * C(l, i);
  return s.real();
}

struct AsymmetryWitness {
  Matrix D, P, Q;
  double tr_dpqp = 0;  // via matrix products
  double tr_dqpq = 0;
  double tr_dpqp_elementwise = 0;
  double tr_dqpq_elementwise = 0;
  double difference() const { return std::abs(tr_dpqp - tr_dqpq); }
};

inline AsymmetryWitness asymmetry(const Matrix& D, const Projection& P, const Projection& Q) {
  AsymmetryWitness w{D, P.matrix(), Q.matrix()};
  w.tr_dpqp = (D * w.P * w.Q * w.P).trace().real();
  w.tr_dqpq = (D * w.Q * w.P * w.Q).trace().real();
  w.tr_dpqp_elementwise = trace_product_elementwise(D, w.P, w.Q, w.P);
  w.tr_dqpq_elementwise = trace_product_elementwise(D, w.Q, w.P, w.Q);
  return w;
}

/// D = |e0⟩⟨e0|, P = |e0⟩⟨e0|, Q = projection on (e0+e1)/√2.
inline AsymmetryWitness malley_asymmetry_witness(std::size_t dim) {
  if (dim < 2) throw InputError("asymmetry witness needs dimension >= 2");
  CVector e0(dim), plus(dim);
  e0[0] = 1;
  plus[0] = plus[1] = 1;
  const Projection P(Matrix::ray(e0));
  const Projection Q(Matrix::ray(plus));
  return asymmetry(DensityOperator::pure(e0).matrix(), P, Q);
}

/// ½(I + a·σ) for a unit direction a.
inline Projection spin_half_projection(const std::array<double, 3>& a) {
  const double x = a[0], y = a[1], z = a[2];
  if (std::abs(std::sqrt(x * x + y * y + z * z) - 1.0) > 1e-9) throw InputError("direction is not a unit vector");
  Matrix s(2, {cplx(1 + z, 0), cplx(x, -y), cplx(x, y), cplx(1 - z, 0)});
  return Projection(cplx(0.5) * s);
}

inline PropSystem spin_half_system(const std::vector<std::array<double, 3>>& dirs) {
  if (dirs.empty()) throw InputError("at least one direction required");
  for (std::size_t i = 0; i < dirs.size(); ++i)
    for (std::size_t j = i + 1; j < dirs.size(); ++j) {
      const double dot = dirs[i][0] * dirs[j][0] + dirs[i][1] * dirs[j][1] + dirs[i][2] * dirs[j][2];
      if (std::abs(std::abs(dot) - 1.0) <= 1e-9)
        throw InputError("directions " + std::to_string(i) + " and " + std::to_string(j) +
                         (dot > 0 ? " are parallel" : " are antiparallel"));
    }
  std::vector<Projection> seeds;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    seeds.push_back(spin_half_projection(dirs[i]));
    names.push_back("S" + std::to_string(i));
  }
  return close_system(seeds, names);
}

/// Orthogonal bases of rays in a common dimension.
struct RayData {
  std::size_t dim = 0;
  std::vector<std::vector<CVector>> bases;
};

/// The system generated by the rank-1 projections of all rays; rays that
/// recur across bases are identified.
inline PropSystem ks_system(const RayData& data, std::size_t cap = kDefaultCloseCap) {
  if (data.dim == 0 || data.bases.empty()) throw InputError("ray data needs a dimension and at least one basis");
  std::vector<Projection> seeds;
  std::vector<std::string> names;
  std::map<std::vector<std::int64_t>, std::size_t> seen;
  for (std::size_t b = 0; b < data.bases.size(); ++b) {
    const auto& basis = data.bases[b];
    if (basis.size() != data.dim)
      throw InputError("basis " + std::to_string(b) + " does not have " + std::to_string(data.dim) + " rays");
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (basis[i].size() != data.dim) throw InputError("ray has wrong dimension in basis " + std::to_string(b));
      for (std::size_t j = i + 1; j < basis.size(); ++j) {
        cplx ip = 0;
        for (std::size_t k = 0; k < data.dim; ++k) ip += std::conj(basis[i][k]) * basis[j][k];
        if (std::abs(ip) > 1e-9) throw InputError("basis " + std::to_string(b) + " is not orthogonal");
      }
      Projection P(Matrix::ray(basis[i]));
      if (seen.emplace(projection_key(P), seeds.size()).second) {
        seeds.push_back(P);
        names.push_back("r" + std::to_string(seeds.size() - 1));
      }
    }
  }
  return close_system(seeds, names, cap);
}

/// A commuting family viewed as a finite propositional algebra: atoms are the
/// nonzero products of each projection or its complement.
struct ProjectionAlgebra {
  FiniteBooleanAlgebra algebra;
  std::vector<Projection> atoms;
  /// Algebra element of each input projection.
  std::vector<ElementSet> assignment;
};

inline ProjectionAlgebra pa_from_projections(const std::vector<Projection>& ps) {
  if (ps.empty()) throw InputError("at least one projection required");
  const std::size_t n = ps.front().dim();
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j)
      if (!commutes(ps[i], ps[j])) throw DomainError("noncommuting assignment");
  if (ps.size() > 20) throw CapRefusal("too many generators for sign-pattern atoms", 20);
  std::vector<Projection> atoms;
  std::vector<std::uint64_t> patterns;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << ps.size()); ++s) {
    Matrix m = Matrix::identity(n);
    for (std::size_t i = 0; i < ps.size(); ++i)
      m = m * (((s >> i) & 1U) ? ps[i].matrix() : ps[i].complement().matrix());
    if (m.norm_inf() <= kTol) continue;
    atoms.emplace_back(m);
    patterns.push_back(s);
  }
  FiniteBooleanAlgebra A(atoms.size());
  std::vector<ElementSet> assign(ps.size(), A.zero());
  for (std::size_t a = 0; a < patterns.size(); ++a)
    for (std::size_t i = 0; i < ps.size(); ++i)
      if ((patterns[a] >> i) & 1U) assign[i].insert(a);
  return {A, std::move(atoms), std::move(assign)};
}

}  // namespace genlab
