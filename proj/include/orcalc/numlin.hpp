#pragma once

// Dense linear-algebra substrate shared by every other module: tolerance
// policy, Hermitian operators, canonical subspaces, operators with a
// restricted domain, pseudoinverses, square roots and polar factors.
//
// All rank decisions go through TolerancePolicy::rank_cutoff so that range
// inclusions computed in different places agree with each other.

#include <Eigen/Dense>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>

#include "orcalc/error.hpp"

namespace orcalc {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Unit roundoff of double precision.
inline constexpr double kUnitRoundoff = DBL_EPSILON / 2.0;

class TolerancePolicy {
 public:
  TolerancePolicy() = default;

  /// An unset rank_tol_rel means the dimension-dependent default
  /// 64 * u * max(rows, cols).
  TolerancePolicy(std::optional<double> rank_tol_rel, double sym_tol, double residual_tol)
      : rank_rel_(rank_tol_rel), sym_(sym_tol), residual_(residual_tol) {
    auto valid = [](double t) { return t > 0.0 && t < 1.0; };
    if ((rank_rel_ && !valid(*rank_rel_)) || !valid(sym_) || !valid(residual_)) {
      throw Error(ErrorKind::InvalidArgument, "tolerances must lie in (0, 1)");
    }
  }

  /// Same rank rule, with the symmetry and residual bounds replaced.
  static TolerancePolicy with_residual(double tol) { return {std::nullopt, tol, tol}; }

  double rank_tol_rel(Index rows, Index cols) const {
    if (rank_rel_) return *rank_rel_;
    return 64.0 * kUnitRoundoff * static_cast<double>(std::max<Index>({rows, cols, 1}));
  }
  bool has_explicit_rank_tol() const { return rank_rel_.has_value(); }
  double sym_tol() const { return sym_; }
  double residual_tol() const { return residual_; }

  /// Singular values strictly below this are treated as zero.
  double rank_cutoff(double sigma_max, Index rows, Index cols) const {
    return rank_tol_rel(rows, cols) * sigma_max;
  }

 private:
  std::optional<double> rank_rel_;
  double sym_ = 1e-9;
  double residual_ = 1e-9;
};

// ---------------------------------------------------------------------------
// small helpers

inline Matrix promote(const RealMatrix& m) { return m.cast<Scalar>(); }

inline double fro(const Matrix& m) { return m.size() == 0 ? 0.0 : m.norm(); }

/// ‖X − Y‖_F / max(‖X‖_F, ‖Y‖_F, 1).
inline double rel_distance(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "rel_distance shape mismatch");
  }
  if (x.size() == 0) return 0.0;
  return (x - y).norm() / std::max({x.norm(), y.norm(), 1.0});
}

inline bool approx_equal(const Matrix& x, const Matrix& y, double tol) {
  return rel_distance(x, y) <= tol;
}

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline void require_same_rows(const Matrix& a, const Matrix& b, const char* where) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(where) + ": ambient dimensions " + std::to_string(a.rows()) +
                    " and " + std::to_string(b.rows()) + " differ");
  }
}

inline void require_square(const Matrix& a, const char* where) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch, std::string(where) + ": matrix is not square");
  }
}

// ---------------------------------------------------------------------------
// rank-revealing SVD

struct RankRevealingSvd {
  Matrix u;           // rows x rows
  RealVector sigma;   // min(rows, cols), descending
  Matrix v;           // cols x cols
  Index rank = 0;
};

/// `scale` lets a caller measure the cutoff against a reference norm larger
/// than ‖a‖ (e.g. the norm of the operator a block was cut from).
inline RankRevealingSvd rank_svd(const Matrix& a, const TolerancePolicy& tol, double scale = 0.0) {
  RankRevealingSvd out;
  const Index m = a.rows(), n = a.cols();
  if (m == 0 || n == 0) {
    out.u = Matrix::Identity(m, m);
    out.v = Matrix::Identity(n, n);
    out.sigma = RealVector::Zero(0);
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.u = svd.matrixU();
  out.v = svd.matrixV();
  out.sigma = svd.singularValues();
  const double smax = std::max(out.sigma(0), scale);
  if (out.sigma(0) > 0.0) {
    const double cut = tol.rank_cutoff(smax, m, n);
    for (Index i = 0; i < out.sigma.size(); ++i) {
      if (out.sigma(i) > cut) out.rank = i + 1;
    }
  }
  return out;
}

inline Index numerical_rank(const Matrix& a, const TolerancePolicy& tol = {}, double scale = 0.0) {
  return rank_svd(a, tol, scale).rank;
}

// ---------------------------------------------------------------------------
// HermitianOperator

class HermitianOperator {
 public:
  HermitianOperator() = default;

  /// Checks ‖M − M^H‖ ≤ sym_tol·‖M‖ and stores (M + M^H)/2.
  explicit HermitianOperator(const Matrix& m, const TolerancePolicy& tol = {}) {
    require_square(m, "HermitianOperator");
    const double dev = fro(m - m.adjoint());
    if (dev > tol.sym_tol() * fro(m)) {
      throw Error(ErrorKind::NotHermitian,
                  "relative Hermiticity deviation " + std::to_string(dev / fro(m)));
    }
    m_ = 0.5 * (m + m.adjoint());
  }

  explicit HermitianOperator(const RealMatrix& m, const TolerancePolicy& tol = {})
      : HermitianOperator(promote(m), tol) {}

  /// Symmetrizes without the deviation check. For results of internal
  /// computations that are Hermitian up to roundoff.
  static HermitianOperator symmetrized(const Matrix& m) {
    require_square(m, "HermitianOperator");
    HermitianOperator h;
    h.m_ = 0.5 * (m + m.adjoint());
    return h;
  }

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;
};

inline HermitianEigen eigh(const HermitianOperator& a) {
  HermitianEigen out;
  if (a.dim() == 0) {
    out.values = RealVector::Zero(0);
    out.vectors = Matrix::Zero(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  return out;
}

inline double min_eigenvalue(const HermitianOperator& a) {
  if (a.dim() == 0) return 0.0;
  return eigh(a).values(0);
}

/// Largest |λ|, i.e. the spectral norm.
inline double spectral_radius(const HermitianEigen& e) {
  return e.values.size() == 0 ? 0.0 : e.values.cwiseAbs().maxCoeff();
}

inline bool is_psd(const HermitianOperator& a, const TolerancePolicy& tol = {}) {
  const auto e = eigh(a);
  if (e.values.size() == 0) return true;
  return e.values(0) >= -tol.residual_tol() * std::max(spectral_radius(e), 1.0);
}

// ---------------------------------------------------------------------------
// Subspace

class Subspace {
 public:
  Subspace() = default;

  /// Zero subspace of C^n.
  explicit Subspace(Index ambient_dim) : basis_(Matrix::Zero(ambient_dim, 0)) {}

  /// Wraps columns already known to be orthonormal.
  static Subspace from_orthonormal(Matrix basis) {
    Subspace s;
    s.basis_ = std::move(basis);
    return s;
  }

  static Subspace full(Index n) { return from_orthonormal(Matrix::Identity(n, n)); }

  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_dim(); }

  Matrix projector_matrix() const { return basis_ * basis_.adjoint(); }

  /// ‖(I − P)v‖.
  double distance(const Vector& v) const {
    if (v.size() != ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "Subspace::distance");
    return (v - basis_ * (basis_.adjoint() * v)).norm();
  }

  bool contains(const Vector& v, const TolerancePolicy& tol = {}) const {
    return distance(v) <= tol.residual_tol() * std::max(v.norm(), 1.0);
  }

  /// Largest ‖(I − P)x‖ over the columns of x, relative to max(‖x‖, 1).
  double leak(const Matrix& x) const {
    if (x.rows() != ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "Subspace::leak");
    if (x.cols() == 0) return 0.0;
    return fro(x - basis_ * (basis_.adjoint() * x)) / std::max(fro(x), 1.0);
  }

  bool contains_columns(const Matrix& x, const TolerancePolicy& tol = {}) const {
    return leak(x) <= tol.residual_tol();
  }

  bool contains(const Subspace& other, const TolerancePolicy& tol = {}) const {
    return contains_columns(other.basis(), tol);
  }

  Subspace complement(const TolerancePolicy& tol = {}) const;

  bool same_as(const Subspace& other, const TolerancePolicy& tol = {}) const {
    return dim() == other.dim() && approx_equal(projector_matrix(), other.projector_matrix(),
                                                tol.residual_tol());
  }

 private:
  Matrix basis_;
};

// ---------------------------------------------------------------------------
// core operations

inline Subspace range_of(const Matrix& a, const TolerancePolicy& tol = {}, double scale = 0.0) {
  auto s = rank_svd(a, tol, scale);
  return Subspace::from_orthonormal(s.u.leftCols(s.rank));
}

inline Subspace nullspace_of(const Matrix& a, const TolerancePolicy& tol = {}, double scale = 0.0) {
  auto s = rank_svd(a, tol, scale);
  return Subspace::from_orthonormal(s.v.rightCols(a.cols() - s.rank));
}

/// Canonical orthonormal basis of the column space of `span`.
inline Subspace orthonormalize(const Matrix& span, const TolerancePolicy& tol = {}) {
  return range_of(span, tol);
}

inline Subspace Subspace::complement(const TolerancePolicy& tol) const {
  if (dim() == 0) return full(ambient_dim());
  return nullspace_of(basis_.adjoint(), tol);
}

inline HermitianOperator projector(const Subspace& s) {
  return HermitianOperator::symmetrized(s.projector_matrix());
}

inline Matrix pinv(const Matrix& a, const TolerancePolicy& tol = {}, double scale = 0.0) {
  auto s = rank_svd(a, tol, scale);
  Matrix out = Matrix::Zero(a.cols(), a.rows());
  for (Index i = 0; i < s.rank; ++i) {
    out += (s.v.col(i) / s.sigma(i)) * s.u.col(i).adjoint();
  }
  return out;
}

/// Largest deviation among the four Penrose identities, each relative to
/// max(‖·‖, 1).
inline double penrose_residual(const Matrix& a, const Matrix& x) {
  const double r1 = rel_distance(a * x * a, a);
  const double r2 = rel_distance(x * a * x, x);
  const Matrix ax = a * x, xa = x * a;
  const double r3 = rel_distance(ax.adjoint(), ax);
  const double r4 = rel_distance(xa.adjoint(), xa);
  return std::max({r1, r2, r3, r4});
}

/// Applies g to the eigenvalues of a Hermitian operator; eigenvalues of
/// magnitude at or below the rank cutoff are passed to g as exact zeros.
template <typename Fn>
HermitianOperator spectral_apply(const HermitianOperator& a, const TolerancePolicy& tol, Fn g,
                                 double scale = 0.0) {
  const auto e = eigh(a);
  const Index n = a.dim();
  if (n == 0) return a;
  const double cut = tol.rank_cutoff(std::max(spectral_radius(e), scale), n, n);
  RealVector mapped(n);
  for (Index i = 0; i < n; ++i) {
    const double lam = std::abs(e.values(i)) <= cut ? 0.0 : e.values(i);
    mapped(i) = g(lam);
  }
  return HermitianOperator::symmetrized(e.vectors * mapped.cast<Scalar>().asDiagonal() *
                                        e.vectors.adjoint());
}

/// Positive square root. Eigenvalues in [−residual_tol·‖A‖, 0) are clamped.
inline HermitianOperator sqrt_psd(const HermitianOperator& a, const TolerancePolicy& tol = {},
                                  double scale = 0.0) {
  const auto e = eigh(a);
  if (a.dim() == 0) return a;
  const double norm = std::max(spectral_radius(e), scale);
  if (e.values(0) < -tol.residual_tol() * norm) {
    throw Error(ErrorKind::NotPositive,
                "sqrt_psd: eigenvalue " + std::to_string(e.values(0)) + " is negative");
  }
  return spectral_apply(
      a, tol, [](double lam) { return lam > 0.0 ? std::sqrt(lam) : 0.0; }, scale);
}

/// Sign assigned to the null space of T in the polar factor.
enum class ZeroSign { Positive, Negative };

struct PolarFactors {
  HermitianOperator u;     // u = u^H = u^{-1}
  HermitianOperator abs_t; // |T|
};

/// T = u·|T| with u a symmetry commuting with |T|; the null space of T gets
/// sign +1 by default.
inline PolarFactors polar_selfadjoint(const HermitianOperator& t, const TolerancePolicy& tol = {},
                                      ZeroSign zero_sign = ZeroSign::Positive, double scale = 0.0) {
  const double s0 = zero_sign == ZeroSign::Positive ? 1.0 : -1.0;
  return {spectral_apply(
              t, tol, [s0](double lam) { return lam > 0 ? 1.0 : lam < 0 ? -1.0 : s0; }, scale),
          spectral_apply(t, tol, [](double lam) { return std::abs(lam); }, scale)};
}

/// Pseudoinverse of a Hermitian operator via its spectrum.
inline HermitianOperator pinv_hermitian(const HermitianOperator& a, const TolerancePolicy& tol = {},
                                        double scale = 0.0) {
  return spectral_apply(
      a, tol, [](double lam) { return lam != 0.0 ? 1.0 / lam : 0.0; }, scale);
}

// ---------------------------------------------------------------------------
// PartialOperator

/// A linear map defined on a subspace of C^n, stored as the images of the
/// domain basis vectors.
class PartialOperator {
 public:
  PartialOperator() = default;

  PartialOperator(Subspace domain, Matrix action) : domain_(std::move(domain)), action_(std::move(action)) {
    if (action_.cols() != domain_.dim()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "PartialOperator: action has " + std::to_string(action_.cols()) +
                      " columns for a domain of dimension " + std::to_string(domain_.dim()));
    }
  }

  /// Restriction of a full matrix to `domain`.
  static PartialOperator restrict(const Matrix& m, const Subspace& domain) {
    if (m.cols() != domain.ambient_dim()) {
      throw Error(ErrorKind::DimensionMismatch, "PartialOperator::restrict");
    }
    return {domain, m * domain.basis()};
  }

  Index ambient_dim() const { return domain_.ambient_dim(); }
  Index target_dim() const { return action_.rows(); }
  const Subspace& domain() const { return domain_; }
  const Matrix& action() const { return action_; }
  bool is_full_domain() const { return domain_.is_full(); }

  bool in_domain(const Vector& v, const TolerancePolicy& tol = {}) const {
    return domain_.distance(v) <= tol.residual_tol() * v.norm();
  }

  Vector apply(const Vector& v, const TolerancePolicy& tol = {}) const {
    if (v.size() != ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "PartialOperator::apply");
    if (!in_domain(v, tol)) throw Error(ErrorKind::NotInDomain, "vector outside the operator domain");
    return action_ * (domain_.basis().adjoint() * v);
  }

  /// Column-wise apply.
  Matrix apply(const Matrix& x, const TolerancePolicy& tol = {}) const {
    if (x.rows() != ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "PartialOperator::apply");
    if (x.cols() > 0 && domain_.leak(x) > tol.residual_tol()) {
      throw Error(ErrorKind::NotInDomain, "columns outside the operator domain");
    }
    return action_ * (domain_.basis().adjoint() * x);
  }

  /// Extension by zero on the orthogonal complement of the domain.
  Matrix zero_extension() const { return action_ * domain_.basis().adjoint(); }

 private:
  Subspace domain_;
  Matrix action_;
};

}  // namespace orcalc
