#pragma once

// Operator-range algebra: sums and intersections of ranges, inclusion,
// Douglas reduced solutions, the range norm ‖u‖_T = ‖T†u‖, Ando's minimal
// decomposition and de Branges complements.

#include <vector>

#include "orcalc/numlin.hpp"

namespace orcalc {

inline Matrix hconcat(const Matrix& a, const Matrix& b) {
  require_same_rows(a, b, "hconcat");
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

inline Subspace subspace_sum(const Subspace& m, const Subspace& n, const TolerancePolicy& tol = {}) {
  require_same_rows(m.basis(), n.basis(), "subspace_sum");
  return orthonormalize(hconcat(m.basis(), n.basis()), tol);
}

/// Intersection of two subspaces from the null space of [Qm, −Qn].
inline Subspace intersect(const Subspace& m, const Subspace& n, const TolerancePolicy& tol = {}) {
  require_same_rows(m.basis(), n.basis(), "intersect");
  if (m.is_zero() || n.is_zero()) return Subspace(m.ambient_dim());
  const Matrix stacked = hconcat(m.basis(), -n.basis());
  const Subspace kernel = nullspace_of(stacked, tol);
  if (kernel.is_zero()) return Subspace(m.ambient_dim());
  return orthonormalize(m.basis() * kernel.basis().topRows(m.dim()), tol);
}

/// sin of the smallest principal angle between two subspaces; 0 when they
/// intersect, 1 when they are orthogonal (or one is zero).
inline double min_angle_sine(const Subspace& m, const Subspace& n) {
  require_same_rows(m.basis(), n.basis(), "min_angle_sine");
  if (m.is_zero() || n.is_zero()) return 1.0;
  const Matrix leak = n.basis() - m.basis() * (m.basis().adjoint() * n.basis());
  Eigen::JacobiSVD<Matrix> svd(leak);
  double s = svd.singularValues().size() ? svd.singularValues().minCoeff() : 1.0;
  if (n.dim() > leak.rows() - m.dim()) s = 0.0;  // dimension count forces an intersection
  return std::min(s, 1.0);
}

struct RangeSum {
  Subspace span;          // R(A) + R(B)
  HermitianOperator root; // (AA^H + BB^H)^{1/2}
};

inline RangeSum range_sum(const Matrix& a, const Matrix& b, const TolerancePolicy& tol = {}) {
  require_same_rows(a, b, "range_sum");
  const auto gram = HermitianOperator::symmetrized(a * a.adjoint() + b * b.adjoint());
  auto root = sqrt_psd(gram, tol);
  auto span = range_of(root.matrix(), tol);
  return {std::move(span), std::move(root)};
}

inline Subspace range_intersection(const Matrix& a, const Matrix& b, const TolerancePolicy& tol = {}) {
  require_same_rows(a, b, "range_intersection");
  return intersect(range_of(a, tol), range_of(b, tol), tol);
}

/// ‖(I − P_R(A))B‖_F / max(‖B‖_F, 1).
inline double inclusion_margin(const Matrix& b, const Matrix& a, const TolerancePolicy& tol = {}) {
  require_same_rows(a, b, "range_included");
  return range_of(a, tol).leak(b);
}

/// R(B) ⊆ R(A).
inline bool range_included(const Matrix& b, const Matrix& a, const TolerancePolicy& tol = {}) {
  return inclusion_margin(b, a, tol) <= tol.residual_tol();
}

/// The unique D with AD = B and R(D) ⊆ R(A^H).
inline Matrix douglas_reduced(const Matrix& a, const Matrix& b, const TolerancePolicy& tol = {}) {
  if (!range_included(b, a, tol)) {
    throw Error(ErrorKind::NoSolution, "R(B) is not contained in R(A)");
  }
  return pinv(a, tol) * b;
}

/// R(T) with the norm ‖u‖_T = ‖T†u‖.
class RangeNormContext {
 public:
  explicit RangeNormContext(Matrix t, const TolerancePolicy& tol = {})
      : t_(std::move(t)), tpinv_(pinv(t_, tol)), range_(range_of(t_, tol)), tol_(tol) {}

  const Matrix& op() const { return t_; }
  const Matrix& op_pinv() const { return tpinv_; }
  const Subspace& range() const { return range_; }

  double norm(const Vector& u) const {
    if (u.size() != t_.rows()) throw Error(ErrorKind::DimensionMismatch, "mt_norm");
    if (!range_.contains(u, tol_)) throw Error(ErrorKind::NotInRange, "vector outside R(T)");
    return (tpinv_ * u).norm();
  }

 private:
  Matrix t_;
  Matrix tpinv_;
  Subspace range_;
  TolerancePolicy tol_;
};

inline double mt_norm(const RangeNormContext& ctx, const Vector& u) { return ctx.norm(u); }

struct AndoSplit {
  Vector u1;
  Vector u2;
};

/// The unique u = u1 + u2 with u_i ∈ R(T_i) minimising
/// ‖u1‖²_{T1} + ‖u2‖²_{T2}, obtained from the minimum-norm solution of
/// [T1 T2]·(x1; x2) = u.
inline AndoSplit ando_decompose(const Matrix& t1, const Matrix& t2, const Vector& u,
                                const TolerancePolicy& tol = {}) {
  require_same_rows(t1, t2, "ando_decompose");
  if (u.size() != t1.rows()) throw Error(ErrorKind::DimensionMismatch, "ando_decompose");
  const Matrix joint = hconcat(t1, t2);
  if (!range_of(joint, tol).contains(u, tol)) {
    throw Error(ErrorKind::NotInRange, "u is not in R(T1) + R(T2)");
  }
  const Vector x = pinv(joint, tol) * u;
  return {t1 * x.head(t1.cols()), t2 * x.tail(t2.cols())};
}

/// R((I − TT^H)^{1/2}) for a contraction T.
inline Subspace debranges_complement(const Matrix& t, const TolerancePolicy& tol = {}) {
  if (spectral_norm(t) > 1.0 + tol.residual_tol()) {
    throw Error(ErrorKind::NotContraction, "‖T‖ exceeds 1");
  }
  const Index n = t.rows();
  const auto defect = HermitianOperator::symmetrized(Matrix::Identity(n, n) - t * t.adjoint());
  return range_of(sqrt_psd(defect, tol, 1.0).matrix(), tol, 1.0);
}

}  // namespace orcalc
