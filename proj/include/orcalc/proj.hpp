#pragma once

// Projections with prescribed range M and null space N, defined on M ∔ N
// (which may be a proper subspace of C^n), together with their
// Γ-representations, block forms, Moore-Penrose inverses and the set Φ(T).

#include "orcalc/ranges.hpp"

namespace orcalc {

/// E = P_{M//N} on the domain M ∔ N.
class Projection {
 public:
  Projection() = default;

  const PartialOperator& base() const { return base_; }
  const Subspace& domain() const { return base_.domain(); }
  const Subspace& range() const { return range_; }
  const Subspace& null_space() const { return null_; }
  Index ambient_dim() const { return base_.ambient_dim(); }
  bool is_full_domain() const { return base_.is_full_domain(); }

  Vector apply(const Vector& v, const TolerancePolicy& tol = {}) const { return base_.apply(v, tol); }
  Matrix apply(const Matrix& x, const TolerancePolicy& tol = {}) const { return base_.apply(x, tol); }

  /// Full n×n matrix; only for projections defined on all of C^n.
  Matrix matrix() const {
    if (!is_full_domain()) {
      throw Error(ErrorKind::DomainNotFull, "projection is defined on a proper subspace");
    }
    return base_.zero_extension();
  }

  Matrix zero_extension() const { return base_.zero_extension(); }

  /// Builds the projection from a full idempotent matrix.
  static Projection from_matrix(const Matrix& e, const TolerancePolicy& tol = {}) {
    require_square(e, "Projection::from_matrix");
    if (!approx_equal(e * e, e, tol.residual_tol())) {
      throw Error(ErrorKind::InvalidArgument, "matrix is not idempotent");
    }
    const double scale = spectral_norm(e);
    Projection p;
    p.range_ = range_of(e, tol, scale);
    p.null_ = nullspace_of(e, tol, scale);
    p.base_ = PartialOperator(Subspace::full(e.rows()), e);
    return p;
  }

  static Projection assemble(PartialOperator base, Subspace range, Subspace null) {
    Projection p;
    p.base_ = std::move(base);
    p.range_ = std::move(range);
    p.null_ = std::move(null);
    return p;
  }

 private:
  PartialOperator base_;
  Subspace range_;
  Subspace null_;
};

/// P_{M//N} with domain M ∔ N.
inline Projection make_projection(const Subspace& m, const Subspace& n, const TolerancePolicy& tol = {}) {
  require_same_rows(m.basis(), n.basis(), "make_projection");
  if (!intersect(m, n, tol).is_zero()) {
    throw Error(ErrorKind::Overlap, "M ∩ N ≠ {0}");
  }
  const Matrix joint = hconcat(m.basis(), n.basis());
  Subspace domain = orthonormalize(joint, tol);
  // coordinates of each domain basis vector in the (M, N) frame
  const Matrix coords = pinv(joint, tol) * domain.basis();
  Matrix action = m.basis() * coords.topRows(m.dim());
  return Projection::assemble(PartialOperator(std::move(domain), std::move(action)), m, n);
}

/// Largest deviation of E from being the identity on M, zero on N and
/// idempotent on its domain.
inline double projection_defect(const Projection& e) {
  const auto& dom = e.domain();
  const Matrix img = e.base().action();
  const Matrix twice = img.size() ? e.base().action() * (dom.basis().adjoint() * img) : img;
  double r = rel_distance(twice, img);
  if (e.range().dim()) {
    r = std::max(r, rel_distance(e.zero_extension() * e.range().basis(), e.range().basis()));
  }
  if (e.null_space().dim()) {
    r = std::max(r, fro(e.zero_extension() * e.null_space().basis()) /
                        std::max(1.0, fro(e.null_space().basis())));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Γ-representation

struct GammaRep {
  HermitianOperator a1;
  HermitianOperator a2;
  HermitianOperator gamma;   // (A1² + A2²)^{1/2}
  HermitianOperator pgamma;  // Γ†EΓ, an orthogonal projector
  HermitianOperator d;       // A1²Γ†, so that A1² = ΓD^H = DΓ
  Projection projection;     // E = DΓ† on R(Γ)
  double identity_residual = 0.0;  // rel ‖EΓ² − A1²‖
};

inline GammaRep gamma_rep(const Subspace& m, const Subspace& n, const HermitianOperator& a1,
                          const HermitianOperator& a2, const TolerancePolicy& tol = {}) {
  require_same_rows(m.basis(), n.basis(), "gamma_rep");
  if (a1.dim() != m.ambient_dim() || a2.dim() != m.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "gamma_rep");
  }
  if (!is_psd(a1, tol) || !is_psd(a2, tol)) {
    throw Error(ErrorKind::NotPositive, "A1 and A2 must be positive semidefinite");
  }
  if (!range_of(a1.matrix(), tol).same_as(m, tol) || !range_of(a2.matrix(), tol).same_as(n, tol)) {
    throw Error(ErrorKind::RangeMismatch, "R(A1) ≠ M or R(A2) ≠ N");
  }
  if (!intersect(m, n, tol).is_zero()) throw Error(ErrorKind::Overlap, "M ∩ N ≠ {0}");

  const Matrix a1sq = a1.matrix() * a1.matrix();
  const Matrix a2sq = a2.matrix() * a2.matrix();
  const double scale = std::max(spectral_norm(a1sq), spectral_norm(a2sq));
  auto gamma = sqrt_psd(HermitianOperator::symmetrized(a1sq + a2sq), tol, scale);
  const auto gpinv = pinv_hermitian(gamma, tol, std::sqrt(scale));
  const Matrix d = a1sq * gpinv.matrix();
  const Matrix e_full = d * gpinv.matrix();

  Subspace dom = range_of(gamma.matrix(), tol, std::sqrt(scale));
  auto e = Projection::assemble(PartialOperator::restrict(e_full, dom), m, n);

  GammaRep rep{a1,
               a2,
               gamma,
               HermitianOperator::symmetrized(gpinv.matrix() * a1sq * gpinv.matrix()),
               HermitianOperator::symmetrized(d),
               std::move(e),
               0.0};
  rep.identity_residual =
      rel_distance(e_full * gamma.matrix() * gamma.matrix(), a1sq) ;
  return rep;
}

/// Γ-representation with the distinguished choice (A1, A2) = (P_M, P_N).
inline GammaRep gamma_rep(const Subspace& m, const Subspace& n, const TolerancePolicy& tol = {}) {
  return gamma_rep(m, n, projector(m), projector(n), tol);
}

/// G⁻¹·Pγ·G, the projection attached to another Γ' = ΓG.
inline Matrix pgamma_change(const Matrix& g, const HermitianOperator& pg, const TolerancePolicy& tol = {}) {
  require_square(g, "pgamma_change");
  if (g.rows() != pg.dim()) throw Error(ErrorKind::DimensionMismatch, "pgamma_change");
  if (!approx_equal(pg.matrix() * pg.matrix(), pg.matrix(), tol.residual_tol())) {
    throw Error(ErrorKind::InvalidArgument, "Pγ is not an orthogonal projector");
  }
  if (numerical_rank(g, tol) < g.rows()) throw Error(ErrorKind::Singular, "G is not invertible");
  Eigen::PartialPivLU<Matrix> lu(g);
  return lu.solve(pg.matrix() * g);
}

// ---------------------------------------------------------------------------
// block forms

/// Off-diagonal block of a projection relative to an orthogonal splitting
/// H = frame ⊕ frame⊥.
struct BlockRep {
  Subspace frame;
  PartialOperator off_diagonal;
};

/// E = [[1, x], [0, 0]] relative to M ⊕ M⊥, with x : P_{M⊥}(N) → M.
inline BlockRep block_rep_range(const Projection& e, const TolerancePolicy& tol = {}) {
  if (!e.is_full_domain()) {
    throw Error(ErrorKind::DomainNotFull, "M ∔ N is a proper subspace");
  }
  const Matrix pm_perp = Matrix::Identity(e.ambient_dim(), e.ambient_dim()) - e.range().projector_matrix();
  Subspace dx = orthonormalize(pm_perp * e.null_space().basis(), tol);
  return {e.range(), PartialOperator::restrict(e.matrix(), dx)};
}

/// E = [[I, 0], [y, 0]] relative to S ⊕ S⊥ with S = N(E)⊥, where
/// y : P_S(R(E)) → S⊥.
inline BlockRep block_rep_null(const Projection& e, const TolerancePolicy& tol = {}) {
  const Subspace s = e.null_space().complement(tol);
  const Matrix ps = s.projector_matrix();
  const Matrix ps_perp = Matrix::Identity(e.ambient_dim(), e.ambient_dim()) - ps;
  const Matrix rbasis = e.range().basis();
  Subspace dy = orthonormalize(ps * rbasis, tol);
  // y(P_S m) = P_{S⊥} m for m ∈ R(E)
  const Matrix coords = pinv(ps * rbasis, tol) * dy.basis();
  return {s, PartialOperator(std::move(dy), ps_perp * rbasis * coords)};
}

namespace detail {

/// Applies a block to w, a component of v; domain membership is judged
/// relative to ‖v‖ since w may be a cancellation residue.
inline Vector apply_block(const PartialOperator& x, const Vector& w, const Vector& v, const TolerancePolicy& tol) {
  const Subspace& dom = x.domain();
  if (dom.distance(w) > tol.residual_tol() * std::max(v.norm(), 1.0)) {
    throw Error(ErrorKind::NotInDomain, "vector outside the block domain");
  }
  return x.action() * (dom.basis().adjoint() * w);
}

}  // namespace detail

/// Applies the reassembled block form [[I, x], [0, 0]] to v.
inline Vector reassemble_range_form(const BlockRep& rep, const Vector& v, const TolerancePolicy& tol = {}) {
  const Matrix pm = rep.frame.projector_matrix();
  const Vector rest = v - pm * v;
  return pm * v + detail::apply_block(rep.off_diagonal, rest, v, tol);
}

/// Applies the reassembled block form [[I, 0], [y, 0]] to v.
inline Vector reassemble_null_form(const BlockRep& rep, const Vector& v, const TolerancePolicy& tol = {}) {
  const Vector s = rep.frame.projector_matrix() * v;
  return s + detail::apply_block(rep.off_diagonal, s, v, tol);
}

/// E† = P_{N⊥}·P_M.
inline Matrix projection_pinv(const Projection& e) {
  const Index n = e.ambient_dim();
  const Matrix pn_perp = Matrix::Identity(n, n) - e.null_space().projector_matrix();
  return pn_perp * e.range().projector_matrix();
}

// ---------------------------------------------------------------------------
// Φ(T)

/// True when T = P_T·A and N(T) = N(A) with A positive semidefinite.
inline bool is_optimal_factor(const Matrix& t, const HermitianOperator& a, const TolerancePolicy& tol = {}) {
  if (t.rows() != a.dim() || t.cols() != a.dim()) return false;
  if (!is_psd(a, tol)) return false;
  const Matrix pt = range_of(t, tol).projector_matrix();
  if (!approx_equal(pt * a.matrix(), t, tol.residual_tol())) return false;
  // null spaces are compared as projectors
  return nullspace_of(t, tol).same_as(nullspace_of(a.matrix(), tol), tol);
}

/// P_{R(A)//R(T)⊥} for A optimal for T = P·A.
inline Projection phi_set(const Matrix& t, const HermitianOperator& p, const HermitianOperator& a,
                          const TolerancePolicy& tol = {}) {
  require_square(t, "phi_set");
  if (p.dim() != t.rows() || a.dim() != t.rows()) throw Error(ErrorKind::DimensionMismatch, "phi_set");
  const Subspace rt = range_of(t, tol);
  if (!approx_equal(p.matrix(), rt.projector_matrix(), tol.residual_tol())) {
    throw Error(ErrorKind::NotOptimal, "P is not the projector onto R(T)");
  }
  if (!is_psd(a, tol)) throw Error(ErrorKind::NotOptimal, "A is not positive semidefinite");
  if (!approx_equal(p.matrix() * a.matrix(), t, tol.residual_tol())) {
    throw Error(ErrorKind::NotOptimal, "T ≠ P·A");
  }
  if (!nullspace_of(t, tol).same_as(nullspace_of(a.matrix(), tol), tol)) {
    throw Error(ErrorKind::NotOptimal, "N(T) ≠ N(A)");
  }
  return make_projection(range_of(a.matrix(), tol), rt.complement(tol), tol);
}

/// The optimal factor of T ∈ P·L(H)+. At finite dimension it is unique:
/// in the R(T) ⊕ R(T)⊥ frame, T = [[t11, t12], [0, 0]] forces
/// A = [[t11, t12], [t12^H, t12^H t11⁻¹ t12]].
inline HermitianOperator optimal_factor(const Matrix& t, const TolerancePolicy& tol = {}) {
  require_square(t, "optimal_factor");
  const Subspace rt = range_of(t, tol);
  const Subspace rt_perp = rt.complement(tol);
  const Matrix t11 = rt.basis().adjoint() * t * rt.basis();
  const Matrix t12 = rt.basis().adjoint() * t * rt_perp.basis();
  if (!approx_equal(t11, t11.adjoint(), tol.residual_tol())) {
    throw Error(ErrorKind::NotOptimal, "compression of T to R(T) is not Hermitian");
  }
  const auto h11 = HermitianOperator::symmetrized(t11);
  if (!is_psd(h11, tol)) throw Error(ErrorKind::NotOptimal, "T is not in P·L(H)+");
  const Matrix z = t12.adjoint() * pinv_hermitian(h11, tol).matrix() * t12;
  const Matrix a = rt.basis() * t11 * rt.basis().adjoint() + rt.basis() * t12 * rt_perp.basis().adjoint() +
                   rt_perp.basis() * t12.adjoint() * rt.basis().adjoint() +
                   rt_perp.basis() * z * rt_perp.basis().adjoint();
  return HermitianOperator::symmetrized(a);
}

/// Whether R(T^H) ∩ N(T^H) = {0}, the condition for Φ(T) to be a singleton.
inline bool phi_unique_criterion(const Matrix& t, const TolerancePolicy& tol = {}) {
  return intersect(range_of(t.adjoint(), tol), nullspace_of(t.adjoint(), tol), tol).is_zero();
}

// ---------------------------------------------------------------------------
// factorization C = A·D† on R(D)

/// Evaluates C v = A·D†·v for the operator defined by the pair (A, D).
inline Vector kaufman_factor_apply(const Matrix& a, const HermitianOperator& d, const Vector& v,
                                   const TolerancePolicy& tol = {}) {
  if (a.cols() != d.dim() || v.size() != d.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "kaufman_factor_apply");
  }
  if (!is_psd(d, tol)) throw Error(ErrorKind::NotPositive, "D must be positive semidefinite");
  const Subspace nd = nullspace_of(d.matrix(), tol);
  if (nd.dim() && fro(a * nd.basis()) > tol.residual_tol() * std::max(fro(a), 1.0)) {
    throw Error(ErrorKind::NullspaceViolation, "N(D) is not contained in N(A)");
  }
  if (!range_of(d.matrix(), tol).contains(v, tol)) {
    throw Error(ErrorKind::NotInDomain, "v is not in R(D)");
  }
  return a * (pinv_hermitian(d, tol).matrix() * v);
}

}  // namespace orcalc
