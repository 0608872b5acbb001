#pragma once

// B-symmetric projections for a selfadjoint (possibly indefinite) weight B:
// Grammian splits of S, the two equivalent B-symmetry criteria, the
// construction of a B-symmetric projection onto S, the ΓBΓ commutation test
// and the equation b^H = x·a.

#include "orcalc/blocks.hpp"
#include "orcalc/proj.hpp"

namespace orcalc {

/// G_{B,S} = G1 − G2 with G1, G2 ≥ 0, G1·G2 = 0, and S = S₊ ⊕ S₋.
struct GrammianSplit {
  HermitianOperator g1;  // S-coordinates
  HermitianOperator g2;  // S-coordinates
  Subspace splus;        // lifted to C^n
  Subspace sminus;       // lifted to C^n; includes N(G_{B,S})
};

inline GrammianSplit grammian_split(const HermitianOperator& b, const Subspace& s,
                                    const TolerancePolicy& tol = {}) {
  if (s.ambient_dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "grammian_split");
  const Index k = s.dim();
  const auto g = HermitianOperator::symmetrized(s.basis().adjoint() * b.matrix() * s.basis());
  const auto e = eigh(g);
  const double cut = tol.rank_cutoff(std::max(spectral_radius(e), spectral_norm(b.matrix())), k, k);

  RealVector pos = RealVector::Zero(k), neg = RealVector::Zero(k);
  std::vector<Index> plus_idx, minus_idx;
  for (Index i = 0; i < k; ++i) {
    const double lam = e.values(i);
    if (lam > cut) {
      pos(i) = lam;
      plus_idx.push_back(i);
    } else {
      if (lam < -cut) neg(i) = -lam;
      minus_idx.push_back(i);
    }
  }
  auto pick = [&](const std::vector<Index>& idx) {
    Matrix cols(s.ambient_dim(), static_cast<Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) cols.col(static_cast<Index>(j)) = s.basis() * e.vectors.col(idx[j]);
    return Subspace::from_orthonormal(cols);
  };
  const Matrix& v = e.vectors;
  return {HermitianOperator::symmetrized(v * pos.cast<Scalar>().asDiagonal() * v.adjoint()),
          HermitianOperator::symmetrized(v * neg.cast<Scalar>().asDiagonal() * v.adjoint()),
          pick(plus_idx), pick(minus_idx)};
}

/// Both B-symmetry routes with their margins.
struct BSymmetryReport {
  bool subspace_route = false;  // N(E) ⊆ (B·R(E))⊥
  double subspace_margin = 0.0; // max ‖P_{BM} n‖ over unit n ∈ N(E)
  bool operator_route = false;  // BE = E^H B on D(E)
  double operator_margin = 0.0; // rel ‖V^H B E V − (EV)^H B V‖
  bool agree() const { return subspace_route == operator_route; }
};

inline BSymmetryReport b_symmetry_report(const Projection& e, const HermitianOperator& b,
                                         const TolerancePolicy& tol = {}) {
  if (e.ambient_dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "is_b_symmetric");
  BSymmetryReport r;
  const Subspace bm = range_of(b.matrix() * e.range().basis(), tol, spectral_norm(b.matrix()));
  const Matrix& nb = e.null_space().basis();
  r.subspace_margin = (bm.dim() && nb.cols()) ? spectral_norm(bm.basis().adjoint() * nb) : 0.0;
  r.subspace_route = r.subspace_margin <= tol.residual_tol();

  const Matrix& v = e.domain().basis();
  const Matrix& ev = e.base().action();
  r.operator_margin = rel_distance(v.adjoint() * b.matrix() * ev, ev.adjoint() * b.matrix() * v);
  r.operator_route = r.operator_margin <= tol.residual_tol();
  return r;
}

inline bool is_b_symmetric(const Projection& e, const HermitianOperator& b, const TolerancePolicy& tol = {}) {
  return b_symmetry_report(e, b, tol).subspace_route;
}

/// P_{S // (BS)⊥ ∩ L'⊥} with L' = S ∩ (BS)⊥; exists when S + (BS)⊥ = C^n.
inline Projection b_symmetric_construct(const HermitianOperator& b, const Subspace& s,
                                        const TolerancePolicy& tol = {}) {
  if (s.ambient_dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "b_symmetric_construct");
  const double scale = spectral_norm(b.matrix());
  const Subspace bs_perp = range_of(b.matrix() * s.basis(), tol, scale).complement(tol);
  if (subspace_sum(s, bs_perp, tol).dim() != s.ambient_dim()) {
    throw Error(ErrorKind::NotSpanning, "S + (BS)⊥ is a proper subspace");
  }
  const Subspace lprime = intersect(s, bs_perp, tol);
  const Subspace null = intersect(bs_perp, lprime.complement(tol), tol);
  Projection e = make_projection(s, null, tol);

  if (!is_b_symmetric(e, b, tol)) {
    throw Error(ErrorKind::NotBSymmetric, "constructed projection failed the B-symmetry check");
  }
  // S ∩ (BS)⊥ = S ∩ N(B) under the spanning hypothesis
  if (!lprime.same_as(intersect(s, nullspace_of(b.matrix(), tol), tol), tol)) {
    throw Error(ErrorKind::NotSpanning, "S ∩ (BS)⊥ differs from S ∩ N(B)");
  }
  return e;
}

/// rel ‖Pγ·ΓBΓ − ΓBΓ·Pγ‖.
inline double commutation_margin(const HermitianOperator& b, const GammaRep& rep) {
  const Matrix& g = rep.gamma.matrix();
  const Matrix gbg = g * b.matrix() * g;
  const Matrix& p = rep.pgamma.matrix();
  return fro(p * gbg - gbg * p) / std::max(fro(gbg), 1e-300);
}

inline bool commutation_check(const Projection& e, const HermitianOperator& b, const GammaRep& rep,
                              const TolerancePolicy& tol = {}) {
  if (e.ambient_dim() != b.dim() || rep.gamma.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "commutation_check");
  }
  const Matrix& g = rep.gamma.matrix();
  if (fro(g * b.matrix() * g) == 0.0) return true;
  return commutation_margin(b, rep) <= tol.residual_tol();
}

/// Reduced solution x₀ = b^H·a† of b^H = x·a, as a map R(a) ⊆ S → S⊥.
inline PartialOperator solve_xa(const HermitianOperator& b, const Subspace& s, const TolerancePolicy& tol = {}) {
  const auto blk = block_decompose(b, s, tol);
  const Subspace ra = range_of(blk.a.matrix(), tol, blk.scale);
  if (ra.leak(blk.b) > tol.residual_tol()) {
    throw Error(ErrorKind::NoSolution, "b^H = x·a has no solution: R(b) is not contained in R(a)");
  }
  const Matrix x0 = blk.b.adjoint() * pinv_hermitian(blk.a, tol, blk.scale).matrix();
  Subspace dom = Subspace::from_orthonormal(s.basis() * ra.basis());
  return {std::move(dom), blk.s_perp.basis() * x0 * ra.basis()};
}

/// E = [[I, x₀^H], [0, 0]] relative to S ⊕ S⊥, with x₀ extended by zero on N(a).
inline Projection xa_projection(const HermitianOperator& b, const Subspace& s, const TolerancePolicy& tol = {}) {
  const auto x0 = solve_xa(b, s, tol);
  const Matrix ps = s.projector_matrix();
  const Matrix e = ps + x0.zero_extension().adjoint();
  const Subspace s_perp = s.complement(tol);
  const Matrix nbasis = s_perp.basis() - x0.zero_extension().adjoint() * s_perp.basis();
  return Projection::assemble(PartialOperator(Subspace::full(b.dim()), e), s, orthonormalize(nbasis, tol));
}

}  // namespace orcalc
