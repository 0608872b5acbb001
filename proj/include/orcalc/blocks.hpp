#pragma once

#include "orcalc/numlin.hpp"

namespace orcalc {

/// B = [[a, b], [b^H, c]] in the canonical (S, S⊥) bases.
struct BlockDecomposition {
  Subspace s;
  Subspace s_perp;
  HermitianOperator a;  // S-coordinates
  Matrix b;             // S⊥ → S coordinates
  HermitianOperator c;  // S⊥-coordinates
  double scale = 0.0;   // spectral norm of B, the reference for block rank cutoffs

  Index ambient_dim() const { return s.ambient_dim(); }

  /// Lifts block coordinates back to an operator on C^n.
  Matrix lift(const Matrix& aa, const Matrix& bb, const Matrix& bc, const Matrix& cc) const {
    const Matrix& vs = s.basis();
    const Matrix& vp = s_perp.basis();
    return vs * aa * vs.adjoint() + vs * bb * vp.adjoint() + vp * bc * vs.adjoint() +
           vp * cc * vp.adjoint();
  }

  Matrix assemble() const { return lift(a.matrix(), b, b.adjoint(), c.matrix()); }
};

inline BlockDecomposition block_decompose(const HermitianOperator& big_b, const Subspace& s,
                                          const TolerancePolicy& tol = {}) {
  if (s.ambient_dim() != big_b.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "block_decompose: subspace and operator dimensions differ");
  }
  BlockDecomposition d;
  d.s = s;
  d.s_perp = s.complement(tol);
  const Matrix& vs = d.s.basis();
  const Matrix& vp = d.s_perp.basis();
  const Matrix& m = big_b.matrix();
  d.a = HermitianOperator::symmetrized(vs.adjoint() * m * vs);
  d.b = vs.adjoint() * m * vp;
  d.c = HermitianOperator::symmetrized(vp.adjoint() * m * vp);
  d.scale = spectral_norm(m);
  return d;
}

}  // namespace orcalc
