#pragma once

// Complementability of a selfadjoint B with respect to a subspace S, the
// Schur complement B_{/S} = [[0, 0], [0, c − f^H u f]] and everything built
// around it: Riccati witnesses, the projections E₀ and P*(B, S), the split
// B = B₁ + B₂ − B₃, the minus / left-minus / ≺ orders and the maximality of
// B_{/S} in M(B, S).
//
// At finite dimension every closure in these statements is a plain range, so
// overline{BS} is R(B·Q_S), overline{BE} is B·E and overline{R(a)} is R(a).

#include <optional>
#include <random>
#include <vector>

#include "orcalc/weights.hpp"

namespace orcalc {

// ---------------------------------------------------------------------------
// predicates

/// a = u|a|, |a|^{1/2} and the reduced solution f of b = |a|^{1/2}x.
struct WeakWitness {
  HermitianOperator u;
  HermitianOperator absa_half;
  Matrix f;
};

namespace detail {

/// Spectral data of the S-block a, with zero decided against ‖B‖.
struct BlockSpectrum {
  HermitianEigen eig;
  double cut = 0.0;
};

inline BlockSpectrum block_spectrum(const BlockDecomposition& blk, const TolerancePolicy& tol) {
  BlockSpectrum s;
  s.eig = eigh(blk.a);
  const Index k = blk.a.dim();
  s.cut = tol.rank_cutoff(std::max(spectral_radius(s.eig), blk.scale), k, k);
  return s;
}

template <typename Fn>
Matrix spectral_map(const BlockSpectrum& s, Fn g) {
  const Index k = s.eig.values.size();
  RealVector mapped(k);
  for (Index i = 0; i < k; ++i) {
    const double lam = std::abs(s.eig.values(i)) <= s.cut ? 0.0 : s.eig.values(i);
    mapped(i) = g(lam);
  }
  return s.eig.vectors * mapped.cast<Scalar>().asDiagonal() * s.eig.vectors.adjoint();
}

inline Matrix support_projector(const BlockSpectrum& s) {
  return spectral_map(s, [](double lam) { return lam != 0.0 ? 1.0 : 0.0; });
}

inline double weak_leak(const BlockDecomposition& blk, const BlockSpectrum& s) {
  if (blk.b.size() == 0) return 0.0;
  const Matrix p = support_projector(s);
  return fro(blk.b - p * blk.b);
}

}  // namespace detail

/// ‖(I − P_{R(|a|^{1/2})})b‖ / ‖b‖ (zero when b = 0).
inline double weak_margin(const BlockDecomposition& blk, const TolerancePolicy& tol = {}) {
  const double nb = fro(blk.b);
  if (nb == 0.0) return 0.0;
  return detail::weak_leak(blk, detail::block_spectrum(blk, tol)) / nb;
}

/// R(b) ⊆ R(a), cross-checked against C^n = S + (BS)⊥.
struct ComplementabilityReport {
  bool block_route = false;
  double margin = 0.0;  // ‖(I − P_{R(a)})b‖ / max(‖b‖, 1)
  bool geometric_route = false;
};

inline ComplementabilityReport complementability_report(const HermitianOperator& b, const Subspace& s,
                                                        const TolerancePolicy& tol = {}) {
  const auto blk = block_decompose(b, s, tol);
  ComplementabilityReport r;
  r.margin = range_of(blk.a.matrix(), tol, blk.scale).leak(blk.b);
  r.block_route = r.margin <= tol.residual_tol();
  const Subspace bs_perp = range_of(b.matrix() * s.basis(), tol, blk.scale).complement(tol);
  r.geometric_route = subspace_sum(s, bs_perp, tol).dim() == b.dim();
  return r;
}

inline bool is_complementable(const HermitianOperator& b, const Subspace& s, const TolerancePolicy& tol = {}) {
  return complementability_report(b, s, tol).block_route;
}

inline std::optional<WeakWitness> weak_witness(const BlockDecomposition& blk, const TolerancePolicy& tol = {},
                                               ZeroSign zero_sign = ZeroSign::Positive) {
  const auto spec = detail::block_spectrum(blk, tol);
  if (detail::weak_leak(blk, spec) > tol.residual_tol() * std::max(fro(blk.b), 1.0)) {
    return std::nullopt;
  }
  const double s0 = zero_sign == ZeroSign::Positive ? 1.0 : -1.0;
  WeakWitness w;
  w.u = HermitianOperator::symmetrized(
      detail::spectral_map(spec, [s0](double l) { return l > 0 ? 1.0 : l < 0 ? -1.0 : s0; }));
  w.absa_half = HermitianOperator::symmetrized(
      detail::spectral_map(spec, [](double l) { return std::sqrt(std::abs(l)); }));
  const Matrix half_pinv =
      detail::spectral_map(spec, [](double l) { return l != 0.0 ? 1.0 / std::sqrt(std::abs(l)) : 0.0; });
  w.f = half_pinv * blk.b;
  return w;
}

/// R(b) ⊆ R(|a|^{1/2}); the witness is present exactly when the answer is yes.
inline std::pair<bool, std::optional<WeakWitness>> is_weakly_complementable(
    const HermitianOperator& b, const Subspace& s, const TolerancePolicy& tol = {}) {
  auto w = weak_witness(block_decompose(b, s, tol), tol);
  const bool ok = w.has_value();
  return {ok, std::move(w)};
}

/// overline{BS} ∩ S⊥ = {0}.
inline bool is_quasi_complementable(const HermitianOperator& b, const Subspace& s, const TolerancePolicy& tol = {}) {
  if (s.ambient_dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "is_quasi_complementable");
  const Subspace bs = range_of(b.matrix() * s.basis(), tol, spectral_norm(b.matrix()));
  return intersect(bs, s.complement(tol), tol).is_zero();
}

namespace detail {

struct WeakContext {
  BlockDecomposition blk;
  WeakWitness w;
};

inline WeakContext require_weak(const HermitianOperator& b, const Subspace& s, const TolerancePolicy& tol,
                                ZeroSign zero_sign = ZeroSign::Positive) {
  auto blk = block_decompose(b, s, tol);
  auto w = weak_witness(blk, tol, zero_sign);
  if (!w) throw Error(ErrorKind::NotWeaklyComplementable, "R(b) is not contained in R(|a|^{1/2})");
  return {std::move(blk), std::move(*w)};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Riccati witness and block positivity

/// A = [[|a|, u|a|^{1/2}f], [f^H|a|^{1/2}u, f^H f]], a positive solution of
/// B·P_S·B = X·P_S·X^H.
inline HermitianOperator riccati_witness(const HermitianOperator& b, const Subspace& s,
                                         const TolerancePolicy& tol = {}) {
  const auto ctx = detail::require_weak(b, s, tol);
  const Matrix& u = ctx.w.u.matrix();
  const Matrix& h = ctx.w.absa_half.matrix();
  const Matrix& f = ctx.w.f;
  const Matrix off = u * h * f;
  return HermitianOperator::symmetrized(ctx.blk.lift(h * h, off, off.adjoint(), f.adjoint() * f));
}

/// ‖B P_S B − X P_S X^H‖_F / max(‖B‖_F², 1).
inline double riccati_residual(const HermitianOperator& b, const Subspace& s, const Matrix& x) {
  const Matrix ps = s.projector_matrix();
  const Matrix& m = b.matrix();
  return fro(m * ps * m - x * ps * x.adjoint()) / std::max(fro(m) * fro(m), 1.0);
}

struct PositivityReport {
  bool a_psd = false;
  bool b_in_range = false;
  bool t_psd = false;      // t = c − f^H f
  bool blocks = false;     // conjunction of the three
  bool spectral = false;   // λ_min(B) ≥ −tol·‖B‖
};

inline PositivityReport positivity_report(const HermitianOperator& b, const Subspace& s,
                                          const TolerancePolicy& tol = {}) {
  const auto blk = block_decompose(b, s, tol);
  const double floor = -tol.residual_tol() * std::max(blk.scale, 1e-300);
  PositivityReport r;
  const auto spec = detail::block_spectrum(blk, tol);
  r.a_psd = spec.eig.values.size() == 0 || spec.eig.values(0) >= floor;
  if (r.a_psd) {
    r.b_in_range = detail::weak_leak(blk, spec) <= tol.residual_tol() * std::max(fro(blk.b), 1.0);
    if (r.b_in_range) {
      const Matrix half_pinv =
          detail::spectral_map(spec, [](double l) { return l > 0.0 ? 1.0 / std::sqrt(l) : 0.0; });
      const Matrix f = half_pinv * blk.b;
      const auto t = HermitianOperator::symmetrized(blk.c.matrix() - f.adjoint() * f);
      r.t_psd = t.dim() == 0 || min_eigenvalue(t) >= floor;
    }
  }
  r.blocks = r.a_psd && r.b_in_range && r.t_psd;
  r.spectral = b.dim() == 0 || min_eigenvalue(b) >= floor;
  return r;
}

/// a ≥ 0, R(b) ⊆ R(a^{1/2}) and c − f^H f ≥ 0.
inline bool positivity_blocks(const HermitianOperator& b, const Subspace& s, const TolerancePolicy& tol = {}) {
  return positivity_report(b, s, tol).blocks;
}

// ---------------------------------------------------------------------------
// Schur complement

inline HermitianOperator schur_complement(const HermitianOperator& b, const Subspace& s,
                                          const TolerancePolicy& tol = {},
                                          ZeroSign zero_sign = ZeroSign::Positive) {
  const auto ctx = detail::require_weak(b, s, tol, zero_sign);
  const Matrix& f = ctx.w.f;
  const Matrix tail = ctx.blk.c.matrix() - f.adjoint() * ctx.w.u.matrix() * f;
  const Index k = s.dim(), m = ctx.blk.s_perp.dim();
  return HermitianOperator::symmetrized(
      ctx.blk.lift(Matrix::Zero(k, k), Matrix::Zero(k, m), Matrix::Zero(m, k), tail));
}

/// B_S = B − B_{/S}.
inline HermitianOperator compression(const HermitianOperator& b, const Subspace& s, const TolerancePolicy& tol = {}) {
  return HermitianOperator::symmetrized(b.matrix() - schur_complement(b, s, tol).matrix());
}

// ---------------------------------------------------------------------------
// E₀ and P*(B, S)

/// E₀ = [[I, 0], [y₀, 0]] with y₀ = f^H u (|a|^{1/2})†.
inline Projection e0_projection(const HermitianOperator& b, const Subspace& s, const TolerancePolicy& tol = {}) {
  const auto ctx = detail::require_weak(b, s, tol);
  const auto half_pinv = pinv_hermitian(ctx.w.absa_half, tol, std::sqrt(ctx.blk.scale));
  const Matrix y0 = ctx.w.f.adjoint() * ctx.w.u.matrix() * half_pinv.matrix();
  const Matrix& vs = ctx.blk.s.basis();
  const Matrix& vp = ctx.blk.s_perp.basis();
  const Matrix e = vs * vs.adjoint() + vp * y0 * vs.adjoint();
  return Projection::assemble(PartialOperator(Subspace::full(b.dim()), e),
                              Subspace::from_orthonormal(orthonormalize(vs + vp * y0, tol).basis()),
                              ctx.blk.s_perp);
}

/// The block y of E = [[I, 0], [y, 0]] in S-coordinates, with its margins
/// against the conditions defining P*(B, S).
struct PStarReport {
  bool member = false;
  double domain_leak = 0.0;    // R(|a|^{1/2}) ⊄ D(y)
  double ya_residual = 0.0;    // rel ‖y·a − b^H‖
  double yb_asymmetry = 0.0;   // rel ‖y·b − (y·b)^H‖
  bool range_route = false;    // BS ⊆ R(E)
};

inline PStarReport pstar_report(const Projection& e, const HermitianOperator& b, const Subspace& s,
                                const TolerancePolicy& tol = {}) {
  if (e.ambient_dim() != b.dim() || s.ambient_dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "pstar_membership");
  }
  const auto blk = block_decompose(b, s, tol);
  if (!e.null_space().same_as(blk.s_perp, tol)) {
    throw Error(ErrorKind::WrongNullspace, "N(E) ≠ S⊥");
  }
  PStarReport r;
  const auto yrep = block_rep_null(e, tol);
  const PartialOperator& y = yrep.off_diagonal;
  const Matrix& vs = blk.s.basis();
  const Matrix& vp = blk.s_perp.basis();
  const auto spec = detail::block_spectrum(blk, tol);
  const Matrix supp = vs * detail::support_projector(spec);
  r.domain_leak = y.domain().leak(supp);

  const Matrix a_lift = vs * blk.a.matrix();
  const Matrix b_lift = vs * blk.b;
  const double dl = std::max(y.domain().leak(a_lift), y.domain().leak(b_lift));
  r.domain_leak = std::max(r.domain_leak, dl);
  if (r.domain_leak > tol.residual_tol()) return r;

  const Matrix ya = vp.adjoint() * y.apply(a_lift, tol);
  const Matrix yb = vp.adjoint() * y.apply(b_lift, tol);
  r.ya_residual = rel_distance(ya, blk.b.adjoint());
  r.yb_asymmetry = rel_distance(yb, yb.adjoint());
  r.member = r.ya_residual <= tol.residual_tol() && r.yb_asymmetry <= tol.residual_tol();

  const Matrix bs = b.matrix() * vs;
  r.range_route = e.range().leak(bs) <= tol.residual_tol();
  return r;
}

inline bool pstar_membership(const Projection& e, const HermitianOperator& b, const Subspace& s,
                             const TolerancePolicy& tol = {}) {
  return pstar_report(e, b, s, tol).member;
}

/// (BS + S⊥)⊥ = S ∩ (BS)⊥, the only directions an admissible W may act on.
inline Subspace pstar0_free_directions(const HermitianOperator& b, const Subspace& s, const TolerancePolicy& tol = {}) {
  const double scale = spectral_norm(b.matrix());
  const Subspace bs = range_of(b.matrix() * s.basis(), tol, scale);
  return subspace_sum(bs, s.complement(tol), tol).complement(tol);
}

/// E₀ + W for W with R(W) ⊆ S⊥ and BS ∔ S⊥ ⊆ N(W).
inline Projection pstar0_perturb(const HermitianOperator& b, const Subspace& s, const PartialOperator& w,
                                 const TolerancePolicy& tol = {}) {
  if (w.ambient_dim() != b.dim() || w.target_dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "pstar0_perturb");
  }
  const Projection e0 = e0_projection(b, s, tol);
  if (!w.is_full_domain()) {
    throw Error(ErrorKind::InadmissibleW, "D(E₀) ⊄ D(W): W must be defined on all of C^n");
  }
  const Subspace s_perp = s.complement(tol);
  const Matrix wm = w.zero_extension();
  const double wscale = std::max(fro(wm), 1.0);
  if (s_perp.leak(wm) > tol.residual_tol()) {
    throw Error(ErrorKind::InadmissibleW, "R(W) ⊄ S⊥");
  }
  const double bscale = std::max(spectral_norm(b.matrix()), 1.0);
  if (fro(wm * b.matrix() * s.basis()) > tol.residual_tol() * wscale * bscale) {
    throw Error(ErrorKind::InadmissibleW, "BS ⊄ N(W)");
  }
  if (fro(wm * s_perp.basis()) > tol.residual_tol() * wscale) {
    throw Error(ErrorKind::InadmissibleW, "S⊥ ⊄ N(W)");
  }
  const Matrix e = e0.matrix() + wm;
  return Projection::assemble(PartialOperator(Subspace::full(b.dim()), e),
                              orthonormalize(e * s.basis(), tol), e0.null_space());
}

/// (I − E)·B for E ∈ P*(B, S).
inline HermitianOperator schur_via_projection(const HermitianOperator& b, const Subspace& s, const Projection& e,
                                              const TolerancePolicy& tol = {}) {
  if (!pstar_membership(e, b, s, tol)) throw Error(ErrorKind::NotMember, "E ∉ P*(B, S)");
  const Matrix eb = e.apply(Matrix(b.matrix()), tol);
  return HermitianOperator::symmetrized(b.matrix() - eb);
}

// ---------------------------------------------------------------------------
// B = B₁ + B₂ − B₃

struct WeakDecomposition {
  HermitianOperator b1;
  HermitianOperator b2;
  HermitianOperator b3;
};

/// a = a₊ − a₋, f± = P_{R(a±)} f,
/// B₂ = [[a₊, a₊^{1/2}f₊], [·, f₊^H f₊]], B₃ = [[a₋, −a₋^{1/2}f₋], [·, f₋^H f₋]],
/// B₁ = B − B₂ + B₃ (which equals B_{/S}).
inline WeakDecomposition weak_decomposition(const HermitianOperator& b, const Subspace& s,
                                            const TolerancePolicy& tol = {}) {
  const auto ctx = detail::require_weak(b, s, tol);
  const auto spec = detail::block_spectrum(ctx.blk, tol);
  const Matrix aplus = detail::spectral_map(spec, [](double l) { return l > 0 ? l : 0.0; });
  const Matrix aminus = detail::spectral_map(spec, [](double l) { return l < 0 ? -l : 0.0; });
  const Matrix hplus = detail::spectral_map(spec, [](double l) { return l > 0 ? std::sqrt(l) : 0.0; });
  const Matrix hminus = detail::spectral_map(spec, [](double l) { return l < 0 ? std::sqrt(-l) : 0.0; });
  const Matrix pplus = detail::spectral_map(spec, [](double l) { return l > 0 ? 1.0 : 0.0; });
  const Matrix pminus = detail::spectral_map(spec, [](double l) { return l < 0 ? 1.0 : 0.0; });
  const Matrix fplus = pplus * ctx.w.f;
  const Matrix fminus = pminus * ctx.w.f;

  const Matrix off2 = hplus * fplus;
  const Matrix off3 = -hminus * fminus;
  auto b2 = HermitianOperator::symmetrized(ctx.blk.lift(aplus, off2, off2.adjoint(), fplus.adjoint() * fplus));
  auto b3 = HermitianOperator::symmetrized(ctx.blk.lift(aminus, off3, off3.adjoint(), fminus.adjoint() * fminus));
  auto b1 = HermitianOperator::symmetrized(b.matrix() - b2.matrix() + b3.matrix());
  return {std::move(b1), std::move(b2), std::move(b3)};
}

// ---------------------------------------------------------------------------
// B-symmetric projections onto S

/// overline{BE} = B₂^{1/2}P_{M₂}B₂^{1/2} − B₃^{1/2}P_{M₃}B₃^{1/2} with
/// M₂ = B₂^{1/2}(S₊) and M₃ = B₃^{1/2}(S₋).
inline HermitianOperator closure_extension(const Projection& e, const HermitianOperator& b,
                                           const TolerancePolicy& tol = {}) {
  if (!is_b_symmetric(e, b, tol)) throw Error(ErrorKind::NotBSymmetric, "E is not B-symmetric");
  const Subspace& s = e.range();
  const auto dec = weak_decomposition(b, s, tol);
  const auto split = grammian_split(b, s, tol);
  const double scale = std::max(spectral_norm(b.matrix()), 1e-300);
  const auto h2 = sqrt_psd(dec.b2, tol, scale);
  const auto h3 = sqrt_psd(dec.b3, tol, scale);
  const Matrix p2 = range_of(h2.matrix() * split.splus.basis(), tol, std::sqrt(scale)).projector_matrix();
  const Matrix p3 = range_of(h3.matrix() * split.sminus.basis(), tol, std::sqrt(scale)).projector_matrix();
  return HermitianOperator::symmetrized(h2.matrix() * p2 * h2.matrix() - h3.matrix() * p3 * h3.matrix());
}

struct BSymSplit {
  Projection eplus;   // P_{S₊}E, B₂-symmetric
  Projection eminus;  // P_{S₋}E, B₃-symmetric
};

inline BSymSplit bsym_split(const Projection& e, const HermitianOperator& b, const Subspace& s,
                            const TolerancePolicy& tol = {}) {
  if (!e.range().same_as(s, tol)) throw Error(ErrorKind::RangeMismatch, "R(E) ≠ S");
  if (!is_b_symmetric(e, b, tol)) throw Error(ErrorKind::NotBSymmetric, "E is not B-symmetric");
  detail::require_weak(b, s, tol);
  const auto split = grammian_split(b, s, tol);
  const Matrix em = e.matrix();
  return {Projection::from_matrix(split.splus.projector_matrix() * em, tol),
          Projection::from_matrix(split.sminus.projector_matrix() * em, tol)};
}

// ---------------------------------------------------------------------------
// matrix orders

enum class OrderKind { Minus, LeftMinus, Prec };

inline std::string_view to_string(OrderKind k) {
  switch (k) {
    case OrderKind::Minus: return "minus";
    case OrderKind::LeftMinus: return "left-minus";
    case OrderKind::Prec: return "prec";
  }
  return "unknown";
}

inline std::optional<OrderKind> parse_order_kind(std::string_view s) {
  if (s == "minus") return OrderKind::Minus;
  if (s == "left-minus") return OrderKind::LeftMinus;
  if (s == "prec") return OrderKind::Prec;
  return std::nullopt;
}

struct OrderVerdict {
  bool holds = false;
  double margin = 0.0;            // smallest principal-angle sine among the tested pairs
  std::optional<Matrix> left;     // P with A = P·B
  std::optional<Matrix> right;    // Q with A^H = Q·B^H
  double witness_residual = 0.0;  // rel ‖A − P·B‖ (and its adjoint twin)
};

namespace detail {

struct SideRanges {
  Subspace ra, rd, rb;
};

inline SideRanges side_ranges(const Matrix& a, const Matrix& b, double scale, const TolerancePolicy& tol) {
  return {range_of(a, tol, scale), range_of(b - a, tol, scale), range_of(b, tol, scale)};
}

/// R(B) = R(A) ∔ R(B − A).
inline bool range_additive(const SideRanges& r, const TolerancePolicy& tol) {
  if (!intersect(r.ra, r.rd, tol).is_zero()) return false;
  return subspace_sum(r.ra, r.rd, tol).same_as(r.rb, tol);
}

/// P_{R(A) // R(B−A) ⊕ N(B^H)}.
inline Matrix left_witness(const SideRanges& r, const TolerancePolicy& tol) {
  const Subspace null = subspace_sum(r.rd, r.rb.complement(tol), tol);
  return make_projection(r.ra, null, tol).matrix();
}

}  // namespace detail

inline OrderVerdict order_check(OrderKind kind, const Matrix& a, const Matrix& b, const TolerancePolicy& tol = {}) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "order_check: shapes differ");
  }
  const double scale = std::max(spectral_norm(a), spectral_norm(b));
  const auto col = detail::side_ranges(a, b, scale, tol);
  const Matrix ah = a.adjoint(), bh = b.adjoint();
  const auto row = detail::side_ranges(ah, bh, scale, tol);

  OrderVerdict v;
  v.margin = std::min(min_angle_sine(col.ra, col.rd), min_angle_sine(row.ra, row.rd));
  switch (kind) {
    case OrderKind::Prec:
      v.holds = intersect(col.ra, col.rd, tol).is_zero() && intersect(row.ra, row.rd, tol).is_zero();
      break;
    case OrderKind::LeftMinus:
      v.holds = detail::range_additive(col, tol);
      v.margin = min_angle_sine(col.ra, col.rd);
      break;
    case OrderKind::Minus:
      v.holds = detail::range_additive(col, tol) && detail::range_additive(row, tol);
      break;
  }
  if (v.holds && kind != OrderKind::Prec && a.rows() == a.cols()) {
    v.left = detail::left_witness(col, tol);
    v.witness_residual = rel_distance(*v.left * b, a);
    if (kind == OrderKind::Minus) {
      v.right = detail::left_witness(row, tol);
      v.witness_residual = std::max(v.witness_residual, rel_distance(*v.right * bh, ah));
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// M(B, S) and the maximum theorem

/// X = Q·B with Q idempotent, X Hermitian and R(X) ⊆ S⊥.
struct MSetMember {
  HermitianOperator x;
  Matrix q;
  std::string origin;
};

/// Checks the defining conditions of M(B, S) for (X, Q).
inline bool is_m_set_member(const HermitianOperator& b, const Subspace& s, const MSetMember& m,
                            const TolerancePolicy& tol = {}) {
  const Matrix& x = m.x.matrix();
  const double t = tol.residual_tol();
  return approx_equal(m.q * m.q, m.q, t) && approx_equal(m.q * b.matrix(), x, t) &&
         approx_equal(x, x.adjoint(), t) && s.complement(tol).leak(x) <= t;
}

namespace detail {

inline Matrix random_complex(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> nd;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Scalar(nd(rng), nd(rng));
  return m;
}

}  // namespace detail

/// Deterministic sample of M(B, S): B_{/S} from I − E₀, the zero member,
/// I − (E₀ + W) for random admissible W, Schur complements to random
/// supersets S' ⊇ S, and rejection-sampled random idempotents.
inline std::vector<MSetMember> m_set_sample(const HermitianOperator& b, const Subspace& s, int count,
                                            std::uint64_t seed, const TolerancePolicy& tol = {}) {
  const Index n = b.dim();
  const Matrix id = Matrix::Identity(n, n);
  std::vector<MSetMember> out;

  const Projection e0 = e0_projection(b, s, tol);
  out.push_back({schur_complement(b, s, tol), id - e0.matrix(), "I-E0"});
  out.push_back({HermitianOperator::symmetrized(Matrix::Zero(n, n)), Matrix::Zero(n, n), "zero"});

  std::mt19937_64 rng(seed);
  const Subspace free = pstar0_free_directions(b, s, tol);
  const Subspace s_perp = s.complement(tol);
  auto keep = [&](MSetMember m) {
    if (is_m_set_member(b, s, m, tol)) out.push_back(std::move(m));
  };

  for (int i = 0; i < count; ++i) {
    const int family = i % 3;
    if (family == 0 && !free.is_zero() && !s_perp.is_zero()) {
      const Matrix z = detail::random_complex(rng, s_perp.dim(), free.dim());
      const PartialOperator w(Subspace::full(n), s_perp.basis() * z * free.basis().adjoint());
      const Projection e = pstar0_perturb(b, s, w, tol);
      const Matrix q = id - e.matrix();
      keep({HermitianOperator::symmetrized(q * b.matrix()), q, "I-(E0+W)"});
    } else if (family <= 1 && !s_perp.is_zero()) {
      std::uniform_int_distribution<Index> extra(1, s_perp.dim());
      const Index j = extra(rng);
      const Matrix add = s_perp.basis() * detail::random_complex(rng, s_perp.dim(), j);
      const Subspace bigger = orthonormalize(hconcat(s.basis(), add), tol);
      auto w = weak_witness(block_decompose(b, bigger, tol), tol);
      if (!w) continue;
      const Matrix q = id - e0_projection(b, bigger, tol).matrix();
      keep({schur_complement(b, bigger, tol), q, "shorted-superset"});
    } else {
      // random oblique idempotent, kept only if it happens to qualify
      std::uniform_int_distribution<Index> rk(0, n);
      const Index r = rk(rng);
      const Matrix left = detail::random_complex(rng, n, r);
      const Matrix right = detail::random_complex(rng, n, n - r);
      const Subspace m = orthonormalize(left, tol), nn = orthonormalize(right, tol);
      if (!intersect(m, nn, tol).is_zero() || m.dim() + nn.dim() != n) continue;
      const Matrix q = make_projection(m, nn, tol).matrix();
      const Matrix x = q * b.matrix();
      if (!approx_equal(x, x.adjoint(), tol.residual_tol())) continue;
      keep({HermitianOperator::symmetrized(x), q, "random-idempotent"});
    }
  }
  return out;
}

/// X ≺ candidate for every sampled X, and the candidate occurs in the sample.
inline bool max_check_against(const HermitianOperator& candidate, const std::vector<MSetMember>& sample,
                              const TolerancePolicy& tol = {}) {
  bool present = false;
  for (const auto& m : sample) {
    if (!order_check(OrderKind::Prec, m.x.matrix(), candidate.matrix(), tol).holds) return false;
    present = present || approx_equal(m.x.matrix(), candidate.matrix(), tol.residual_tol());
  }
  return present;
}

inline bool max_check(const HermitianOperator& b, const Subspace& s, const std::vector<MSetMember>& sample,
                      const TolerancePolicy& tol = {}) {
  return max_check_against(schur_complement(b, s, tol), sample, tol);
}

}  // namespace orcalc
