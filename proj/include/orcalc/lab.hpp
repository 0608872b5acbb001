#pragma once

// Finite truncations of two infinite-dimensional model families whose
// complementability behaviour only separates in the limit. The truncations
// are complementable in every sense; what they expose are trends in n.
//
//   ex1:   C^{2n} = S ⊕ S⊥, a = diag(i^{-p}), b = κ·I, c = 0. The limit is
//          quasi-complementable but not weakly complementable: ‖y₀‖ grows
//          without bound while the distance from BS of a fixed-profile vector
//          in S⊥ stays positive.
//   ex214: B = diag(i^{-p}) on C^{2n}, S⊥ = span{x} with x_i ∝ 1/i, a vector
//          in the closure of R(B) but not in R(B) in the limit. The limit is
//          weakly complementable but not quasi-complementable: the distance
//          from x to BS tends to 0.

#include <string>
#include <vector>

#include "orcalc/schur.hpp"

namespace orcalc::lab {

enum class Model { Ex1, Ex214 };

inline std::optional<Model> parse_model(std::string_view s) {
  if (s == "ex1") return Model::Ex1;
  if (s == "ex214") return Model::Ex214;
  return std::nullopt;
}

inline std::string_view to_string(Model m) { return m == Model::Ex1 ? "ex1" : "ex214"; }

struct Params {
  double decay = 1.0;     // diagonal entries i^{-decay}
  double coupling = 1.0;  // ex1: b = coupling·I
};

struct Truncation {
  HermitianOperator b;
  Subspace s;
  Vector probe;  // unit vector in S⊥ with profile 1/i
};

struct LabPoint {
  int n = 0;
  bool weak = false;
  bool quasi = false;
  double quasi_margin = 0.0;     // ‖(I − P_{BS})·probe‖
  double min_angle_sine = 0.0;   // smallest principal angle between BS and S⊥
  double weak_margin = 0.0;      // ‖(I − P_{R(|a|^{1/2})})b‖ / ‖b‖
  double f_norm = 0.0;           // ‖f‖, f reduced solution of b = |a|^{1/2}x
  double y0_norm = 0.0;          // ‖y₀‖ (spectral)
};

inline Vector profile(Index len) {
  Vector v(len);
  for (Index i = 0; i < len; ++i) v(i) = 1.0 / static_cast<double>(i + 1);
  return v / v.norm();
}

inline Truncation build(Model model, int n, const Params& p = {}) {
  if (n < 4) throw Error(ErrorKind::BadModel, "truncation size must be at least 4");
  const Index dim = 2 * n;
  Truncation t;
  if (model == Model::Ex1) {
    Matrix m = Matrix::Zero(dim, dim);
    for (Index i = 0; i < n; ++i) {
      m(i, i) = std::pow(static_cast<double>(i + 1), -p.decay);
      m(i, n + i) = p.coupling;
      m(n + i, i) = p.coupling;
    }
    t.b = HermitianOperator(m);
    t.s = Subspace::from_orthonormal(Matrix::Identity(dim, n));
    t.probe = Vector::Zero(dim);
    t.probe.tail(n) = profile(n);
  } else {
    Matrix m = Matrix::Zero(dim, dim);
    for (Index i = 0; i < dim; ++i) m(i, i) = std::pow(static_cast<double>(i + 1), -p.decay);
    t.b = HermitianOperator(m);
    t.probe = profile(dim);
    t.s = Subspace::from_orthonormal(t.probe).complement();
  }
  return t;
}

inline LabPoint measure(Model model, int n, const Params& p = {}, const TolerancePolicy& tol = {}) {
  const auto t = build(model, n, p);
  LabPoint pt;
  pt.n = n;
  const double scale = spectral_norm(t.b.matrix());
  const Subspace bs = range_of(t.b.matrix() * t.s.basis(), tol, scale);
  pt.quasi_margin = bs.distance(t.probe);
  pt.min_angle_sine = min_angle_sine(bs, t.s.complement(tol));
  pt.quasi = is_quasi_complementable(t.b, t.s, tol);
  const auto blk = block_decompose(t.b, t.s, tol);
  pt.weak_margin = weak_margin(blk, tol);
  auto w = weak_witness(blk, tol);
  pt.weak = w.has_value();
  if (w) {
    pt.f_norm = spectral_norm(w->f);
    const Projection e0 = e0_projection(t.b, t.s, tol);
    const Matrix y0 = blk.s_perp.basis().adjoint() * e0.matrix() * blk.s.basis();
    pt.y0_norm = spectral_norm(y0);
  }
  return pt;
}

/// n = 4, 8, 16, ... up to and including n_max (n_max itself is always included).
inline std::vector<int> doubling_sizes(int n_max) {
  if (n_max < 4) throw Error(ErrorKind::BadModel, "truncation size must be at least 4");
  std::vector<int> out;
  for (int n = 4; n < n_max; n *= 2) out.push_back(n);
  out.push_back(n_max);
  return out;
}

inline std::vector<LabPoint> run(Model model, int n_max, const Params& p = {}, const TolerancePolicy& tol = {}) {
  std::vector<LabPoint> out;
  for (int n : doubling_sizes(n_max)) out.push_back(measure(model, n, p, tol));
  return out;
}

}  // namespace orcalc::lab
