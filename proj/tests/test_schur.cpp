#include "support.hpp"

using namespace orcalc;
using namespace orcalc::testing;

namespace {

Subspace e(Index n, Index i) { return span(unit(n, i)); }
Subspace e12() { return span(mat({{1, 0}, {0, 1}, {0, 0}})); }

HermitianOperator b21() { return herm(mat({{2, 1}, {1, 1}})); }
HermitianOperator b11() { return herm(mat({{1, 1}, {1, 1}})); }
HermitianOperator swap() { return herm(mat({{0, 1}, {1, 0}})); }
// a = diag(1, −1), b = (1, 1)^T, c = 0 relative to span{e₁, e₂}
HermitianOperator b3() { return herm(mat({{1, 0, 1}, {0, -1, 1}, {1, 1, 0}})); }

WeakInstance weak_instance(Rng& rng) {
  const Index n = uniform(rng, 2, 9);
  const Index k = uniform(rng, 1, n - 1);
  return random_weak_instance(rng, n, k, uniform(rng, 0, k - 1));
}

}  // namespace

TEST(Blocks, Examples) {
  auto blk = block_decompose(herm(mat({{1, 0}, {0, 2}})), e(2, 0));
  EXPECT_MAT_NEAR(blk.a.matrix(), mat({{1}}), 1e-15);
  EXPECT_MAT_NEAR(blk.b, mat({{0}}), 1e-15);
  EXPECT_MAT_NEAR(blk.c.matrix(), mat({{2}}), 1e-15);

  blk = block_decompose(b21(), e(2, 0));
  EXPECT_MAT_NEAR(blk.a.matrix(), mat({{2}}), 1e-15);
  EXPECT_NEAR(std::abs(blk.b(0, 0)), 1.0, 1e-15);
  EXPECT_MAT_NEAR(blk.c.matrix(), mat({{1}}), 1e-15);

  blk = block_decompose(b3(), e12());
  EXPECT_MAT_NEAR(blk.a.matrix(), mat({{1, 0}, {0, -1}}), 1e-15);
  EXPECT_MAT_NEAR(blk.assemble(), b3().matrix(), 1e-15);
}

TEST(Blocks, ReassembleRandom) {
  Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = uniform(rng, 1, 8);
    const auto b = random_hermitian(rng, n);
    const auto blk = block_decompose(b, random_subspace(rng, n, uniform(rng, 0, n)));
    EXPECT_MAT_NEAR(blk.assemble(), b.matrix(), 1e-12);
  }
}

TEST(Complementable, Examples) {
  EXPECT_TRUE(is_complementable(b21(), e(2, 0)));
  EXPECT_FALSE(is_complementable(swap(), e(2, 0)));
  EXPECT_TRUE(is_complementable(b11(), e(2, 0)));
  for (const auto& b : {b21(), swap(), b11()}) {
    const auto r = complementability_report(b, e(2, 0));
    EXPECT_EQ(r.block_route, r.geometric_route);
  }
}

TEST(Weak, Examples) {
  auto [ok, w] = is_weakly_complementable(b11(), e(2, 0));
  ASSERT_TRUE(ok);
  EXPECT_NEAR(std::abs(w->f(0, 0)), 1.0, 1e-15);
  EXPECT_MAT_NEAR(w->u.matrix(), mat({{1}}), 1e-15);

  std::tie(ok, w) = is_weakly_complementable(swap(), e(2, 0));
  EXPECT_FALSE(ok);
  EXPECT_FALSE(w.has_value());

  std::tie(ok, w) = is_weakly_complementable(b3(), e12());
  ASSERT_TRUE(ok);
  EXPECT_MAT_NEAR(w->f, mat({{1}, {1}}) * block_decompose(b3(), e12()).b(0, 0), 1e-14);
  EXPECT_MAT_NEAR(w->u.matrix(), mat({{1, 0}, {0, -1}}), 1e-15);
  EXPECT_MAT_NEAR(w->absa_half.matrix(), mat({{1, 0}, {0, 1}}), 1e-15);
}

TEST(Weak, WitnessInvariants) {
  Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = weak_instance(rng);
    const auto blk = block_decompose(inst.b, inst.s);
    const auto w = weak_witness(blk);
    ASSERT_TRUE(w.has_value());
    const Matrix& h = w->absa_half.matrix();
    EXPECT_MAT_NEAR(Matrix(h * w->f), blk.b, 1e-9);
    EXPECT_MAT_NEAR(Matrix(range_of(h, {}, blk.scale).projector_matrix() * w->f), w->f, 1e-9);
    EXPECT_MAT_NEAR(Matrix(w->u.matrix() * h * h), blk.a.matrix(), 1e-9);
  }
}

TEST(Weak, FiniteDimensionalCollapse) {
  Rng rng(53);
  int negatives = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = uniform(rng, 2, 8);
    HermitianOperator b;
    Subspace s;
    if (trial % 3 == 0) {
      const auto inst = weak_instance(rng);
      b = inst.b;
      s = inst.s;
    } else if (trial % 3 == 1) {
      // singular a with b leaking out of R(a)
      const auto inst = random_weak_instance(rng, n, uniform(rng, 1, n - 1), 1);
      const Subspace sp = inst.s.complement();
      Matrix m = inst.b.matrix();
      const Matrix kick = inst.s.basis() * gaussian(rng, inst.s.dim(), sp.dim()) * sp.basis().adjoint();
      m += kick + kick.adjoint();
      b = HermitianOperator::symmetrized(m);
      s = inst.s;
    } else {
      b = random_hermitian(rng, n);
      s = random_subspace(rng, n, uniform(rng, 1, n - 1));
    }
    const auto c = complementability_report(b, s);
    const bool weak = is_weakly_complementable(b, s).first;
    EXPECT_EQ(c.block_route, weak);
    EXPECT_EQ(c.block_route, c.geometric_route);
    negatives += !weak;
  }
  EXPECT_GT(negatives, 0);
}

TEST(Quasi, Examples) {
  EXPECT_TRUE(is_quasi_complementable(herm(Matrix::Identity(2, 2)), e(2, 0)));
  EXPECT_TRUE(is_quasi_complementable(herm(Matrix::Identity(3, 3)), e12()));
  EXPECT_FALSE(is_quasi_complementable(swap(), e(2, 0)));
  EXPECT_TRUE(is_quasi_complementable(b11(), e(2, 0)));
}

TEST(Quasi, CoversPrecomplementableGeometry) {
  // B·S ⊆ S + (BS)⊥ forces both weak and quasi complementability
  Rng rng(54);
  int hits = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = uniform(rng, 2, 7);
    const bool structured = trial % 2 == 0;
    const auto b = structured ? weak_instance(rng).b : random_hermitian(rng, n);
    const Index dim = b.dim();
    const Subspace s = random_subspace(rng, dim, uniform(rng, 1, dim - 1));
    const Subspace bs = range_of(b.matrix() * s.basis());
    const Subspace target = subspace_sum(s, bs.complement());
    if (!target.contains(bs)) continue;
    ++hits;
    EXPECT_TRUE(is_weakly_complementable(b, s).first);
    EXPECT_TRUE(is_quasi_complementable(b, s));
  }
  EXPECT_GT(hits, 50);
}

TEST(Riccati, Examples) {
  auto a = riccati_witness(b11(), e(2, 0));
  EXPECT_MAT_NEAR(a.matrix(), b11().matrix(), 1e-14);

  a = riccati_witness(b3(), e12());
  const Matrix expected = mat({{1, 0, 1}, {0, 1, -1}, {1, -1, 2}});
  EXPECT_MAT_NEAR(a.matrix(), expected, 1e-14);
  const Matrix ps = e12().projector_matrix();
  EXPECT_MAT_NEAR(Matrix(b3().matrix() * ps * b3().matrix()), expected, 1e-14);
  EXPECT_MAT_NEAR(Matrix(a.matrix() * ps * a.matrix()), expected, 1e-14);

  a = riccati_witness(herm(mat({{-3, 0}, {0, 5}})), e(2, 0));
  EXPECT_MAT_NEAR(a.matrix(), mat({{3, 0}, {0, 0}}), 1e-14);

  EXPECT_THROW_KIND(riccati_witness(swap(), e(2, 0)), ErrorKind::NotWeaklyComplementable);
}

TEST(Riccati, WitnessSolvesEquation) {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = weak_instance(rng);
    const auto a = riccati_witness(inst.b, inst.s);
    EXPECT_LE(riccati_residual(inst.b, inst.s, a.matrix()), 1e-9);
    EXPECT_TRUE(is_psd(a));
    EXPECT_TRUE(positivity_blocks(a, inst.s));
  }
}

TEST(Riccati, PositiveSolutionImpliesWeak) {
  // A ≥ 0 with A P_S A = B P_S B: take B = [[a, u·a12], [·, c]] where u is a
  // symmetry commuting with a = |a11|
  Rng rng(56);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = uniform(rng, 2, 8);
    const Index k = uniform(rng, 1, n - 1);
    const auto big = random_psd(rng, n, uniform(rng, 1, n));
    const Subspace s = random_subspace(rng, n, k);
    const auto blk = block_decompose(big, s);
    const auto eg = eigh(blk.a);
    RealVector signs(k);
    for (Index i = 0; i < k; ++i) signs(i) = (uniform(rng, 0, 1) ? 1.0 : -1.0);
    const Matrix u = eg.vectors * signs.cast<Scalar>().asDiagonal() * eg.vectors.adjoint();
    const Matrix g = gaussian(rng, n - k, n - k);
    const Matrix b = blk.lift(u * blk.a.matrix(), u * blk.b, (u * blk.b).adjoint(), g + g.adjoint());
    const auto bh = HermitianOperator::symmetrized(b);
    ASSERT_LE(riccati_residual(bh, s, big.matrix()), 1e-9);
    EXPECT_TRUE(is_weakly_complementable(bh, s).first);
  }
}

TEST(Positivity, Examples) {
  EXPECT_TRUE(positivity_blocks(b11(), e(2, 0)));
  EXPECT_FALSE(positivity_blocks(herm(mat({{1, 0}, {0, -1}})), e(2, 0)));
  const auto r = positivity_report(herm(mat({{1, 1}, {1, 2}})), e(2, 0));
  EXPECT_TRUE(r.blocks);
  EXPECT_TRUE(r.spectral);
}

TEST(Positivity, MatchesSpectrum) {
  Rng rng(57);
  int positives = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = uniform(rng, 1, 8);
    HermitianOperator b;
    switch (trial % 3) {
      case 0: b = random_hermitian(rng, n); break;
      case 1: b = random_psd(rng, n, uniform(rng, 0, n)); break;
      default: {
        RealVector lam = RealVector::Random(n).cwiseAbs();
        lam(uniform(rng, 0, n - 1)) = -0.05;
        b = with_spectrum(rng, lam);
      }
    }
    const Subspace s = random_subspace(rng, n, uniform(rng, 0, n));
    const auto r = positivity_report(b, s);
    EXPECT_EQ(r.blocks, r.spectral);
    positives += r.spectral;
  }
  EXPECT_GT(positives, 50);
}

TEST(E0, Examples) {
  auto p = e0_projection(b21(), e(2, 0));
  EXPECT_MAT_NEAR(p.matrix(), mat({{1, 0}, {0.5, 0}}), 1e-14);

  p = e0_projection(b3(), e12());
  EXPECT_MAT_NEAR(p.matrix(), mat({{1, 0, 0}, {0, 1, 0}, {1, -1, 0}}), 1e-14);
  EXPECT_LE(fro(b3().matrix() - p.matrix() * b3().matrix()), 1e-14);

  p = e0_projection(herm(mat({{2, 0}, {0, 7}})), e(2, 0));
  EXPECT_MAT_NEAR(p.matrix(), mat({{1, 0}, {0, 0}}), 1e-15);

  EXPECT_THROW_KIND(e0_projection(swap(), e(2, 0)), ErrorKind::NotWeaklyComplementable);
}

TEST(E0, MakesEBHermitian) {
  Rng rng(58);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = weak_instance(rng);
    const auto p = e0_projection(inst.b, inst.s);
    const Matrix eb = p.matrix() * inst.b.matrix();
    EXPECT_MAT_NEAR(eb, Matrix(eb.adjoint()), 1e-9);
    EXPECT_TRUE(p.null_space().same_as(inst.s.complement()));
    EXPECT_LE(projection_defect(p), 1e-9);
    EXPECT_TRUE(pstar_membership(p, inst.b, inst.s));
  }
}

TEST(PStar, Examples) {
  EXPECT_TRUE(pstar_membership(e0_projection(b21(), e(2, 0)), b21(), e(2, 0)));
  EXPECT_FALSE(pstar_membership(Projection::from_matrix(mat({{1, 0}, {0, 0}})), b21(), e(2, 0)));
  EXPECT_THROW_KIND(pstar_membership(Projection::from_matrix(mat({{1, 1}, {0, 0}})), b21(), e(2, 0)),
                    ErrorKind::WrongNullspace);
}

TEST(PStar, Perturbation) {
  const auto b = herm(mat({{1, 0, 0}, {0, 0, 0}, {0, 0, 1}}));
  const PartialOperator w(Subspace::full(3), mat({{0, 0, 0}, {0, 0, 0}, {0, 1, 0}}));
  const auto p = pstar0_perturb(b, e12(), w);
  EXPECT_MAT_NEAR(p.matrix(), mat({{1, 0, 0}, {0, 1, 0}, {0, 1, 0}}), 1e-15);
  EXPECT_TRUE(pstar_membership(p, b, e12()));

  const PartialOperator zero(Subspace::full(3), Matrix::Zero(3, 3));
  EXPECT_MAT_NEAR(pstar0_perturb(b3(), e12(), zero).matrix(), e0_projection(b3(), e12()).matrix(), 0.0);
}

TEST(PStar, InadmissibleW) {
  // BS ∔ S⊥ = C³ leaves no room for W
  EXPECT_TRUE(pstar0_free_directions(b3(), e12()).is_zero());
  const PartialOperator w(Subspace::full(3), mat({{0, 0, 0}, {0, 0, 0}, {0, 1, 0}}));
  EXPECT_THROW_KIND(pstar0_perturb(b3(), e12(), w), ErrorKind::InadmissibleW);

  const auto b = herm(mat({{1, 0, 0}, {0, 0, 0}, {0, 0, 1}}));
  const PartialOperator out_of_sperp(Subspace::full(3), mat({{0, 1, 0}, {0, 0, 0}, {0, 0, 0}}));
  try {
    pstar0_perturb(b, e12(), out_of_sperp);
    ADD_FAILURE();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::InadmissibleW);
    EXPECT_NE(std::string(err.what()).find("S⊥"), std::string::npos);
  }
  const PartialOperator partial(e12(), mat({{0, 0}, {0, 0}, {0, 1}}));
  EXPECT_THROW_KIND(pstar0_perturb(b, e12(), partial), ErrorKind::InadmissibleW);
  const PartialOperator hits_sperp(Subspace::full(3), mat({{0, 0, 0}, {0, 0, 0}, {0, 0, 1}}));
  EXPECT_THROW_KIND(pstar0_perturb(b, e12(), hits_sperp), ErrorKind::InadmissibleW);
}

TEST(Schur, Examples) {
  EXPECT_MAT_NEAR(schur_complement(b21(), e(2, 0)).matrix(), mat({{0, 0}, {0, 0.5}}), 1e-14);
  EXPECT_MAT_NEAR(compression(b21(), e(2, 0)).matrix(), mat({{2, 1}, {1, 0.5}}), 1e-14);
  EXPECT_LE(fro(schur_complement(b11(), e(2, 0)).matrix()), 1e-14);
  EXPECT_LE(fro(schur_complement(b3(), e12()).matrix()), 1e-14);
  EXPECT_THROW_KIND(schur_complement(swap(), e(2, 0)), ErrorKind::NotWeaklyComplementable);
}

TEST(Schur, ViaProjectionExamples) {
  EXPECT_LE(fro(schur_via_projection(b3(), e12(), e0_projection(b3(), e12())).matrix()), 1e-14);
  EXPECT_MAT_NEAR(schur_via_projection(b21(), e(2, 0), e0_projection(b21(), e(2, 0))).matrix(),
                  mat({{0, 0}, {0, 0.5}}), 1e-14);
  EXPECT_THROW_KIND(schur_via_projection(b21(), e(2, 0), Projection::from_matrix(mat({{1, 0}, {0, 0}}))),
                    ErrorKind::NotMember);
}

TEST(Schur, TwoRoutesAgree) {
  Rng rng(59);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = weak_instance(rng);
    const Matrix formula = schur_complement(inst.b, inst.s).matrix();
    const double tol = 1e-8 * std::max(fro(inst.b.matrix()), 1.0);
    EXPECT_LE(fro(formula - schur_via_projection(inst.b, inst.s, e0_projection(inst.b, inst.s)).matrix()), tol);
    for (int k = 0; k < 5; ++k) {
      const auto p = pstar0_perturb(inst.b, inst.s, random_admissible_w(rng, inst.b, inst.s));
      EXPECT_LE(fro(formula - schur_via_projection(inst.b, inst.s, p).matrix()), tol);
    }
  }
}

TEST(Schur, ClassicalFormulaForPsd) {
  Rng rng(60);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = uniform(rng, 2, 8);
    const auto b = random_psd(rng, n, uniform(rng, 1, n));
    const Subspace s = random_subspace(rng, n, uniform(rng, 1, n - 1));
    EXPECT_MAT_NEAR(schur_complement(b, s).matrix(), psd_schur_oracle(b, s), 1e-8);
  }
}

TEST(Schur, ZeroSignIsInert) {
  Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = weak_instance(rng);
    EXPECT_MAT_NEAR(schur_complement(inst.b, inst.s, {}, ZeroSign::Negative).matrix(),
                    schur_complement(inst.b, inst.s).matrix(), 1e-9);
  }
}

TEST(WeakDecomposition, Examples) {
  auto d = weak_decomposition(b3(), e12());
  EXPECT_MAT_NEAR(d.b2.matrix(), mat({{1, 0, 1}, {0, 0, 0}, {1, 0, 1}}), 1e-14);
  EXPECT_MAT_NEAR(d.b3.matrix(), mat({{0, 0, 0}, {0, 1, -1}, {0, -1, 1}}), 1e-14);
  EXPECT_LE(fro(d.b1.matrix()), 1e-14);

  d = weak_decomposition(b21(), e(2, 0));
  EXPECT_LE(fro(d.b3.matrix()), 1e-15);
  EXPECT_MAT_NEAR(d.b1.matrix(), schur_complement(b21(), e(2, 0)).matrix(), 1e-14);
  EXPECT_MAT_NEAR(d.b2.matrix(), compression(b21(), e(2, 0)).matrix(), 1e-14);

  d = weak_decomposition(herm(mat({{0, 0}, {0, 4}})), e(2, 0));
  EXPECT_MAT_NEAR(d.b1.matrix(), mat({{0, 0}, {0, 4}}), 1e-15);
  EXPECT_LE(fro(d.b2.matrix()) + fro(d.b3.matrix()), 1e-15);

  EXPECT_THROW_KIND(weak_decomposition(swap(), e(2, 0)), ErrorKind::NotWeaklyComplementable);
}

TEST(WeakDecomposition, Conditions) {
  Rng rng(62);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = weak_instance(rng);
    const auto d = weak_decomposition(inst.b, inst.s);
    const auto g = grammian_split(inst.b, inst.s);
    EXPECT_TRUE(is_psd(d.b2));
    EXPECT_TRUE(is_psd(d.b3));
    const double scale = std::max(fro(inst.b.matrix()), 1.0);
    EXPECT_LE(fro(d.b1.matrix() * inst.s.basis()), 1e-9 * scale);
    if (g.sminus.dim()) EXPECT_LE(fro(d.b2.matrix() * g.sminus.basis()), 1e-9 * scale);
    if (g.splus.dim()) EXPECT_LE(fro(d.b3.matrix() * g.splus.basis()), 1e-9 * scale);
    EXPECT_MAT_NEAR(Matrix(d.b1.matrix() + d.b2.matrix() - d.b3.matrix()), inst.b.matrix(), 1e-9);
    EXPECT_MAT_NEAR(d.b1.matrix(), schur_complement(inst.b, inst.s).matrix(), 1e-9);
  }
}

TEST(ClosureExtension, Examples) {
  const auto b = herm(mat({{2, 0, 0}, {0, 3, 0}, {0, 0, 5}}));
  const auto ps = make_projection(e12(), e(3, 2));
  EXPECT_MAT_NEAR(closure_extension(ps, b).matrix(), Matrix(b.matrix() * ps.matrix()), 1e-14);

  const auto e0h = Projection::from_matrix(e0_projection(b3(), e12()).matrix().adjoint());
  ASSERT_TRUE(is_b_symmetric(e0h, b3()));
  EXPECT_MAT_NEAR(closure_extension(e0h, b3()).matrix(), b3().matrix(), 1e-13);

  const auto bd = herm(mat({{1, 0, 0}, {0, -2, 0}, {0, 0, 3}}));
  EXPECT_MAT_NEAR(closure_extension(ps, bd).matrix(), mat({{1, 0, 0}, {0, -2, 0}, {0, 0, 0}}), 1e-14);

  EXPECT_THROW_KIND(closure_extension(Projection::from_matrix(mat({{1, -1}, {0, 0}})), herm(Matrix::Identity(2, 2))),
                    ErrorKind::NotBSymmetric);
}

TEST(ClosureExtension, EqualsBEOnRandomInstances) {
  Rng rng(63);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = weak_instance(rng);
    const auto p = xa_projection(inst.b, inst.s);
    const Matrix be = inst.b.matrix() * p.matrix();
    const Matrix ext = closure_extension(p, inst.b).matrix();
    EXPECT_MAT_NEAR(ext, be, 1e-8);
    EXPECT_MAT_NEAR(be, Matrix(be.adjoint()), 1e-8);
  }
}

TEST(BSymSplit, Examples) {
  auto sp = bsym_split(make_projection(e(2, 0), e(2, 1)), herm(Matrix::Identity(2, 2)), e(2, 0));
  EXPECT_MAT_NEAR(sp.eplus.matrix(), mat({{1, 0}, {0, 0}}), 1e-15);
  EXPECT_LE(fro(sp.eminus.matrix()), 1e-15);

  sp = bsym_split(Projection::from_matrix(Matrix::Identity(2, 2)), herm(mat({{1, 0}, {0, -1}})), Subspace::full(2));
  EXPECT_MAT_NEAR(sp.eplus.matrix(), mat({{1, 0}, {0, 0}}), 1e-15);
  EXPECT_MAT_NEAR(sp.eminus.matrix(), mat({{0, 0}, {0, 1}}), 1e-15);

  const auto p = xa_projection(b3(), e12());
  sp = bsym_split(p, b3(), e12());
  EXPECT_TRUE(sp.eplus.range().same_as(e(3, 0)));
  EXPECT_TRUE(sp.eminus.range().same_as(e(3, 1)));

  EXPECT_THROW_KIND(bsym_split(Projection::from_matrix(mat({{1, -1}, {0, 0}})), herm(Matrix::Identity(2, 2)), e(2, 0)),
                    ErrorKind::NotBSymmetric);
}

TEST(BSymSplit, FactorsAreSymmetricForTheParts) {
  Rng rng(64);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = weak_instance(rng);
    const auto p = xa_projection(inst.b, inst.s);
    const auto sp = bsym_split(p, inst.b, inst.s);
    const auto d = weak_decomposition(inst.b, inst.s);
    const auto g = grammian_split(inst.b, inst.s);
    const Matrix ep = sp.eplus.matrix(), em = sp.eminus.matrix();
    EXPECT_MAT_NEAR(Matrix(ep + em), p.matrix(), 1e-9);
    EXPECT_LE(fro(ep * em) + fro(em * ep), 1e-9 * std::max(fro(p.matrix()), 1.0));
    EXPECT_TRUE(sp.eplus.range().same_as(g.splus));
    EXPECT_TRUE(sp.eminus.range().same_as(g.sminus));
    const Matrix b2e = d.b2.matrix() * ep, b3e = d.b3.matrix() * em;
    EXPECT_MAT_NEAR(b2e, Matrix(b2e.adjoint()), 1e-8);
    EXPECT_MAT_NEAR(b3e, Matrix(b3e.adjoint()), 1e-8);
  }
}

TEST(BSym, AdjointOfBSymmetricProjectionLiesInPStar) {
  Rng rng(65);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = weak_instance(rng);
    Projection p;
    try {
      p = b_symmetric_construct(inst.b, inst.s);
    } catch (const Error&) {
      p = xa_projection(inst.b, inst.s);
    }
    const auto adj = Projection::from_matrix(p.matrix().adjoint());
    EXPECT_TRUE(pstar_membership(adj, inst.b, inst.s));
  }
}

TEST(Orders, Examples) {
  const Matrix d10 = mat({{1, 0}, {0, 0}});
  for (auto k : {OrderKind::Minus, OrderKind::LeftMinus, OrderKind::Prec}) {
    EXPECT_TRUE(order_check(k, d10, Matrix::Identity(2, 2)).holds);
    EXPECT_FALSE(order_check(k, d10, mat({{2, 0}, {0, 0}})).holds);
    EXPECT_FALSE(order_check(k, mat({{0, 1}, {0, 0}}), mat({{0, 1}, {0, 1}})).holds);
  }
  const auto v = order_check(OrderKind::LeftMinus, d10, Matrix::Identity(2, 2));
  ASSERT_TRUE(v.left.has_value());
  EXPECT_MAT_NEAR(Matrix(*v.left * Matrix::Identity(2, 2)), d10, 1e-15);
  EXPECT_THROW_KIND(order_check(OrderKind::Prec, d10, Matrix::Identity(3, 3)), ErrorKind::DimensionMismatch);
}

TEST(Orders, ParseAndPrint) {
  for (auto k : {OrderKind::Minus, OrderKind::LeftMinus, OrderKind::Prec}) {
    EXPECT_EQ(parse_order_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_order_kind("star").has_value());
}

TEST(Orders, CoincideAndFormPartialOrders) {
  Rng rng(66);
  const std::array kinds{OrderKind::Minus, OrderKind::LeftMinus, OrderKind::Prec};
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = uniform(rng, 1, 6);
    const auto chain = random_chain(rng, n);
    // unrelated pair as a negative control
    const Matrix other = low_rank(rng, n, n, uniform(rng, 0, n));
    for (auto [a, b] : {std::pair{chain[0], chain[1]}, std::pair{chain[1], chain[2]}, std::pair{other, chain[2]}}) {
      const bool m = order_check(OrderKind::Minus, a, b).holds;
      EXPECT_EQ(m, order_check(OrderKind::LeftMinus, a, b).holds);
      EXPECT_EQ(m, order_check(OrderKind::Prec, a, b).holds);
    }
    for (auto k : kinds) {
      EXPECT_TRUE(order_check(k, chain[0], chain[0]).holds);
      EXPECT_TRUE(order_check(k, chain[0], chain[1]).holds);
      EXPECT_TRUE(order_check(k, chain[0], chain[2]).holds);
      if (order_check(k, chain[1], chain[0]).holds) EXPECT_MAT_NEAR(chain[0], chain[1], 1e-9);
      const auto v = order_check(k, chain[1], chain[2]);
      if (v.left) EXPECT_LE(v.witness_residual, 1e-9);
    }
  }
}

TEST(MSet, Examples) {
  auto sample = m_set_sample(b21(), e(2, 0), 12, 7);
  const Matrix target = mat({{0, 0}, {0, 0.5}});
  bool has_target = false, has_zero = false;
  for (const auto& m : sample) {
    has_target = has_target || approx_equal(m.x.matrix(), target, 1e-12);
    has_zero = has_zero || fro(m.x.matrix()) == 0.0;
    EXPECT_TRUE(is_m_set_member(b21(), e(2, 0), m));
  }
  EXPECT_TRUE(has_target);
  EXPECT_TRUE(has_zero);
  EXPECT_TRUE(max_check(b21(), e(2, 0), sample));

  sample = m_set_sample(b3(), e12(), 12, 7);
  for (const auto& m : sample) EXPECT_LE(fro(m.x.matrix()), 1e-12) << m.origin;
  EXPECT_TRUE(max_check(b3(), e12(), sample));

  // B_{/S} + εI is not in the sample
  const auto bumped = HermitianOperator::symmetrized(target + 1e-3 * Matrix::Identity(2, 2));
  EXPECT_FALSE(max_check_against(bumped, m_set_sample(b21(), e(2, 0), 12, 7)));

  EXPECT_THROW_KIND(m_set_sample(swap(), e(2, 0), 4, 1), ErrorKind::NotWeaklyComplementable);
}

TEST(MSet, Deterministic) {
  const auto a = m_set_sample(b21(), e(2, 0), 9, 3);
  const auto b = m_set_sample(b21(), e(2, 0), 9, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].x.matrix(), b[i].x.matrix());
}

TEST(MSet, SchurComplementIsMaximum) {
  Rng rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = weak_instance(rng);
    const auto sample = m_set_sample(inst.b, inst.s, 12, 100 + trial);
    for (const auto& m : sample) EXPECT_TRUE(is_m_set_member(inst.b, inst.s, m)) << m.origin;
    EXPECT_TRUE(max_check(inst.b, inst.s, sample));
  }
}
