#include <gtest/gtest.h>

#include <random>

#include "geodisc/algebra.hpp"
#include "geodisc/random.hpp"

using namespace geodisc;

namespace {

AlgebraElement random_element(Algebra alg, Rng& rng) {
  std::vector<double> c(algebra_dim(alg));
  for (double& x : c) x = normal(rng);
  return AlgebraElement(alg, c);
}

double dist(const AlgebraElement& a, const AlgebraElement& b) { return (a - b).norm(); }

HermitianMatrix random_hermitian(Algebra alg, int size, Rng& rng) {
  HermitianMatrix m(alg, size);
  for (int i = 0; i < size; ++i) {
    m.set_real(i, i, normal(rng));
    for (int j = i + 1; j < size; ++j) m.set(i, j, random_element(alg, rng));
  }
  return m;
}

constexpr Algebra all_algebras[] = {Algebra::R, Algebra::C, Algebra::H, Algebra::O};

}  // namespace

TEST(Algebra, UnitIsNeutral) {
  Rng rng = make_rng(1);
  for (Algebra alg : all_algebras) {
    const auto x = random_element(alg, rng);
    const auto one = AlgebraElement::real(alg, 1.0);
    EXPECT_LT(dist(one * x, x), 1e-15);
    EXPECT_LT(dist(x * one, x), 1e-15);
  }
}

TEST(Algebra, ImaginaryUnitsSquareToMinusOne) {
  for (Algebra alg : all_algebras)
    for (int k = 1; k < algebra_dim(alg); ++k) {
      const auto e = AlgebraElement::unit(alg, k);
      EXPECT_EQ(dist(e * e, AlgebraElement::real(alg, -1.0)), 0.0) << algebra_name(alg) << " e" << k;
    }
}

TEST(Algebra, BasisProductsAnticommuteAndCloseOnUnits) {
  for (int i = 1; i < 8; ++i)
    for (int j = 1; j < 8; ++j) {
      if (i == j) continue;
      const auto ei = AlgebraElement::unit(Algebra::O, i);
      const auto ej = AlgebraElement::unit(Algebra::O, j);
      const auto p = ei * ej;
      EXPECT_EQ(dist(p, -(ej * ei)), 0.0);
      // e_i e_j = +-e_k for a single imaginary k
      int nonzero = 0;
      for (int k = 0; k < 8; ++k)
        if (p[k] != 0.0) {
          ++nonzero;
          EXPECT_NE(k, 0);
          EXPECT_EQ(std::abs(p[k]), 1.0);
        }
      EXPECT_EQ(nonzero, 1);
      EXPECT_EQ(p.re(), 0.0);
    }
}

TEST(Algebra, ConjugationNegatesImaginaryPart) {
  const AlgebraElement a(Algebra::C, {1.0, 1.0});
  const AlgebraElement expected(Algebra::C, {1.0, -1.0});
  EXPECT_EQ(dist(conj(a), expected), 0.0);
  EXPECT_EQ(norm(AlgebraElement(Algebra::O)), 0.0);
}

TEST(Algebra, CompositionAndConjugationIdentitiesOnRandomOctonions) {
  Rng rng = make_rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = random_element(Algebra::O, rng);
    const auto b = random_element(Algebra::O, rng);
    const auto ab = mul(a, b);
    const double scale = norm(a) * norm(b);
    EXPECT_NEAR(norm(ab), scale, 1e-12 * std::max(1.0, scale));
    EXPECT_NEAR(re(ab), re(mul(b, a)), 1e-12 * std::max(1.0, scale));
    EXPECT_LT(dist(conj(ab), mul(conj(b), conj(a))), 1e-12 * std::max(1.0, scale));
  }
}

TEST(Algebra, OctonionsAreAlternative) {
  Rng rng = make_rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = random_element(Algebra::O, rng);
    const auto b = random_element(Algebra::O, rng);
    const double scale = std::max(1.0, a.norm_sq() * b.norm());
    EXPECT_LT(dist(a * (a * b), (a * a) * b), 1e-12 * scale);
    EXPECT_LT(dist((b * a) * a, b * (a * a)), 1e-12 * scale);
  }
}

TEST(Algebra, OctonionsAreNotAssociative) {
  const auto e1 = AlgebraElement::unit(Algebra::O, 1);
  const auto e2 = AlgebraElement::unit(Algebra::O, 2);
  const auto e4 = AlgebraElement::unit(Algebra::O, 4);
  EXPECT_GT(dist((e1 * e2) * e4, e1 * (e2 * e4)), 1.0);
}

TEST(Algebra, QuaternionsAreAssociative) {
  Rng rng = make_rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_element(Algebra::H, rng);
    const auto b = random_element(Algebra::H, rng);
    const auto c = random_element(Algebra::H, rng);
    EXPECT_LT(dist((a * b) * c, a * (b * c)), 1e-12 * std::max(1.0, a.norm() * b.norm() * c.norm()));
  }
}

TEST(Algebra, MixedAlgebrasAreRejected) {
  const AlgebraElement a(Algebra::C, {1.0, 0.0});
  const AlgebraElement b(Algebra::H, {1.0, 0.0, 0.0, 0.0});
  EXPECT_THROW((void)mul(a, b), usage_error);
  EXPECT_THROW((void)(a + b), usage_error);
}

TEST(Hermitian, InnerProductBasics) {
  for (Algebra alg : all_algebras) {
    const auto id = HermitianMatrix::identity(alg, 3);
    EXPECT_DOUBLE_EQ(inner(id, id), 3.0);
    EXPECT_DOUBLE_EQ(id.norm() * id.norm(), 3.0);
  }
  EXPECT_THROW((void)inner(HermitianMatrix::identity(Algebra::C, 2), HermitianMatrix::identity(Algebra::C, 3)),
               usage_error);
}

TEST(Hermitian, ProjectorHasUnitNormAndIsIdempotent) {
  Rng rng = make_rng(5);
  for (Algebra alg : all_algebras) {
    std::vector<AlgebraElement> v(3, AlgebraElement(alg));
    double n2 = 0.0;
    if (alg == Algebra::O) {
      // admissible: entries in one associative subalgebra
      v[0] = AlgebraElement::real(alg, normal(rng));
      v[1] = AlgebraElement::real(alg, normal(rng)) + normal(rng) * AlgebraElement::unit(alg, 3);
      v[2] = AlgebraElement::real(alg, normal(rng)) + normal(rng) * AlgebraElement::unit(alg, 3);
    } else {
      for (auto& x : v) x = random_element(alg, rng);
    }
    for (const auto& x : v) n2 += x.norm_sq();
    for (auto& x : v) x *= 1.0 / std::sqrt(n2);
    const auto p = HermitianMatrix::outer(v);
    EXPECT_NEAR(inner(p, p), 1.0, 1e-12);
    EXPECT_NEAR(p.trace(), 1.0, 1e-12);
    const auto sq = jordan(p, p);
    EXPECT_LT((sq - p).norm(), 1e-12) << algebra_name(alg);
    EXPECT_LT(p.hermitian_defect(), 1e-15);
  }
}

TEST(Hermitian, JordanProductIsCommutativeWithIdentityUnit) {
  Rng rng = make_rng(6);
  for (Algebra alg : all_algebras) {
    const auto a = random_hermitian(alg, 3, rng);
    const auto b = random_hermitian(alg, 3, rng);
    EXPECT_LT((jordan(a, b) - jordan(b, a)).norm(), 1e-15);
    EXPECT_LT((jordan(HermitianMatrix::identity(alg, 3), a) - a).norm(), 1e-14);
    EXPECT_LT(jordan(a, b).hermitian_defect(), 1e-13);
  }
}

TEST(Hermitian, AntipodalProjectorsAreOrthogonal) {
  HermitianMatrix zp(Algebra::C, 3);
  HermitianMatrix zm(Algebra::C, 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      zp.set_real(i, j, 0.5);
      zm.set_real(i, j, i == j ? 0.5 : -0.5);
    }
  EXPECT_DOUBLE_EQ(inner(zp, zm), 0.0);
}

TEST(CubicSpectrum, DiagonalInput) {
  HermitianMatrix x(Algebra::O, 3);
  x.set_real(0, 0, 1.0);
  EXPECT_THROW((void)cubic_spectrum(x), degenerate_spectrum);  // eigenvalues 1, 0, 0
  x.set_real(1, 1, 0.25);
  const auto sp = cubic_spectrum(x);
  EXPECT_NEAR(sp.eigenvalues[0], 1.0, 1e-14);
  EXPECT_NEAR(sp.eigenvalues[1], 0.25, 1e-14);
  EXPECT_NEAR(sp.eigenvalues[2], 0.0, 1e-14);
  HermitianMatrix e0(Algebra::O, 3);
  e0.set_real(0, 0, 1.0);
  EXPECT_LT((sp.idempotents[0] - e0).norm(), 1e-13);
}

TEST(CubicSpectrum, RandomOctonionicReconstructionAndIdempotents) {
  Rng rng = make_rng(7);
  int done = 0;
  while (done < 200) {
    const auto x = random_hermitian(Algebra::O, 3, rng);
    CubicSpectrum sp;
    try {
      sp = cubic_spectrum(x);
    } catch (const degenerate_spectrum&) {
      continue;
    }
    ++done;
    HermitianMatrix rec(Algebra::O, 3);
    for (int i = 0; i < 3; ++i) rec += sp.eigenvalues[i] * sp.idempotents[i];
    EXPECT_LT((rec - x).norm(), 1e-9 * std::max(1.0, x.norm()));
    EXPECT_GE(sp.eigenvalues[0], sp.eigenvalues[1]);
    EXPECT_GE(sp.eigenvalues[1], sp.eigenvalues[2]);
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(sp.idempotents[i].trace(), 1.0, 1e-9);
      EXPECT_LT((jordan(sp.idempotents[i], sp.idempotents[i]) - sp.idempotents[i]).norm(), 1e-9);
      for (int j = i + 1; j < 3; ++j) EXPECT_LT(jordan(sp.idempotents[i], sp.idempotents[j]).norm(), 1e-9);
    }
  }
}

TEST(CubicSpectrum, ProjectorSpectrum) {
  std::vector<AlgebraElement> v{AlgebraElement(Algebra::O, {0.6, 0, 0, 0, 0, 0, 0, 0}),
                                AlgebraElement(Algebra::O, {0, 0, 0, 0, 0.48, 0, 0.64, 0}),
                                AlgebraElement(Algebra::O)};
  const auto pa = HermitianMatrix::outer(v);
  EXPECT_LT((jordan(pa, pa) - pa).norm(), 1e-15);
  // (1, 0, 0) is degenerate by construction
  EXPECT_THROW((void)cubic_spectrum(pa), degenerate_spectrum);
  HermitianMatrix e2(Algebra::O, 3);
  e2.set_real(2, 2, 1.0);
  const auto sp = cubic_spectrum(pa + 0.5 * e2);
  EXPECT_NEAR(sp.eigenvalues[0], 1.0, 1e-14);
  EXPECT_NEAR(sp.eigenvalues[1], 0.5, 1e-14);
  EXPECT_NEAR(sp.eigenvalues[2], 0.0, 1e-14);
  EXPECT_LT((sp.idempotents[0] - pa).norm(), 1e-13);
  EXPECT_LT((sp.idempotents[1] - e2).norm(), 1e-13);
}

TEST(CubicSpectrum, DeterminantOfDiagonal) {
  HermitianMatrix x(Algebra::O, 3);
  x.set_real(0, 0, 2.0);
  x.set_real(1, 1, 3.0);
  x.set_real(2, 2, 5.0);
  EXPECT_DOUBLE_EQ(freudenthal_det(x), 30.0);
}
