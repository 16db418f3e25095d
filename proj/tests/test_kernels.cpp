#include <gtest/gtest.h>

#include "geodisc/kernels.hpp"
#include "oracles.hpp"

using namespace geodisc;

namespace {

std::vector<Space> all_spaces() {
  std::vector<Space> v;
  for (const char* n : {"S1", "S2", "S3", "RP2", "RP3", "CP2", "HP2", "OP2"}) v.push_back(parse_space(n));
  return v;
}

}  // namespace

TEST(BallKernel, IntersectionAtCoincidentCentres) {
  for (const Space& s : all_spaces())
    for (double r : {0.4, 1.3, 2.6}) {
      const auto k = mu_r(s, r, 0.0, 1e-6);
      EXPECT_NEAR(k.value, ball_volume(s, r), k.tail_bound + 1e-12) << s.label();
    }
}

TEST(BallKernel, HemispheresOnTheTwoSphere) {
  const Space s2 = parse_space("S2");
  // opposite hemispheres meet in a null set; orthogonal ones in a quarter
  const auto opposite = mu_r(s2, pi / 2, pi, 1e-7);
  EXPECT_NEAR(opposite.value, 0.0, opposite.tail_bound + 1e-12);
  const auto quarter = mu_r(s2, pi / 2, pi / 2, 1e-7);
  EXPECT_NEAR(quarter.value, 0.25, quarter.tail_bound + 1e-12);
}

TEST(BallKernel, HalfSymmetricDifferenceOfHemispheres) {
  // theta^Delta_{pi/2}(t) = t / (2 pi) on S^d
  for (const char* name : {"S1", "S2", "S3"}) {
    const Space s = parse_space(name);
    const auto e = radius_expansion(s, pi / 2, 1e-6);
    for (double t : {0.3, 1.0, 2.2, pi}) EXPECT_NEAR(e.evaluate(t).second, t / (2 * pi), e.tail_bound + 1e-12) << name;
  }
}

TEST(BallKernel, MatchesMonteCarlo) {
  for (const char* name : {"S2", "CP2", "HP2"}) {
    const Space s = parse_space(name);
    for (auto [r, t] : {std::pair{1.0, 0.7}, std::pair{2.0, 2.5}}) {
      const auto k = mu_r(s, r, t, 1e-5);
      // test-side estimate, independent draws and distances
      Rng rng = make_rng(99);
      const Point y1 = geodesic_point(s, 0.0);
      const Point y2 = geodesic_point(s, 0.5 * t);
      const int n = 40000;
      int hits = 0;
      for (int i = 0; i < n; ++i) {
        const Point y = sample_uniform(s, rng);
        if (geodesic_distance(y, y1) < r && geodesic_distance(y, y2) < r) ++hits;
      }
      const double m = double(hits) / n;
      const double se = std::sqrt(m * (1 - m) / n);
      EXPECT_NEAR(k.value, m, 4 * se + k.tail_bound) << name;
    }
  }
}

TEST(BallKernel, CauchySchwarzAndParseval) {
  for (const Space& s : all_spaces())
    for (double r : {0.5, 1.5, 2.8}) {
      const auto e = radius_expansion(s, r, 1e-6);
      const double at0 = e.evaluate(0.0).first;
      // lambda_r(0) = v_r v'_r
      EXPECT_NEAR(e.total(), average_theta_delta_r(s, r), e.tail_bound) << s.label();
      EXPECT_NEAR(at0, average_theta_delta_r(s, r), e.tail_bound) << s.label();
      for (double t : {0.2, 1.0, 2.0, pi}) EXPECT_LE(std::abs(e.evaluate(t).first), at0 + e.tail_bound);
    }
}

TEST(BallKernel, TruncationMeetsTolerance) {
  const Space s = parse_space("CP2");
  for (double tol : {1e-3, 1e-5, 1e-7}) {
    const auto e = radius_expansion(s, 1.2, tol);
    EXPECT_LE(e.tail_bound, tol);
    EXPECT_FALSE(e.capped);
    if (e.L > 1) EXPECT_GT(radius_expansion_at(s, 1.2, e.L - 1).tail_bound, tol);
  }
  const auto capped = radius_expansion(s, 1.2, 1e-12, 1000);
  EXPECT_TRUE(capped.capped);
  EXPECT_EQ(capped.L, 1000);
  EXPECT_THROW((void)radius_expansion(s, -0.1), domain_error);
}

TEST(NaturalWeight, TwoSphereConstants) {
  const Space s2 = parse_space("S2");
  EXPECT_NEAR(average_theta_delta(s2, WeightFunction::sin_r()), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(average_tau(s2), 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(gamma_constant(s2), 2.0, 1e-12);
}

TEST(NaturalWeight, SphereConstantAgainstQuadrature) {
  // gamma(S^d) = 1 / int |cos r| dv_r
  for (int d = 1; d <= 6; ++d) {
    const Space s = make_space(Family::Sphere, d);
    const double k = s.kappa();
    const auto f = [&](double r) {
      return std::abs(std::cos(r)) * k * std::pow(std::sin(0.5 * r), d - 1) * std::pow(std::cos(0.5 * r), d - 1);
    };
    const double integral = oracle::simpson(f, 0.0, pi / 2) + oracle::simpson(f, pi / 2, pi);
    EXPECT_NEAR(gamma_constant(s), 1.0 / integral, 1e-9) << d;
  }
}

TEST(NaturalWeight, ChordIsProportionalToThetaDelta) {
  // sin(t/2) = gamma theta^Delta(eta_natural, t)
  for (const Space& s : all_spaces()) {
    const auto e = weight_expansion(s, WeightFunction::sin_r(), 1e-6);
    const double g = gamma_constant(s);
    for (double t : {0.1, 0.9, 1.8, 2.7, pi})
      EXPECT_NEAR(g * e->evaluate(t).second, std::sin(0.5 * t), g * e->tail_bound) << s.label() << " t=" << t;
  }
}

TEST(NaturalWeight, MonteCarloOfSquaredChordDifference) {
  // theta^Delta(eta_natural, t) = E |tau(y1, y)^2 - tau(y2, y)^2|
  for (const Space& s : all_spaces()) {
    const double g = gamma_constant(s);
    for (double t : {1.0, pi}) {
      Rng rng = make_rng(2024);
      const Point y1 = geodesic_point(s, 0.0);
      const Point y2 = geodesic_point(s, 0.5 * t);
      const int n = 30000;
      double s1 = 0.0, s2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const Point y = sample_uniform(s, rng);
        const double a = chordal_distance(y1, y);
        const double b = chordal_distance(y2, y);
        const double z = std::abs(a * a - b * b);
        s1 += z;
        s2 += z * z;
      }
      const double m = s1 / n;
      const double se = std::sqrt((s2 / n - m * m) / n);
      EXPECT_NEAR(m, std::sin(0.5 * t) / g, 4 * se) << s.label() << " t=" << t;
    }
  }
}

TEST(WeightedKernel, AverageEqualsCoefficientSum) {
  for (const Space& s : {parse_space("S2"), parse_space("CP2"), parse_space("OP2")})
    for (const auto& w : {WeightFunction::constant(), WeightFunction::indicator(1.3), WeightFunction::sin_r()}) {
      const auto e = weight_expansion(s, w, 1e-5);
      EXPECT_NEAR(e->total(), average_theta_delta(s, w), e->tail_bound) << s.label() << " " << w.describe();
    }
}

TEST(WeightedKernel, IndicatorIsIntegralOfBallKernels) {
  const Space s = parse_space("RP2");
  const double r0 = 1.1;
  const auto e = weight_expansion(s, WeightFunction::indicator(r0), 1e-5);
  for (double t : {0.5, 2.0}) {
    const auto f = [&](double u) { return u <= 0.0 ? 0.0 : radius_expansion(s, u, 1e-7).evaluate(t).second; };
    const double kink = std::min(0.5 * t, r0);
    const double direct = oracle::simpson(f, 0.0, kink, 1e-8) + oracle::simpson(f, kink, r0, 1e-8);
    EXPECT_NEAR(e->evaluate(t).second, direct, e->tail_bound + r0 * 1e-7 + 1e-7);
  }
}

TEST(WeightedKernel, MonteCarloForIndicatorWeight) {
  const Space s = parse_space("CP2");
  const auto w = WeightFunction::indicator(1.5);
  const auto e = weight_expansion(s, w, 1e-5);
  for (double t : {0.6, 2.4}) {
    const auto mc = mc_theta_delta_eta(s, w, t, 40000, 5);
    EXPECT_NEAR(e->evaluate(t).second, mc.mean, 4 * mc.stderr_ + e->tail_bound);
  }
}

TEST(ChordalDistance, ViaFirstDegreePolynomial) {
  for (const Space& s : all_spaces()) {
    Rng rng = make_rng(8);
    for (int i = 0; i < 50; ++i) {
      const Point a = sample_uniform(s, rng);
      const Point b = sample_uniform(s, rng);
      EXPECT_NEAR(chordal_via_l1(s, geodesic_distance(a, b)), chordal_distance(a, b), 1e-12) << s.label();
    }
    EXPECT_NEAR(chordal_via_l1(s, pi), 1.0, 1e-14);
    EXPECT_EQ(chordal_via_l1(s, 0.0), 0.0);
  }
}

TEST(GeodesicExpansion, OddDegreesOnSpheres) {
  for (const char* name : {"S1", "S2", "S3"}) {
    const Space s = parse_space(name);
    for (double t : {0.0, 0.4, 1.5, 2.9, pi}) {
      const auto k = geodesic_expansion_sphere(s, t, 20000);
      EXPECT_NEAR(k.value, t, k.tail_bound + 1e-10) << name << " t=" << t;
    }
  }
  EXPECT_THROW((void)geodesic_expansion_sphere(parse_space("CP2"), 1.0, 10), usage_error);
}

TEST(LevySchoenberg, GramMatricesArePositiveSemidefinite) {
  for (const Space& s : all_spaces()) {
    const PointSet set = sample_set(s, 40, 17);
    const Point y0 = sample_uniform(s, 18);
    const double chord = psd_check(levy_schoenberg_gram(RadialMetric::tau(s), set, y0));
    EXPECT_GE(chord, -1e-10) << s.label();
    const auto rho = RadialMetric::theta_delta_r(s, 1.0, 1e-5);
    EXPECT_GE(psd_check(levy_schoenberg_gram(rho, set, y0)), -4 * 40 * rho.tail_bound() - 1e-10) << s.label();
  }
  const Space s2 = parse_space("S2");
  EXPECT_GE(psd_check(levy_schoenberg_gram(RadialMetric::geodesic(s2), sample_set(s2, 40, 3), sample_uniform(s2, 4))),
            -1e-10);
}

TEST(LevySchoenberg, DetectsNonMetricKernel) {
  Eigen::MatrixXd g(2, 2);
  g << 1.0, 2.0, 2.0, 1.0;
  EXPECT_NEAR(psd_check(g), -1.0, 1e-14);
}
