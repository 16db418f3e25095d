#include <gtest/gtest.h>

#include "geodisc/designs.hpp"

using namespace geodisc;

namespace {

PointSet rotated_octahedra(int copies, std::uint64_t seed) {
  const Space s2 = parse_space("S2");
  const PointSet oct = cross_polytope_configuration(s2);
  Rng rng = make_rng(seed);
  PointSet out(s2);
  for (int c = 0; c < copies; ++c) out.append(c == 0 ? oct : rotate_sphere_set(oct, random_rotation(3, rng)));
  return out;
}

double inner3(const Point& a, const Point& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.coords.size(); ++k) s += a.coords[k] * b.coords[k];
  return s;
}

}  // namespace

TEST(Designs, PlatonicStrengths) {
  const Space s2 = parse_space("S2");
  EXPECT_EQ(design_strength(cross_polytope_configuration(s2), 10), 3);
  EXPECT_EQ(design_strength(icosahedron_configuration(s2), 10), 5);
  EXPECT_EQ(design_strength(cube_configuration(s2), 10), 3);
  EXPECT_EQ(design_strength(simplex_configuration(s2), 10), 2);
  EXPECT_TRUE(verify_design(icosahedron_configuration(s2), 5));
  EXPECT_FALSE(verify_design(icosahedron_configuration(s2), 6));
  EXPECT_THROW((void)verify_design(icosahedron_configuration(s2), 0), domain_error);
}

TEST(Designs, HigherDimensionalSpheres) {
  for (int d : {3, 4, 5}) {
    const Space s = make_space(Family::Sphere, d);
    EXPECT_EQ(design_strength(simplex_configuration(s), 10), 2) << d;
    EXPECT_EQ(design_strength(cross_polytope_configuration(s), 10), 3) << d;
  }
}

TEST(Designs, CircleOrbits) {
  const Space s1 = parse_space("S1");
  for (int k : {3, 7, 12}) EXPECT_EQ(design_strength(geodesic_orbit_configuration(s1, k), 40), k - 1) << k;
}

TEST(Designs, OrthonormalLinesInProjectiveSpaces) {
  for (const char* name : {"RP2", "CP2", "HP2", "OP2"}) {
    const Space s = parse_space(name);
    const PointSet lines = orthonormal_lines_configuration(s);
    EXPECT_EQ(lines.size(), 3u);
    EXPECT_EQ(design_strength(lines, 10), 1) << name;
  }
}

TEST(Designs, UnionsOfRotatedDesignsStayDesigns) {
  const PointSet u = rotated_octahedra(4, 3);
  EXPECT_EQ(u.size(), 24u);
  EXPECT_TRUE(verify_design(u, 3));
  Rng rng = make_rng(5);
  const PointSet ico = rotate_sphere_set(icosahedron_configuration(parse_space("S2")), random_rotation(3, rng));
  EXPECT_EQ(design_strength(ico, 10), 5);
}

TEST(Quadrature, RadialMonomialAveragesOnTheTwoSphere) {
  const Space s2 = parse_space("S2");
  for (int k = 0; k <= 10; ++k) EXPECT_NEAR(radial_monomial_average(s2, k), k % 2 ? 0.0 : 1.0 / (k + 1), 1e-15) << k;
  // CP^2: cos theta = 2|<a,b>|^2 - 1 with |<a,b>|^2 ~ Beta(1, 2)
  const Space cp2 = parse_space("CP2");
  EXPECT_NEAR(radial_monomial_average(cp2, 1), 2.0 / 3.0 - 1.0, 1e-15);
  EXPECT_NEAR(radial_monomial_average(cp2, 2), 4.0 * 2.0 / 12.0 - 4.0 / 3.0 + 1.0, 1e-15);
}

TEST(Quadrature, CrossCheckAndFailureWitness) {
  const Space s2 = parse_space("S2");
  const PointSet ico = icosahedron_configuration(s2);
  EXPECT_LT(quadrature_cross_check(ico, 5, 100, 1), 1e-9 * ico.size());
  double worst6 = 0.0;
  Rng rng = make_rng(2);
  for (int c = 0; c < 100; ++c) worst6 = std::max(worst6, quadrature_deviation(ico, 6, sample_uniform(s2, rng)));
  EXPECT_GT(worst6, 1e-3);
  const PointSet oct = cross_polytope_configuration(s2);
  EXPECT_LT(quadrature_cross_check(oct, 3, 100, 1), 1e-9 * oct.size());
  EXPECT_GT(quadrature_deviation(oct, 4, oct[0]), 1e-3);
}

TEST(Midpoints, EquidistantWhereDefined) {
  for (const char* name : {"S2", "S3", "RP2", "CP2", "HP2"}) {
    const Space s = parse_space(name);
    Rng rng = make_rng(6);
    for (int i = 0; i < 20; ++i) {
      const Point a = sample_uniform(s, rng);
      const Point b = sample_uniform(s, rng);
      const auto m = geodesic_midpoint(a, b);
      ASSERT_TRUE(m.has_value()) << name;
      const double d = geodesic_distance(a, b);
      EXPECT_NEAR(geodesic_distance(a, *m), 0.5 * d, 1e-9) << name;
      EXPECT_NEAR(geodesic_distance(b, *m), 0.5 * d, 1e-9) << name;
    }
    const auto [p, q] = antipodal_pair(s);
    EXPECT_FALSE(geodesic_midpoint(p, q).has_value()) << name;
  }
  const Space op2 = parse_space("OP2");
  EXPECT_FALSE(geodesic_midpoint(sample_uniform(op2, 1), sample_uniform(op2, 2)).has_value());
}

TEST(Covering, CountBasics) {
  const Space s2 = parse_space("S2");
  const PointSet ico = icosahedron_configuration(s2);
  const double delta = separation(ico);
  EXPECT_NEAR(delta, 0.5 * std::atan(2.0), 1e-12);
  EXPECT_EQ(covering_count(ico, 0.9 * delta).value, 1u);
  EXPECT_EQ(covering_count(ico, 3.5).value, 12u);
  size_t prev = 0;
  for (double r : {0.2, 0.6, 1.0, 1.4, 1.8, 2.2, 2.6, 3.0, pi}) {
    const size_t v = covering_count(ico, r, 200, 1).value;
    EXPECT_GE(v, prev);
    prev = v;
  }
  // around a vertex: itself plus five neighbours
  EXPECT_EQ(count_in_ball(ico, ico[0], 1.2), 6u);
  EXPECT_THROW((void)covering_count(ico, -1.0), domain_error);
  EXPECT_NE(covering_count(orthonormal_lines_configuration(parse_space("OP2")), 1.0).scheme.find("random"),
            std::string::npos);
}

TEST(Separation, KnownConfigurations) {
  const Space s2 = parse_space("S2");
  EXPECT_NEAR(separation(cross_polytope_configuration(s2)), pi / 4, 1e-15);
  EXPECT_NEAR(separation(orthonormal_lines_configuration(parse_space("CP2"))), pi / 2, 1e-15);
  PointSet dup(s2);
  dup.push_back(cross_polytope_configuration(s2)[0]);
  dup.push_back(cross_polytope_configuration(s2)[0]);
  EXPECT_EQ(separation(dup), 0.0);
  PointSet one(s2);
  one.push_back(dup[0]);
  EXPECT_THROW((void)separation(one), domain_error);
}

TEST(Configurations, Geometry) {
  for (int d : {2, 3, 6}) {
    const Space s = make_space(Family::Sphere, d);
    const PointSet simplex = simplex_configuration(s);
    ASSERT_EQ(simplex.size(), static_cast<size_t>(d + 2));
    for (size_t i = 0; i < simplex.size(); ++i) {
      EXPECT_NEAR(inner3(simplex[i], simplex[i]), 1.0, 1e-14);
      for (size_t j = i + 1; j < simplex.size(); ++j) EXPECT_NEAR(inner3(simplex[i], simplex[j]), -1.0 / (d + 1), 1e-14);
    }
    EXPECT_EQ(cross_polytope_configuration(s).size(), static_cast<size_t>(2 * (d + 1)));
    EXPECT_EQ(cube_configuration(s).size(), static_cast<size_t>(1) << (d + 1));
  }
  const PointSet spiral = spiral_configuration(parse_space("S2"), 100);
  ASSERT_EQ(spiral.size(), 100u);
  for (size_t i = 0; i < spiral.size(); ++i) EXPECT_NEAR(inner3(spiral[i], spiral[i]), 1.0, 1e-14);
  EXPECT_THROW((void)icosahedron_configuration(parse_space("S3")), unsupported_error);
  EXPECT_THROW((void)simplex_configuration(parse_space("CP2")), unsupported_error);
  EXPECT_THROW((void)builtin_configuration(parse_space("S3"), "octahedron"), unsupported_error);
  EXPECT_THROW((void)builtin_configuration(parse_space("S2"), "dodecahedron"), unsupported_error);
  EXPECT_EQ(builtin_configuration(parse_space("CP2"), "random", 9, 4).size(), 9u);
}

TEST(Rotations, AreOrthogonalWithUnitDeterminant) {
  Rng rng = make_rng(7);
  for (int m : {2, 3, 5}) {
    const auto q = random_rotation(m, rng);
    Eigen::MatrixXd Q(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) Q(i, j) = q[i * m + j];
    EXPECT_LT((Q * Q.transpose() - Eigen::MatrixXd::Identity(m, m)).norm(), 1e-13);
    EXPECT_NEAR(Q.determinant(), 1.0, 1e-13);
  }
}

TEST(Audit, RefusesNonDesignsAndSmallStrength) {
  const Space s2 = parse_space("S2");
  const auto random = design_bound_audit(sample_set(s2, 20, 1), 2, WeightFunction::sin_r());
  EXPECT_TRUE(random.refused);
  EXPECT_NE(random.reason.find("not a 2-design"), std::string::npos);
  const auto small = design_bound_audit(cross_polytope_configuration(s2), 2, WeightFunction::sin_r(), 4.0);
  EXPECT_TRUE(small.refused);
  EXPECT_EQ(small.reason, "t below 2L/pi");
}

TEST(Audit, IcosahedronRatio) {
  const auto a = design_bound_audit(icosahedron_configuration(parse_space("S2")), 5, WeightFunction::sin_r());
  ASSERT_FALSE(a.refused) << a.reason;
  EXPECT_EQ(a.t_verified, 5);
  EXPECT_GT(a.lambda, 0.0);
  EXPECT_GT(a.bound_ratio, 0.0);
  EXPECT_NEAR(a.scale_radius, 0.8, 1e-15);
  EXPECT_GE(a.nu_at_scale, 1u);
  ::testing::Test::RecordProperty("icosahedron_ratio", std::to_string(a.bound_ratio));
}

TEST(Audit, RotatedCrossPolytopeFamily) {
  // t = 3 is fixed while nu[D_N, 4/3] grows linearly in N, so the ratio decays
  // like 1/N; ratio * N stays inside a factor-3 band
  double lo = INFINITY, hi = 0.0;
  for (int copies : {1, 2, 4, 8, 16}) {
    const PointSet set = rotated_octahedra(copies, 11);
    const auto a = design_bound_audit(set, 3, WeightFunction::sin_r());
    ASSERT_FALSE(a.refused) << a.reason;
    const double scaled = a.bound_ratio * static_cast<double>(set.size());
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
    ::testing::Test::RecordProperty("ratio_N" + std::to_string(set.size()), std::to_string(a.bound_ratio));
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LE(hi, 3.0 * lo);
}
