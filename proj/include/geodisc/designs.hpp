#pragma once

// t-designs: verification through phi_l, the quadrature cross-check, covering
// count nu and separation delta, built-in configurations and the design bound
// audit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geodisc/discrepancy.hpp"
#include "geodisc/jacobi.hpp"
#include "geodisc/kernels.hpp"
#include "geodisc/spaces.hpp"

namespace geodisc {

inline constexpr double default_design_tol = 1e-9;
inline constexpr int design_strength_ceiling = 30;

/// True iff |phi_l[D_N]| <= tol N^2 for l = 1..t.
inline bool verify_design(const PointSet& set, int t, double tol = default_design_tol) {
  if (t < 1) throw domain_error("verify_design: t must be at least 1");
  const double n2 = static_cast<double>(set.size()) * set.size();
  const auto phi = phi_all(set, t);
  for (int l = 1; l <= t; ++l)
    if (std::abs(phi[l]) > tol * n2) return false;
  return true;
}

/// Largest t <= t_max with the design property (0 if not even a 1-design).
inline int design_strength(const PointSet& set, int t_max, double tol = default_design_tol) {
  const double n2 = static_cast<double>(set.size()) * set.size();
  const auto phi = phi_all(set, t_max);
  int t = 0;
  while (t < t_max && std::abs(phi[t + 1]) <= tol * n2) ++t;
  return t;
}

/// Radial average int (cos theta(x, y))^k dmu(x), exact by Gauss-Jacobi.
inline double radial_monomial_average(const Space& s, int k) {
  const JacobiParams p = s.params();
  const auto rule = gauss_jacobi_nodes(p, k / 2 + 1);
  CompensatedSum acc;
  for (size_t i = 0; i < rule->nodes.size(); ++i) acc += rule->weights[i] * std::pow(rule->nodes[i], k);
  return acc.value() * kappa(p) * std::pow(0.5, p.alpha + p.beta + 1.0);
}

/// |sum_x (cos theta(x, y))^k - N <z^k>| for one center y.
inline double quadrature_deviation(const PointSet& set, int k, const Point& y) {
  const Space& s = set.space();
  CompensatedSum acc;
  for (size_t i = 0; i < set.size(); ++i) acc += std::pow(pair_geometry(s, set.coords(i), y.coords).cos_theta, k);
  return std::abs(acc.value() - static_cast<double>(set.size()) * radial_monomial_average(s, k));
}

/// Max deviation over monomials k = 0..t and `centers` random centers.
inline double quadrature_cross_check(const PointSet& set, int t, size_t centers, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  double worst = 0.0;
  for (size_t c = 0; c < centers; ++c) {
    const Point y = sample_uniform(set.space(), rng);
    for (int k = 0; k <= t; ++k) worst = std::max(worst, quadrature_deviation(set, k, y));
  }
  return worst;
}

/// Geodesic midpoint of x and y, or nothing when the midpoint is not unique
/// (antipodal pairs) or not constructed (octonionic plane).
inline std::optional<Point> geodesic_midpoint(const Point& x, const Point& y) {
  check_same_space(x, y);
  const Space& s = x.space;
  if (s.is_sphere()) {
    Point m{s, std::vector<double>(x.coords.size())};
    double norm_sq = 0.0;
    for (size_t k = 0; k < m.coords.size(); ++k) {
      m.coords[k] = x.coords[k] + y.coords[k];
      norm_sq += m.coords[k] * m.coords[k];
    }
    if (norm_sq < 1e-18) return std::nullopt;
    for (double& c : m.coords) c /= std::sqrt(norm_sq);
    return m;
  }
  if (s.family == Family::OctProj) return std::nullopt;
  const auto a = projector_vector(x);
  const auto b = projector_vector(y);
  AlgebraElement ip(s.algebra());
  for (size_t i = 0; i < a.size(); ++i) ip += a[i].conj() * b[i];
  const double len = ip.norm();
  if (len < 1e-9) return std::nullopt;
  // rotate b's phase so that <a, b u> is real and positive
  const AlgebraElement u = (1.0 / len) * ip.conj();
  std::vector<AlgebraElement> m(a.size());
  double norm_sq = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    m[i] = a[i] + b[i] * u;
    norm_sq += m[i].norm_sq();
  }
  for (auto& e : m) e *= 1.0 / std::sqrt(norm_sq);
  return Point::from_projector(s, HermitianMatrix::outer(m));
}

inline size_t count_in_ball(const PointSet& set, const Point& y, double r) {
  const Space& s = set.space();
  size_t c = 0;
  for (size_t i = 0; i < set.size(); ++i)
    if (pair_geometry(s, set.coords(i), y.coords).theta < r) ++c;
  return c;
}

struct CoveringCount {
  size_t value = 0;
  std::string scheme;
};

/// nu[D_N, r] = max_y #(B_r(y) cap D_N), maximized over the set points,
/// pairwise geodesic midpoints (where constructed) and random centers.
/// The result is a lower bound for the true maximum.
inline CoveringCount covering_count(const PointSet& set, double r, size_t random_centers = 1000,
                                    std::uint64_t seed = 1) {
  if (r < 0.0) throw domain_error("covering_count: negative radius");
  CoveringCount out;
  out.scheme = "points+midpoints+random(" + std::to_string(random_centers) + ")";
  if (r > pi) {
    out.value = set.size();
    return out;
  }
  const size_t n = set.size();
  for (size_t i = 0; i < n; ++i) out.value = std::max(out.value, count_in_ball(set, set[i], r));
  if (set.space().family == Family::OctProj) out.scheme = "points+random(" + std::to_string(random_centers) + ")";
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (auto m = geodesic_midpoint(set[i], set[j])) out.value = std::max(out.value, count_in_ball(set, *m, r));
  Rng rng = make_rng(seed);
  for (size_t c = 0; c < random_centers; ++c)
    out.value = std::max(out.value, count_in_ball(set, sample_uniform(set.space(), rng), r));
  return out;
}

/// delta[D_N] = half the minimal pairwise geodesic distance.
inline double separation(const PointSet& set) {
  if (set.size() < 2) throw domain_error("separation: need at least two points");
  const Space& s = set.space();
  double best = pi;
  for (size_t i = 0; i < set.size(); ++i)
    for (size_t j = i + 1; j < set.size(); ++j)
      best = std::min(best, pair_geometry(s, set.coords(i), set.coords(j)).theta);
  return 0.5 * best;
}

// ---- built-in configurations -----------------------------------------------------

namespace detail {

inline Point sphere_point(const Space& s, std::vector<double> v) {
  double norm_sq = 0.0;
  for (double x : v) norm_sq += x * x;
  for (double& x : v) x /= std::sqrt(norm_sq);
  return Point{s, std::move(v)};
}

inline void require_sphere(const Space& s, const std::string& name) {
  if (!s.is_sphere()) throw unsupported_error(name + " is defined on spheres only");
}

}  // namespace detail

/// Regular simplex on S^d: d+2 unit vectors with pairwise inner product -1/(d+1).
inline PointSet simplex_configuration(const Space& s) {
  detail::require_sphere(s, "simplex");
  const int m = s.d + 1;  // ambient dimension
  // vertices e_i - centroid in R^{m+1}, expressed in an orthonormal basis of
  // the hyperplane orthogonal to (1, ..., 1) built by Gram-Schmidt
  std::vector<std::vector<double>> basis;
  for (int k = 0; k < m; ++k) {
    std::vector<double> v(m + 1, 0.0);
    v[k] = 1.0;
    v[m] = -1.0;
    for (const auto& b : basis) {
      double dot = 0.0;
      for (int i = 0; i <= m; ++i) dot += v[i] * b[i];
      for (int i = 0; i <= m; ++i) v[i] -= dot * b[i];
    }
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    for (double& x : v) x /= std::sqrt(nrm);
    basis.push_back(v);
  }
  PointSet set(s);
  for (int i = 0; i <= m; ++i) {
    std::vector<double> e(m + 1, -1.0 / (m + 1));
    e[i] += 1.0;
    std::vector<double> c(m);
    for (int k = 0; k < m; ++k) {
      double dot = 0.0;
      for (int j = 0; j <= m; ++j) dot += e[j] * basis[k][j];
      c[k] = dot;
    }
    set.push_back(detail::sphere_point(s, c));
  }
  return set;
}

/// +-e_i on S^d (the octahedron for d = 2).
inline PointSet cross_polytope_configuration(const Space& s) {
  detail::require_sphere(s, "cross_polytope");
  PointSet set(s);
  for (int i = 0; i <= s.d; ++i)
    for (double sign : {1.0, -1.0}) {
      std::vector<double> v(s.d + 1, 0.0);
      v[i] = sign;
      set.push_back(Point{s, v});
    }
  return set;
}

/// (+-1, ..., +-1) / sqrt(d+1) on S^d.
inline PointSet cube_configuration(const Space& s) {
  detail::require_sphere(s, "cube");
  if (s.d > 20) throw unsupported_error("cube: dimension too large");
  PointSet set(s);
  const int m = s.d + 1;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<double> v(m);
    for (int i = 0; i < m; ++i) v[i] = (mask >> i) & 1u ? -1.0 : 1.0;
    set.push_back(detail::sphere_point(s, v));
  }
  return set;
}

/// The 12 vertices (0, +-1, +-g), (+-1, +-g, 0), (+-g, 0, +-1), g the golden ratio.
inline PointSet icosahedron_configuration(const Space& s) {
  detail::require_sphere(s, "icosahedron");
  if (s.d != 2) throw unsupported_error("icosahedron is defined on S^2 only");
  const double g = 0.5 * (1.0 + std::sqrt(5.0));
  PointSet set(s);
  for (double a : {1.0, -1.0})
    for (double b : {g, -g}) {
      set.push_back(detail::sphere_point(s, {0.0, a, b}));
      set.push_back(detail::sphere_point(s, {a, b, 0.0}));
      set.push_back(detail::sphere_point(s, {b, 0.0, a}));
    }
  return set;
}

/// Projectors onto the coordinate lines e_0, ..., e_n.
inline PointSet orthonormal_lines_configuration(const Space& s) {
  if (s.is_sphere()) throw unsupported_error("orthonormal_lines is defined on projective spaces only");
  PointSet set(s);
  for (int i = 0; i <= s.n; ++i) {
    HermitianMatrix m(s.algebra(), s.n + 1);
    m.set_real(i, i, 1.0);
    set.push_back(Point::from_projector(s, m));
  }
  return set;
}

/// {Z(j pi / k)}, j = 0..k-1: k equally spaced points on a closed geodesic.
inline PointSet geodesic_orbit_configuration(const Space& s, int k) {
  if (k < 1) throw domain_error("geodesic_orbit: k must be positive");
  PointSet set(s);
  for (int j = 0; j < k; ++j) set.push_back(geodesic_point(s, pi * j / k));
  return set;
}

/// Fibonacci spiral on S^2: z_k = 1 - (2k+1)/N, longitude 2 pi k / golden ratio.
inline PointSet spiral_configuration(const Space& s, int count) {
  detail::require_sphere(s, "spiral");
  if (s.d != 2) throw unsupported_error("spiral is defined on S^2 only");
  if (count < 1) throw domain_error("spiral: need at least one point");
  const double golden = 0.5 * (1.0 + std::sqrt(5.0));
  PointSet set(s);
  for (int k = 0; k < count; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / count;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * pi * std::fmod(k / golden, 1.0);
    set.push_back(detail::sphere_point(s, {rho * std::cos(phi), rho * std::sin(phi), z}));
  }
  return set;
}

/// name: simplex, cross_polytope, cube, icosahedron, orthonormal_lines,
/// geodesic_orbit (param = k), spiral (param = N), random (param = N).
inline PointSet builtin_configuration(const Space& s, const std::string& name, int param = 0,
                                      std::uint64_t seed = 1) {
  if (name == "simplex") return simplex_configuration(s);
  if (name == "cross_polytope" || name == "octahedron") {
    if (name == "octahedron" && !(s.is_sphere() && s.d == 2)) throw unsupported_error("octahedron is defined on S^2 only");
    return cross_polytope_configuration(s);
  }
  if (name == "cube") return cube_configuration(s);
  if (name == "icosahedron") return icosahedron_configuration(s);
  if (name == "orthonormal_lines") return orthonormal_lines_configuration(s);
  if (name == "geodesic_orbit") return geodesic_orbit_configuration(s, param);
  if (name == "spiral") return spiral_configuration(s, param);
  if (name == "random") {
    if (param < 0) throw domain_error("random: negative size");
    return sample_set(s, static_cast<size_t>(param), seed);
  }
  throw unsupported_error("unknown configuration '" + name + "'");
}

/// Applies a rotation of R^{d+1} (row-major (d+1)x(d+1)) to every point of a sphere set.
inline PointSet rotate_sphere_set(const PointSet& set, const std::vector<double>& rot) {
  const Space& s = set.space();
  detail::require_sphere(s, "rotation");
  const int m = s.d + 1;
  PointSet out(s);
  for (size_t i = 0; i < set.size(); ++i) {
    auto c = set.coords(i);
    std::vector<double> v(m, 0.0);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) v[a] += rot[a * m + b] * c[b];
    out.push_back(Point{s, v});
  }
  return out;
}

/// Haar-random rotation of R^m (QR of a Gaussian matrix with sign fix), row-major.
inline std::vector<double> random_rotation(int m, Rng& rng) {
  Eigen::MatrixXd g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR();
  for (int j = 0; j < m; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  if (q.determinant() < 0.0) q.col(0) *= -1.0;
  std::vector<double> out(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out[i * m + j] = q(i, j);
  return out;
}

// ---- design bound audit ------------------------------------------------------------

struct DesignAudit {
  size_t N = 0;
  int t_requested = 0;
  int t_verified = 0;
  std::vector<double> phi_values;  // phi_0..phi_{t+1}
  size_t nu_at_scale = 0;
  double scale_radius = 0.0;       // L / t
  double delta = 0.0;
  double lambda = 0.0;
  double lambda_tail = 0.0;
  double bound_ratio = 0.0;        // lambda / (t^{d-1} nu^2)
  bool refused = false;
  std::string reason;
  std::string nu_scheme;
};

/// Ratio lambda[eta, D_N] / (t^{d-1} nu[D_N, L/t]^2) for a verified t-design.
/// Refuses (refused = true) non-designs and t < 2L/pi.
inline DesignAudit design_bound_audit(const PointSet& set, int t, const WeightFunction& w, double L_const = 4.0,
                                      double tol = default_design_tol, std::uint64_t seed = 1) {
  DesignAudit a;
  a.N = set.size();
  a.t_requested = t;
  a.phi_values = phi_all(set, t + 1);
  a.t_verified = design_strength(set, std::max(t + 1, design_strength_ceiling), tol);
  if (set.size() >= 2) a.delta = separation(set);
  if (a.t_verified < t) {
    a.refused = true;
    a.reason = "not a " + std::to_string(t) + "-design (verified t = " + std::to_string(a.t_verified) + ")";
    return a;
  }
  if (t < 2.0 * L_const / pi) {
    a.refused = true;
    a.reason = "t below 2L/pi";
    return a;
  }
  a.scale_radius = L_const / t;
  const auto nu = covering_count(set, a.scale_radius, 1000, seed);
  a.nu_at_scale = nu.value;
  a.nu_scheme = nu.scheme;
  const auto rep = quad_disc_series(set, w);
  a.lambda = rep.value;
  a.lambda_tail = rep.tail_bound;
  const double nu2 = static_cast<double>(a.nu_at_scale) * a.nu_at_scale;
  a.bound_ratio = a.lambda / (std::pow(t, set.space().d - 1) * nu2);
  return a;
}

}  // namespace geodisc
