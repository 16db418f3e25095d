#pragma once

// Radial kernels on Q(d, d0) as functions of the geodesic distance t:
// intersection volumes mu_r, discrepancy kernels lambda_r and lambda(eta),
// symmetric-difference metrics theta^Delta, their averages, the chordal
// closed form, Levy-Schoenberg Gram matrices and Monte Carlo oracles.
// Every series value is reported together with a certified tail bound.

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "geodisc/jacobi.hpp"
#include "geodisc/numeric.hpp"
#include "geodisc/random.hpp"
#include "geodisc/spaces.hpp"

namespace geodisc {

inline constexpr double default_kernel_tol = 1e-6;
inline constexpr int default_radius_max_L = 4'000'000;
inline constexpr int default_weight_max_L = 8'000;

/// Truncated coefficient sequence b_l = kappa l^{-2} M_l c_l, with c_l = a_l(r)
/// or A_l(eta), and a bound on the omitted tail sum_{l > L} b_l.
struct ExpansionCoefficients {
  JacobiParams params;
  std::string source;
  int L = 0;
  std::vector<double> terms;   // b_l, index 0 unused
  std::vector<double> scaled;  // b_l / P_l(1)
  double tail_bound = 0.0;
  double requested_tol = 0.0;
  bool capped = false;  // L hit the cap; tail_bound exceeds requested_tol

  [[nodiscard]] double total() const {
    CompensatedSum s;
    for (int l = 1; l <= L; ++l) s += terms[l];
    return s.value();
  }

  /// sum_l b_l P_l(cos t) / P_l(1) and sum_l b_l (1 - P_l(cos t)/P_l(1)).
  [[nodiscard]] std::pair<double, double> evaluate(double t) const {
    const double z = std::cos(std::clamp(t, 0.0, pi));
    const double a = params.alpha;
    const double b = params.beta;
    CompensatedSum lam;
    CompensatedSum theta;
    double prev2 = 1.0;
    double prev = 0.5 * (a + b + 2.0) * z + 0.5 * (a - b);
    const double n1 = a + 1.0;
    if (L >= 1) {
      lam += scaled[1] * prev;
      theta += scaled[1] * (n1 - prev);
    }
    double norm1 = n1;
    for (int n = 2; n <= L; ++n) {
      const double s = 2.0 * n + a + b;
      const double den = 2.0 * n * (n + a + b) * (s - 2.0);
      const double next = ((s - 1.0) * (s * (s - 2.0) * z + a * a - b * b) * prev -
                           2.0 * (n + a - 1.0) * (n + b - 1.0) * s * prev2) /
                          den;
      prev2 = prev;
      prev = next;
      norm1 *= (a + n) / n;
      lam += scaled[n] * next;
      theta += scaled[n] * (norm1 - next);
    }
    return {lam.value(), theta.value()};
  }
};

inline int choose_truncation(double scale, double tol, int max_L, bool& capped) {
  capped = false;
  if (!(scale > 0.0)) return 1;
  const double want = std::ceil(scale / tol - 0.5);
  if (want > max_L) {
    capped = true;
    return max_L;
  }
  return std::max(1, static_cast<int>(want));
}

namespace detail {

inline ExpansionCoefficients finish_expansion(const JacobiParams& p, std::vector<double> c, int L) {
  ExpansionCoefficients e;
  e.params = p;
  e.L = L;
  const double k = kappa(p);
  const auto M = big_M_table(p, L);
  const auto n1 = jacobi_norm1_table(p, L);
  e.terms.assign(static_cast<size_t>(L) + 1, 0.0);
  e.scaled.assign(static_cast<size_t>(L) + 1, 0.0);
  for (int l = 1; l <= L; ++l) {
    e.terms[l] = k * M[l] * c[l] / (static_cast<double>(l) * l);
    e.scaled[l] = e.terms[l] / n1[l];
  }
  return e;
}

}  // namespace detail

/// Expansion of lambda_r truncated at a given L: b_l = kappa l^{-2} M_l a_l(r),
/// tail bound kappa C w(r) / (L + 1/2).
inline ExpansionCoefficients radius_expansion_at(const Space& s, double r, int L) {
  if (r < 0.0) throw domain_error("radius_expansion: negative radius");
  if (L < 1) throw domain_error("radius_expansion: L must be positive");
  r = std::min(r, pi);
  const JacobiParams p = s.params();
  const double scale = kappa(p) * tail_constant(p) * radial_weight(p, r);
  std::vector<double> a(static_cast<size_t>(L) + 1, 0.0);
  {
    std::vector<double> P(static_cast<size_t>(L));
    JacobiRecurrence(p.shifted(), L).fill(std::cos(r), P);
    const double env = std::pow(std::sin(0.5 * r), s.d) * std::pow(std::cos(0.5 * r), s.d0);
    for (int l = 1; l <= L; ++l) {
      const double q = env * P[l - 1];
      a[l] = q * q;
    }
  }
  ExpansionCoefficients e = detail::finish_expansion(p, std::move(a), L);
  e.source = "r=" + std::to_string(r);
  e.tail_bound = scale * inverse_square_tail(L);
  e.requested_tol = e.tail_bound;
  return e;
}

/// Expansion of lambda_r with the smallest L whose tail bound is <= tol.
inline ExpansionCoefficients radius_expansion(const Space& s, double r, double tol = default_kernel_tol,
                                              int max_L = default_radius_max_L) {
  if (r < 0.0) throw domain_error("radius_expansion: negative radius");
  const JacobiParams p = s.params();
  const double scale = kappa(p) * tail_constant(p) * radial_weight(p, std::min(r, pi));
  bool capped = false;
  const int L = choose_truncation(scale, tol, max_L, capped);
  ExpansionCoefficients e = radius_expansion_at(s, r, L);
  e.requested_tol = tol;
  e.capped = capped;
  return e;
}

/// Expansion of lambda(eta): b_l = kappa l^{-2} M_l A_l(eta); tail
/// kappa C ||eta||_{d,d0} / (L + 1/2). Built once per (space, weight, tol, cap).
inline std::shared_ptr<const ExpansionCoefficients> weight_expansion(const Space& s, const WeightFunction& w,
                                                                     double tol = default_kernel_tol,
                                                                     int max_L = default_weight_max_L) {
  const JacobiParams p = s.params();
  const double norm = w.class_norm(s.d, s.d0);
  if (!std::isfinite(norm)) throw domain_error("weight is outside the admissible class");
  const double scale = kappa(p) * tail_constant(p) * norm;
  bool capped = false;
  const int L = choose_truncation(scale, tol, max_L, capped);

  using Key = std::tuple<int, int, std::string, int>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const ExpansionCoefficients>> cache;
  const bool cacheable = w.kind() != WeightKind::Tabulated;
  const Key key{static_cast<int>(s.family), s.n, w.describe(), L};
  if (cacheable) {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) {
      auto copy = std::make_shared<ExpansionCoefficients>(*it->second);
      copy->requested_tol = tol;
      copy->capped = capped;
      return copy;
    }
  }
  auto e = std::make_shared<ExpansionCoefficients>(detail::finish_expansion(p, A_coefficients(p, w, L), L));
  e->source = w.describe();
  e->tail_bound = scale * inverse_square_tail(L);
  e->requested_tol = tol;
  e->capped = capped;
  if (cacheable) {
    std::lock_guard lock(mu);
    cache.emplace(key, e);
  }
  return e;
}

struct KernelValue {
  double value = 0.0;
  double tail_bound = 0.0;
  int L = 0;
};

/// lambda_r(t) = mu(B_r(y1) cap B_r(y2)) - v_r^2 for theta(y1, y2) = t.
inline KernelValue lambda_r_kernel(const Space& s, double r, double t, double tol = default_kernel_tol) {
  const auto e = radius_expansion(s, r, tol);
  return {e.evaluate(t).first, e.tail_bound, e.L};
}

/// mu(B_r(y1) cap B_r(y2)).
inline KernelValue mu_r(const Space& s, double r, double t, double tol = default_kernel_tol) {
  const double v = ball_volume(s, r);
  KernelValue k = lambda_r_kernel(s, r, t, tol);
  k.value += v * v;
  return k;
}

/// theta^Delta_r(t) = half the measure of B_r(y1) symmetric-difference B_r(y2).
inline KernelValue theta_delta_r(const Space& s, double r, double t, double tol = default_kernel_tol) {
  const auto e = radius_expansion(s, r, tol);
  return {e.evaluate(t).second, e.tail_bound, e.L};
}

inline KernelValue lambda_eta_kernel(const Space& s, const WeightFunction& w, double t,
                                     double tol = default_kernel_tol) {
  const auto e = weight_expansion(s, w, tol);
  return {e->evaluate(t).first, e->tail_bound, e->L};
}

inline KernelValue theta_delta_eta(const Space& s, const WeightFunction& w, double t,
                                   double tol = default_kernel_tol) {
  const auto e = weight_expansion(s, w, tol);
  return {e->evaluate(t).second, e->tail_bound, e->L};
}

/// <theta^Delta(eta)> = int_0^pi v_r (1 - v_r) eta(r) dr.
inline double average_theta_delta(const Space& s, const WeightFunction& w) {
  auto f = [&](double r) { return ball_volume(s, r) * ball_volume_complement(s, r) * w(r); };
  return w.integrate_pieces(f, 48);
}

/// <theta^Delta_r> = v_r v'_r.
inline double average_theta_delta_r(const Space& s, double r) {
  return ball_volume(s, r) * ball_volume_complement(s, r);
}

/// <tau> = int sin(r/2) dv_r = B((d+1)/2, d0/2) / B(d/2, d0/2).
inline double average_tau(const Space& s) {
  return std::exp(log_beta(0.5 * (s.d + 1), 0.5 * s.d0) - log_beta(0.5 * s.d, 0.5 * s.d0));
}

/// gamma(Q) = <tau> / <theta^Delta(eta_natural)>.
inline double gamma_constant(const Space& s) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, double> cache;
  const std::pair<int, int> key{static_cast<int>(s.family), s.n};
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const double g = average_tau(s) / average_theta_delta(s, WeightFunction::sin_r());
  std::lock_guard lock(mu);
  cache[key] = g;
  return g;
}

/// tau(t) = c(a,b) (1 - P_1(cos t)/P_1(1))^{1/2}, c = (d/(d+d0))^{1/2}.
inline double chordal_via_l1(const Space& s, double t) {
  const JacobiParams p = s.params();
  // 1 - P_1(z)/P_1(1) = (a+b+2)(1-z) / (2(a+1)), with 1 - z = 2 sin^2(t/2)
  const double sh = std::sin(0.5 * std::clamp(t, 0.0, pi));
  const double one_minus_phi1 = (p.alpha + p.beta + 2.0) * sh * sh / (p.alpha + 1.0);
  const double c = std::sqrt(static_cast<double>(s.d) / (s.d + s.d0));
  return c * std::sqrt(std::max(0.0, one_minus_phi1));
}

/// Geodesic distance on S^d as 2 pi theta^Delta_{pi/2}, summed over odd l <= L only.
inline KernelValue geodesic_expansion_sphere(const Space& s, double t, int L) {
  if (!s.is_sphere()) throw usage_error("geodesic_expansion_sphere: sphere required");
  if (L < 1) throw domain_error("geodesic_expansion_sphere: L must be positive");
  ExpansionCoefficients e = radius_expansion_at(s, 0.5 * pi, L);
  for (int l = 2; l <= e.L; l += 2) {
    e.terms[l] = 0.0;
    e.scaled[l] = 0.0;
  }
  return {2.0 * pi * e.evaluate(t).second, 2.0 * pi * e.tail_bound, e.L};
}

// ---- metrics and Levy-Schoenberg kernels ----------------------------------------

enum class MetricKind { Tau, Geodesic, ThetaDeltaEta, ThetaDeltaR };

/// A radial metric rho(t) ready for repeated evaluation.
class RadialMetric {
 public:
  static RadialMetric tau(const Space& s) { return RadialMetric(s, MetricKind::Tau); }
  static RadialMetric geodesic(const Space& s) { return RadialMetric(s, MetricKind::Geodesic); }
  static RadialMetric theta_delta_eta(const Space& s, const WeightFunction& w, double tol = default_kernel_tol,
                                      int max_L = default_weight_max_L) {
    RadialMetric m(s, MetricKind::ThetaDeltaEta);
    m.expansion_ = weight_expansion(s, w, tol, max_L);
    return m;
  }
  static RadialMetric theta_delta_r(const Space& s, double r, double tol = default_kernel_tol) {
    RadialMetric m(s, MetricKind::ThetaDeltaR);
    m.expansion_ = std::make_shared<const ExpansionCoefficients>(radius_expansion(s, r, tol));
    return m;
  }

  [[nodiscard]] MetricKind kind() const noexcept { return kind_; }
  [[nodiscard]] const Space& space() const noexcept { return space_; }
  [[nodiscard]] double tail_bound() const noexcept { return expansion_ ? expansion_->tail_bound : 0.0; }
  [[nodiscard]] std::shared_ptr<const ExpansionCoefficients> expansion() const noexcept { return expansion_; }

  [[nodiscard]] double operator()(const PairGeometry& g) const {
    switch (kind_) {
      case MetricKind::Tau: return g.tau;
      case MetricKind::Geodesic: return g.theta;
      default: return expansion_->evaluate(g.theta).second;
    }
  }
  [[nodiscard]] double operator()(const Point& a, const Point& b) const {
    check_same_space(a, b);
    return (*this)(pair_geometry(space_, a.coords, b.coords));
  }

 private:
  RadialMetric(const Space& s, MetricKind k) : space_(s), kind_(k) {}

  Space space_;
  MetricKind kind_;
  std::shared_ptr<const ExpansionCoefficients> expansion_;
};

/// k(y1, y2) = rho(y1, y0) + rho(y2, y0) - rho(y1, y2).
inline double levy_schoenberg(const RadialMetric& rho, const Point& y1, const Point& y2, const Point& y0) {
  return rho(y1, y0) + rho(y2, y0) - rho(y1, y2);
}

/// Gram matrix of the Levy-Schoenberg kernel over a point set with base point y0.
inline Eigen::MatrixXd levy_schoenberg_gram(const RadialMetric& rho, const PointSet& set, const Point& y0) {
  const size_t n = set.size();
  const Space& s = set.space();
  std::vector<double> to_base(n);
  for (size_t i = 0; i < n; ++i) to_base[i] = rho(pair_geometry(s, set.coords(i), y0.coords));
  Eigen::MatrixXd g(n, n);
  for (size_t i = 0; i < n; ++i) {
    g(i, i) = 2.0 * to_base[i] - rho(pair_geometry(s, set.coords(i), set.coords(i)));
    for (size_t j = i + 1; j < n; ++j) {
      const double v = to_base[i] + to_base[j] - rho(pair_geometry(s, set.coords(i), set.coords(j)));
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

/// Smallest eigenvalue of a symmetric matrix.
inline double psd_check(const Eigen::MatrixXd& gram) {
  if (gram.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// ---- Monte Carlo oracles --------------------------------------------------------

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  size_t samples = 0;
};

template <class F>
McEstimate mc_average(size_t samples, Rng& rng, F&& draw) {
  CompensatedSum s1;
  CompensatedSum s2;
  for (size_t i = 0; i < samples; ++i) {
    const double x = draw(rng);
    s1 += x;
    s2 += x * x;
  }
  McEstimate e;
  e.samples = samples;
  if (samples == 0) return e;
  e.mean = s1.value() / samples;
  const double var = samples > 1 ? std::max(0.0, (s2.value() - samples * e.mean * e.mean) / (samples - 1)) : 0.0;
  e.stderr_ = std::sqrt(var / samples);
  return e;
}

/// mu(B_r(y1) cap B_r(y2)) by i.i.d. sampling, y1 = Z(0), y2 = Z(t/2).
inline McEstimate mc_mu_r(const Space& s, double r, double t, size_t samples, std::uint64_t seed) {
  const Point y1 = geodesic_point(s, 0.0);
  const Point y2 = geodesic_point(s, 0.5 * t);
  Rng rng = make_rng(seed);
  return mc_average(samples, rng, [&](Rng& g) {
    const Point y = sample_uniform(s, g);
    const bool in1 = pair_geometry(s, y.coords, y1.coords).theta < r;
    const bool in2 = pair_geometry(s, y.coords, y2.coords).theta < r;
    return (in1 && in2) ? 1.0 : 0.0;
  });
}

/// theta^Delta(eta, t) = (1/2) E |sigma(theta(y1, y)) - sigma(theta(y2, y))|,
/// sigma(r) = int_r^pi eta. For eta = sin this is E |tau(y1,y)^2 - tau(y2,y)^2|.
inline McEstimate mc_theta_delta_eta(const Space& s, const WeightFunction& w, double t, size_t samples,
                                     std::uint64_t seed) {
  const Point y1 = geodesic_point(s, 0.0);
  const Point y2 = geodesic_point(s, 0.5 * t);
  Rng rng = make_rng(seed);
  return mc_average(samples, rng, [&](Rng& g) {
    const Point y = sample_uniform(s, g);
    const double a = w.tail_integral(pair_geometry(s, y.coords, y1.coords).theta);
    const double b = w.tail_integral(pair_geometry(s, y.coords, y2.coords).theta);
    return 0.5 * std::abs(a - b);
  });
}

}  // namespace geodisc
