#pragma once

// Point-set functionals: local discrepancy, the positive-definite sums phi_l,
// quadratic discrepancies (Jacobi series and Monte Carlo), sums of distances
// and the Stolarsky and L1 invariance residuals.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "geodisc/jacobi.hpp"
#include "geodisc/kernels.hpp"
#include "geodisc/numeric.hpp"
#include "geodisc/parallel.hpp"
#include "geodisc/random.hpp"
#include "geodisc/spaces.hpp"

namespace geodisc {

inline constexpr double default_set_tol = 1e-4;  // series tail budget per N^2
inline constexpr int default_set_max_L = 50'000;
inline constexpr size_t reduction_chunks = 64;

/// #{x in D_N : theta(x, y) < r} - N v_r.
inline double local_discrepancy(const PointSet& set, const Point& y, double r) {
  if (!(y.space == set.space())) throw usage_error("local_discrepancy: point and set in different spaces");
  if (r < 0.0) throw domain_error("local_discrepancy: negative radius");
  const Space& s = set.space();
  size_t count = 0;
  for (size_t i = 0; i < set.size(); ++i)
    if (r > pi || pair_geometry(s, set.coords(i), y.coords).theta < r) ++count;
  return static_cast<double>(count) - static_cast<double>(set.size()) * ball_volume(s, r);
}

/// phi_l[D_N] = sum over ordered pairs of P_l(cos theta)/P_l(1), for l = 0..L.
/// One Jacobi recurrence in l runs per pair; pairs are split into a fixed set
/// of chunks whose partial sums are combined in chunk order.
inline std::vector<double> phi_all(const PointSet& set, int L) {
  if (L < 0) throw domain_error("phi_all: negative degree");
  const Space& s = set.space();
  const JacobiParams p = s.params();
  const size_t n = set.size();
  std::vector<double> out(static_cast<size_t>(L) + 1, static_cast<double>(n));
  if (n == 0) {
    std::fill(out.begin(), out.end(), 0.0);
    return out;
  }
  out[0] = static_cast<double>(n) * n;
  if (L == 0 || n < 2) return out;

  const JacobiRecurrence rec(p, L);
  const auto norm1 = jacobi_norm1_table(p, L);
  const size_t pairs = n * (n - 1) / 2;
  std::vector<std::vector<double>> partial(reduction_chunks);
  // row offsets for mapping a linear pair index to (i, j)
  std::vector<size_t> row_start(n + 1, 0);
  for (size_t i = 0; i < n; ++i) row_start[i + 1] = row_start[i] + (n - 1 - i);

  parallel_chunks(pairs, reduction_chunks, [&](size_t chunk, size_t begin, size_t end) {
    std::vector<double> acc(static_cast<size_t>(L) + 1, 0.0);
    constexpr size_t block = 256;
    std::vector<double> z(block), p0(block), p1(block);
    size_t i = static_cast<size_t>(std::upper_bound(row_start.begin(), row_start.end(), begin) - row_start.begin()) - 1;
    size_t j = i + 1 + (begin - row_start[i]);
    for (size_t k0 = begin; k0 < end; k0 += block) {
      const size_t m = std::min(block, end - k0);
      for (size_t q = 0; q < m; ++q) {
        z[q] = pair_geometry(s, set.coords(i), set.coords(j)).cos_theta;
        if (++j == n) {
          ++i;
          j = i + 1;
        }
      }
      double s1 = 0.0;
      for (size_t q = 0; q < m; ++q) {
        p0[q] = 1.0;
        p1[q] = rec.p1(z[q]);
        s1 += p1[q];
      }
      acc[1] += s1;
      for (int l = 2; l <= L; ++l) {
        double sl = 0.0;
        for (size_t q = 0; q < m; ++q) {
          const double next = rec.step(l, z[q], p1[q], p0[q]);
          p0[q] = p1[q];
          p1[q] = next;
          sl += next;
        }
        acc[l] += sl;
      }
    }
    partial[chunk] = std::move(acc);
  });

  for (int l = 1; l <= L; ++l) {
    CompensatedSum total;
    for (const auto& part : partial)
      if (!part.empty()) total += part[l];
    out[l] = static_cast<double>(n) + 2.0 * total.value() / norm1[l];
  }
  return out;
}

inline double phi_l(const PointSet& set, int l) { return phi_all(set, l)[l]; }

enum class DiscrepancyMethod { Series, MonteCarlo };

inline std::string method_name(DiscrepancyMethod m) {
  return m == DiscrepancyMethod::Series ? "series" : "monte-carlo";
}

struct DiscrepancyReport {
  Space space;
  size_t N = 0;
  std::string weight;
  double value = 0.0;
  double tail_bound = 0.0;
  DiscrepancyMethod method = DiscrepancyMethod::Series;
  std::optional<double> mc_stderr;
  int L = 0;
};

/// sum_l b_l phi_l with the expansion's tail scaled by N^2.
inline DiscrepancyReport series_from_expansion(const PointSet& set, const ExpansionCoefficients& e,
                                               const std::string& label) {
  DiscrepancyReport rep;
  rep.space = set.space();
  rep.N = set.size();
  rep.weight = label;
  rep.L = e.L;
  const double n2 = static_cast<double>(set.size()) * set.size();
  if (set.empty()) return rep;
  const auto phi = phi_all(set, e.L);
  CompensatedSum acc;
  for (int l = 1; l <= e.L; ++l) acc += e.terms[l] * phi[l];
  rep.value = acc.value();
  rep.tail_bound = e.tail_bound * n2;
  return rep;
}

/// lambda[eta, D_N] = kappa sum_l l^{-2} M_l A_l(eta) phi_l[D_N]. L is the
/// smallest order with tail bound <= tol_per_pair * N^2 (capped at max_L).
inline DiscrepancyReport quad_disc_series(const PointSet& set, const WeightFunction& w,
                                          double tol_per_pair = default_set_tol, int max_L = default_set_max_L) {
  const auto e = weight_expansion(set.space(), w, tol_per_pair, max_L);
  return series_from_expansion(set, *e, w.describe());
}

/// lambda_r[D_N] = kappa sum_l l^{-2} M_l a_l(r) phi_l[D_N].
inline DiscrepancyReport quad_disc_series_r(const PointSet& set, double r, double tol_per_pair = default_set_tol,
                                            int max_L = default_set_max_L) {
  const auto e = radius_expansion(set.space(), r, tol_per_pair, max_L);
  return series_from_expansion(set, e, "ball:" + std::to_string(r));
}

namespace detail {

/// Inverse CDF of eta / ||eta||_1 on a 10^4-knot table, linear inside cells.
class RadiusSampler {
 public:
  explicit RadiusSampler(const WeightFunction& w) : w_(w) {
    if (w.kind() != WeightKind::Tabulated) return;
    constexpr int knots = 10000;
    grid_.resize(knots + 1);
    cdf_.assign(knots + 1, 0.0);
    for (int i = 0; i <= knots; ++i) grid_[i] = pi * i / knots;
    const std::vector<double> breaks = w.knots();
    for (int i = 1; i <= knots; ++i) {
      // exact integral of the piecewise-linear weight over the cell
      const double a = grid_[i - 1];
      const double b = grid_[i];
      double cell = 0.0;
      double lo = a;
      auto it = std::upper_bound(breaks.begin(), breaks.end(), a);
      while (lo < b) {
        const double hi = (it != breaks.end()) ? std::min(*it, b) : b;
        cell += 0.5 * (w(lo) + w(hi)) * (hi - lo);
        lo = hi;
        if (it != breaks.end()) ++it;
      }
      cdf_[i] = cdf_[i - 1] + cell;
    }
    if (!(cdf_.back() > 0.0)) throw domain_error("weight has zero mass");
    for (double& c : cdf_) c /= cdf_.back();
  }

  double operator()(Rng& rng) const {
    const double u = uniform01(rng);
    switch (w_.kind()) {
      case WeightKind::SinR: return std::acos(clamp_unit(1.0 - 2.0 * u));
      case WeightKind::Const: return pi * u;
      case WeightKind::Indicator: return w_.radius() * u;
      case WeightKind::Tabulated: {
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        const size_t i = std::clamp<size_t>(static_cast<size_t>(it - cdf_.begin()), 1, cdf_.size() - 1);
        const double span = cdf_[i] - cdf_[i - 1];
        const double t = span > 0.0 ? (u - cdf_[i - 1]) / span : 0.0;
        return grid_[i - 1] + t * (grid_[i] - grid_[i - 1]);
      }
    }
    return 0.0;
  }

 private:
  WeightFunction w_;
  std::vector<double> grid_;
  std::vector<double> cdf_;
};

}  // namespace detail

/// Unbiased estimate ||eta||_1 E[Lambda(B_r(y), D_N)^2] with y ~ mu and
/// r ~ eta / ||eta||_1. Samples are drawn in a fixed number of independent
/// streams so the result depends only on the seed.
inline DiscrepancyReport quad_disc_mc(const PointSet& set, const WeightFunction& w, size_t samples,
                                      std::uint64_t seed) {
  DiscrepancyReport rep;
  rep.space = set.space();
  rep.N = set.size();
  rep.weight = w.describe();
  rep.method = DiscrepancyMethod::MonteCarlo;
  rep.mc_stderr = 0.0;
  if (set.empty() || samples == 0) return rep;
  const Space& s = set.space();
  const detail::RadiusSampler radius(w);
  const double mass = w.l1_norm();
  const double n = static_cast<double>(set.size());
  constexpr size_t streams = 16;
  std::vector<std::pair<double, double>> part(streams);
  parallel_chunks(samples, streams, [&](size_t chunk, size_t begin, size_t end) {
    Rng rng = make_rng(seed, chunk);
    CompensatedSum s1;
    CompensatedSum s2;
    for (size_t k = begin; k < end; ++k) {
      const Point y = sample_uniform(s, rng);
      const double r = radius(rng);
      size_t count = 0;
      for (size_t i = 0; i < set.size(); ++i)
        if (pair_geometry(s, set.coords(i), y.coords).theta < r) ++count;
      const double lam = static_cast<double>(count) - n * ball_volume(s, r);
      s1 += lam * lam;
      s2 += lam * lam * lam * lam;
    }
    part[chunk] = {s1.value(), s2.value()};
  });
  CompensatedSum s1;
  CompensatedSum s2;
  for (const auto& [a, b] : part) {
    s1 += a;
    s2 += b;
  }
  const double m = static_cast<double>(samples);
  const double mean = s1.value() / m;
  const double var = samples > 1 ? std::max(0.0, (s2.value() - m * mean * mean) / (m - 1.0)) : 0.0;
  rep.value = mass * mean;
  rep.mc_stderr = mass * std::sqrt(var / m);
  return rep;
}

/// Distance sums over ordered pairs: rho[D_N] = sum_{x1, x2 in D_N} rho(x1, x2).
inline double sum_of_distances(const PointSet& set, const RadialMetric& rho) {
  if (!(rho.space() == set.space())) throw usage_error("sum_of_distances: metric and set in different spaces");
  const Space& s = set.space();
  const size_t n = set.size();
  if (n < 2) return 0.0;
  std::vector<double> partial(reduction_chunks, 0.0);
  parallel_chunks(n, reduction_chunks, [&](size_t chunk, size_t begin, size_t end) {
    CompensatedSum acc;
    for (size_t i = begin; i < end; ++i)
      for (size_t j = i + 1; j < n; ++j) acc += rho(pair_geometry(s, set.coords(i), set.coords(j)));
    partial[chunk] = acc.value();
  });
  CompensatedSum total;
  for (double x : partial) total += x;
  return 2.0 * total.value();
}

/// tau[D_N], summed in the same fixed chunk order as sum_of_distances.
inline double sum_of_chordal_distances(const PointSet& set) {
  return sum_of_distances(set, RadialMetric::tau(set.space()));
}

struct StolarskyResult {
  double lambda = 0.0;     // lambda[eta_natural, D_N] (series)
  double tau_sum = 0.0;    // tau[D_N]
  double gamma = 0.0;      // gamma(Q)
  double mean_tau = 0.0;   // <tau>
  double residual = 0.0;   // gamma lambda + tau[D_N] - <tau> N^2
  double budget = 0.0;     // gamma * series tail bound
  int L = 0;
  [[nodiscard]] bool pass() const { return std::abs(residual) <= budget; }
};

/// gamma(Q) lambda[eta_natural, D_N] + tau[D_N] - <tau> N^2 with its budget.
inline StolarskyResult stolarsky_residual(const PointSet& set, double tol_per_pair = default_set_tol,
                                          int max_L = default_set_max_L) {
  const Space& s = set.space();
  StolarskyResult res;
  const auto rep = quad_disc_series(set, WeightFunction::sin_r(), tol_per_pair, max_L);
  const double n2 = static_cast<double>(set.size()) * set.size();
  res.lambda = rep.value;
  res.tau_sum = sum_of_chordal_distances(set);
  res.gamma = gamma_constant(s);
  res.mean_tau = average_tau(s);
  res.residual = res.gamma * res.lambda + res.tau_sum - res.mean_tau * n2;
  res.budget = res.gamma * rep.tail_bound;
  res.L = rep.L;
  return res;
}

/// lambda[eta_natural, D_N] through the Stolarsky identity from tau[D_N]; exact up
/// to rounding, O(N^2) without any series.
inline double lambda_natural_via_distances(const PointSet& set) {
  const Space& s = set.space();
  const double n2 = static_cast<double>(set.size()) * set.size();
  return (average_tau(s) * n2 - sum_of_chordal_distances(set)) / gamma_constant(s);
}

/// theta^Delta(eta)[D_N]: pairwise sum of the theta^Delta(eta) kernel.
inline DiscrepancyReport theta_delta_set(const PointSet& set, const WeightFunction& w,
                                         double tol_per_pair = default_set_tol, int max_L = default_set_max_L) {
  const auto e = weight_expansion(set.space(), w, tol_per_pair, max_L);
  DiscrepancyReport rep;
  rep.space = set.space();
  rep.N = set.size();
  rep.weight = w.describe();
  rep.L = e->L;
  const double n2 = static_cast<double>(set.size()) * set.size();
  rep.value = sum_of_distances(set, RadialMetric::theta_delta_eta(set.space(), w, tol_per_pair, max_L));
  rep.tail_bound = e->tail_bound * n2;
  return rep;
}

}  // namespace geodisc
