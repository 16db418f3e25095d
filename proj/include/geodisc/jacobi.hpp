#pragma once

// Jacobi polynomials P_l^{(a,b)}, normalization constants, Gauss-Jacobi rules,
// radial weight functions and the Fourier-Jacobi coefficients of ball
// indicators that drive every kernel expansion.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "geodisc/numeric.hpp"

namespace geodisc {

struct JacobiParams {
  double alpha = 0.0;
  double beta = 0.0;

  /// Real dimension d and the d0 of Q(d, d0) belonging to these parameters.
  [[nodiscard]] double d() const noexcept { return 2.0 * alpha + 2.0; }
  [[nodiscard]] double d0() const noexcept { return 2.0 * beta + 2.0; }
  [[nodiscard]] JacobiParams shifted() const noexcept { return {alpha + 1.0, beta + 1.0}; }
  friend bool operator==(const JacobiParams&, const JacobiParams&) = default;
  friend auto operator<=>(const JacobiParams&, const JacobiParams&) = default;
};

/// kappa = 1 / B(alpha+1, beta+1) = 1 / B(d/2, d0/2).
inline double kappa(const JacobiParams& p) { return 1.0 / beta_fn(p.alpha + 1.0, p.beta + 1.0); }

/// Coefficients of P_n = (A_n z + B_n) P_{n-1} - C_n P_{n-2}, n >= 2.
class JacobiRecurrence {
 public:
  JacobiRecurrence(const JacobiParams& p, int max_degree) : p_(p) {
    const int n_max = std::max(max_degree, 1);
    a_.assign(n_max + 1, 0.0);
    b_.assign(n_max + 1, 0.0);
    c_.assign(n_max + 1, 0.0);
    const double al = p.alpha;
    const double be = p.beta;
    for (int n = 2; n <= n_max; ++n) {
      const double s = 2.0 * n + al + be;
      const double den = 2.0 * n * (n + al + be) * (s - 2.0);
      a_[n] = (s - 1.0) * s * (s - 2.0) / den;
      b_[n] = (s - 1.0) * (al * al - be * be) / den;
      c_[n] = 2.0 * (n + al - 1.0) * (n + be - 1.0) * s / den;
    }
  }

  [[nodiscard]] int max_degree() const noexcept { return static_cast<int>(a_.size()) - 1; }
  [[nodiscard]] double p1(double z) const noexcept {
    return 0.5 * (p_.alpha + p_.beta + 2.0) * z + 0.5 * (p_.alpha - p_.beta);
  }
  [[nodiscard]] double step(int n, double z, double prev, double prev2) const noexcept {
    return (a_[n] * z + b_[n]) * prev - c_[n] * prev2;
  }
  /// Values P_0..P_L at z into out (size L+1).
  void fill(double z, std::span<double> out) const noexcept {
    const int L = static_cast<int>(out.size()) - 1;
    if (L < 0) return;
    out[0] = 1.0;
    if (L < 1) return;
    out[1] = p1(z);
    for (int n = 2; n <= L; ++n) out[n] = step(n, z, out[n - 1], out[n - 2]);
  }
  [[nodiscard]] const JacobiParams& params() const noexcept { return p_; }

 private:
  JacobiParams p_;
  std::vector<double> a_, b_, c_;
};

inline double check_z(double z) {
  if (!(z >= -1.0 - 1e-12 && z <= 1.0 + 1e-12)) throw domain_error("jacobi: argument outside [-1, 1]");
  return clamp_unit(z);
}

/// P_l^{(alpha,beta)}(z) by the three-term recurrence.
inline double jacobi_eval(const JacobiParams& p, int l, double z) {
  if (l < 0) throw domain_error("jacobi_eval: negative degree");
  z = check_z(z);
  if (l == 0) return 1.0;
  const double a = p.alpha;
  const double b = p.beta;
  double prev2 = 1.0;
  double prev = 0.5 * (a + b + 2.0) * z + 0.5 * (a - b);
  for (int n = 2; n <= l; ++n) {
    const double s = 2.0 * n + a + b;
    const double den = 2.0 * n * (n + a + b) * (s - 2.0);
    const double next = ((s - 1.0) * (s * (s - 2.0) * z + a * a - b * b) * prev -
                         2.0 * (n + a - 1.0) * (n + b - 1.0) * s * prev2) /
                        den;
    prev2 = prev;
    prev = next;
  }
  return prev;
}

/// P_0(z), ..., P_L(z).
inline std::vector<double> jacobi_eval_all(const JacobiParams& p, int L, double z) {
  z = check_z(z);
  std::vector<double> out(static_cast<size_t>(std::max(L, 0)) + 1);
  JacobiRecurrence(p, L).fill(z, out);
  return out;
}

/// P_l(1) = binom(alpha + l, l).
inline double jacobi_norm1(const JacobiParams& p, int l) {
  if (l < 0) throw domain_error("jacobi_norm1: negative degree");
  return std::exp(std::lgamma(p.alpha + l + 1.0) - std::lgamma(l + 1.0) - std::lgamma(p.alpha + 1.0));
}

/// P_l(1) for l = 0..L by the ratio recurrence.
inline std::vector<double> jacobi_norm1_table(const JacobiParams& p, int L) {
  std::vector<double> v(static_cast<size_t>(std::max(L, 0)) + 1, 1.0);
  for (int l = 1; l <= L; ++l) v[l] = v[l - 1] * (p.alpha + l) / l;
  return v;
}

/// M_l = (2l+a+b+1) G(l+1) G(l+a+b+1) / (G(l+a+1) G(l+b+1)); M_0 = kappa.
inline double big_M(const JacobiParams& p, int l) {
  if (l < 0) throw domain_error("big_M: negative degree");
  if (l == 0) return kappa(p);
  const double a = p.alpha;
  const double b = p.beta;
  return (2.0 * l + a + b + 1.0) *
         std::exp(std::lgamma(l + 1.0) + std::lgamma(l + a + b + 1.0) - std::lgamma(l + a + 1.0) -
                  std::lgamma(l + b + 1.0));
}

/// M_0..M_L by the ratio recurrence from M_1.
inline std::vector<double> big_M_table(const JacobiParams& p, int L) {
  std::vector<double> v(static_cast<size_t>(std::max(L, 0)) + 1);
  v[0] = kappa(p);
  if (L < 1) return v;
  const double a = p.alpha;
  const double b = p.beta;
  v[1] = big_M(p, 1);
  for (int l = 2; l <= L; ++l) {
    const double s = 2.0 * l + a + b;
    v[l] = v[l - 1] * (s + 1.0) / (s - 1.0) * (l * (l + a + b)) / ((l + a) * (l + b));
  }
  return v;
}

/// m_l = M_l B(d/2, d0/2) P_l(1)^2, the multiplicity of the l-th eigenspace.
inline double eigenspace_dim(const JacobiParams& p, int l) {
  const double n1 = jacobi_norm1(p, l);
  return big_M(p, l) * beta_fn(p.alpha + 1.0, p.beta + 1.0) * n1 * n1;
}

namespace detail {

inline double half_sin(double r) { return std::sin(0.5 * r); }
inline double half_cos(double r) { return std::cos(0.5 * r); }

}  // namespace detail

/// (sin r/2)^(d-1) (cos r/2)^(d0-1): the density of the radial measure up to kappa.
inline double radial_weight(const JacobiParams& p, double r) {
  return std::pow(detail::half_sin(r), p.d() - 1.0) * std::pow(detail::half_cos(r), p.d0() - 1.0);
}

/// C_l(chi_r) = l^{-1} (sin r/2)^d (cos r/2)^d0 P_{l-1}^{(a+1,b+1)}(cos r); C_0 = v_r / kappa.
inline double chi_coefficient(const JacobiParams& p, int l, double r) {
  if (l < 0) throw domain_error("chi_coefficient: negative degree");
  if (r < 0.0) throw domain_error("chi_coefficient: negative radius");
  r = std::min(r, pi);
  const double sh = detail::half_sin(r);
  const double ch = detail::half_cos(r);
  if (l == 0) return ibeta(p.alpha + 1.0, p.beta + 1.0, sh * sh, ch * ch) / kappa(p);
  return std::pow(sh, p.d()) * std::pow(ch, p.d0()) * jacobi_eval(p.shifted(), l - 1, std::cos(r)) / l;
}

/// a_l(r) = (sin r/2)^{2d} (cos r/2)^{2d0} (P_{l-1}^{(a+1,b+1)}(cos r))^2.
inline double a_l(const JacobiParams& p, int l, double r) {
  if (l < 1) throw domain_error("a_l: degree must be at least 1");
  r = std::clamp(r, 0.0, pi);
  const double q = std::pow(detail::half_sin(r), p.d()) * std::pow(detail::half_cos(r), p.d0()) *
                   jacobi_eval(p.shifted(), l - 1, std::cos(r));
  return q * q;
}

/// J_l(r) = (sin r/2)^{a+1/2} (cos r/2)^{b+1/2} P_l(cos r).
inline double J_l(const JacobiParams& p, int l, double r) {
  r = std::clamp(r, 0.0, pi);
  return std::pow(detail::half_sin(r), p.alpha + 0.5) * std::pow(detail::half_cos(r), p.beta + 0.5) *
         jacobi_eval(p, l, std::cos(r));
}

// ---- Gauss rules -------------------------------------------------------------

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

inline GaussRule build_gauss_jacobi(double a, double b, int m) {
  std::vector<double> diag(m);
  std::vector<double> off(m > 1 ? m - 1 : 0);
  const double ab = a + b;
  for (int n = 0; n < m; ++n) {
    const double s = 2.0 * n + ab;
    if (n == 0)
      diag[n] = (b - a) / (ab + 2.0);
    else
      diag[n] = (b * b - a * a) / (s * (s + 2.0));
  }
  for (int n = 1; n < m; ++n) {
    const double s = 2.0 * n + ab;
    double b2;
    if (n == 1)
      b2 = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    else
      b2 = 4.0 * n * (n + a) * (n + b) * (n + ab) / (s * s * (s + 1.0) * (s - 1.0));
    off[n - 1] = std::sqrt(b2);
  }
  auto [nodes, first] = tridiagonal_eigen_first(std::move(diag), std::move(off));
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + log_beta(a + 1.0, b + 1.0));
  GaussRule rule;
  rule.nodes = std::move(nodes);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) rule.weights[i] = mu0 * first[i];
  return rule;
}

}  // namespace detail

/// m-point Gauss rule for the weight (1-z)^a (1+z)^b on [-1, 1], exact for
/// polynomials of degree 2m-1. Rules are built once and shared.
inline std::shared_ptr<const GaussRule> gauss_jacobi(double a, double b, int m) {
  if (m < 1) throw domain_error("gauss_jacobi: need at least one node");
  if (!(a > -1.0) || !(b > -1.0)) throw domain_error("gauss_jacobi: exponents must exceed -1");
  static std::mutex mu;
  static std::map<std::tuple<double, double, int>, std::shared_ptr<const GaussRule>> cache;
  const auto key = std::make_tuple(a, b, m);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const GaussRule>(detail::build_gauss_jacobi(a, b, m));
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(rule)).first->second;
}

inline std::shared_ptr<const GaussRule> gauss_jacobi_nodes(const JacobiParams& p, int m) {
  return gauss_jacobi(p.alpha, p.beta, m);
}

namespace detail {

// Legendre nodes by Newton's method from the Tricomi initial guesses, using
// the symmetry x -> -x. O(m^2) with a small constant, unlike the eigenvalue
// route for large m.
inline GaussRule build_gauss_legendre(int m) {
  GaussRule rule;
  rule.nodes.assign(m, 0.0);
  rule.weights.assign(m, 0.0);
  std::vector<double> ca(m + 1, 0.0);
  std::vector<double> cb(m + 1, 0.0);
  for (int n = 2; n <= m; ++n) {
    ca[n] = (2.0 * n - 1.0) / n;
    cb[n] = (n - 1.0) / n;
  }
  // returns P_m(x) and P_{m-1}(x)
  auto legendre = [&](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int n = 2; n <= m; ++n) {
      const double p2 = ca[n] * x * p1 - cb[n] * p0;
      p0 = p1;
      p1 = p2;
    }
    return std::pair<double, double>{p1, p0};
  };
  const double mm = m;
  for (int k = 1; k <= (m + 1) / 2; ++k) {
    const double th = pi * (4.0 * k - 1.0) / (4.0 * mm + 2.0);
    double x = (1.0 - 1.0 / (8.0 * mm * mm) + 1.0 / (8.0 * mm * mm * mm)) * std::cos(th);
    for (int it = 0; it < 12; ++it) {
      const auto [pm, pm1] = legendre(x);
      const double dp = mm * (x * pm - pm1) / (x * x - 1.0);
      const double dx = pm / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    const auto [pm, pm1] = legendre(x);
    const double dp = mm * (x * pm - pm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[m - k] = x;
    rule.nodes[k - 1] = -x;
    rule.weights[m - k] = w;
    rule.weights[k - 1] = w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  return rule;
}

}  // namespace detail

/// m-point Gauss-Legendre rule on [-1, 1] (ascending nodes), shared.
inline std::shared_ptr<const GaussRule> gauss_legendre(int m) {
  if (m < 1) throw domain_error("gauss_legendre: need at least one node");
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const GaussRule>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(m); it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const GaussRule>(detail::build_gauss_legendre(m));
  std::lock_guard lock(mu);
  return cache.emplace(m, std::move(rule)).first->second;
}

/// m-point Gauss-Chebyshev rule for the weight (1-z^2)^{-1/2}: explicit nodes.
inline GaussRule gauss_chebyshev(int m) {
  GaussRule rule;
  rule.nodes.resize(m);
  rule.weights.assign(m, pi / m);
  for (int k = 0; k < m; ++k) rule.nodes[k] = -std::cos((2.0 * k + 1.0) * pi / (2.0 * m));
  return rule;
}

/// Integral of f over [lo, hi] with `panels` panels of an m-point Gauss-Legendre rule.
template <class F>
double integrate_panels(F&& f, double lo, double hi, int panels, int m = 32) {
  const auto rule = gauss_legendre(m);
  const double h = (hi - lo) / panels;
  CompensatedSum acc;
  for (int k = 0; k < panels; ++k) {
    const double a = lo + k * h;
    for (int i = 0; i < m; ++i) acc += 0.5 * h * rule->weights[i] * f(a + 0.5 * h * (1.0 + rule->nodes[i]));
  }
  return acc.value();
}

// ---- the weight-factor constant ---------------------------------------------

/// max over an r-grid in (0, pi) and 1 <= l <= lmax of
/// M_l a_l(r) / ((sin r/2)^{d-1} (cos r/2)^{d0-1}) = M_l J_{l-1}^{(a+1,b+1)}(r)^2.
inline double weight_factor_max(const JacobiParams& p, int lmax, int grid = 20000) {
  const JacobiParams q = p.shifted();
  const JacobiRecurrence rec(q, lmax);
  const std::vector<double> M = big_M_table(p, lmax);
  std::vector<double> P(static_cast<size_t>(lmax));
  double best = 0.0;
  for (int i = 1; i < grid; ++i) {
    const double r = pi * i / grid;
    const double sh = detail::half_sin(r);
    const double ch = detail::half_cos(r);
    const double env = std::pow(sh, p.d() + 1.0) * std::pow(ch, p.d0() + 1.0);
    rec.fill(std::cos(r), P);
    for (int l = 1; l <= lmax; ++l) best = std::max(best, M[l] * env * P[l - 1] * P[l - 1]);
  }
  return best;
}

/// Certified-by-sweep constant C-hat: 1.5 times the sweep maximum over l <= 500.
/// Every expansion tail bound is built from it.
inline double tail_constant(const JacobiParams& p) {
  static std::mutex mu;
  static std::map<JacobiParams, double> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(p); it != cache.end()) return it->second;
  }
  const double c = 1.5 * weight_factor_max(p, 500);
  std::lock_guard lock(mu);
  cache[p] = c;
  return c;
}

/// sum_{l > L} l^{-2} < 1 / (L + 1/2).
inline double inverse_square_tail(int L) { return 1.0 / (L + 0.5); }

// ---- radial weights ----------------------------------------------------------

enum class WeightKind { SinR, Indicator, Const, Tabulated };

/// Radial weight eta on [0, pi].
class WeightFunction {
 public:
  static WeightFunction sin_r() { return WeightFunction(WeightKind::SinR); }
  static WeightFunction constant() { return WeightFunction(WeightKind::Const); }
  static WeightFunction indicator(double r0) {
    if (!(r0 > 0.0)) throw domain_error("indicator weight needs a positive radius");
    WeightFunction w(WeightKind::Indicator);
    w.r0_ = std::min(r0, pi);
    return w;
  }
  /// Piecewise-linear interpolation of (r_i, eta_i); knots must span [0, pi].
  static WeightFunction tabulated(std::vector<double> r, std::vector<double> eta) {
    if (r.size() != eta.size() || r.size() < 2) throw domain_error("tabulated weight needs at least two knots");
    for (size_t i = 0; i < r.size(); ++i) {
      if (!std::isfinite(r[i]) || !std::isfinite(eta[i])) throw domain_error("tabulated weight: non-finite sample");
      if (eta[i] < 0.0) throw domain_error("tabulated weight: negative sample");
      if (i && !(r[i] > r[i - 1])) throw domain_error("tabulated weight: knots must increase");
    }
    if (std::abs(r.front()) > 1e-12 || std::abs(r.back() - pi) > 1e-9)
      throw domain_error("tabulated weight: knots must span [0, pi]");
    r.front() = 0.0;
    r.back() = pi;
    WeightFunction w(WeightKind::Tabulated);
    w.knots_ = std::move(r);
    w.values_ = std::move(eta);
    return w;
  }

  [[nodiscard]] WeightKind kind() const noexcept { return kind_; }
  [[nodiscard]] double radius() const noexcept { return r0_; }
  [[nodiscard]] const std::vector<double>& knots() const noexcept { return knots_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

  [[nodiscard]] double operator()(double r) const {
    switch (kind_) {
      case WeightKind::SinR: return std::sin(r);
      case WeightKind::Const: return 1.0;
      case WeightKind::Indicator: return (r >= 0.0 && r < r0_) ? 1.0 : 0.0;
      case WeightKind::Tabulated: {
        if (r <= 0.0) return values_.front();
        if (r >= pi) return values_.back();
        const auto it = std::upper_bound(knots_.begin(), knots_.end(), r);
        const size_t i = static_cast<size_t>(it - knots_.begin());
        const double t = (r - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
        return (1.0 - t) * values_[i - 1] + t * values_[i];
      }
    }
    return 0.0;
  }

  /// Breakpoints of the support pieces where eta is smooth.
  [[nodiscard]] std::vector<double> pieces() const {
    switch (kind_) {
      case WeightKind::Indicator: return {0.0, r0_};
      case WeightKind::Tabulated: return knots_;
      default: return {0.0, pi};
    }
  }

  /// ||eta||_{a,b} = int (sin r/2)^{a-1} (cos r/2)^{b-1} eta(r) dr.
  [[nodiscard]] double class_norm(double a, double b) const {
    switch (kind_) {
      case WeightKind::SinR: return 2.0 * beta_fn(0.5 * (a + 1.0), 0.5 * (b + 1.0));
      case WeightKind::Const: return beta_fn(0.5 * a, 0.5 * b);
      case WeightKind::Indicator: {
        const double sh = detail::half_sin(r0_);
        const double ch = detail::half_cos(r0_);
        return beta_fn(0.5 * a, 0.5 * b) * ibeta(0.5 * a, 0.5 * b, sh * sh, ch * ch);
      }
      case WeightKind::Tabulated: {
        auto f = [&](double r) {
          return std::pow(detail::half_sin(r), a - 1.0) * std::pow(detail::half_cos(r), b - 1.0) * (*this)(r);
        };
        return integrate_pieces(f);
      }
    }
    return 0.0;
  }

  /// int_0^pi eta(r) dr.
  [[nodiscard]] double l1_norm() const {
    switch (kind_) {
      case WeightKind::SinR: return 2.0;
      case WeightKind::Const: return pi;
      case WeightKind::Indicator: return r0_;
      case WeightKind::Tabulated: {
        double s = 0.0;
        for (size_t i = 1; i < knots_.size(); ++i) s += 0.5 * (values_[i] + values_[i - 1]) * (knots_[i] - knots_[i - 1]);
        return s;
      }
    }
    return 0.0;
  }

  /// sigma(r) = int_r^pi eta(u) du.
  [[nodiscard]] double tail_integral(double r) const {
    r = std::clamp(r, 0.0, pi);
    switch (kind_) {
      case WeightKind::SinR: return 1.0 + std::cos(r);
      case WeightKind::Const: return pi - r;
      case WeightKind::Indicator: return std::max(r0_ - r, 0.0);
      case WeightKind::Tabulated: {
        double s = 0.0;
        for (size_t i = 1; i < knots_.size(); ++i) {
          const double a = std::max(knots_[i - 1], r);
          const double b = knots_[i];
          if (b <= a) continue;
          s += 0.5 * ((*this)(a) + (*this)(b)) * (b - a);
        }
        return s;
      }
    }
    return 0.0;
  }

  /// Integral of f over [0, pi], split at the breakpoints of eta.
  template <class F>
  double integrate_pieces(F&& f, int panels_per_piece = 16) const {
    const auto cuts = pieces();
    CompensatedSum acc;
    for (size_t i = 1; i < cuts.size(); ++i) acc += integrate_panels(f, cuts[i - 1], cuts[i], panels_per_piece);
    return acc.value();
  }

  [[nodiscard]] std::string describe() const {
    switch (kind_) {
      case WeightKind::SinR: return "sin";
      case WeightKind::Const: return "const";
      case WeightKind::Indicator: {
        std::ostringstream os;
        os.precision(12);
        os << "indicator:" << r0_;
        return os.str();
      }
      case WeightKind::Tabulated: return "tabulated(" + std::to_string(knots_.size()) + " knots)";
    }
    return "?";
  }

 private:
  explicit WeightFunction(WeightKind k) : kind_(k) {}

  WeightKind kind_;
  double r0_ = pi;
  std::vector<double> knots_;
  std::vector<double> values_;
};

namespace detail {

/// A[l] += sum_j w_j P_{l-1}(z_j)^2 for l = 1..L, eight nodes per pass.
inline void accumulate_squares(const JacobiRecurrence& rec, const std::vector<double>& zs,
                               const std::vector<double>& ws, std::vector<double>& A) {
  constexpr int B = 8;
  const int L = static_cast<int>(A.size()) - 1;
  for (size_t j0 = 0; j0 < zs.size(); j0 += B) {
    double z[B], w[B], p0[B], p1[B];
    for (int k = 0; k < B; ++k) {
      const bool live = j0 + k < zs.size();
      z[k] = live ? zs[j0 + k] : 0.0;
      w[k] = live ? ws[j0 + k] : 0.0;
      p0[k] = 1.0;
      p1[k] = rec.p1(z[k]);
    }
    for (int k = 0; k < B; ++k) A[1] += w[k];
    if (L >= 2)
      for (int k = 0; k < B; ++k) A[2] += w[k] * p1[k] * p1[k];
    for (int l = 3; l <= L; ++l) {
      double acc = 0.0;
      for (int k = 0; k < B; ++k) {
        const double next = rec.step(l - 1, z[k], p1[k], p0[k]);
        p0[k] = p1[k];
        p1[k] = next;
        acc += w[k] * next * next;
      }
      A[l] += acc;
    }
  }
}

}  // namespace detail

// ---- A_l(eta) -----------------------------------------------------------------

/// A_l(eta) = int_0^pi eta(u) a_l(u) du for l = 1..L (index 0 holds 0).
///
/// With z = cos u the integrand is 2^{-(d+d0)} (1-z)^d (1+z)^d0 P_{l-1}^{(a+1,b+1)}(z)^2
/// against dz (sin weight) or against (1-z^2)^{-1/2} dz (const weight). d and d0
/// are integers, so Gauss-Legendre and Gauss-Chebyshev rules with
/// L + (d+d0)/2 + 1 nodes are exact. Indicator and tabulated weights are
/// integrated in u piece by piece with 32-point Gauss-Legendre panels no
/// wider than 32 / (2L + d + d0): the integrand is then a trigonometric
/// polynomial of at most one radian of frequency per node, far inside the
/// rule's resolution.
inline std::vector<double> A_coefficients(const JacobiParams& p, const WeightFunction& w, int L) {
  if (L < 1) return std::vector<double>(1, 0.0);
  std::vector<double> A(static_cast<size_t>(L) + 1, 0.0);
  const JacobiRecurrence rec(p.shifted(), L);
  const double d = p.d();
  const double d0 = p.d0();
  std::vector<double> zs;
  std::vector<double> ws;

  auto collect_z = [&](const GaussRule& rule) {
    const double scale = std::pow(2.0, -(d + d0));
    for (size_t j = 0; j < rule.nodes.size(); ++j) {
      const double z = rule.nodes[j];
      zs.push_back(z);
      ws.push_back(scale * rule.weights[j] * std::pow(1.0 - z, d) * std::pow(1.0 + z, d0));
    }
  };

  const int exact_m = L + static_cast<int>(std::ceil(0.5 * (d + d0))) + 1;
  switch (w.kind()) {
    case WeightKind::SinR: collect_z(*gauss_legendre(exact_m)); break;
    case WeightKind::Const: collect_z(gauss_chebyshev(exact_m)); break;
    case WeightKind::Indicator:
    case WeightKind::Tabulated: {
      const auto rule = gauss_legendre(32);
      const double freq = 2.0 * L + d + d0;
      const auto cuts = w.pieces();
      for (size_t c = 1; c < cuts.size(); ++c) {
        const double lo = cuts[c - 1];
        const double hi = cuts[c];
        if (!(hi > lo)) continue;
        const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) * freq / 32.0)));
        const double h = (hi - lo) / panels;
        for (int k = 0; k < panels; ++k) {
          const double a = lo + k * h;
          for (int i = 0; i < 32; ++i) {
            const double u = a + 0.5 * h * (1.0 + rule->nodes[i]);
            // evaluate eta strictly inside the piece so indicator ends are not ambiguous
            const double eta = w(std::clamp(u, lo, std::nextafter(hi, lo)));
            if (eta == 0.0) continue;
            const double env = std::pow(detail::half_sin(u), 2.0 * d) * std::pow(detail::half_cos(u), 2.0 * d0);
            zs.push_back(std::cos(u));
            ws.push_back(0.5 * h * rule->weights[i] * eta * env);
          }
        }
      }
      break;
    }
  }
  detail::accumulate_squares(rec, zs, ws, A);
  return A;
}

inline double A_l(const JacobiParams& p, int l, const WeightFunction& w) {
  if (l < 1) throw domain_error("A_l: degree must be at least 1");
  return A_coefficients(p, w, l)[l];
}

}  // namespace geodisc
