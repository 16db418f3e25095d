#pragma once

// Small numeric toolkit shared by the geodisc modules: error types,
// compensated summation, log-beta and the regularized incomplete beta
// function, and a symmetric tridiagonal eigen-solver used by the
// Gauss quadrature builders.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace geodisc {

inline constexpr double pi = std::numbers::pi;

/// Operands that do not belong together (mixed algebras, size mismatch...).
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested (family, n) or (space, configuration) combination does not exist.
class unsupported_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cubic spectrum with nearly coincident eigenvalues.
class degenerate_spectrum : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

inline double beta_fn(double a, double b) { return std::exp(log_beta(a, b)); }

namespace detail {

// Continued fraction for I_x(a,b) (modified Lentz). Converges quickly for
// x < (a+1)/(a+b+2).
inline double ibeta_cf(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  return h;
}

inline double ibeta_front(double a, double b, double x, double y) {
  return std::exp(a * std::log(x) + b * std::log(y) - log_beta(a, b));
}

}  // namespace detail

/// Regularized incomplete beta I_x(a,b). The complement y = 1 - x is passed
/// separately so callers that know it exactly (cos^2 of a half angle) do not
/// lose digits near x = 1.
inline double ibeta(double a, double b, double x, double y) {
  if (!(a > 0.0) || !(b > 0.0)) throw domain_error("ibeta: parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  if (x < (a + 1.0) / (a + b + 2.0))
    return detail::ibeta_front(a, b, x, y) * detail::ibeta_cf(a, b, x) / a;
  return 1.0 - detail::ibeta_front(a, b, x, y) * detail::ibeta_cf(b, a, y) / b;
}

inline double ibeta(double a, double b, double x) { return ibeta(a, b, x, 1.0 - x); }

/// Eigenvalues of a symmetric tridiagonal matrix together with the squared
/// first components of the normalized eigenvectors (implicit QL with Wilkinson
/// shifts, first row of the eigenvector matrix tracked only). O(m^2).
/// Results are sorted by ascending eigenvalue.
inline std::pair<std::vector<double>, std::vector<double>> tridiagonal_eigen_first(
    std::vector<double> diag, std::vector<double> offdiag) {
  const int n = static_cast<int>(diag.size());
  offdiag.resize(n, 0.0);
  // offdiag[i] couples i and i+1; shift to the NR convention e[i] couples i-1, i.
  std::vector<double> e(n, 0.0);
  for (int i = 1; i < n; ++i) e[i - 1] = offdiag[i - 1];
  std::vector<double> z(n, 0.0);
  if (n > 0) z[0] = 1.0;
  auto& d = diag;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw std::runtime_error("tridiagonal_eigen_first: no convergence");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
  std::vector<double> values(n);
  std::vector<double> first_sq(n);
  for (int i = 0; i < n; ++i) {
    values[i] = d[order[i]];
    first_sq[i] = z[order[i]] * z[order[i]];
  }
  return {std::move(values), std::move(first_sq)};
}

inline double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace geodisc
