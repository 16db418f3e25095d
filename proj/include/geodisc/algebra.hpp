#pragma once

// Real division algebras R, C, H, O (Cayley-Dickson doubling), Hermitian
// matrices over them, the Jordan product and the spectral decomposition of
// 3x3 octonionic Hermitian matrices.

#include <array>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "geodisc/numeric.hpp"

namespace geodisc {

enum class Algebra { R, C, H, O };

constexpr int algebra_dim(Algebra a) noexcept {
  switch (a) {
    case Algebra::R: return 1;
    case Algebra::C: return 2;
    case Algebra::H: return 4;
    case Algebra::O: return 8;
  }
  return 0;
}

inline std::string algebra_name(Algebra a) {
  switch (a) {
    case Algebra::R: return "R";
    case Algebra::C: return "C";
    case Algebra::H: return "H";
    case Algebra::O: return "O";
  }
  return "?";
}

namespace detail {

// (p,q)(r,s) = (pr - conj(s) q, s p + q conj(r)) on arrays of length n (power of two).
inline void cd_conj(const double* a, double* out, int n) noexcept {
  out[0] = a[0];
  for (int i = 1; i < n; ++i) out[i] = -a[i];
}

inline void cd_mul(const double* a, const double* b, double* out, int n) noexcept {
  if (n == 1) {
    out[0] = a[0] * b[0];
    return;
  }
  const int h = n / 2;
  const double* p = a;
  const double* q = a + h;
  const double* r = b;
  const double* s = b + h;
  double t1[4], t2[4], cs[4], cr[4];
  cd_mul(p, r, t1, h);
  cd_conj(s, cs, h);
  cd_mul(cs, q, t2, h);
  for (int i = 0; i < h; ++i) out[i] = t1[i] - t2[i];
  cd_mul(s, p, t1, h);
  cd_conj(r, cr, h);
  cd_mul(q, cr, t2, h);
  for (int i = 0; i < h; ++i) out[h + i] = t1[i] + t2[i];
}

}  // namespace detail

/// Element of R, C, H or O stored as d0 real coordinates
/// (coefficient of 1 first, then e1..e7).
class AlgebraElement {
 public:
  AlgebraElement() = default;
  explicit AlgebraElement(Algebra alg) : alg_(alg) {}
  AlgebraElement(Algebra alg, std::span<const double> coords) : alg_(alg) {
    if (static_cast<int>(coords.size()) != algebra_dim(alg))
      throw usage_error("AlgebraElement: coordinate count does not match algebra");
    std::copy(coords.begin(), coords.end(), c_.begin());
  }
  AlgebraElement(Algebra alg, std::initializer_list<double> coords)
      : AlgebraElement(alg, std::span<const double>(coords.begin(), coords.size())) {}

  static AlgebraElement real(Algebra alg, double x) {
    AlgebraElement e(alg);
    e.c_[0] = x;
    return e;
  }
  /// Basis unit e_k (k = 0 gives 1).
  static AlgebraElement unit(Algebra alg, int k) {
    if (k < 0 || k >= algebra_dim(alg)) throw usage_error("AlgebraElement::unit: index out of range");
    AlgebraElement e(alg);
    e.c_[k] = 1.0;
    return e;
  }

  [[nodiscard]] Algebra algebra() const noexcept { return alg_; }
  [[nodiscard]] int dim() const noexcept { return algebra_dim(alg_); }
  [[nodiscard]] std::span<const double> coords() const noexcept { return {c_.data(), static_cast<size_t>(dim())}; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }

  [[nodiscard]] double re() const noexcept { return c_[0]; }
  [[nodiscard]] double norm_sq() const noexcept {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += c_[i] * c_[i];
    return s;
  }
  [[nodiscard]] double norm() const noexcept { return std::sqrt(norm_sq()); }
  [[nodiscard]] AlgebraElement conj() const noexcept {
    AlgebraElement r(alg_);
    detail::cd_conj(c_.data(), r.c_.data(), dim());
    return r;
  }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    check_same(o);
    for (int i = 0; i < dim(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  AlgebraElement& operator-=(const AlgebraElement& o) {
    check_same(o);
    for (int i = 0; i < dim(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  AlgebraElement& operator*=(double s) noexcept {
    for (int i = 0; i < dim(); ++i) c_[i] *= s;
    return *this;
  }
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator-(AlgebraElement a) { return a *= -1.0; }
  friend AlgebraElement operator*(double s, AlgebraElement a) { return a *= s; }
  friend AlgebraElement operator*(AlgebraElement a, double s) { return a *= s; }
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    a.check_same(b);
    AlgebraElement r(a.alg_);
    detail::cd_mul(a.c_.data(), b.c_.data(), r.c_.data(), a.dim());
    return r;
  }

  void check_same(const AlgebraElement& o) const {
    if (alg_ != o.alg_) throw usage_error("algebra elements from different algebras");
  }

 private:
  Algebra alg_ = Algebra::R;
  std::array<double, 8> c_{};
};

inline AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) { return a * b; }
inline AlgebraElement conj(const AlgebraElement& a) { return a.conj(); }
inline double re(const AlgebraElement& a) { return a.re(); }
inline double norm(const AlgebraElement& a) { return a.norm(); }

/// Square matrix over an algebra, entries stored row-major, d0 doubles each.
/// Used for Hermitian matrices; products of Hermitian matrices are formed
/// only through jordan() and inner().
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  HermitianMatrix(Algebra alg, int size)
      : alg_(alg), size_(size), data_(static_cast<size_t>(size) * size * algebra_dim(alg), 0.0) {
    if (size < 1) throw usage_error("HermitianMatrix: size must be positive");
  }
  HermitianMatrix(Algebra alg, int size, std::vector<double> flat) : alg_(alg), size_(size), data_(std::move(flat)) {
    if (data_.size() != static_cast<size_t>(size) * size * algebra_dim(alg))
      throw usage_error("HermitianMatrix: flat data has wrong length");
  }

  static HermitianMatrix identity(Algebra alg, int size) {
    HermitianMatrix m(alg, size);
    for (int i = 0; i < size; ++i) m.set_real(i, i, 1.0);
    return m;
  }
  /// Rank-one [a_i conj(a_j)].
  static HermitianMatrix outer(std::span<const AlgebraElement> a) {
    const Algebra alg = a.front().algebra();
    const int n = static_cast<int>(a.size());
    HermitianMatrix m(alg, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.set_raw(i, j, a[i] * a[j].conj());
    return m;
  }

  [[nodiscard]] Algebra algebra() const noexcept { return alg_; }
  [[nodiscard]] int size() const noexcept { return size_; }
  [[nodiscard]] int d0() const noexcept { return algebra_dim(alg_); }
  [[nodiscard]] std::span<const double> flat() const noexcept { return data_; }
  [[nodiscard]] std::vector<double>& flat_mut() noexcept { return data_; }

  [[nodiscard]] AlgebraElement at(int i, int j) const {
    return AlgebraElement(alg_, std::span<const double>(data_.data() + offset(i, j), d0()));
  }
  /// Sets entry (i,j) and its mirror (j,i) = conj.
  void set(int i, int j, const AlgebraElement& v) {
    set_raw(i, j, v);
    if (i != j) set_raw(j, i, v.conj());
  }
  void set_real(int i, int j, double x) { set(i, j, AlgebraElement::real(alg_, x)); }
  void set_raw(int i, int j, const AlgebraElement& v) {
    auto c = v.coords();
    std::copy(c.begin(), c.end(), data_.begin() + offset(i, j));
  }

  [[nodiscard]] double trace() const {
    double t = 0.0;
    for (int i = 0; i < size_; ++i) t += data_[offset(i, i)];
    return t;
  }
  [[nodiscard]] double norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
  }
  /// max |a_ij - conj(a_ji)| including imaginary diagonal parts.
  [[nodiscard]] double hermitian_defect() const {
    double worst = 0.0;
    for (int i = 0; i < size_; ++i)
      for (int j = 0; j < size_; ++j) worst = std::max(worst, (at(i, j) - at(j, i).conj()).norm());
    return worst;
  }

  HermitianMatrix& operator+=(const HermitianMatrix& o) {
    check_same(o);
    for (size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  HermitianMatrix& operator-=(const HermitianMatrix& o) {
    check_same(o);
    for (size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  HermitianMatrix& operator*=(double s) noexcept {
    for (double& x : data_) x *= s;
    return *this;
  }
  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

  void check_same(const HermitianMatrix& o) const {
    if (alg_ != o.alg_) throw usage_error("matrices over different algebras");
    if (size_ != o.size_) throw usage_error("matrix size mismatch");
  }

  /// Ordinary row-by-column product with left-to-right accumulation.
  /// Not Hermitian in general; callers go through jordan().
  [[nodiscard]] HermitianMatrix raw_product(const HermitianMatrix& o) const {
    check_same(o);
    HermitianMatrix r(alg_, size_);
    for (int i = 0; i < size_; ++i)
      for (int j = 0; j < size_; ++j) {
        AlgebraElement acc(alg_);
        for (int k = 0; k < size_; ++k) acc += at(i, k) * o.at(k, j);
        r.set_raw(i, j, acc);
      }
    return r;
  }

 private:
  [[nodiscard]] size_t offset(int i, int j) const {
    return (static_cast<size_t>(i) * size_ + j) * d0();
  }

  Algebra alg_ = Algebra::R;
  int size_ = 0;
  std::vector<double> data_;
};

/// <A,B> = Re Tr AB = sum Re(a_ij conj(b_ij)).
inline double inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  a.check_same(b);
  auto x = a.flat();
  auto y = b.flat();
  double s = 0.0;
  for (size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

/// Jordan product (AB + BA)/2.
inline HermitianMatrix jordan(const HermitianMatrix& a, const HermitianMatrix& b) {
  HermitianMatrix r = a.raw_product(b);
  r += b.raw_product(a);
  r *= 0.5;
  return r;
}

/// Freudenthal cubic form of a 3x3 Hermitian matrix
/// [[p, z, conj y], [conj z, q, x], [y, conj x, r]].
inline double freudenthal_det(const HermitianMatrix& m) {
  if (m.size() != 3) throw usage_error("freudenthal_det: 3x3 matrix required");
  const double p = m.at(0, 0).re();
  const double q = m.at(1, 1).re();
  const double r = m.at(2, 2).re();
  const AlgebraElement z = m.at(0, 1);
  const AlgebraElement x = m.at(1, 2);
  const AlgebraElement y = m.at(2, 0);
  return p * q * r + 2.0 * ((x * y) * z).re() - p * x.norm_sq() - q * y.norm_sq() - r * z.norm_sq();
}

struct CubicSpectrum {
  std::array<double, 3> eigenvalues{};  // descending
  std::array<HermitianMatrix, 3> idempotents;
};

/// Eigenvalues and primitive idempotents of a 3x3 Hermitian matrix over any
/// of the four algebras (the octonionic case is the one that matters).
/// Throws degenerate_spectrum when two eigenvalues are closer than
/// rel_tol * ||X||.
inline CubicSpectrum cubic_spectrum(const HermitianMatrix& x, double rel_tol = 1e-8) {
  if (x.size() != 3) throw usage_error("cubic_spectrum: 3x3 matrix required");
  const HermitianMatrix x2 = jordan(x, x);
  const double tr = x.trace();
  const double sigma2 = 0.5 * (tr * tr - x2.trace());
  const double det = freudenthal_det(x);

  // lambda^3 - tr lambda^2 + sigma2 lambda - det = 0; depress with lambda = mu + tr/3.
  const double shift = tr / 3.0;
  const double pq = sigma2 - tr * tr / 3.0;  // mu^3 + pq mu + qq = 0
  const double qq = -2.0 * tr * tr * tr / 27.0 + tr * sigma2 / 3.0 - det;
  std::array<double, 3> lam{};
  if (pq >= 0.0) {
    lam = {shift, shift, shift};
  } else {
    const double amp = 2.0 * std::sqrt(-pq / 3.0);
    const double arg = clamp_unit(3.0 * qq / (pq * amp));
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) lam[k] = shift + amp * std::cos(phi - 2.0 * pi * k / 3.0);
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());

  const double scale = std::max(x.norm(), std::numeric_limits<double>::min());
  if (lam[0] - lam[1] < rel_tol * scale || lam[1] - lam[2] < rel_tol * scale)
    throw degenerate_spectrum("cubic_spectrum: near-degenerate eigenvalues");

  CubicSpectrum out;
  out.eigenvalues = lam;
  const HermitianMatrix id = HermitianMatrix::identity(x.algebra(), 3);
  for (int i = 0; i < 3; ++i) {
    const double a = lam[(i + 1) % 3];
    const double b = lam[(i + 2) % 3];
    // (X - a)(X - b) = X^2 - (a+b) X + ab I, all commuting Jordan powers of X.
    HermitianMatrix p = x2;
    p -= (a + b) * x;
    p += (a * b) * id;
    p *= 1.0 / ((lam[i] - a) * (lam[i] - b));
    out.idempotents[i] = std::move(p);
  }
  return out;
}

}  // namespace geodisc
