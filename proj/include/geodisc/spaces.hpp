#pragma once

// The compact two-point homogeneous spaces Q(d, d0): spheres and the
// projective spaces over R, C, H, O. Points are stored as flat coordinate
// vectors (unit vectors for spheres, projector entries for projective spaces)
// so that pairwise loops run over contiguous memory.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "geodisc/algebra.hpp"
#include "geodisc/jacobi.hpp"
#include "geodisc/numeric.hpp"
#include "geodisc/random.hpp"

namespace geodisc {

enum class Family { Sphere, RealProj, ComplexProj, QuatProj, OctProj };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::Sphere: return "Sphere";
    case Family::RealProj: return "RealProj";
    case Family::ComplexProj: return "ComplexProj";
    case Family::QuatProj: return "QuatProj";
    case Family::OctProj: return "OctProj";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "Sphere" || s == "S") return Family::Sphere;
  if (s == "RealProj" || s == "RP") return Family::RealProj;
  if (s == "ComplexProj" || s == "CP") return Family::ComplexProj;
  if (s == "QuatProj" || s == "HP") return Family::QuatProj;
  if (s == "OctProj" || s == "OP") return Family::OctProj;
  throw unsupported_error("unknown space family '" + s + "'");
}

struct Space {
  Family family = Family::Sphere;
  int n = 2;
  int d = 2;
  int d0 = 2;
  double alpha = 0.0;
  double beta = 0.0;

  [[nodiscard]] bool is_sphere() const noexcept { return family == Family::Sphere; }
  [[nodiscard]] Algebra algebra() const noexcept {
    switch (family) {
      case Family::ComplexProj: return Algebra::C;
      case Family::QuatProj: return Algebra::H;
      case Family::OctProj: return Algebra::O;
      default: return Algebra::R;
    }
  }
  /// Number of doubles per point.
  [[nodiscard]] int stride() const noexcept { return is_sphere() ? d + 1 : (n + 1) * (n + 1) * d0; }
  [[nodiscard]] JacobiParams params() const noexcept { return {alpha, beta}; }
  [[nodiscard]] double kappa() const { return 1.0 / beta_fn(0.5 * d, 0.5 * d0); }
  /// Short label such as "S^2" or "CP^2".
  [[nodiscard]] std::string label() const {
    static const char* prefix[] = {"S", "RP", "CP", "HP", "OP"};
    return std::string(prefix[static_cast<int>(family)]) + "^" + std::to_string(n);
  }
  friend bool operator==(const Space& a, const Space& b) noexcept {
    return a.family == b.family && a.n == b.n;
  }
};

inline Space make_space(Family family, int n) {
  if (n < 1) throw domain_error("make_space: n must be at least 1");
  if (family == Family::OctProj && n != 2) throw unsupported_error("make_space: octonionic projective space requires n = 2");
  Space s;
  s.family = family;
  s.n = n;
  if (family == Family::Sphere) {
    s.d = n;
    s.d0 = n;
  } else {
    s.d0 = algebra_dim(s.algebra());
    s.d = n * s.d0;
  }
  s.alpha = 0.5 * s.d - 1.0;
  s.beta = 0.5 * s.d0 - 1.0;
  return s;
}

/// Accepts "S2", "RP3", "CP2", "HP2", "OP2" (also "S^2" etc.) or "Family:n".
inline Space parse_space(const std::string& text) {
  std::string fam;
  std::string num;
  if (auto colon = text.find(':'); colon != std::string::npos) {
    fam = text.substr(0, colon);
    num = text.substr(colon + 1);
  } else {
    size_t k = 0;
    while (k < text.size() && std::isalpha(static_cast<unsigned char>(text[k]))) ++k;
    fam = text.substr(0, k);
    num = text.substr(k);
    if (!num.empty() && num[0] == '^') num.erase(0, 1);
  }
  if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
    throw unsupported_error("cannot parse space '" + text + "'");
  return make_space(parse_family(fam), std::stoi(num));
}

/// A point of Q. Sphere: unit vector in R^{d+1}. Projective: the projector
/// matrix, (n+1)^2 entries row-major, d0 doubles per entry.
struct Point {
  Space space;
  std::vector<double> coords;

  [[nodiscard]] HermitianMatrix projector() const {
    if (space.is_sphere()) throw usage_error("Point::projector: sphere points are vectors");
    return HermitianMatrix(space.algebra(), space.n + 1, coords);
  }
  static Point from_projector(const Space& s, const HermitianMatrix& m) {
    if (s.is_sphere() || m.algebra() != s.algebra() || m.size() != s.n + 1)
      throw usage_error("Point::from_projector: matrix does not fit the space");
    auto f = m.flat();
    return Point{s, std::vector<double>(f.begin(), f.end())};
  }
};

class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(Space s) : space_(s) {}

  [[nodiscard]] const Space& space() const noexcept { return space_; }
  [[nodiscard]] size_t size() const noexcept { return stride() ? data_.size() / stride() : 0; }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }
  [[nodiscard]] int stride() const noexcept { return space_.stride(); }
  [[nodiscard]] std::span<const double> coords(size_t i) const {
    return {data_.data() + i * stride(), static_cast<size_t>(stride())};
  }
  [[nodiscard]] Point operator[](size_t i) const {
    auto c = coords(i);
    return Point{space_, std::vector<double>(c.begin(), c.end())};
  }
  void push_back(const Point& p) {
    if (!(p.space == space_)) throw usage_error("PointSet::push_back: point from a different space");
    data_.insert(data_.end(), p.coords.begin(), p.coords.end());
  }
  void append(const PointSet& other) {
    if (!(other.space_ == space_)) throw usage_error("PointSet::append: different spaces");
    data_.insert(data_.end(), other.data_.begin(), other.data_.end());
  }
  [[nodiscard]] std::span<const double> flat() const noexcept { return data_; }

 private:
  Space space_;
  std::vector<double> data_;
};

struct PairGeometry {
  double tau;       // chordal distance sin(theta/2)
  double cos_half;  // cos(theta/2)
  double theta;     // geodesic distance
  double cos_theta;
};

/// Distances from raw coordinates. The half-angle sine and cosine are both
/// formed from differences/sums so neither end of [0, pi] loses precision.
inline PairGeometry pair_geometry(const Space& s, std::span<const double> a, std::span<const double> b) {
  double diff = 0.0;
  double other = 0.0;
  const size_t m = a.size();
  if (s.is_sphere()) {
    for (size_t k = 0; k < m; ++k) {
      const double u = a[k] - b[k];
      const double v = a[k] + b[k];
      diff += u * u;
      other += v * v;
    }
    diff *= 0.25;
    other *= 0.25;
  } else {
    for (size_t k = 0; k < m; ++k) {
      const double u = a[k] - b[k];
      diff += u * u;
      other += a[k] * b[k];
    }
    diff *= 0.5;
    other = std::clamp(other, 0.0, 1.0);
  }
  PairGeometry g{};
  g.tau = std::min(std::sqrt(diff), 1.0);
  g.cos_half = std::min(std::sqrt(other), 1.0);
  g.theta = 2.0 * std::atan2(g.tau, g.cos_half);
  g.cos_theta = clamp_unit(g.cos_half * g.cos_half - g.tau * g.tau);
  return g;
}

inline void check_same_space(const Point& x, const Point& y) {
  if (!(x.space == y.space)) throw usage_error("points belong to different spaces");
}

inline double geodesic_distance(const Point& x, const Point& y) {
  check_same_space(x, y);
  return pair_geometry(x.space, x.coords, y.coords).theta;
}

inline double chordal_distance(const Point& x, const Point& y) {
  check_same_space(x, y);
  return pair_geometry(x.space, x.coords, y.coords).tau;
}

/// Z(u): the closed geodesic through diag(1,0,...,0); theta(Z(u), Z(0)) = 2|u|.
inline Point geodesic_point(const Space& s, double u) {
  Point p{s, std::vector<double>(s.stride(), 0.0)};
  if (s.is_sphere()) {
    p.coords[0] = std::cos(2.0 * u);
    p.coords[1] = std::sin(2.0 * u);
    return p;
  }
  HermitianMatrix m(s.algebra(), s.n + 1);
  const double c = std::cos(u);
  const double sn = std::sin(u);
  m.set_real(0, 0, c * c);
  m.set_real(0, 1, sn * c);
  m.set_real(1, 1, sn * sn);
  return Point::from_projector(s, m);
}

/// Pair of points at distance pi: poles on spheres, the half-sum/half-difference
/// projectors in the top-left block otherwise.
inline std::pair<Point, Point> antipodal_pair(const Space& s) {
  if (s.is_sphere()) {
    Point a{s, std::vector<double>(s.stride(), 0.0)};
    Point b = a;
    a.coords[0] = 1.0;
    b.coords[0] = -1.0;
    return {a, b};
  }
  HermitianMatrix plus(s.algebra(), s.n + 1);
  HermitianMatrix minus(s.algebra(), s.n + 1);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      plus.set_real(i, j, 0.5);
      minus.set_real(i, j, i == j ? 0.5 : -0.5);
    }
  return {Point::from_projector(s, plus), Point::from_projector(s, minus)};
}

/// mu(B_r(y)) = I_{sin^2(r/2)}(d/2, d0/2).
inline double ball_volume(const Space& s, double r) {
  if (r < 0.0 || std::isnan(r)) throw domain_error("ball_volume: negative radius");
  if (r >= pi) return 1.0;
  const double sh = std::sin(0.5 * r);
  const double ch = std::cos(0.5 * r);
  return ibeta(0.5 * s.d, 0.5 * s.d0, sh * sh, ch * ch);
}

/// 1 - v_r evaluated without cancellation.
inline double ball_volume_complement(const Space& s, double r) {
  if (r < 0.0 || std::isnan(r)) throw domain_error("ball_volume_complement: negative radius");
  if (r >= pi) return 0.0;
  const double sh = std::sin(0.5 * r);
  const double ch = std::cos(0.5 * r);
  return ibeta(0.5 * s.d0, 0.5 * s.d, ch * ch, sh * sh);
}

/// Radial density factor (sin r/2)^(d-1) (cos r/2)^(d0-1); dv_r = kappa * factor dr.
inline double volume_density_factor(const Space& s, double r) {
  return std::pow(std::sin(0.5 * r), s.d - 1) * std::pow(std::cos(0.5 * r), s.d0 - 1);
}

/// Largest deviation from the point invariants (unit norm, or idempotent with
/// unit trace and Hermitian entries).
inline double point_defect(const Point& p) {
  if (static_cast<int>(p.coords.size()) != p.space.stride()) return std::numeric_limits<double>::infinity();
  if (p.space.is_sphere()) {
    double s = 0.0;
    for (double x : p.coords) s += x * x;
    return std::abs(std::sqrt(s) - 1.0);
  }
  const HermitianMatrix m = p.projector();
  const double idem = (jordan(m, m) - m).norm();
  return std::max({idem, std::abs(m.trace() - 1.0), std::abs(m.norm() - 1.0), m.hermitian_defect()});
}

namespace detail {

// Unit vector a with [a_i conj(a_j)] = p for a primitive idempotent p, read
// off the dominant column (that entry made real).
inline std::vector<AlgebraElement> column_vector(const HermitianMatrix& p) {
  const int size = p.size();
  int k = 0;
  for (int i = 1; i < size; ++i)
    if (p.at(i, i).re() > p.at(k, k).re()) k = i;
  const double pkk = p.at(k, k).re();
  if (!(pkk > 0.0)) throw degenerate_spectrum("projector with vanishing diagonal");
  std::vector<AlgebraElement> a(size);
  for (int i = 0; i < size; ++i) a[i] = (1.0 / std::sqrt(pkk)) * p.at(i, k);
  a[k] = AlgebraElement::real(p.algebra(), a[k].re());
  double norm_sq = 0.0;
  for (const auto& x : a) norm_sq += x.norm_sq();
  for (auto& x : a) x *= 1.0 / std::sqrt(norm_sq);
  return a;
}

}  // namespace detail

/// A unit vector a with projector [a_i conj(a_j)]. The entries of a primitive
/// idempotent generate an associative subalgebra, so this works over O too.
inline std::vector<AlgebraElement> projector_vector(const Point& p) {
  return detail::column_vector(p.projector());
}

inline Point sample_uniform(const Space& s, Rng& rng) {
  if (s.is_sphere()) {
    Point p{s, std::vector<double>(s.stride())};
    double norm_sq = 0.0;
    do {
      norm_sq = 0.0;
      for (double& x : p.coords) {
        x = normal(rng);
        norm_sq += x * x;
      }
    } while (norm_sq < 1e-300);
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : p.coords) x *= inv;
    return p;
  }
  const Algebra alg = s.algebra();
  const int size = s.n + 1;
  if (s.family != Family::OctProj) {
    std::vector<AlgebraElement> a(size, AlgebraElement(alg));
    double norm_sq = 0.0;
    do {
      norm_sq = 0.0;
      for (auto& x : a) {
        for (int k = 0; k < algebra_dim(alg); ++k) x[k] = normal(rng);
        norm_sq += x.norm_sq();
      }
    } while (norm_sq < 1e-300);
    for (auto& x : a) x *= 1.0 / std::sqrt(norm_sq);
    return Point::from_projector(s, HermitianMatrix::outer(a));
  }
  // Gaussian on H_3(O) (standard in the trace inner product), top idempotent.
  const double off_sd = 1.0 / std::sqrt(2.0);
  for (;;) {
    HermitianMatrix x(alg, size);
    for (int i = 0; i < size; ++i) x.set_real(i, i, normal(rng));
    for (int i = 0; i < size; ++i)
      for (int j = i + 1; j < size; ++j) {
        AlgebraElement e(alg);
        for (int k = 0; k < 8; ++k) e[k] = off_sd * normal(rng);
        x.set(i, j, e);
      }
    try {
      const CubicSpectrum spec = cubic_spectrum(x);
      return Point::from_projector(s, HermitianMatrix::outer(detail::column_vector(spec.idempotents[0])));
    } catch (const degenerate_spectrum&) {
      continue;
    }
  }
}

inline Point sample_uniform(const Space& s, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_uniform(s, rng);
}

/// N i.i.d. uniform points from the stream (seed, 0).
inline PointSet sample_set(const Space& s, size_t count, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  PointSet set(s);
  for (size_t i = 0; i < count; ++i) set.push_back(sample_uniform(s, rng));
  return set;
}

// ---- point-set CSV ----------------------------------------------------------

class format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void write_points(std::ostream& os, const PointSet& set) {
  os << "# space=" << family_name(set.space().family) << ",n=" << set.space().n << "\n";
  std::ostringstream line;
  line.precision(17);
  for (size_t i = 0; i < set.size(); ++i) {
    line.str("");
    auto c = set.coords(i);
    for (size_t k = 0; k < c.size(); ++k) {
      if (k) line << ',';
      line << c[k];
    }
    os << line.str() << "\n";
  }
}

/// Reads the point-set CSV format; `source` names the input in diagnostics.
inline PointSet read_points(std::istream& is, const std::string& source = "<input>") {
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) -> format_error {
    return format_error(source + ":" + std::to_string(lineno) + ": " + what);
  };
  std::optional<Space> space;
  PointSet set;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[0] == '#') {
      const auto pos = line.find("space=");
      if (pos == std::string::npos) continue;
      if (space) throw fail("duplicate space header");
      const auto comma = line.find(",n=", pos);
      if (comma == std::string::npos) throw fail("header must read '# space=<family>,n=<n>'");
      const std::string fam = line.substr(pos + 6, comma - pos - 6);
      try {
        space = make_space(parse_family(fam), std::stoi(line.substr(comma + 3)));
      } catch (const std::exception& e) {
        throw fail(e.what());
      }
      set = PointSet(*space);
      continue;
    }
    if (!space) throw fail("data before '# space=' header");
    Point p{*space, {}};
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        size_t used = 0;
        p.coords.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw fail("not a number: '" + cell + "'");
      }
    }
    if (static_cast<int>(p.coords.size()) != space->stride())
      throw fail("expected " + std::to_string(space->stride()) + " values, got " + std::to_string(p.coords.size()));
    if (point_defect(p) > 1e-6) throw fail("point violates the space invariants");
    set.push_back(p);
  }
  if (!space) throw format_error(source + ": missing '# space=' header");
  return set;
}

}  // namespace geodisc
