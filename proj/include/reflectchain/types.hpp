#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace reflectchain {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr cplx I{0.0, 1.0};

inline double fnorm(const Mat& a) { return a.norm(); }

/// Relative residual of a difference against the scale of its operands.
inline double rel_residual(const Mat& lhs, const Mat& rhs) {
  const double scale = std::max({1.0, lhs.norm(), rhs.norm()});
  return (lhs - rhs).norm() / scale;
}

inline double rel_residual(cplx lhs, cplx rhs) {
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return std::abs(lhs - rhs) / scale;
}

/// Outcome of a single verification check. Failures are data, not exceptions.
struct CheckRecord {
  std::string id;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::map<std::string, std::string> metadata;

  static CheckRecord make(std::string id, double residual, double tolerance,
                          std::map<std::string, std::string> meta = {}) {
    CheckRecord r;
    r.id = std::move(id);
    r.residual = residual;
    r.tolerance = tolerance;
    r.pass = residual < tolerance;
    r.metadata = std::move(meta);
    return r;
  }
};

/// Explicitly seeded RNG handle. Never shared between concurrent samplers:
/// fork() derives an independent stream for a named sub-task.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  Rng fork(std::uint64_t tag) {
    std::uint64_t s = mix(seed_base_ ^ (0x9e3779b97f4a7c15ULL * (tag + 1)));
    return Rng(s);
  }

  double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(engine_);
  }

  std::uint64_t next_u64() { return engine_(); }

  cplx unit_disc() {
    while (true) {
      double x = uniform(-1.0, 1.0), y = uniform(-1.0, 1.0);
      if (x * x + y * y <= 1.0) return {x, y};
    }
  }

  /// Spectral-parameter sample: annulus 0.3 <= |z| <= 2, kept away from the
  /// i/2 lattice where zeta-type factors vanish.
  cplx sample_lambda() {
    while (true) {
      cplx z = 2.0 * unit_disc();
      double r = std::abs(z);
      if (r < 0.3 || r > 2.0) continue;
      double k = std::round(2.0 * z.imag());
      cplx lat(0.0, k / 2.0);
      if (std::abs(z - lat) < 1e-2) continue;
      return z;
    }
  }

  Mat random_matrix(int n) {
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = unit_disc();
    return a;
  }

 private:
  explicit Rng(std::uint64_t seed, int) : engine_(seed), seed_base_(seed) {}
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }
  std::mt19937_64 engine_;
  std::uint64_t seed_base_ = 0;

 public:
  // Retain the base seed so forks are reproducible.
  static Rng seeded(std::uint64_t seed) {
    Rng r(seed);
    r.seed_base_ = seed;
    return r;
  }
};

}  // namespace reflectchain
