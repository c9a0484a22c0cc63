#pragma once

// Deterministic random utilities.
//
// Everything here is a pure function of its seed so that corpora, experiment
// runs, and reports are reproducible run-to-run. std::mt19937_64 has a
// standard-specified output sequence; the distribution transforms below are
// implemented explicitly (uniform via 53-bit mantissa, gaussian via
// Box-Muller) because the <random> distribution classes are allowed to vary
// between standard library implementations.

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace kogate {

/// FNV-1a 64-bit hash of a byte string; used to derive seeds from ids.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// SplitMix64 finalizer; decorrelates nearby seed values.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Combine two seed components into one stream key.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b));
}

/// Uniform double in [0,1) from a single 64-bit word (53-bit resolution).
inline double to_unit(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_word() { return engine_(); }

  /// Uniform in [0,1).
  double unit() { return to_unit(engine_()); }

  /// Uniform in [lo,hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Uniform integer in [lo,hi] inclusive. Modulo bias is negligible for the
  /// small ranges used here and keeps the draw sequence platform-stable.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  /// Standard normal via Box-Muller; consumes two words per pair.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = unit();
    double u2 = unit();
    while (u1 <= 0.0) u1 = unit();  // guard log(0)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Unit-norm vector with gaussian direction.
  std::vector<double> unit_vector(std::size_t dim) {
    std::vector<double> v(dim);
    double norm_sq = 0.0;
    for (auto& x : v) {
      x = gaussian();
      norm_sq += x * x;
    }
    if (norm_sq == 0.0) {
      v[0] = 1.0;
      norm_sq = 1.0;
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& x : v) x *= inv;
    return v;
  }

  /// Fisher-Yates shuffle with this engine (std::shuffle is not
  /// implementation-stable).
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(
          uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Unit vector at a *fixed angle* from a unit-norm anchor: gaussian noise is
/// projected orthogonal to the anchor and scaled to radius sigma*sqrt(dim),
/// so cos(anchor, result) == 1/sqrt(1 + sigma^2*dim) up to rounding while the
/// direction within the cone stays random. The deterministic radius keeps
/// anchor similarities free of sampling spread; only the seed-driven
/// direction varies.
inline std::vector<double> cone_point(const std::vector<double>& anchor,
                                      double sigma, Rng& rng) {
  const std::size_t dim = anchor.size();
  std::vector<double> g(dim);
  for (auto& x : g) x = rng.gaussian();
  double along = 0.0;
  for (std::size_t i = 0; i < dim; ++i) along += g[i] * anchor[i];
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    g[i] -= along * anchor[i];
    norm_sq += g[i] * g[i];
  }
  if (norm_sq < 1e-24) {  // gaussian draw collapsed onto the anchor
    g[0] += 1.0;
    norm_sq = 0.0;
    along = 0.0;
    for (std::size_t i = 0; i < dim; ++i) along += g[i] * anchor[i];
    for (std::size_t i = 0; i < dim; ++i) {
      g[i] -= along * anchor[i];
      norm_sq += g[i] * g[i];
    }
  }
  const double radius = sigma * std::sqrt(static_cast<double>(dim));
  const double scale = radius / std::sqrt(norm_sq);
  std::vector<double> v(dim);
  double out_norm_sq = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    v[i] = anchor[i] + scale * g[i];
    out_norm_sq += v[i] * v[i];
  }
  const double inv = 1.0 / std::sqrt(out_norm_sq);
  for (auto& x : v) x *= inv;
  return v;
}

}  // namespace kogate
