#pragma once

#include <chspec/chspec.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace chspec::testing {

/// Portable uniform draws on top of mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  double uniform(double a = 0, double b = 1) { return a + (b - a) * static_cast<double>(g_() >> 11) * 0x1.0p-53; }
  int integer(int lo, int hi) { return lo + static_cast<int>(g_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool coin() { return (g_() >> 63) != 0; }

 private:
  std::mt19937_64 g_;
};

struct SuiteShape {
  int max_n = 8;
  double lo = -4, hi = 4, min_gap = 0.2;
  double max_p = 2, min_p = 0.05;
  double max_h = 2;
  bool positive = false;  ///< all p > 0
  bool atoms = true;
};

inline std::vector<double> separated_sites(Rng& rng, int n, double lo, double hi, double gap) {
  std::vector<double> xs;
  const double room = (hi - lo) - gap * (n - 1);
  for (int i = 0; i < n; ++i) xs.push_back(rng.uniform(0, room));
  std::sort(xs.begin(), xs.end());
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] += lo + gap * i;
  return xs;
}

inline PeakonPair random_pair(Rng& rng, const SuiteShape& shape = {}, int n = 0) {
  if (n == 0) n = rng.integer(1, shape.max_n);
  auto xs = separated_sites(rng, n, shape.lo, shape.hi, shape.min_gap);
  std::vector<double> p, h;
  for (int i = 0; i < n; ++i) {
    double v = rng.uniform(shape.min_p, shape.max_p);
    p.push_back(shape.positive || rng.coin() ? v : -v);
    h.push_back(shape.atoms && rng.coin() ? rng.uniform(0, shape.max_h) : 0.0);
  }
  return PeakonPair(xs, p, h);
}

/// The random-pair suite used across the tests.
inline std::vector<PeakonPair> random_suite(std::size_t count, std::uint64_t seed, const SuiteShape& shape = {}) {
  Rng rng(seed);
  std::vector<PeakonPair> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_pair(rng, shape));
  return out;
}

/// Random admissible coordinates: N <= 8, |lambda| in [0.1, 10], |kappa| <= 3.
inline IsospectralCoordinates random_coords(Rng& rng, int max_n = 8) {
  const int n = rng.integer(1, max_n);
  std::vector<double> sigma;
  while (static_cast<int>(sigma.size()) < n) {
    double l = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    if (rng.coin()) l = -l;
    bool close = false;
    for (double s : sigma) close = close || std::abs(s - l) < 1e-3 * std::abs(l);
    if (!close) sigma.push_back(l);
  }
  std::sort(sigma.begin(), sigma.end());
  std::vector<double> kappa;
  for (int i = 0; i < n; ++i) kappa.push_back(rng.uniform(-3, 3));
  return {sigma, kappa};
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Relative error against max(1, |b|), for quantities that may vanish.
inline double rel1(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

/// Largest relative deviation of sites, weights and atoms; infinity when
/// the sizes differ.
inline double pair_distance(const PeakonPair& a, const PeakonPair& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max({worst, rel1(a.sites()[i], b.sites()[i]), rel1(a.weights()[i], b.weights()[i]),
                      rel1(a.atoms()[i], b.atoms()[i])});
  }
  return worst;
}

}  // namespace chspec::testing
