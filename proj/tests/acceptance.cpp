// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
#include "oracles.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

namespace {

using namespace chspec;
using testing::pair_distance;
using testing::rel1;
using testing::rel_err;
using testing::Rng;
using cd = std::complex<double>;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char b[160];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

/// The random-pair suite: n <= 8, sites in [-4, 4] at least 0.2 apart,
/// |p| <= 2, h in [0, 2].
const std::vector<PeakonPair>& suite() {
  static const auto s = testing::random_suite(200, 20240601);
  return s;
}

std::vector<cd> upper_samples(Rng& rng, std::size_t n) {
  std::vector<cd> z;
  for (std::size_t i = 0; i < n; ++i) z.emplace_back(rng.uniform(-5, 5), rng.uniform(1e-3, 5));
  return z;
}

Outcome c1_single_peakon() {
  Rng rng(1);
  spectral_data(PeakonPair({0.0}, {1.0}, {0.0}));  // one-time static initialisation
  double worst = 0, slowest = 0;
  bool signs = true;
  for (int t = 0; t < 100; ++t) {
    double p;
    do p = rng.uniform(-2, 2);
    while (std::abs(p) < 1e-3);
    const double y = rng.uniform(-3, 3);
    const PeakonPair pair({y}, {p}, {0.0});
    const auto t0 = Clock::now();
    const SpectralData sd = spectral_data(pair);
    slowest = std::max(slowest, seconds_since(t0));
    if (sd.size() != 1) return {false, "wrong spectrum size"};
    // Hand jump-condition values.
    const double lam = 1 / (2 * p);
    worst = std::max({worst, rel_err(sd.eigenvalues[0], lam), rel1(sd.kappa[0], y),
                      rel_err(sd.norming_left[0], 2 * p * std::exp(y)), std::abs(sd.wronskian[0] - 1),
                      rel_err(sd.wronskian[1], -2 * p)});
    worst = std::max(worst, rel_err(sd.coupling[0], static_cast<double>(oracle::coupling(pair, lam))));
    signs = signs && lam * sd.norming_left[0] > 0 && lam * sd.norming_right[0] > 0;
  }
  return {worst <= 1e-10 && signs && slowest < 0.01,
          fmt("max rel err %.2e", worst) + fmt(", slowest %.2f ms", slowest * 1e3)};
}

Outcome c2_pure_atom() {
  Rng rng(2);
  double worst = 0;
  auto check = [&](double h, double y) {
    const PeakonPair pair({y}, {0.0}, {h});
    const SpectralData sd = spectral_data(pair);
    if (sd.size() != 2) {
      worst = INFINITY;
      return;
    }
    const double l = 1 / std::sqrt(h);
    // Jump at +-1/sqrt(h) turns e^{x/2} into e^{y} e^{-x/2}: kappa = y on both.
    worst = std::max({worst, rel_err(sd.eigenvalues[0], -l), rel_err(sd.eigenvalues[1], l),
                      std::abs(sd.wronskian[1]), rel_err(sd.wronskian[2], -h), rel1(sd.kappa[0], y),
                      rel1(sd.kappa[1], y)});
    for (double lam : sd.eigenvalues) {
      worst = std::max(worst, rel1(std::log(std::abs(static_cast<double>(oracle::coupling(pair, lam)))), y));
    }
  };
  check(1.0, 0.0);
  for (int t = 0; t < 100; ++t) check(rng.uniform(0.05, 4), rng.uniform(-3, 3));
  const bool exact_at_zero = std::abs(spectral_data(PeakonPair({0.0}, {0.0}, {1.7})).kappa[0]) <= 1e-10;
  return {worst <= 1e-10 && exact_at_zero, fmt("max rel err %.2e", worst)};
}

Outcome c3_round_trips() {
  const auto t0 = Clock::now();
  double worst_b = 0, worst_a = 0;
  int fails = 0;
  for (const auto& pair : suite()) {
    try {
      worst_b = std::max(worst_b, pair_distance(spectral_round_trip(pair), pair));
    } catch (const std::exception&) {
      ++fails;
    }
  }
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto c = testing::random_coords(rng);
    try {
      const SpectralData sd = spectral_data(inverse_transform(c));
      if (sd.size() != c.sigma.size()) {
        ++fails;
        continue;
      }
      for (std::size_t i = 0; i < sd.size(); ++i) {
        worst_a = std::max({worst_a, rel_err(sd.eigenvalues[i], c.sigma[i]), rel1(sd.kappa[i], c.kappa[i])});
      }
    } catch (const std::exception&) {
      ++fails;
    }
  }
  const double secs = seconds_since(t0);
  return {fails == 0 && worst_a <= 1e-8 && worst_b <= 1e-8 && secs < 30,
          fmt("pair->data->pair %.2e", worst_b) + fmt(", data->pair->data %.2e", worst_a) +
              fmt(", failures %.0f", fails) + fmt(", %.1f s", secs)};
}

Outcome c4_trace() {
  double worst = 0;
  for (const auto& pair : suite()) {
    const auto r = trace_formulas(pair);
    worst = std::max({worst, r.first, r.second});
  }
  return {worst < 1e-10, fmt("max residual %.2e", worst)};
}

Outcome c5_parseval() {
  double worst = 0;
  for (const auto& pair : suite()) {
    worst = std::max({worst, parseval_check(pair, Side::minus), parseval_check(pair, Side::plus)});
  }
  return {worst < 1e-8, fmt("max residual %.2e", worst)};
}

Outcome c6_relation() {
  double worst = 0;
  for (const auto& pair : suite()) {
    const SpectralData sd = spectral_data(pair);
    const auto wd = wdot_product(std::vector<long double>(sd.eigenvalues.begin(), sd.eigenvalues.end()));
    for (std::size_t i = 0; i < sd.size(); ++i) {
      const double l = sd.eigenvalues[i], c = sd.coupling[i], w = static_cast<double>(wd[i]);
      const double gp = norming_by_quadrature(pair, l, Side::plus);
      const double gm = norming_by_quadrature(pair, l, Side::minus);
      worst = std::max({worst, std::abs(-w - c * gp) / std::abs(w), std::abs(-w - gm / c) / std::abs(w)});
    }
  }
  return {worst <= 1e-9, fmt("max |-W' - c^{+-1} gamma^2| / |W'| %.2e", worst)};
}

Outcome c7_herglotz() {
  Rng rng(7);
  double lo_m = INFINITY, lo_g = INFINITY;
  for (const auto& pair : suite()) {
    const auto z = upper_samples(rng, 50);
    for (Side side : {Side::minus, Side::plus}) lo_m = std::min(lo_m, herglotz_probe(weyl_function(pair, side), z));
    const Poly<double> w = wronskian_poly(pair);
    for (int k = 0; k < 3; ++k) {
      const double x = rng.uniform(-5, 5);
      for (cd s : z) {
        // Relative to the size of the value, so deep-decay samples count.
        const cd g = green_function(pair, s, x);
        lo_g = std::min(lo_g, g.imag() / std::max(std::abs(g), 1e-300));
      }
    }
  }
  return {lo_m > 0 && lo_g > 0, fmt("min Im m %.2e", lo_m) + fmt(", min Im G/|G| %.2e", lo_g)};
}

Outcome c8_flow() {
  double pos = 0;
  for (double t : {-5.0, -1.0, 1.0, 5.0}) {
    const PeakonPair p = flow_map(PeakonPair({0.0}, {1.0}, {0.0}), t);
    pos = p.size() == 1 ? std::max(pos, std::abs(p.sites()[0] - t)) : INFINITY;
  }
  Rng rng(8);
  testing::SuiteShape shape;
  shape.max_n = 6;
  double group = 0, iso = 0;
  for (int i = 0; i < 40; ++i) {
    const PeakonPair pair = testing::random_pair(rng, shape);
    const double s = rng.uniform(-2.5, 2.5), t = rng.uniform(-2.5, 2.5);
    const Flow flow(pair);
    const PeakonPair at = flow.at(s + t);
    group = std::max(group, pair_distance(flow_map(flow.at(s), t), at));
    const auto a = spectrum(pair), b = spectrum(flow.at(rng.uniform(-5, 5)));
    if (a.size() != b.size()) iso = INFINITY;
    for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) iso = std::max(iso, rel_err(b[k], a[k]));
  }
  // Conservation, including the peakon-antipeakon collision.
  const PeakonPair pa({-1.0, 1.0}, {1.0, -1.0}, {0.0, 0.0});
  const SpectralData sd = spectral_data(pa);
  const double tc = (sd.kappa[0] - sd.kappa[1]) * sd.eigenvalues[1];
  std::vector<double> times;
  for (int k = -10; k <= 10; ++k) times.push_back(0.5 * k);
  times.push_back(tc);
  std::sort(times.begin(), times.end());
  double drift = 0;
  for (const PeakonPair& start : {pa, suite()[0], suite()[1], suite()[2]}) {
    const ConservedReport r = conserved_report(make_trajectory(start, times));
    drift = std::max({drift, r.integral_u_drift, r.mu_drift});
  }
  const bool collided = flow_map(pa, tc).size() == 1;
  return {pos < 1e-8 && group <= 1e-7 && iso <= 1e-9 && drift < 1e-9 && collided,
          fmt("position %.2e", pos) + fmt(", group law %.2e", group) + fmt(", isospectral %.2e", iso) +
              fmt(", drift %.2e", drift) + fmt(", collision t=%.4f", tc)};
}

Outcome c9_weak() {
  // Each uniform halving of the time panels must cut both residuals by 4.
  auto levels = [](const Trajectory& traj, const BumpTestFunction& f, bool& ok) {
    double p1 = INFINITY, p2 = INFINITY;
    for (int panels : {1, 2, 4}) {
      const WeakResidual r = weak_residual(traj, f, TimeQuadrature{panels, 0});
      ok = ok && r.r1 <= p1 / 4 && r.r2 <= p2 / 4;
      p1 = r.r1;
      p2 = r.r2;
    }
  };
  bool factor = true;
  const Trajectory unit = make_trajectory(PeakonPair({0.0}, {1.0}, {0.0}), {-2, 2});
  const BumpTestFunction fu{0.3, 2.0, 0.0, 1.5, 6};
  levels(unit, fu, factor);
  const WeakResidual ru = weak_residual(unit, fu, TimeQuadrature{8, 0});

  const Trajectory pa = make_trajectory(PeakonPair({-1.0, 1.0}, {1.0, -1.0}, {0.0, 0.0}), {-6, 6});
  const BumpTestFunction fp{0.4, 2.5, 1.7, 3.5, 6};  // support contains the collision
  levels(pa, fp, factor);
  const WeakResidual rp = weak_residual(pa, fp, TimeQuadrature{2, 3});

  const double a = std::max(ru.r1, ru.r2), b = std::max(rp.r1, rp.r2);
  return {a <= 1e-6 && b <= 1e-4 && factor,
          fmt("peakon %.2e", a) + fmt(" (%.0f nodes)", static_cast<double>(ru.time_nodes)) +
              fmt(", peakon-antipeakon %.2e", b) + fmt(" (%.0f nodes)", static_cast<double>(rp.time_nodes)) +
              (factor ? ", factor >= 4 per level" : ", refinement factor below 4")};
}

Outcome c10_definiteness() {
  Rng rng(10);
  testing::SuiteShape shape;
  shape.positive = true;
  shape.atoms = false;
  double tfpn = 0;
  bool positive = true, flagged = true;
  int negative_found = 0;
  for (int i = 0; i < 50; ++i) {
    const PeakonPair pair = testing::random_pair(rng, shape);
    const DefinitenessReport r = classify_definiteness(pair);
    positive = positive && r.kind == Definiteness::positive && r.spectrum_consistent;
    for (double l : r.eigenvalues) positive = positive && l > 0;
    tfpn = std::max(tfpn, r.tfpn_residual);

    std::vector<double> h(pair.size(), 0.0);
    h[static_cast<std::size_t>(rng.integer(0, static_cast<int>(pair.size()) - 1))] = rng.uniform(0.01, 2);
    const DefinitenessReport q = classify_definiteness(PeakonPair(pair.sites(), pair.weights(), h));
    const bool has_negative = std::any_of(q.eigenvalues.begin(), q.eigenvalues.end(), [](double l) { return l < 0; });
    negative_found += has_negative;
    flagged = flagged && (has_negative || q.kind == Definiteness::indefinite);
  }
  return {positive && flagged && tfpn < 1e-10,
          fmt("tfpn %.2e", tfpn) + fmt(", negative eigenvalue after injection in %.0f/50", negative_found)};
}

Outcome c11_truncation() {
  Rng rng(11);
  testing::SuiteShape shape;
  shape.positive = true;
  shape.atoms = false;
  const PeakonPair pair = testing::random_pair(rng, shape, 8);
  const Flow flow(pair);
  std::vector<double> ks;
  for (double l : flow.spectral().eigenvalues) ks.push_back(std::abs(l));
  std::sort(ks.begin(), ks.end());
  double prev = INFINITY, last = INFINITY;
  bool monotone = true;
  std::string trail;
  for (double k : ks) {
    const double m = continuity_metric(pair, flow.truncated(k * (1 + 1e-12)));
    monotone = monotone && m <= prev;
    prev = last = m;
    trail += fmt(" %.1e", m);
  }
  return {monotone && last < 1e-8, "metric by k:" + trail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"C1  single-peakon oracle", c1_single_peakon},
      {"C2  pure-atom oracle", c2_pure_atom},
      {"C3  round trips", c3_round_trips},
      {"C4  trace formulas", c4_trace},
      {"C5  Parseval identity", c5_parseval},
      {"C6  relation lemma", c6_relation},
      {"C7  Herglotz positivity", c7_herglotz},
      {"C8  flow correctness", c8_flow},
      {"C9  weak-solution residuals", c9_weak},
      {"C10 definiteness", c10_definiteness},
      {"C11 truncation convergence", c11_truncation},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
