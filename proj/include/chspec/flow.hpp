#pragma once

#include <chspec/direct.hpp>
#include <chspec/error.hpp>
#include <chspec/exp_sum.hpp>
#include <chspec/inverse.hpp>
#include <chspec/phase_space.hpp>
#include <chspec/precision.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <optional>
#include <tuple>
#include <vector>

namespace chspec {

/// Spectral data after time t: kappa_lambda + t / (2 lambda), same sigma and W.
inline SpectralData evolve_spectral(const SpectralData& data, double t) {
  SpectralData out = data;
  std::vector<Real128> sigma(data.eigenvalues.begin(), data.eigenvalues.end());
  auto wd = wdot_product(sigma);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double lam = data.eigenvalues[i];
    const double w = static_cast<double>(wd[i]);
    out.kappa[i] = data.kappa[i] + t / (2 * lam);
    double c = std::exp(out.kappa[i]);
    if (lam * w > 0) c = -c;
    out.coupling[i] = c;
    out.norming_left[i] = -w * c;
    out.norming_right[i] = -w / c;
  }
  return out;
}

/// Keeps eigenvalues with |lambda| <= k together with their gamma^2_-; W,
/// kappa, coupling and gamma^2_+ are recomputed for the smaller set.
inline SpectralData truncate_spectral(const SpectralData& data, double k) {
  if (!(k > 0)) throw Error(ErrorCode::invalid_argument, "truncation level must be positive");
  SpectralData out;
  std::vector<Real128> sigma;
  std::vector<double> gm;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (std::abs(data.eigenvalues[i]) <= k) {
      sigma.emplace_back(data.eigenvalues[i]);
      gm.push_back(data.norming_left[i]);
    }
  }
  auto wd = wdot_product(sigma);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const double lam = static_cast<double>(sigma[i]);
    const double w = static_cast<double>(wd[i]);
    double c = -gm[i] / w;
    out.eigenvalues.push_back(lam);
    out.kappa.push_back(std::log(std::abs(c)));
    out.coupling.push_back(c);
    out.norming_left.push_back(gm[i]);
    out.norming_right.push_back(-w / c);
  }
  out.wronskian = poly_from_roots(sigma).cast<double>();
  return out;
}

/// Conservative flow of one initial pair. The spectral data are kept at
/// working precision, so every snapshot is reconstructed without rounding
/// the coordinates to double.
class Flow {
 public:
  explicit Flow(PeakonPair pair, Options opts = {})
      : pair_(std::move(pair)), opts_(opts), spectral_(spectral_data(pair_, opts_)) {}

  const PeakonPair& initial() const { return pair_; }
  const SpectralData& spectral() const { return spectral_; }
  const Options& options() const { return opts_; }

  /// The pair at time t.
  PeakonPair at(double t, InverseReport* report = nullptr) const {
    return with_escalation(opts_, [&](int bits) {
      return with_precision(bits, [&]<class R>() {
        const SpectralCore<R>& c = core<R>();
        std::vector<R> w = c.weights;
        for (std::size_t i = 0; i < w.size(); ++i) {
          using std::exp;
          w[i] *= exp(R(-t) / (2 * c.eigenvalues[i]));
        }
        return inverse_from_weights(c.eigenvalues, w, report);
      });
    });
  }

  /// The pair whose spectrum is sigma intersected with [-k, k], with the
  /// original minus-side weights (equivalently gamma^2_-).
  PeakonPair truncated(double k, InverseReport* report = nullptr) const {
    if (!(k > 0)) throw Error(ErrorCode::invalid_argument, "truncation level must be positive");
    return with_escalation(opts_, [&](int bits) {
      return with_precision(bits, [&]<class R>() {
        const SpectralCore<R>& c = core<R>();
        std::vector<R> sigma, w;
        for (std::size_t i = 0; i < c.eigenvalues.size(); ++i) {
          using std::abs;
          if (abs(c.eigenvalues[i]) <= R(k)) {
            sigma.push_back(c.eigenvalues[i]);
            w.push_back(c.weights[i]);
          }
        }
        return inverse_from_weights(sigma, w, report);
      });
    });
  }

 private:
  template <class R>
  const SpectralCore<R>& core() const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto& slot = std::get<std::optional<SpectralCore<R>>>(cores_);
    if (!slot) slot = spectral_core_checked<R>(pair_);
    return *slot;
  }

  PeakonPair pair_;
  Options opts_;
  SpectralData spectral_;
  mutable std::mutex mutex_;
  mutable std::tuple<std::optional<SpectralCore<double>>, std::optional<SpectralCore<Real128>>,
                     std::optional<SpectralCore<Real256>>>
      cores_;
};

/// Phi^t(pair).
inline PeakonPair flow_map(const PeakonPair& pair, double t, const Options& opts = {}) {
  if (t == 0) return pair;
  return Flow(pair, opts).at(t);
}

/// Snapshots of one flow line at increasing times.
struct Trajectory {
  std::vector<double> times;
  std::vector<PeakonPair> snapshots;
  SpectralData base_spectral;
  PeakonPair initial;  ///< pair at t = 0
  Options options;
};

inline Trajectory make_trajectory(const Flow& flow, std::vector<double> times) {
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw Error(ErrorCode::invalid_argument, "times are not strictly increasing");
  }
  Trajectory tr;
  tr.times = std::move(times);
  for (double t : tr.times) tr.snapshots.push_back(flow.at(t));
  tr.base_spectral = flow.spectral();
  tr.initial = flow.initial();
  tr.options = flow.options();
  return tr;
}

inline Trajectory make_trajectory(const PeakonPair& pair, std::vector<double> times, const Options& opts = {}) {
  return make_trajectory(Flow(pair, opts), std::move(times));
}

/// Drift of the conserved functionals along a trajectory, relative to
/// max(1, |value at t = 0|).
struct ConservedReport {
  std::vector<double> times;
  std::vector<double> integral_u;
  std::vector<double> mu_total;
  double integral_u_drift = 0;
  double mu_drift = 0;
  double wronskian_drift = 0;
};

inline ConservedReport conserved_report(const Trajectory& traj) {
  ConservedReport r;
  r.times = traj.times;
  const double iu0 = static_cast<double>(integral_u<Real128>(traj.initial));
  const double mu0 = static_cast<double>(mu_total<Real128>(traj.initial));
  const Poly<double>& w0 = traj.base_spectral.wronskian;
  auto rel = [](double v, double ref) { return std::abs(v - ref) / std::max(1.0, std::abs(ref)); };
  for (const auto& snap : traj.snapshots) {
    double iu = static_cast<double>(integral_u<Real128>(snap));
    double mu = static_cast<double>(mu_total<Real128>(snap));
    r.integral_u.push_back(iu);
    r.mu_total.push_back(mu);
    r.integral_u_drift = std::max(r.integral_u_drift, rel(iu, iu0));
    r.mu_drift = std::max(r.mu_drift, rel(mu, mu0));
    Poly<double> w = wronskian_poly(snap, traj.options);
    for (int k = 0; k <= std::max(w.degree(), w0.degree()); ++k) {
      r.wronskian_drift = std::max(r.wronskian_drift, rel(w[k], w0[k]));
    }
  }
  return r;
}

/// phi(x, t) = beta((x - x_center) / x_radius) beta((t - t_center) / t_radius)
/// with beta(s) = (1 - s^2)^order on |s| < 1.
struct BumpTestFunction {
  double x_center = 0;
  double x_radius = 1;
  double t_center = 0;
  double t_radius = 1;
  int order = 6;

  Poly<double> profile() const {
    Poly<double> b = Poly<double>::constant(1.0), f{1.0, 0.0, -1.0};
    for (int i = 0; i < order; ++i) b = b * f;
    return b;
  }
};

/// Composite Gauss-Legendre rule in t, 8 nodes per panel. Each refinement
/// pass bisects every panel whose error estimate is at least a quarter of
/// the largest one.
struct TimeQuadrature {
  int panels = 8;
  int refine_passes = 0;
};

struct WeakResidual {
  double r1 = 0;
  double r2 = 0;
  std::size_t time_nodes = 0;
};

namespace detail {

inline const std::array<std::pair<double, double>, 8>& gauss_legendre8() {
  static const std::array<std::pair<double, double>, 8> rule = {{
      {-0.9602898564975363, 0.1012285362903763},
      {-0.7966664774136267, 0.2223810344533745},
      {-0.5255324099163290, 0.3137066458778873},
      {-0.1834346424956498, 0.3626837833783620},
      {0.1834346424956498, 0.3626837833783620},
      {0.5255324099163290, 0.3137066458778873},
      {0.7966664774136267, 0.2223810344533745},
      {0.9602898564975363, 0.1012285362903763},
  }};
  return rule;
}

/// One gap of a pair: [lo, hi) with u = A e^{x-c} + B e^{c-x} and the
/// homogeneous part of P, so that on the gap (y = x - c)
/// P = -A^2/2 e^{2y} + A B - B^2/2 e^{-2y} + (pl e^{-y} + pr e^{y}) / 4.
struct GapForm {
  double lo, hi, c;
  double A, B;
  double pl, pr;
};

inline std::vector<GapForm> gap_forms(const PeakonPair& pair) {
  const std::size_t n = pair.size();
  const auto& x = pair.sites();
  const auto& h = pair.atoms();
  std::vector<GapForm> g(n + 1);
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= n; ++k) {
    g[k].lo = k == 0 ? -inf : x[k - 1];
    g[k].hi = k == n ? inf : x[k];
    g[k].c = k == 0 ? x[0] : x[k - 1];
    std::tie(g[k].A, g[k].B) = gap_coefficients<double>(pair, k, g[k].c);
  }
  // pl = e^{-c} (int_{-inf}^{c} e^{s} f ds + atoms left of the gap) and
  // pr = e^{c} (int_{c}^{inf} e^{-s} f ds + atoms right of the gap), with
  // f = 2u^2 + u'^2. Gap 0 uses c = x_0, its right end.
  for (std::size_t k = 0; k <= n; ++k) {
    const double c = g[k].c;
    double l = 0, r = 0;
    for (std::size_t i = 0; i < std::max<std::size_t>(k, 1); ++i) {
      const auto& gi = g[i];
      if (i == 0) {
        l += std::exp(gi.c - c) * gi.A * gi.A;
      } else {
        const double L = gi.hi - gi.lo;
        l += std::exp(gi.c - c) * (gi.A * gi.A * std::expm1(3 * L) + 2 * gi.A * gi.B * std::expm1(L) -
                                   3 * gi.B * gi.B * std::expm1(-L));
      }
    }
    for (std::size_t i = 0; i < k; ++i) l += h[i] * std::exp(x[i] - c);
    for (std::size_t i = std::max<std::size_t>(k, 1); i <= n; ++i) {
      const auto& gi = g[i];
      if (i == n) {
        r += std::exp(c - gi.c) * gi.B * gi.B;
      } else {
        const double L = gi.hi - gi.lo;
        r += std::exp(c - gi.c) * (3 * gi.A * gi.A * std::expm1(L) - 2 * gi.A * gi.B * std::expm1(-L) -
                                   gi.B * gi.B * std::expm1(-3 * L));
      }
    }
    for (std::size_t i = k; i < n; ++i) r += h[i] * std::exp(c - x[i]);
    const double A = g[k].A, B = g[k].B;
    g[k].pl = l - A * A - 2 * A * B + 3 * B * B;
    g[k].pr = r + 3 * A * A - 2 * A * B - B * B;
  }
  return g;
}

inline ExpSum exp_u(const GapForm& g) {
  ExpSum e;
  e[1] = g.A;
  e[-1] = g.B;
  return e;
}

inline ExpSum exp_du(const GapForm& g) {
  ExpSum e;
  e[1] = g.A;
  e[-1] = -g.B;
  return e;
}

inline ExpSum exp_p(const GapForm& g) {
  ExpSum e;
  e[2] = -0.5 * g.A * g.A;
  e[0] = g.A * g.B;
  e[-2] = -0.5 * g.B * g.B;
  e[-1] = 0.25 * g.pl;
  e[1] = 0.25 * g.pr;
  return e;
}

}  // namespace detail

/// P(x) = 1/4 int e^{-|x-s|} u^2 ds + 1/4 int e^{-|x-s|} d mu(s).
inline double pressure(const PeakonPair& pair, double x) {
  if (pair.empty()) return 0.0;
  auto g = detail::gap_forms(pair);
  const auto& gk = g[gap_index(pair, x)];
  return detail::exp_p(gk)(x - gk.c);
}

namespace detail {

/// Spatial integrals of one snapshot against the x-profile chi:
/// [int u chi, int (u^2/2 + P) chi', int chi d mu, int u chi' d mu,
///  2 int u (u^2/2 - P) chi'].
inline std::array<double, 5> weak_space_integrals(const PeakonPair& pair, const BumpTestFunction& f) {
  std::array<double, 5> out{};
  if (pair.empty()) return out;
  const Poly<double> chi = f.profile();
  const Poly<double> dchi = chi.derivative() * (1.0 / f.x_radius);
  const double xa = f.x_center - f.x_radius, xb = f.x_center + f.x_radius;
  for (const auto& g : gap_forms(pair)) {
    const double lo = std::max(g.lo, xa), hi = std::min(g.hi, xb);
    if (!(hi > lo)) continue;
    const ExpSum u = exp_u(g), du = exp_du(g), p = exp_p(g);
    const ExpSum u2 = u * u;
    const ExpSum dens = u2 + du * du;
    auto integ = [&](const ExpSum& e, const Poly<double>& q) {
      return exp_sum_integral(e, g.c, q, f.x_center, f.x_radius, lo, hi);
    };
    out[0] += integ(u, chi);
    out[1] += integ(0.5 * u2 + p, dchi);
    out[2] += integ(dens, chi);
    out[3] += integ(u * dens, dchi);
    out[4] += 2 * integ(0.5 * (u * u2) - u * p, dchi);
  }
  for (std::size_t j = 0; j < pair.size(); ++j) {
    const double s = (pair.sites()[j] - f.x_center) / f.x_radius;
    if (std::abs(s) >= 1 || pair.atoms()[j] == 0) continue;
    const double h = pair.atoms()[j];
    out[2] += h * chi(s);
    out[3] += h * eval_u(pair, pair.sites()[j]) * dchi(s);
  }
  return out;
}

}  // namespace detail

/// Residuals of the two weak-form identities of the conservative system for
/// a bump test function; time integrals by composite Gauss-Legendre.
inline WeakResidual weak_residual(const Trajectory& traj, const BumpTestFunction& f, const TimeQuadrature& quad = {}) {
  if (!(f.x_radius > 0) || !(f.t_radius > 0) || f.order < 2) {
    throw Error(ErrorCode::invalid_argument, "bump test function needs positive radii and order >= 2");
  }
  if (quad.panels < 1 || quad.refine_passes < 0) throw Error(ErrorCode::invalid_argument, "bad quadrature settings");
  const double ta = f.t_center - f.t_radius, tb = f.t_center + f.t_radius;
  if (traj.times.empty() || ta < traj.times.front() || tb > traj.times.back()) {
    throw Error(ErrorCode::support_not_covered, "test function support leaves the trajectory time window");
  }
  const Flow flow(traj.initial, traj.options);
  const Poly<double> psi = f.profile();
  const Poly<double> dpsi = psi.derivative() * (1.0 / f.t_radius);
  // Panel integrals of the two weak-form integrands.
  auto panel = [&](double a, double b) {
    std::array<double, 2> s{};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (const auto& [node, weight] : detail::gauss_legendre8()) {
      const double t = mid + half * node;
      const double st = (t - f.t_center) / f.t_radius;
      const auto I = detail::weak_space_integrals(flow.at(t), f);
      const double ps = psi(st), dps = dpsi(st);
      s[0] += weight * half * (dps * I[0] + ps * I[1]);
      s[1] += weight * half * (dps * I[2] + ps * I[3] - ps * I[4]);
    }
    return s;
  };
  struct Panel {
    double a, b;
    std::array<double, 2> v;
  };
  std::vector<Panel> panels;
  for (int i = 0; i < quad.panels; ++i) {
    double a = ta + (tb - ta) * i / quad.panels, b = ta + (tb - ta) * (i + 1) / quad.panels;
    panels.push_back({a, b, panel(a, b)});
  }
  for (int pass = 0; pass < quad.refine_passes; ++pass) {
    std::vector<std::pair<Panel, Panel>> halves;
    std::vector<double> est;
    for (const auto& pn : panels) {
      const double m = 0.5 * (pn.a + pn.b);
      Panel l{pn.a, m, panel(pn.a, m)}, r{m, pn.b, panel(m, pn.b)};
      est.push_back(std::abs(l.v[0] + r.v[0] - pn.v[0]) + std::abs(l.v[1] + r.v[1] - pn.v[1]));
      halves.emplace_back(l, r);
    }
    const double worst = *std::max_element(est.begin(), est.end());
    std::vector<Panel> next;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (worst > 0 && est[i] >= 0.25 * worst) {
        next.push_back(halves[i].first);
        next.push_back(halves[i].second);
      } else {
        next.push_back(panels[i]);
      }
    }
    panels = std::move(next);
  }
  WeakResidual res;
  double s1 = 0, s2 = 0;
  for (const auto& pn : panels) {
    s1 += pn.v[0];
    s2 += pn.v[1];
  }
  res.r1 = std::abs(s1);
  res.r2 = std::abs(s2);
  res.time_nodes = 8 * panels.size();
  return res;
}

/// Sampling grid [a, b] with n points.
struct Grid {
  double a = -1;
  double b = 1;
  std::size_t n = 401;
};

namespace detail {

/// D(x) = int_{-inf}^x e^{-s} (int_{-inf}^s e^{r} (u' - u)^2 dr
///        + int_{-inf}^s e^{r} d upsilon) ds, at sorted points xs.
inline std::vector<double> double_integral_minus(const PeakonPair& pair, const std::vector<double>& xs) {
  std::vector<double> out(xs.size(), 0.0);
  const std::size_t n = pair.size();
  if (n == 0) return out;
  const auto& x = pair.sites();
  // On gap k >= 1 (c = x_{k-1}): u' - u = -2 B e^{-(x-c)}; g = e^{-c} G(c+).
  auto piece = [](double g, double B, double y) {
    return -g * std::expm1(-y) + 4 * B * B * (-std::expm1(-y) + 0.5 * std::expm1(-2 * y));
  };
  std::vector<double> d0(n + 1, 0.0), gk(n + 1, 0.0), bk(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double c = x[k - 1];
    bk[k] = gap_coefficients<double>(pair, k, c).second;
    if (k == 1) {
      gk[k] = pair.atoms()[0];
    } else {
      const double L = x[k - 1] - x[k - 2];
      gk[k] = std::exp(-L) * (gk[k - 1] - 4 * bk[k - 1] * bk[k - 1] * std::expm1(-L)) + pair.atoms()[k - 1];
      d0[k] = d0[k - 1] + piece(gk[k - 1], bk[k - 1], L);
    }
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::size_t k = gap_index(pair, xs[i]);
    if (k == 0) continue;
    out[i] = d0[k] + piece(gk[k], bk[k], xs[i] - x[k - 1]);
  }
  return out;
}

}  // namespace detail

/// sup |u_A - u_B| plus the sup discrepancies of both exponential-weight
/// double integrals, over the grid.
inline double continuity_metric(const PeakonPair& a, const PeakonPair& b, const Grid& grid) {
  if (grid.n < 2 || !(grid.b > grid.a)) throw Error(ErrorCode::invalid_argument, "grid needs n >= 2 and a < b");
  std::vector<double> xs(grid.n), neg(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    xs[i] = grid.a + (grid.b - grid.a) * static_cast<double>(i) / static_cast<double>(grid.n - 1);
    neg[grid.n - 1 - i] = -xs[i];
  }
  const auto dma = detail::double_integral_minus(a, xs), dmb = detail::double_integral_minus(b, xs);
  const auto dpa = detail::double_integral_minus(reflect(a), neg), dpb = detail::double_integral_minus(reflect(b), neg);
  double su = 0, sm = 0, sp = 0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    su = std::max(su, std::abs(eval_u(a, xs[i]) - eval_u(b, xs[i])));
    sm = std::max(sm, std::abs(dma[i] - dmb[i]));
    sp = std::max(sp, std::abs(dpa[i] - dpb[i]));
  }
  return su + sm + sp;
}

/// Grid covering both pairs' sites with a margin of 3.
inline Grid default_grid(const PeakonPair& a, const PeakonPair& b) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto* p : {&a, &b}) {
    if (p->empty()) continue;
    lo = std::min(lo, p->sites().front());
    hi = std::max(hi, p->sites().back());
  }
  if (!std::isfinite(lo)) return Grid{-1, 1, 401};
  return Grid{lo - 3, hi + 3, 401};
}

inline double continuity_metric(const PeakonPair& a, const PeakonPair& b) {
  return continuity_metric(a, b, default_grid(a, b));
}

}  // namespace chspec
