#pragma once

#include <chspec/error.hpp>
#include <chspec/precision.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace chspec {

/// One site of a multipeakon pair.
struct Peak {
  double x = 0;  ///< position
  double p = 0;  ///< peakon amplitude
  double h = 0;  ///< atom of the singular measure at x
};

/// A pair (u, mu) with u = sum p_j exp(-|x - x_j|) and
/// mu = (u^2 + u'^2) dx + sum h_j delta_{x_j}.
class PeakonPair {
 public:
  PeakonPair() = default;

  PeakonPair(std::vector<double> sites, std::vector<double> weights, std::vector<double> atoms)
      : sites_(std::move(sites)), weights_(std::move(weights)), atoms_(std::move(atoms)) {
    validate();
  }

  explicit PeakonPair(const std::vector<Peak>& peaks) {
    for (const auto& pk : peaks) {
      sites_.push_back(pk.x);
      weights_.push_back(pk.p);
      atoms_.push_back(pk.h);
    }
    validate();
  }

  std::size_t size() const { return sites_.size(); }
  bool empty() const { return sites_.empty(); }
  const std::vector<double>& sites() const { return sites_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& atoms() const { return atoms_; }
  Peak peak(std::size_t i) const { return {sites_[i], weights_[i], atoms_[i]}; }
  std::vector<Peak> peaks() const {
    std::vector<Peak> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(peak(i));
    return out;
  }

  friend bool operator==(const PeakonPair&, const PeakonPair&) = default;

 private:
  void validate() const {
    if (sites_.size() != weights_.size() || sites_.size() != atoms_.size()) {
      throw Error(ErrorCode::invalid_argument, "sites, weights and atoms differ in length");
    }
    for (std::size_t i = 0; i < sites_.size(); ++i) {
      if (!std::isfinite(sites_[i]) || !std::isfinite(weights_[i]) || !std::isfinite(atoms_[i])) {
        throw Error(ErrorCode::invalid_argument, "non-finite entry at site " + std::to_string(i));
      }
      if (atoms_[i] < 0) {
        throw Error(ErrorCode::invalid_argument, "negative atom at site " + std::to_string(i));
      }
      if (i > 0 && !(sites_[i] > sites_[i - 1])) {
        throw Error(ErrorCode::invalid_argument, "sites are not strictly increasing");
      }
    }
  }

  std::vector<double> sites_, weights_, atoms_;
};

enum class Side { minus, plus };

inline const char* side_name(Side s) { return s == Side::minus ? "minus" : "plus"; }

/// Mirror image x -> -x.
inline PeakonPair reflect(const PeakonPair& pair) {
  std::vector<double> x, p, h;
  for (std::size_t i = pair.size(); i-- > 0;) {
    x.push_back(-pair.sites()[i]);
    p.push_back(pair.weights()[i]);
    h.push_back(pair.atoms()[i]);
  }
  return PeakonPair(std::move(x), std::move(p), std::move(h));
}

template <class R = double>
R eval_u(const PeakonPair& pair, double x) {
  using std::exp;
  using std::abs;
  R s = R(0);
  for (std::size_t j = 0; j < pair.size(); ++j) {
    s += R(pair.weights()[j]) * exp(-abs(R(x) - R(pair.sites()[j])));
  }
  return s;
}

/// Coefficients (A, B) of u = A e^x + B e^{-x} on the k-th gap, already
/// multiplied by e^{c} and e^{-c}: u(x) = A e^{x-c} + B e^{c-x}.
/// Gap k lies between sites k-1 and k (k = 0 is left of all sites).
template <class R = double>
std::pair<R, R> gap_coefficients(const PeakonPair& pair, std::size_t k, const R& c) {
  using std::exp;
  R A = R(0), B = R(0);
  for (std::size_t j = k; j < pair.size(); ++j) A += R(pair.weights()[j]) * exp(c - R(pair.sites()[j]));
  for (std::size_t j = 0; j < k; ++j) B += R(pair.weights()[j]) * exp(R(pair.sites()[j]) - c);
  return {A, B};
}

/// Index of the gap containing x (sites are gap boundaries).
inline std::size_t gap_index(const PeakonPair& pair, double x) {
  return static_cast<std::size_t>(
      std::upper_bound(pair.sites().begin(), pair.sites().end(), x) - pair.sites().begin());
}

/// One-sided derivative u'(x+) (right limit).
template <class R = double>
R eval_u_prime(const PeakonPair& pair, double x) {
  auto [A, B] = gap_coefficients<R>(pair, gap_index(pair, x), R(x));
  return A - B;
}

/// Integral of u over the line, 2 sum p_j.
template <class R = double>
R integral_u(const PeakonPair& pair) {
  R s = R(0);
  for (double p : pair.weights()) s += R(p);
  return 2 * s;
}

/// mu([a, b)). Infinite endpoints are allowed.
template <class R = double>
R mu_interval(const PeakonPair& pair, double a, double b) {
  using std::exp;
  if (!(a <= b)) throw Error(ErrorCode::invalid_argument, "mu_interval needs a <= b");
  if (a == b) return R(0);
  R total = R(0);
  const std::size_t n = pair.size();
  for (std::size_t k = 0; k <= n; ++k) {
    double lo = k == 0 ? -std::numeric_limits<double>::infinity() : pair.sites()[k - 1];
    double hi = k == n ? std::numeric_limits<double>::infinity() : pair.sites()[k];
    double al = std::max(lo, a), be = std::min(hi, b);
    if (!(al < be)) continue;
    // u^2 + u'^2 = 2 A^2 e^{2x} + 2 B^2 e^{-2x} on the gap.
    R Aa = 0, Ab = 0, Ba = 0, Bb = 0;
    for (std::size_t j = k; j < n; ++j) {
      R pj = R(pair.weights()[j]), xj = R(pair.sites()[j]);
      if (std::isfinite(al)) Aa += pj * exp(R(al) - xj);
      Ab += pj * (std::isfinite(be) ? R(exp(R(be) - xj)) : R(0));
    }
    for (std::size_t j = 0; j < k; ++j) {
      R pj = R(pair.weights()[j]), xj = R(pair.sites()[j]);
      Ba += pj * (std::isfinite(al) ? R(exp(xj - R(al))) : R(0));
      if (std::isfinite(be)) Bb += pj * exp(xj - R(be));
    }
    total += Ab * Ab - Aa * Aa + Ba * Ba - Bb * Bb;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (pair.sites()[j] >= a && pair.sites()[j] < b) total += R(pair.atoms()[j]);
  }
  return total;
}

/// mu(R) = 2 sum_{i,j} p_i p_j e^{-|x_i - x_j|} + sum h_j.
template <class R = double>
R mu_total(const PeakonPair& pair) {
  using std::exp;
  R s = R(0), hs = R(0);
  for (std::size_t i = 0; i < pair.size(); ++i) {
    R pi = R(pair.weights()[i]);
    s += pi * pi;
    for (std::size_t j = i + 1; j < pair.size(); ++j) {
      s += 2 * pi * R(pair.weights()[j]) * exp(R(pair.sites()[i]) - R(pair.sites()[j]));
    }
    hs += R(pair.atoms()[i]);
  }
  return 2 * s + hs;
}

/// A site that is an event of the minus-side string.
template <class R>
struct SiteEvent {
  std::size_t index;  ///< index into the pair
  R x, xi, p, h;
};

/// Sites carrying a nonzero amplitude or a positive atom, with xi = e^x.
template <class R>
std::vector<SiteEvent<R>> site_events(const PeakonPair& pair) {
  using std::exp;
  std::vector<SiteEvent<R>> ev;
  for (std::size_t j = 0; j < pair.size(); ++j) {
    if (pair.weights()[j] == 0 && pair.atoms()[j] == 0) continue;
    R x = R(pair.sites()[j]);
    ev.push_back({j, x, R(exp(x)), R(pair.weights()[j]), R(pair.atoms()[j])});
  }
  return ev;
}

template <class R>
struct StringInterval {
  R length;
  R value;
};

/// Coefficients of the string on the minus (or reflected plus) side:
/// piecewise constant a, interval lengths, point masses at the interval
/// right endpoints. a vanishes past the last interval.
template <class R>
struct StringData {
  Side side = Side::minus;
  std::vector<StringInterval<R>> intervals;
  std::vector<R> masses;

  std::size_t size() const { return intervals.size(); }
  bool empty() const { return intervals.empty(); }

  /// Right endpoints xi_j.
  std::vector<R> endpoints() const {
    std::vector<R> xi;
    R acc = R(0);
    for (const auto& iv : intervals) {
      acc += iv.length;
      xi.push_back(acc);
    }
    return xi;
  }

  void validate() const {
    if (masses.size() != intervals.size()) {
      throw Error(ErrorCode::invalid_argument, "masses and intervals differ in length");
    }
    for (std::size_t j = 0; j < intervals.size(); ++j) {
      if (!(intervals[j].length > R(0))) {
        throw Error(ErrorCode::nonpositive_length, "interval " + std::to_string(j));
      }
      if (masses[j] < R(0)) throw Error(ErrorCode::negative_mass, "mass " + std::to_string(j));
    }
  }

  template <class U>
  StringData<U> cast() const {
    StringData<U> out;
    out.side = side;
    for (const auto& iv : intervals) out.intervals.push_back({convert<U>(iv.length), convert<U>(iv.value)});
    for (const auto& m : masses) out.masses.push_back(convert<U>(m));
    return out;
  }
};

/// String coordinates of a pair. The plus side is the minus side of the
/// reflected pair.
template <class R = double>
StringData<R> to_string_data(const PeakonPair& pair, Side side = Side::minus) {
  using std::exp;
  using std::expm1;
  if (side == Side::plus) {
    StringData<R> s = to_string_data<R>(reflect(pair), Side::minus);
    s.side = Side::plus;
    return s;
  }
  auto ev = site_events<R>(pair);
  StringData<R> s;
  s.side = Side::minus;
  const std::size_t n = ev.size();
  std::vector<R> suffix(n + 1, R(0));
  for (std::size_t j = n; j-- > 0;) suffix[j] = suffix[j + 1] + ev[j].p * exp(-ev[j].x);
  for (std::size_t j = 0; j < n; ++j) {
    R len = j == 0 ? ev[0].xi : R(ev[j - 1].xi * expm1(ev[j].x - ev[j - 1].x));
    s.intervals.push_back({len, R(-2 * suffix[j])});
    s.masses.push_back(R(exp(-ev[j].x) * ev[j].h));
  }
  return s;
}

/// Diagnostics from converting string data back to a pair.
struct FromStringReport {
  std::size_t merged = 0;  ///< near non-events merged into their neighbours
  std::vector<std::string> warnings;
};

/// Pair whose string coordinates are s. Near non-events (|a_{j+1} - a_j| <=
/// 1e-12 max(1, |a_j|) and b_j <= 1e-14) are merged and reported; in strict
/// mode they raise NonEvent instead.
template <class R>
PeakonPair from_string_data(const StringData<R>& s, FromStringReport* report = nullptr,
                            bool strict = false) {
  using std::abs;
  using std::log;
  s.validate();
  std::vector<double> x, p, h;
  R xi = R(0);
  const std::size_t n = s.size();
  for (std::size_t j = 0; j < n; ++j) {
    xi += s.intervals[j].length;
    R aj = s.intervals[j].value;
    R anext = j + 1 < n ? s.intervals[j + 1].value : R(0);
    R da = anext - aj;
    R bj = s.masses[j];
    R tol = R(1e-12) * std::max<R>(R(1), abs(aj));
    if (abs(da) <= tol && bj <= R(1e-14)) {
      std::string msg = "non-event at xi = " + std::to_string(static_cast<double>(xi));
      if (strict) throw Error(ErrorCode::non_event, msg);
      if (report) {
        ++report->merged;
        report->warnings.push_back(msg + " merged");
      }
      continue;
    }
    x.push_back(static_cast<double>(log(xi)));
    p.push_back(static_cast<double>(da * xi / 2));
    h.push_back(static_cast<double>(xi * bj));
  }
  PeakonPair out(std::move(x), std::move(p), std::move(h));
  return s.side == Side::plus ? reflect(out) : out;
}

/// Non-negative singular measure given by sampled density plus atoms.
struct MeasureSpec {
  std::vector<std::pair<double, double>> density_samples;  ///< (x, value >= 0)
  std::vector<std::pair<double, double>> atoms;            ///< (x, weight >= 0)

  void validate() const {
    for (std::size_t i = 0; i < density_samples.size(); ++i) {
      if (density_samples[i].second < 0) {
        throw Error(ErrorCode::invalid_argument, "negative density sample");
      }
      if (i > 0 && !(density_samples[i].first > density_samples[i - 1].first)) {
        throw Error(ErrorCode::invalid_argument, "density grid not strictly increasing");
      }
    }
    for (const auto& a : atoms) {
      if (a.second < 0) throw Error(ErrorCode::invalid_argument, "negative atom");
    }
  }
};

using Samples = std::vector<std::pair<double, double>>;

namespace detail {

inline double interpolate_samples(const Samples& s, double x) {
  if (s.empty() || x < s.front().first || x > s.back().first) return 0.0;
  if (x == s.back().first) return s.back().second;
  auto it = std::upper_bound(s.begin(), s.end(), x,
                             [](double v, const std::pair<double, double>& e) { return v < e.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  double t = (x - lo.first) / (hi.first - lo.first);
  return lo.second + t * (hi.second - lo.second);
}

inline std::size_t nearest_node(const std::vector<double>& nodes, double x) {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
  if (it == nodes.begin()) return 0;
  if (it == nodes.end()) return nodes.size() - 1;
  std::size_t i = static_cast<std::size_t>(it - nodes.begin());
  return (x - nodes[i - 1] <= nodes[i] - x) ? i - 1 : i;
}

inline void check_samples(const Samples& s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i].first > s[i - 1].first)) {
      throw Error(ErrorCode::invalid_argument, "sample grid not strictly increasing");
    }
  }
}

}  // namespace detail

/// Peakon interpolation of sampled u at the given nodes, with the singular
/// measure lumped into atoms at the nearest node.
inline PeakonPair project_to_peakons(const Samples& u_samples, const MeasureSpec& upsilon,
                                     std::vector<double> nodes) {
  detail::check_samples(u_samples);
  upsilon.validate();
  if (nodes.empty()) throw Error(ErrorCode::invalid_argument, "need at least one node");
  std::sort(nodes.begin(), nodes.end());
  const std::size_t n = nodes.size();
  double scale = std::max(1.0, std::max(std::abs(nodes.front()), std::abs(nodes.back())));
  for (std::size_t i = 1; i < n; ++i) {
    if (nodes[i] - nodes[i - 1] <= 1e-12 * scale) {
      throw Error(ErrorCode::singular_interpolation, "interpolation nodes coincide");
    }
  }
  Eigen::MatrixXd K(n, n);
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    rhs(static_cast<Eigen::Index>(i)) = detail::interpolate_samples(u_samples, nodes[i]);
    for (std::size_t j = 0; j < n; ++j) {
      K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::exp(-std::abs(nodes[i] - nodes[j]));
    }
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(K);
  if (ldlt.info() != Eigen::Success) {
    throw Error(ErrorCode::singular_interpolation, "peakon interpolation matrix is singular");
  }
  Eigen::VectorXd pv = ldlt.solve(rhs);

  std::vector<double> h(n, 0.0);
  const auto& ds = upsilon.density_samples;
  for (std::size_t i = 1; i < ds.size(); ++i) {
    double mass = 0.5 * (ds[i].second + ds[i - 1].second) * (ds[i].first - ds[i - 1].first);
    h[detail::nearest_node(nodes, 0.5 * (ds[i].first + ds[i - 1].first))] += mass;
  }
  for (const auto& a : upsilon.atoms) h[detail::nearest_node(nodes, a.first)] += a.second;

  std::vector<double> x, p, hh;
  for (std::size_t i = 0; i < n; ++i) {
    double pi = pv(static_cast<Eigen::Index>(i));
    double hi = std::max(0.0, h[i]);
    if (pi == 0 && hi == 0) continue;
    x.push_back(nodes[i]);
    p.push_back(pi);
    hh.push_back(hi);
  }
  return PeakonPair(std::move(x), std::move(p), std::move(hh));
}

/// As above with n nodes at the (i + 1/2)/n quantiles of the cumulative
/// distribution of |u| plus the singular measure.
inline PeakonPair project_to_peakons(const Samples& u_samples, const MeasureSpec& upsilon, std::size_t n) {
  detail::check_samples(u_samples);
  upsilon.validate();
  if (n == 0) throw Error(ErrorCode::invalid_argument, "need at least one node");
  // Cumulative weight on the union of the sample grids.
  std::vector<double> grid;
  for (const auto& s : u_samples) grid.push_back(s.first);
  for (const auto& s : upsilon.density_samples) grid.push_back(s.first);
  for (const auto& a : upsilon.atoms) grid.push_back(a.first);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty()) return PeakonPair();
  auto density = [&](double x) {
    return std::abs(detail::interpolate_samples(u_samples, x)) +
           detail::interpolate_samples(upsilon.density_samples, x);
  };
  std::vector<double> cum(grid.size(), 0.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    cum[i] = cum[i - 1] + 0.5 * (density(grid[i]) + density(grid[i - 1])) * (grid[i] - grid[i - 1]);
  }
  std::vector<double> atom_cum(grid.size(), 0.0);
  for (const auto& a : upsilon.atoms) {
    auto idx = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), a.first) - grid.begin());
    for (std::size_t i = idx; i < grid.size(); ++i) atom_cum[i] += a.second;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) cum[i] += atom_cum[i];
  double total = cum.back();
  if (!(total > 0)) return PeakonPair();
  std::vector<double> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    double target = total * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    auto it = std::lower_bound(cum.begin(), cum.end(), target);
    std::size_t k = static_cast<std::size_t>(it - cum.begin());
    double x;
    if (k == 0) {
      x = grid.front();
    } else if (k >= grid.size()) {
      x = grid.back();
    } else {
      double f = (target - cum[k - 1]) / (cum[k] - cum[k - 1]);
      x = grid[k - 1] + f * (grid[k] - grid[k - 1]);
    }
    nodes.push_back(x);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return project_to_peakons(u_samples, upsilon, std::move(nodes));
}

}  // namespace chspec
