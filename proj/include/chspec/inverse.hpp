#pragma once

#include <chspec/direct.hpp>
#include <chspec/error.hpp>
#include <chspec/herglotz.hpp>
#include <chspec/phase_space.hpp>
#include <chspec/precision.hpp>
#include <chspec/roots.hpp>
#include <chspec/string_system.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace chspec {

/// Spectrum with logarithmic coupling constants.
struct IsospectralCoordinates {
  std::vector<double> sigma;  ///< ascending, nonzero, distinct
  std::vector<double> kappa;

  void validate() const {
    if (sigma.size() != kappa.size()) {
      throw Error(ErrorCode::invalid_argument, "sigma and kappa differ in length");
    }
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      if (sigma[i] == 0 || !std::isfinite(sigma[i]) || !std::isfinite(kappa[i])) {
        throw Error(ErrorCode::invalid_argument, "eigenvalues must be finite and nonzero");
      }
      if (i > 0 && sigma[i] == sigma[i - 1]) {
        throw Error(ErrorCode::duplicate_eigenvalue, "eigenvalue " + std::to_string(sigma[i]) + " repeated");
      }
      if (i > 0 && sigma[i] < sigma[i - 1]) {
        throw Error(ErrorCode::invalid_argument, "eigenvalues must be ascending");
      }
    }
  }
};

inline IsospectralCoordinates coordinates_of(const SpectralData& d) { return {d.eigenvalues, d.kappa}; }

/// Wdot(lambda) for W = prod (1 - z/mu).
template <class R = double>
std::vector<R> wdot_from_sigma(const std::vector<double>& sigma) {
  std::vector<double> sorted = sigma;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) {
      throw Error(ErrorCode::duplicate_eigenvalue, "eigenvalue " + std::to_string(sorted[i]) + " repeated");
    }
  }
  for (double s : sigma) {
    if (s == 0) throw Error(ErrorCode::invalid_argument, "zero eigenvalue");
  }
  std::vector<R> sr;
  for (double s : sigma) sr.push_back(R(s));
  return wdot_product(sr);
}

struct AdmissibilityReport {
  bool admissible = true;
  /// sum lambda^{-2} e^{|kappa|} / |lambda Wdot(lambda)|
  double sum = 0;
  /// Partial sums in order of increasing |lambda|.
  std::vector<double> partial_sums;
  /// (r, n(r)/r) at dyadic radii, n(r) the number of |lambda| <= r.
  std::vector<std::pair<double, double>> counting_ratios;
};

inline AdmissibilityReport admissibility_check(const IsospectralCoordinates& coords) {
  AdmissibilityReport rep;
  if (coords.sigma.empty()) return rep;
  coords.validate();
  auto wd = wdot_from_sigma<Real128>(coords.sigma);
  std::vector<std::pair<double, double>> terms;
  for (std::size_t i = 0; i < coords.sigma.size(); ++i) {
    Real128 l = Real128(coords.sigma[i]);
    Real128 t = exp(Real128(std::abs(coords.kappa[i]))) / (l * l * abs(l * wd[i]));
    terms.emplace_back(std::abs(coords.sigma[i]), static_cast<double>(t));
  }
  std::sort(terms.begin(), terms.end());
  double acc = 0;
  for (const auto& t : terms) {
    acc += t.second;
    rep.partial_sums.push_back(acc);
  }
  rep.sum = acc;
  rep.admissible = std::isfinite(acc);
  double rmax = terms.back().first;
  double r = std::exp2(std::floor(std::log2(terms.front().first)));
  for (; r <= 2 * rmax; r *= 2) {
    auto cnt = std::count_if(terms.begin(), terms.end(), [&](const auto& t) { return t.first <= r; });
    rep.counting_ratios.emplace_back(r, static_cast<double>(cnt) / r);
  }
  return rep;
}

/// Weyl function with weights e^{-kappa}/|lambda Wdot| (minus) or
/// e^{kappa}/|lambda Wdot| (plus).
template <class R = double>
RationalHerglotz<R> herglotz_from_coords(const IsospectralCoordinates& coords, Side side) {
  using std::abs;
  using std::exp;
  coords.validate();
  auto wd = wdot_from_sigma<R>(coords.sigma);
  std::vector<R> poles, weights;
  for (std::size_t i = 0; i < coords.sigma.size(); ++i) {
    R l = R(coords.sigma[i]);
    R k = R(coords.kappa[i]);
    poles.push_back(l);
    weights.push_back(exp(side == Side::minus ? R(-k) : k) / abs(l * wd[i]));
  }
  return RationalHerglotz<R>::from_poles(std::move(poles), std::move(weights));
}

namespace detail {

/// Highest coefficient index kept after dropping top coefficients that are
/// negligible against their magnitude bound.
template <class R>
void drop_negligible_top(std::vector<R>& c, const std::vector<R>& mag, int bits) {
  using std::abs;
  using std::ldexp;
  while (!c.empty()) {
    std::size_t k = c.size() - 1;
    R m = k < mag.size() ? mag[k] : R(0);
    if (abs(c[k]) > ldexp(m, -bits / 2)) break;
    c.pop_back();
  }
}

template <class R>
std::vector<R> padded(const Poly<R>& p, std::size_t n) {
  std::vector<R> c = p.coefficients();
  c.resize(std::max(n, c.size()), R(0));
  return c;
}

/// Length of the interval the next strip would produce, or 0 when the
/// next strip is not an interval.
template <class R>
R next_interval_length(const std::vector<R>& N, const std::vector<R>& D) {
  using std::abs;
  if (D.size() < 2 || N.size() > D.size()) return R(0);
  const std::size_t d = D.size() - 1;
  R a = d < N.size() ? R(N[d] / D[d]) : R(0);
  R r = (d - 1 < N.size() ? N[d - 1] : R(0)) - a * D[d - 1];
  if (r == R(0)) return R(0);
  return abs(D[d] / r);
}

/// Checks that N/D has positive weights at every pole.
template <class R>
void check_positive_weights(const std::vector<R>& N, const std::vector<R>& D) {
  Poly<R> dp(D), np(N);
  if (dp.degree() <= 0) return;
  auto poles = real_roots(dp);
  Poly<R> dd = dp.derivative();
  for (const auto& l : poles) {
    R w = -np(l) / dd(l);
    if (!(w > R(0))) {
      throw Error(ErrorCode::weight_nonpositive,
                  "stripped Weyl function has a nonpositive weight at " + std::to_string(static_cast<double>(l)));
    }
  }
}

}  // namespace detail

/// Continued-fraction layer stripping of a rational Herglotz function with
/// m(0) = 0 into minus-side string data.
template <class R>
StringData<R> layer_strip(const RationalHerglotz<R>& m, int bits = significand_bits<R>) {
  using std::abs;
  StringData<R> out;
  out.side = Side::minus;
  if (m.is_zero()) return out;
  auto [nb, db] = m.magnitude_bounds();
  std::size_t width = m.denominator.size() + 2;
  std::vector<R> N = detail::padded(m.numerator, width), D = detail::padded(m.denominator, width);
  std::vector<R> MN = detail::padded(nb, width), MD = detail::padded(db, width);
  auto shrink = [&]() {
    detail::drop_negligible_top(N, MN, bits);
    detail::drop_negligible_top(D, MD, bits);
  };
  shrink();
  R xi = R(0);
  const std::size_t max_steps = 4 * width + 8;
  for (std::size_t step = 0; step < max_steps; ++step) {
    if (N.empty()) return out;
    if (D.empty()) throw Error(ErrorCode::degree_stall, "denominator vanished");
    const std::size_t d = D.size() - 1;
    if (N.size() == d + 2) {
      // Mass: m ~ b z at infinity.
      R b = N[d + 1] / D[d];
      if (out.empty()) throw Error(ErrorCode::invalid_argument, "point mass at xi = 0");
      if (b < R(0)) throw Error(ErrorCode::negative_mass, "stripped a negative point mass");
      for (std::size_t k = 0; k <= d; ++k) {
        N[k + 1] -= b * D[k];
        MN[k + 1] += abs(b) * MD[k];
      }
      N.resize(d + 1);
      if (xi * b >= R(1e-14)) out.masses.back() += b;
      shrink();
      detail::check_positive_weights(N, D);
      continue;
    }
    if (N.size() > d + 2) throw Error(ErrorCode::degree_stall, "numerator degree too high");
    // Interval: a = m(infinity), l from the next term of the expansion.
    N.resize(d + 1, R(0));
    MN.resize(std::max(MN.size(), d + 1), R(0));
    R a = N[d] / D[d];
    std::vector<R> Rr(d + 1), MR(d + 1);
    for (std::size_t k = 0; k <= d; ++k) {
      Rr[k] = N[k] - a * D[k];
      MR[k] = MN[k] + abs(a) * MD[k];
    }
    Rr[d] = R(0);
    if (d == 0 || Rr[d - 1] == R(0)) throw Error(ErrorCode::degree_stall, "interval strip cannot proceed");
    R l = -D[d] / Rr[d - 1];
    if (!(l > R(0))) throw Error(ErrorCode::negative_length, "stripped a nonpositive interval length");
    R al = a * l;
    std::vector<R> Nn(d + 2, R(0)), Dn(d + 2, R(0)), MNn(d + 2, R(0)), MDn(d + 2, R(0));
    for (std::size_t k = 0; k <= d; ++k) {
      Nn[k] += N[k];
      Dn[k] += D[k];
      MNn[k] += MN[k];
      MDn[k] += MD[k];
      Nn[k + 1] += al * Rr[k];
      Dn[k + 1] += l * Rr[k];
      MNn[k + 1] += abs(al) * MR[k];
      MDn[k + 1] += l * MR[k];
    }
    // The z^d and z^{d+1} terms cancel by construction of a and l.
    Nn.resize(d);
    Dn.resize(d);
    N = std::move(Nn);
    D = std::move(Dn);
    MN = std::move(MNn);
    MD = std::move(MDn);
    shrink();
    if (D.size() > d) throw Error(ErrorCode::degree_stall, "denominator degree did not drop");
    xi += l;
    // A next interval shorter than 1e-14 xi is the image of a point mass
    // under rounding of the input data: its top denominator coefficient is
    // noise. Dropping it turns the next strip into a mass strip.
    while (D.size() >= 2) {
      R nl = detail::next_interval_length(N, D);
      if (nl == R(0) || nl > R(1e-14) * xi) break;
      D.pop_back();
    }
    out.intervals.push_back({l, a});
    out.masses.push_back(R(0));
    detail::check_positive_weights(N, D);
  }
  throw Error(ErrorCode::degree_stall, "layer stripping did not terminate");
}

/// Diagnostics of an inverse reconstruction.
struct InverseReport {
  double round_trip_residual = 0;  ///< max relative deviation of eigenvalues and kappa
  int precision_bits = 0;
  FromStringReport merge;
};

namespace detail {

/// Compares recomputed spectral data with the target coordinates.
template <class R>
double round_trip_residual(const SpectralCore<R>& core, const std::vector<R>& sigma, const std::vector<R>& kappa) {
  using std::abs;
  if (core.eigenvalues.size() != sigma.size()) return std::numeric_limits<double>::infinity();
  R worst = R(0);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    worst = std::max<R>(worst, R(abs(core.eigenvalues[i] - sigma[i]) / abs(sigma[i])));
    worst = std::max<R>(worst, R(abs(core.kappa[i] - kappa[i]) / std::max<R>(R(1), abs(kappa[i]))));
  }
  return static_cast<double>(worst);
}

/// Strips the minus-side Weyl function with the given weights, then
/// verifies that the resulting string reproduces sigma and kappa.
template <class R>
StringData<R> reconstruct_string(const std::vector<R>& sigma, const std::vector<R>& weights, double* residual) {
  using std::abs;
  using std::log;
  auto m = RationalHerglotz<R>::from_poles(sigma, weights);
  StringData<R> s = layer_strip(m);
  SpectralCore<R> core = spectral_core(s);
  auto wd = wdot_product(sigma);
  std::vector<R> kappa;
  for (std::size_t i = 0; i < sigma.size(); ++i) kappa.push_back(-log(weights[i] * abs(sigma[i] * wd[i])));
  double res = round_trip_residual(core, sigma, kappa);
  if (residual) *residual = res;
  if (!(res <= 1e-8)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "round-trip residual %.3g", res);
    throw Error(ErrorCode::round_trip_failure, buf);
  }
  return s;
}

template <class F>
PeakonPair run_inverse(const Options& opts, InverseReport* report, F&& weights_at) {
  return with_escalation(opts, [&](int bits) {
    return with_precision(bits, [&]<class R>() {
      std::vector<R> sigma, weights;
      weights_at.template operator()<R>(sigma, weights);
      double res = 0;
      StringData<R> s = reconstruct_string(sigma, weights, &res);
      FromStringReport merge;
      PeakonPair pair = from_string_data(s, &merge);
      if (report) {
        report->round_trip_residual = res;
        report->precision_bits = bits;
        report->merge = merge;
      }
      return pair;
    });
  });
}

}  // namespace detail

/// Inverts (sigma, minus-side weights) held at working precision R, with the
/// same self-check as inverse_transform but without rounding to double.
template <class R>
PeakonPair inverse_from_weights(const std::vector<R>& sigma, const std::vector<R>& weights,
                                InverseReport* report = nullptr) {
  if (sigma.empty()) {
    if (report) *report = InverseReport{0, significand_bits<R>, {}};
    return PeakonPair();
  }
  double res = 0;
  StringData<R> s = detail::reconstruct_string(sigma, weights, &res);
  FromStringReport merge;
  PeakonPair pair = from_string_data(s, &merge);
  if (report) *report = InverseReport{res, significand_bits<R>, merge};
  return pair;
}

template <class R>
PeakonPair inverse_from_core(const SpectralCore<R>& core, InverseReport* report = nullptr) {
  return inverse_from_weights(core.eigenvalues, core.weights, report);
}

/// inverse_transform(spectral_data(pair)) with the spectral data kept at
/// working precision throughout.
inline PeakonPair spectral_round_trip(const PeakonPair& pair, const Options& opts = {},
                                      InverseReport* report = nullptr) {
  return with_escalation(opts, [&](int bits) {
    return with_precision(bits, [&]<class R>() {
      return inverse_from_core(spectral_core_checked<R>(pair), report);
    });
  });
}

/// The pair with spectrum sigma and logarithmic coupling constants kappa.
inline PeakonPair inverse_transform(const IsospectralCoordinates& coords, const Options& opts = {},
                                    InverseReport* report = nullptr) {
  coords.validate();
  if (coords.sigma.empty()) {
    if (report) *report = InverseReport{0, precision_tier(opts.precision_bits), {}};
    return PeakonPair();
  }
  return detail::run_inverse(opts, report, [&]<class R>(std::vector<R>& sigma, std::vector<R>& weights) {
    auto m = herglotz_from_coords<R>(coords, Side::minus);
    sigma = m.poles;
    weights = m.weights;
  });
}

/// The pair with spectrum sigma and the given norming constants on one side.
inline PeakonPair inverse_from_norming(const std::vector<double>& sigma, const std::vector<double>& norming,
                                       Side side, const Options& opts = {}, InverseReport* report = nullptr) {
  if (sigma.size() != norming.size()) {
    throw Error(ErrorCode::invalid_argument, "eigenvalues and norming constants differ in length");
  }
  IsospectralCoordinates probe{sigma, std::vector<double>(sigma.size(), 0.0)};
  probe.validate();
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] * norming[i] > 0)) {
      throw Error(ErrorCode::nonpositive_product, "lambda * gamma^2 must be positive");
    }
  }
  if (sigma.empty()) {
    if (report) *report = InverseReport{0, precision_tier(opts.precision_bits), {}};
    return PeakonPair();
  }
  return detail::run_inverse(opts, report, [&]<class R>(std::vector<R>& s, std::vector<R>& weights) {
    auto wd = wdot_from_sigma<R>(sigma);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      R l = R(sigma[i]);
      R g = R(norming[i]);
      R gminus = side == Side::minus ? g : R(wd[i] * wd[i] / g);
      s.push_back(l);
      weights.push_back(R(1) / (l * gminus));
    }
  });
}

}  // namespace chspec
