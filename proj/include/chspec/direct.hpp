#pragma once

#include <chspec/error.hpp>
#include <chspec/herglotz.hpp>
#include <chspec/phase_space.hpp>
#include <chspec/precision.hpp>
#include <chspec/roots.hpp>
#include <chspec/string_system.hpp>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace chspec {

/// Spectral data of a pair. norming_right and norming_left hold
/// gamma^2_{lambda,+} and gamma^2_{lambda,-}.
struct SpectralData {
  std::vector<double> eigenvalues;  ///< ascending
  std::vector<double> kappa;
  std::vector<double> coupling;
  std::vector<double> norming_right;
  std::vector<double> norming_left;
  Poly<double> wronskian = Poly<double>::constant(1.0);

  std::size_t size() const { return eigenvalues.size(); }
  bool empty() const { return eigenvalues.empty(); }
};

/// Spectral quantities at working precision R.
template <class R>
struct SpectralCore {
  Poly<R> wronskian;
  std::vector<R> eigenvalues;
  std::vector<R> wdot;
  std::vector<R> weights;  ///< minus-side Weyl weights
  std::vector<R> kappa;
  std::vector<R> coupling;
  std::vector<R> norming_minus;
  std::vector<R> norming_plus;

  SpectralData to_double() const {
    SpectralData d;
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
      d.eigenvalues.push_back(static_cast<double>(eigenvalues[i]));
      d.kappa.push_back(static_cast<double>(kappa[i]));
      d.coupling.push_back(static_cast<double>(coupling[i]));
      d.norming_right.push_back(static_cast<double>(norming_plus[i]));
      d.norming_left.push_back(static_cast<double>(norming_minus[i]));
    }
    d.wronskian = wronskian.template cast<double>();
    return d;
  }
};

/// kappa, coupling and norming constants from minus-side Weyl weights.
template <class R>
void fill_from_weights(SpectralCore<R>& core) {
  using std::abs;
  using std::exp;
  using std::log;
  const std::size_t n = core.eigenvalues.size();
  core.kappa.resize(n);
  core.coupling.resize(n);
  core.norming_minus.resize(n);
  core.norming_plus.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const R& lam = core.eigenvalues[i];
    const R& wd = core.wdot[i];
    const R& w = core.weights[i];
    if (!(w > R(0))) {
      throw Error(ErrorCode::weight_nonpositive,
                  "Weyl weight at lambda = " + std::to_string(static_cast<double>(lam)) + " is not positive");
    }
    R lw = lam * wd;
    core.kappa[i] = -log(w * abs(lw));
    R c = exp(core.kappa[i]);
    if (lw > R(0)) c = -c;
    core.coupling[i] = c;
    core.norming_minus[i] = -wd * c;
    core.norming_plus[i] = -wd / c;
  }
}

/// Spectral quantities of the finite data (sigma, minus-side weights).
template <class R>
SpectralCore<R> core_from_weights(const std::vector<R>& sigma, const std::vector<R>& weights) {
  SpectralCore<R> core;
  core.wronskian = poly_from_roots(sigma);
  core.eigenvalues = sigma;
  core.wdot = wdot_product(sigma);
  core.weights = weights;
  fill_from_weights(core);
  return core;
}

/// Direct transform of minus-side string data at precision R.
template <class R>
SpectralCore<R> spectral_core(const StringData<R>& s) {
  auto bt = cumulative_transfer_bounded(s);
  SpectralCore<R> core;
  core.wronskian = trim_by_bound(bt.q.a22, bt.bound.a22, significand_bits<R>);
  core.eigenvalues = real_roots(core.wronskian);
  // At an eigenvalue Q_22 = 0 and det Q = 1, so Q_21 Q_12 = -1. The smaller
  // of the two can be pure cancellation noise; it is taken from the larger.
  core.wdot = wdot_product(core.eigenvalues);
  for (std::size_t i = 0; i < core.eigenvalues.size(); ++i) {
    using std::abs;
    Mat2<R> q = full_transfer(s, core.eigenvalues[i]);
    R q21 = abs(q.a21) >= abs(q.a12) ? q.a21 : R(-1) / q.a12;
    core.weights.push_back(-q21 / core.wdot[i]);
  }
  fill_from_weights(core);
  return core;
}

namespace detail {

/// Checks kappa against direct matching phi_- = c phi_+ of the two
/// eigenfunctions at the site where |phi_- phi_+| is largest.
template <class R>
void cross_check_coupling(const PeakonPair& pair, const SpectralCore<R>& core) {
  using std::abs;
  for (std::size_t i = 0; i < core.eigenvalues.size(); ++i) {
    const R lam = core.eigenvalues[i];
    auto fm = jost_solution<R, R>(pair, lam, Side::minus);
    auto fp = jost_solution<R, R>(pair, lam, Side::plus);
    R best = R(-1), c = R(0);
    for (double x : pair.sites()) {
      R a = fm(x).value, b = fp(x).value;
      R prod = abs(a * b);
      if (prod > best) {
        best = prod;
        c = a / b;
      }
    }
    R ref = core.coupling[i];
    if (!(abs(c - ref) <= R(1e-8) * abs(ref))) {
      throw Error(ErrorCode::cross_check_failure,
                  "coupling constant from eigenfunction matching (" + std::to_string(static_cast<double>(c)) +
                      ") disagrees with Weyl weights (" + std::to_string(static_cast<double>(ref)) + ")");
    }
  }
}

}  // namespace detail

/// W(z) = Q_22(z) of the minus-side transfer matrix.
inline Poly<double> wronskian_poly(const PeakonPair& pair, const Options& opts = {}) {
  return with_precision(precision_tier(opts.precision_bits), [&]<class R>() {
    auto bt = cumulative_transfer_bounded(to_string_data<R>(pair));
    return trim_by_bound(bt.q.a22, bt.bound.a22, significand_bits<R>).template cast<double>();
  });
}

/// Ascending eigenvalues (roots of W).
inline std::vector<double> spectrum(const PeakonPair& pair, const Options& opts = {}) {
  return with_escalation(opts, [&](int bits) {
    return with_precision(bits, [&]<class R>() {
      auto bt = cumulative_transfer_bounded(to_string_data<R>(pair));
      auto roots = real_roots(trim_by_bound(bt.q.a22, bt.bound.a22, significand_bits<R>));
      std::vector<double> out;
      for (const auto& r : roots) out.push_back(static_cast<double>(r));
      return out;
    });
  });
}

/// Full spectral data, cross-checked against eigenfunction matching.
template <class R>
SpectralCore<R> spectral_core_checked(const PeakonPair& pair) {
  SpectralCore<R> core = spectral_core(to_string_data<R>(pair));
  detail::cross_check_coupling(pair, core);
  return core;
}

inline SpectralData spectral_data(const PeakonPair& pair, const Options& opts = {}) {
  return with_escalation(opts, [&](int bits) {
    return with_precision(bits, [&]<class R>() { return spectral_core_checked<R>(pair).to_double(); });
  });
}

/// Weyl function m_- = Q_21/Q_22, or m_+ from the reflected pair.
inline RationalHerglotz<double> weyl_function(const PeakonPair& pair, Side side, const Options& opts = {}) {
  const PeakonPair& src = side == Side::minus ? pair : reflect(pair);
  return with_escalation(opts, [&](int bits) {
    return with_precision(bits, [&]<class R>() {
      auto core = spectral_core(to_string_data<R>(src));
      std::vector<double> poles, weights;
      for (std::size_t i = 0; i < core.eigenvalues.size(); ++i) {
        poles.push_back(static_cast<double>(core.eigenvalues[i]));
        weights.push_back(static_cast<double>(core.weights[i]));
      }
      auto m = RationalHerglotz<double>::from_poles(poles, weights);
      return m;
    });
  });
}

/// gamma^2 = omega(phi^2) + 2 lambda int phi^2 dupsilon with phi the
/// solution normalised at the chosen end.
inline double norming_by_quadrature(const PeakonPair& pair, double lambda, Side side, const Options& opts = {}) {
  return with_precision(precision_tier(opts.precision_bits), [&]<class R>() {
    using std::abs;
    auto bt = cumulative_transfer_bounded(to_string_data<R>(pair));
    Poly<R> w = trim_by_bound(bt.q.a22, bt.bound.a22, significand_bits<R>);
    Poly<R> dw = w.derivative();
    R lam = R(lambda);
    if (lam == R(0) || !(abs(w(lam)) <= R(1e-8) * abs(lam * dw(lam)))) {
      throw Error(ErrorCode::not_an_eigenvalue, std::to_string(lambda) + " is not an eigenvalue");
    }
    for (int it = 0; it < 8; ++it) lam -= w(lam) / dw(lam);
    auto phi = jost_solution<R, R>(pair, lam, side);
    R g = R(0);
    for (std::size_t j = 0; j < pair.size(); ++j) {
      R f = phi(pair.sites()[j]).value;
      g += (2 * R(pair.weights()[j]) + 2 * lam * R(pair.atoms()[j])) * f * f;
    }
    return static_cast<double>(g);
  });
}

struct TraceResiduals {
  double first = 0;   ///< |sum 1/lambda - int u|
  double second = 0;  ///< |sum 1/lambda^2 / 2 - mu(R)|
};

inline TraceResiduals trace_formulas(const PeakonPair& pair, const Options& opts = {}) {
  return with_escalation(opts, [&](int bits) {
    return with_precision(bits, [&]<class R>() {
      using std::abs;
      auto bt = cumulative_transfer_bounded(to_string_data<R>(pair));
      auto roots = real_roots(trim_by_bound(bt.q.a22, bt.bound.a22, significand_bits<R>));
      R s1 = R(0), s2 = R(0);
      for (const auto& l : roots) {
        s1 += R(1) / l;
        s2 += R(1) / (l * l);
      }
      TraceResiduals r;
      r.first = static_cast<double>(abs(s1 - integral_u<R>(pair)));
      r.second = static_cast<double>(abs(s2 / 2 - mu_total<R>(pair)));
      return r;
    });
  });
}

namespace detail {

/// int e^{-x} (u' + u)^2 dx + int e^{-x} dupsilon in closed form.
template <class R>
R parseval_lhs_minus(const PeakonPair& pair) {
  using std::exp;
  R total = R(0);
  const std::size_t n = pair.size();
  // On gap k (left of site k) u' + u = 2 A_k e^x with A_k = sum_{j>=k} p_j e^{-x_j}.
  for (std::size_t k = 0; k < n; ++k) {
    R A = R(0);
    for (std::size_t j = k; j < n; ++j) A += R(pair.weights()[j]) * exp(-R(pair.sites()[j]));
    R hi = exp(R(pair.sites()[k]));
    R lo = k == 0 ? R(0) : R(exp(R(pair.sites()[k - 1])));
    total += 4 * A * A * (hi - lo);
  }
  for (std::size_t j = 0; j < n; ++j) total += R(pair.atoms()[j]) * exp(-R(pair.sites()[j]));
  return total;
}

}  // namespace detail

/// Difference of the two sides of the Parseval identity on one side.
inline double parseval_check(const PeakonPair& pair, Side side, const Options& opts = {}) {
  const PeakonPair src = side == Side::minus ? pair : reflect(pair);
  return with_escalation(opts, [&](int bits) {
    return with_precision(bits, [&]<class R>() {
      using std::abs;
      auto core = spectral_core(to_string_data<R>(src));
      R rhs = R(0);
      for (std::size_t i = 0; i < core.eigenvalues.size(); ++i) {
        const R& l = core.eigenvalues[i];
        rhs += core.weights[i] / (l * l);
      }
      return static_cast<double>(abs(detail::parseval_lhs_minus<R>(src) - rhs));
    });
  });
}

enum class Definiteness { positive, negative, indefinite };

inline const char* definiteness_name(Definiteness d) {
  switch (d) {
    case Definiteness::positive: return "positive";
    case Definiteness::negative: return "negative";
    default: return "indefinite";
  }
}

struct DefinitenessReport {
  Definiteness kind = Definiteness::positive;
  bool spectrum_consistent = true;  ///< sign of the spectrum matches kind
  double tfpn_residual = 0;         ///< |sum 1/lambda - 2 sum p|
  std::vector<double> eigenvalues;
};

/// Positive iff upsilon = 0 and omega >= 0, negative iff upsilon = 0 and
/// omega <= 0. The zero pair counts as positive.
inline DefinitenessReport classify_definiteness(const PeakonPair& pair, const Options& opts = {}) {
  DefinitenessReport rep;
  bool no_atoms = true, all_pos = true, all_neg = true;
  for (std::size_t j = 0; j < pair.size(); ++j) {
    if (pair.atoms()[j] > 0) no_atoms = false;
    if (pair.weights()[j] < 0) all_pos = false;
    if (pair.weights()[j] > 0) all_neg = false;
  }
  if (no_atoms && all_pos) {
    rep.kind = Definiteness::positive;
  } else if (no_atoms && all_neg) {
    rep.kind = Definiteness::negative;
  } else {
    rep.kind = Definiteness::indefinite;
  }
  rep.eigenvalues = spectrum(pair, opts);
  if (rep.kind == Definiteness::positive) {
    for (double l : rep.eigenvalues) rep.spectrum_consistent = rep.spectrum_consistent && l > 0;
  } else if (rep.kind == Definiteness::negative) {
    for (double l : rep.eigenvalues) rep.spectrum_consistent = rep.spectrum_consistent && l < 0;
  }
  rep.tfpn_residual = trace_formulas(pair, opts).first;
  return rep;
}

/// z phi_-(z, x) phi_+(z, x) / W(z).
inline std::complex<double> green_function(const PeakonPair& pair, std::complex<double> z, double x,
                                           const Options& opts = {}) {
  Poly<double> w = wronskian_poly(pair, opts);
  auto fm = jost_solution<std::complex<double>, double>(pair, z, Side::minus);
  auto fp = jost_solution<std::complex<double>, double>(pair, z, Side::plus);
  std::complex<double> wz = w.eval_complex(z);
  if (wz == 0.0) throw Error(ErrorCode::pole_hit, "z is an eigenvalue");
  return z * fm(x).value * fp(x).value / wz;
}

}  // namespace chspec
