#pragma once

#include <chspec/error.hpp>
#include <chspec/poly.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace chspec {

/// Wdot(lambda) = -(1/lambda) prod_{mu != lambda} (1 - lambda/mu) for
/// W(z) = prod (1 - z/mu).
template <class R>
std::vector<R> wdot_product(const std::vector<R>& sigma) {
  std::vector<R> out;
  out.reserve(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    R prod = R(-1) / sigma[i];
    for (std::size_t j = 0; j < sigma.size(); ++j) {
      if (j != i) prod *= R(1) - sigma[i] / sigma[j];
    }
    out.push_back(prod);
  }
  return out;
}

/// m(z) = sum_k w_k z / (lambda_k (lambda_k - z)) with w_k > 0, cached also
/// as numerator / denominator with denominator prod (1 - z/lambda_k).
template <class T = double>
struct RationalHerglotz {
  std::vector<T> poles;
  std::vector<T> weights;
  Poly<T> numerator;
  Poly<T> denominator = Poly<T>::constant(T(1));

  static RationalHerglotz from_poles(std::vector<T> poles, std::vector<T> weights) {
    if (poles.size() != weights.size()) {
      throw Error(ErrorCode::invalid_argument, "poles and weights differ in length");
    }
    RationalHerglotz m;
    for (std::size_t i = 0; i < poles.size(); ++i) {
      if (poles[i] == T(0)) throw Error(ErrorCode::invalid_argument, "pole at zero");
      if (!(weights[i] > T(0))) {
        throw Error(ErrorCode::weight_nonpositive, "weight " + std::to_string(i) + " is not positive");
      }
    }
    m.poles = std::move(poles);
    m.weights = std::move(weights);
    m.denominator = Poly<T>::constant(T(1));
    Poly<T> num;
    for (std::size_t i = 0; i < m.poles.size(); ++i) {
      Poly<T> term = Poly<T>{T(0), m.weights[i] / (m.poles[i] * m.poles[i])};
      for (std::size_t j = 0; j < m.poles.size(); ++j) {
        if (j != i) term = term * Poly<T>{T(1), T(-1) / m.poles[j]};
      }
      num += term;
      m.denominator = m.denominator * Poly<T>{T(1), T(-1) / m.poles[i]};
    }
    m.numerator = num;
    return m;
  }

  /// Coefficient-wise magnitude bounds for numerator and denominator.
  std::pair<Poly<T>, Poly<T>> magnitude_bounds() const {
    using std::abs;
    Poly<T> nb, db = Poly<T>::constant(T(1));
    for (std::size_t i = 0; i < poles.size(); ++i) {
      Poly<T> term = Poly<T>{T(0), abs(weights[i] / (poles[i] * poles[i]))};
      for (std::size_t j = 0; j < poles.size(); ++j) {
        if (j != i) term = term * Poly<T>{T(1), T(1) / abs(poles[j])};
      }
      nb += term;
      db = db * Poly<T>{T(1), T(1) / abs(poles[i])};
    }
    return {nb, db};
  }

  bool is_zero() const { return poles.empty(); }

  std::complex<double> operator()(std::complex<double> z) const {
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < poles.size(); ++i) {
      double l = static_cast<double>(poles[i]);
      if (z == std::complex<double>(l, 0.0)) {
        throw Error(ErrorCode::pole_hit, "evaluation at pole " + std::to_string(l));
      }
      s += static_cast<double>(weights[i]) * z / (l * (l - z));
    }
    return s;
  }

  template <class U>
  RationalHerglotz<U> cast() const {
    RationalHerglotz<U> out;
    for (const auto& p : poles) out.poles.push_back(convert<U>(p));
    for (const auto& w : weights) out.weights.push_back(convert<U>(w));
    out.numerator = numerator.template cast<U>();
    out.denominator = denominator.template cast<U>();
    return out;
  }
};

/// Minimum of Im m(z) over the samples; 0 for m identically zero.
template <class T>
double herglotz_probe(const RationalHerglotz<T>& m, const std::vector<std::complex<double>>& samples) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& z : samples) {
    for (const auto& p : m.poles) {
      if (z == std::complex<double>(static_cast<double>(p), 0.0)) {
        throw Error(ErrorCode::pole_hit, "sample coincides with a pole");
      }
    }
    if (!(z.imag() > 0)) throw Error(ErrorCode::invalid_argument, "sample not in the upper half plane");
    lo = std::min(lo, m(z).imag());
  }
  if (m.is_zero() || samples.empty()) return 0.0;
  return lo;
}

}  // namespace chspec
