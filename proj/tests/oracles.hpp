#pragma once

// Reference computations built directly on the jump conditions of
// -f'' + f/4 = z omega f + z^2 upsilon f for peakon data, independent of the
// string-coordinate machinery. Between sites f = A e^{x/2} + B e^{-x/2};
// across x_j, f' jumps by -(2 p_j z + h_j z^2) f(x_j).

#include <chspec/phase_space.hpp>
#include <chspec/precision.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace chspec::oracle {

template <class T>
struct Coeffs {
  T A, B;
};

/// Coefficients of the solution equal to e^{x/2} left of all sites, on
/// every gap: result[k] holds (A, B) left of site k, result[n] past the end.
template <class T>
std::vector<Coeffs<T>> minus_solution(const PeakonPair& pair, T z) {
  using std::exp;
  using boost::multiprecision::exp;
  std::vector<Coeffs<T>> out{{T(1), T(0)}};
  for (std::size_t j = 0; j < pair.size(); ++j) {
    const T x = T(pair.sites()[j]);
    const T ep = exp(x / T(2)), em = exp(-x / T(2));
    const auto [A, B] = out.back();
    const T f = A * ep + B * em;
    const T jump = -(T(2 * pair.weights()[j]) * z + T(pair.atoms()[j]) * z * z) * f;
    // dA e^{x/2}/2 - dB e^{-x/2}/2 = jump with dA e^{x/2} + dB e^{-x/2} = 0.
    out.push_back({A + jump / ep, B - jump / em});
  }
  return out;
}

/// W(z): the e^{x/2} coefficient of the minus solution past the last site.
template <class T>
T wronskian(const PeakonPair& pair, T z) {
  return minus_solution(pair, z).back().A;
}

/// Coupling constant at an eigenvalue: the e^{-x/2} coefficient past the end.
/// The eigenvalue is first refined on W = 0 by secant steps in 128 bits,
/// since B is sensitive to the rounding of a double eigenvalue.
inline double coupling(const PeakonPair& pair, double lambda) {
  using R = Real128;
  R z0 = R(lambda), z1 = R(lambda) * R(1 + 1e-9);
  R w0 = wronskian(pair, z0), w1 = wronskian(pair, z1);
  for (int it = 0; it < 40 && w1 != w0; ++it) {
    R z2 = z1 - w1 * (z1 - z0) / (w1 - w0);
    z0 = z1;
    w0 = w1;
    z1 = z2;
    w1 = wronskian(pair, z1);
    if (abs(z1 - z0) <= abs(z1) * R(1e-36)) break;
  }
  return static_cast<double>(minus_solution(pair, z1).back().B);
}

/// Value of the minus solution at x.
template <class T>
T minus_value(const PeakonPair& pair, T z, long double x) {
  auto cs = minus_solution(pair, z);
  std::size_t k = 0;
  while (k < pair.size() && pair.sites()[k] < x) ++k;
  return cs[k].A * T(std::exp(x / 2)) + cs[k].B * T(std::exp(-x / 2));
}

/// gamma^2_- = sum (2 p_j + 2 lambda h_j) phi_-(x_j)^2.
inline long double norming_minus(const PeakonPair& pair, long double lambda) {
  long double g = 0;
  for (std::size_t j = 0; j < pair.size(); ++j) {
    long double f = minus_value<long double>(pair, lambda, pair.sites()[j]);
    g += (2 * pair.weights()[j] + 2 * lambda * pair.atoms()[j]) * f * f;
  }
  return g;
}

/// int u dx = 2 sum p.
inline long double integral_u(const PeakonPair& pair) {
  long double s = 0;
  for (double p : pair.weights()) s += 2.0L * p;
  return s;
}

/// Composite Gauss-Legendre quadrature of f on [a, b] split at the given
/// breakpoints, 8 nodes per piece times `sub` equal subdivisions.
template <class F>
long double integrate(F&& f, long double a, long double b, const std::vector<double>& breaks, int sub = 16) {
  static const long double nodes[8] = {-0.9602898564975362316835609L, -0.7966664774136267395915539L,
                                       -0.5255324099163289858177390L, -0.1834346424956498049394761L,
                                       0.1834346424956498049394761L,  0.5255324099163289858177390L,
                                       0.7966664774136267395915539L,  0.9602898564975362316835609L};
  static const long double weights[8] = {0.1012285362903762591525314L, 0.2223810344533744705443560L,
                                         0.3137066458778872873379622L, 0.3626837833783619829651504L,
                                         0.3626837833783619829651504L, 0.3137066458778872873379622L,
                                         0.2223810344533744705443560L, 0.1012285362903762591525314L};
  std::vector<long double> pts{a};
  for (double x : breaks)
    if (x > a && x < b) pts.push_back(x);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  long double total = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const long double h = (pts[i + 1] - pts[i]) / sub;
    for (int s = 0; s < sub; ++s) {
      const long double lo = pts[i] + s * h, mid = lo + h / 2;
      for (int q = 0; q < 8; ++q) total += weights[q] * h / 2 * f(mid + nodes[q] * h / 2);
    }
  }
  return total;
}

}  // namespace chspec::oracle
