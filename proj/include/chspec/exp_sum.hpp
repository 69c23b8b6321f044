#pragma once

#include <chspec/error.hpp>
#include <chspec/poly.hpp>

#include <array>
#include <cmath>
#include <cstdlib>

namespace chspec {

/// sum_{k=-3}^{3} c_k e^{k y}, the form taken on a gap by u, u^2, P and
/// their products up to cubic order.
struct ExpSum {
  static constexpr int max_exp = 3;
  std::array<double, 2 * max_exp + 1> c{};

  double& operator[](int k) { return c[static_cast<std::size_t>(k + max_exp)]; }
  double operator[](int k) const { return c[static_cast<std::size_t>(k + max_exp)]; }

  double operator()(double y) const {
    double s = 0;
    for (int k = -max_exp; k <= max_exp; ++k)
      if ((*this)[k] != 0) s += (*this)[k] * std::exp(k * y);
    return s;
  }

  friend ExpSum operator+(ExpSum a, const ExpSum& b) {
    for (std::size_t i = 0; i < a.c.size(); ++i) a.c[i] += b.c[i];
    return a;
  }
  friend ExpSum operator-(ExpSum a, const ExpSum& b) {
    for (std::size_t i = 0; i < a.c.size(); ++i) a.c[i] -= b.c[i];
    return a;
  }
  friend ExpSum operator*(double s, ExpSum a) {
    for (auto& v : a.c) v *= s;
    return a;
  }
  /// Product; exponents beyond +-3 must not occur.
  friend ExpSum operator*(const ExpSum& a, const ExpSum& b) {
    ExpSum r;
    for (int i = -max_exp; i <= max_exp; ++i) {
      if (a[i] == 0) continue;
      for (int j = -max_exp; j <= max_exp; ++j) {
        if (b[j] == 0) continue;
        if (std::abs(i + j) > max_exp) throw Error(ErrorCode::invalid_argument, "ExpSum exponent overflow");
        r[i + j] += a[i] * b[j];
      }
    }
    return r;
  }
};

namespace detail {

/// E_j(beta) = int_{-1}^{1} tau^j e^{beta tau} d tau for j = 0..jmax.
inline std::vector<double> exp_moments(double beta, int jmax) {
  std::vector<double> e(static_cast<std::size_t>(jmax) + 1, 0.0);
  if (std::abs(beta) <= 20.0) {
    for (int j = 0; j <= jmax; ++j) {
      double term = 1.0, sum = 0.0;
      for (int m = 0; m < 400; ++m) {
        if (m > 0) term *= beta / m;
        if ((j + m) % 2 == 0) sum += term * 2.0 / (j + m + 1);
        if (m > std::abs(beta) + 4 && std::abs(term) < 1e-18 * std::abs(sum)) break;
      }
      e[static_cast<std::size_t>(j)] = sum;
    }
    return e;
  }
  // Forward recurrence is stable for |beta| > jmax.
  const double ep = std::exp(beta), em = std::exp(-beta);
  e[0] = (ep - em) / beta;
  for (int j = 1; j <= jmax; ++j) {
    double sign = j % 2 == 0 ? 1.0 : -1.0;
    e[static_cast<std::size_t>(j)] = (ep - sign * em) / beta - j / beta * e[static_cast<std::size_t>(j - 1)];
  }
  return e;
}

}  // namespace detail

/// int_{x0}^{x1} e^{k (x - c)} q((x - xc) / rx) dx in closed form.
inline double exp_poly_integral(int k, double c, const Poly<double>& q, double xc, double rx, double x0,
                                double x1) {
  if (!(x1 > x0) || q.is_zero()) return 0.0;
  const double s0 = (x0 - xc) / rx, s1 = (x1 - xc) / rx;
  const double m = 0.5 * (s0 + s1), w = 0.5 * (s1 - s0);
  const double beta = k * rx * w;
  auto e = detail::exp_moments(beta, q.degree());
  // Taylor coefficients of q(m + w tau) in tau.
  Poly<double> d = q;
  double sum = 0.0, wpow = 1.0, fact = 1.0;
  for (int j = 0; j <= q.degree(); ++j) {
    if (j > 0) {
      d = d.derivative();
      wpow *= w;
      fact *= j;
    }
    sum += d(m) * wpow / fact * e[static_cast<std::size_t>(j)];
  }
  return rx * w * std::exp(k * (xc + rx * m - c)) * sum;
}

/// int_{x0}^{x1} f(x - c) q((x - xc) / rx) dx for an exponential sum f.
inline double exp_sum_integral(const ExpSum& f, double c, const Poly<double>& q, double xc, double rx, double x0,
                               double x1) {
  double s = 0.0;
  for (int k = -ExpSum::max_exp; k <= ExpSum::max_exp; ++k) {
    if (f[k] != 0) s += f[k] * exp_poly_integral(k, c, q, xc, rx, x0, x1);
  }
  return s;
}

}  // namespace chspec
