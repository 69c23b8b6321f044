#pragma once

#include <chspec/precision.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace chspec {

/// Dense polynomial in z, coefficients stored lowest order first.
template <class T>
class Poly {
 public:
  using value_type = T;

  Poly() = default;
  explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim_zeros(); }
  Poly(std::initializer_list<T> coeffs) : c_(coeffs) { trim_zeros(); }

  static Poly constant(const T& v) { return Poly(std::vector<T>{v}); }
  static Poly monomial(const T& v, int power) {
    std::vector<T> c(static_cast<std::size_t>(power) + 1, T(0));
    c.back() = v;
    return Poly(std::move(c));
  }

  /// Degree, -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coefficients() const { return c_; }
  std::size_t size() const { return c_.size(); }

  /// Coefficient of z^k, zero outside the stored range.
  T operator[](int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return T(0);
    return c_[static_cast<std::size_t>(k)];
  }
  T leading() const { return c_.empty() ? T(0) : c_.back(); }

  template <class S>
  S operator()(const S& z) const {
    S acc = S(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + convert<S>(*it);
    return acc;
  }

  /// Complex evaluation in double precision.
  std::complex<double> eval_complex(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + static_cast<double>(*it);
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<T> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * T(static_cast<int>(k));
    return Poly(std::move(d));
  }

  /// Drops exactly-zero high-order coefficients.
  void trim_zeros() {
    while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
  }

  /// Copy with high-order coefficients below 2^{-bits/2} max|c| removed.
  Poly trimmed(int precision_bits) const {
    using std::abs;
    using std::ldexp;
    T scale = T(0);
    for (const auto& v : c_) scale = std::max<T>(scale, T(abs(v)));
    T thr = ldexp(scale, -precision_bits / 2);
    std::vector<T> c = c_;
    while (!c.empty() && T(abs(c.back())) <= thr) c.pop_back();
    return Poly(std::move(c));
  }

  template <class U>
  Poly<U> cast() const {
    std::vector<U> c;
    c.reserve(c_.size());
    for (const auto& v : c_) c.push_back(convert<U>(v));
    return Poly<U>(std::move(c));
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim_zeros();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim_zeros();
    return *this;
  }
  Poly& operator*=(const T& s) {
    for (auto& v : c_) v *= s;
    trim_zeros();
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend Poly operator*(Poly a, const T& s) { return a *= s; }
  friend Poly operator*(const T& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<T> c(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Multiplies by z^k.
  Poly shifted(int k) const {
    if (is_zero()) return Poly();
    std::vector<T> c(static_cast<std::size_t>(k), T(0));
    c.insert(c.end(), c_.begin(), c_.end());
    return Poly(std::move(c));
  }

  std::string to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << '[';
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (k) os << ", ";
      os << static_cast<double>(c_[k]);
    }
    os << ']';
    return os.str();
  }

 private:
  std::vector<T> c_;
};

/// Product of (1 - z/r) over the given roots.
template <class T>
Poly<T> poly_from_roots(const std::vector<T>& roots) {
  Poly<T> p = Poly<T>::constant(T(1));
  for (const auto& r : roots) p = p * Poly<T>{T(1), T(-1) / r};
  return p;
}

}  // namespace chspec
