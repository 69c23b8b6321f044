#pragma once

#include <chspec/error.hpp>
#include <chspec/phase_space.hpp>
#include <chspec/poly_matrix.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace chspec {

/// Propagator across an interval of length l where a is constant.
template <class R = double>
PolyMatrix<R> interval_transfer(const R& a, const R& l) {
  if (!(l > R(0))) throw Error(ErrorCode::nonpositive_length, "interval length must be positive");
  R al = a * l;
  return PolyMatrix<R>{Poly<R>{R(1), -al}, Poly<R>{R(0), -l}, Poly<R>{R(0), a * al},
                       Poly<R>{R(1), al}};
}

/// Jump across a point mass b.
template <class R = double>
PolyMatrix<R> mass_transfer(const R& b) {
  if (b < R(0)) throw Error(ErrorCode::negative_mass, "point mass must be non-negative");
  return PolyMatrix<R>{Poly<R>::constant(R(1)), Poly<R>(), Poly<R>{R(0), b},
                       Poly<R>::constant(R(1))};
}

/// Transfer matrix together with coefficient-wise bounds on the rounding-free
/// magnitudes, used to decide which coefficients vanish.
template <class R>
struct BoundedTransfer {
  PolyMatrix<R> q;
  PolyMatrix<R> bound;
};

/// Q(z) = M(b_n) I(a_n, l_n) ... M(b_1) I(a_1, l_1).
template <class R>
BoundedTransfer<R> cumulative_transfer_bounded(const StringData<R>& s) {
  using std::abs;
  s.validate();
  BoundedTransfer<R> out;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const auto& iv = s.intervals[j];
    out.q = interval_transfer(iv.value, iv.length) * out.q;
    R aa = abs(iv.value);
    PolyMatrix<R> ib{Poly<R>{R(1), aa * iv.length}, Poly<R>{R(0), iv.length},
                     Poly<R>{R(0), aa * aa * iv.length}, Poly<R>{R(1), aa * iv.length}};
    out.bound = ib * out.bound;
    if (s.masses[j] != R(0)) {
      out.q = mass_transfer(s.masses[j]) * out.q;
      out.bound = mass_transfer(s.masses[j]) * out.bound;
    }
  }
  return out;
}

template <class R>
PolyMatrix<R> cumulative_transfer(const StringData<R>& s) {
  return cumulative_transfer_bounded(s).q;
}

/// Removes the high-order coefficients of p that lie below
/// 2^{-bits/2} times their magnitude bound.
template <class R>
Poly<R> trim_by_bound(const Poly<R>& p, const Poly<R>& bound, int bits) {
  using std::abs;
  using std::ldexp;
  std::vector<R> c = p.coefficients();
  while (!c.empty()) {
    int k = static_cast<int>(c.size()) - 1;
    if (abs(c.back()) > ldexp(bound[k], -bits / 2)) break;
    c.pop_back();
  }
  return Poly<R>(std::move(c));
}

namespace detail {

template <class S, class R>
Mat2<S> interval_numeric(const S& z, const R& a, const R& l) {
  S zl = z * S(l);
  S zal = zl * S(a);
  return Mat2<S>{S(1) - zal, -zl, zal * S(a), S(1) + zal};
}

template <class S, class R>
Mat2<S> mass_numeric(const S& z, const R& b) {
  return Mat2<S>{S(1), S(0), z * S(b), S(1)};
}

}  // namespace detail

/// Y(z, xi): product of all factors on [0, xi), left-continuous in xi.
template <class S = std::complex<double>, class R = double>
Mat2<S> eval_Y(const StringData<R>& s, const S& z, const R& xi) {
  if (xi < R(0)) throw Error(ErrorCode::invalid_argument, "xi must be non-negative");
  Mat2<S> y = Mat2<S>::identity();
  R left = R(0);
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (!(xi > left)) return y;
    R right = left + s.intervals[j].length;
    R upto = xi < right ? xi : right;
    y = detail::interval_numeric(z, s.intervals[j].value, R(upto - left)) * y;
    if (right < xi && s.masses[j] != R(0)) y = detail::mass_numeric(z, s.masses[j]) * y;
    left = right;
  }
  if (xi > left) y = detail::interval_numeric(z, R(0), R(xi - left)) * y;
  return y;
}

/// The full transfer matrix Q(z) as a numeric product.
template <class S, class R>
Mat2<S> full_transfer(const StringData<R>& s, const S& z) {
  Mat2<S> y = Mat2<S>::identity();
  for (std::size_t j = 0; j < s.size(); ++j) {
    y = detail::interval_numeric(z, s.intervals[j].value, s.intervals[j].length) * y;
    if (s.masses[j] != R(0)) y = detail::mass_numeric(z, s.masses[j]) * y;
  }
  return y;
}

/// Y(xi1) Y(xi0)^{-1}.
template <class S = std::complex<double>, class R = double>
Mat2<S> transfer_between(const StringData<R>& s, const S& z, const R& xi0, const R& xi1) {
  return eval_Y(s, z, xi1) * eval_Y(s, z, xi0).adjugate();
}

/// Value and left-continuous quasi-derivative f^[1] = f' - z u' f at x.
template <class S>
struct BasicSolutionVector {
  S value;
  S quasi_derivative;
  double x;
};

using SolutionVector = BasicSolutionVector<std::complex<double>>;

/// f g^[1] - f^[1] g for two solutions evaluated at the same point.
template <class S>
S wronskian_pair(const BasicSolutionVector<S>& f, const BasicSolutionVector<S>& g) {
  if (f.x != g.x) throw Error(ErrorCode::location_mismatch, "solutions evaluated at different points");
  return f.value * g.quasi_derivative - f.quasi_derivative * g.value;
}

/// Solution of -f'' + f/4 = z omega f + z^2 upsilon f with f(x0) = d1 and
/// f^[1](x0) = d2. Propagates the string vector
///   v = (z e^{x/2} f, -e^{-x/2} (f^[1] + (1/2 - z u) f))
/// with exact transfer factors in xi = e^x. S is the scalar of z (R or
/// std::complex<R>), R the working real type.
template <class S, class R = double>
class IvpSolution {
 public:
  IvpSolution(const PeakonPair& pair, S z, double x0, S d1, S d2)
      : pair_(pair), z_(z), x0_(x0), d1_(d1), d2_(d2) {
    using std::exp;
    for (const auto& e : site_events<R>(pair)) {
      xs_.push_back(e.x);
      bs_.push_back(R(exp(-e.x) * e.h));
      ps_.push_back(e.p);
    }
    const std::size_t n = xs_.size();
    as_.assign(n + 1, R(0));
    for (std::size_t j = n; j-- > 0;) as_[j] = as_[j + 1] - 2 * ps_[j] * R(exp(-xs_[j]));
    if (z_ != S(0)) {
      R ex = R(exp(R(x0) / 2));
      S u0 = S(eval_u<R>(pair_, x0));
      v0_ = {z_ * S(ex) * d1_, -(d2_ + (S(R(0.5)) - z_ * u0) * d1_) / S(ex)};
    }
  }

  S z() const { return z_; }

  BasicSolutionVector<S> operator()(double x) const {
    using std::exp;
    if (z_ == S(0)) {
      // f = A e^{x/2} + B e^{-x/2}, f^[1] = f'.
      R e0 = R(exp(R(x0_) / 2));
      S A = (d1_ / S(R(2)) + d2_) / S(e0);
      S B = (d1_ / S(R(2)) - d2_) * S(e0);
      R e = R(exp(R(x) / 2));
      S f = A * S(e) + B / S(e);
      S fd = A * S(e) / S(R(2)) - B / S(e) / S(R(2));
      return {f, fd, x};
    }
    std::array<S, 2> v;
    if (x >= x0_) {
      v = transfer(R(x0_), R(x)).apply(v0_);
    } else {
      v = transfer(R(x), R(x0_)).adjugate().apply(v0_);
    }
    R ex = R(exp(R(x) / 2));
    S f = v[0] / (z_ * S(ex));
    S u = S(eval_u<R>(pair_, x));
    S fq = -v[1] * S(ex) - (S(R(0.5)) - z_ * u) * f;
    return {f, fq, x};
  }

 private:
  static R gap_length(const R& xa, const R& xb) {
    using std::exp;
    using std::expm1;
    return R(exp(xa) * expm1(xb - xa));
  }

  /// Product of the factors on [e^{xa}, e^{xb}), xa <= xb.
  Mat2<S> transfer(const R& xa, const R& xb) const {
    Mat2<S> t = Mat2<S>::identity();
    R cur = xa;
    std::size_t k = static_cast<std::size_t>(std::lower_bound(xs_.begin(), xs_.end(), xa) - xs_.begin());
    // Gap value on (x_{k-1}, x_k) is as_[k].
    while (k < xs_.size() && xs_[k] < xb) {
      if (xs_[k] > cur) t = detail::interval_numeric(z_, as_[k], gap_length(cur, xs_[k])) * t;
      if (bs_[k] != R(0)) t = detail::mass_numeric(z_, bs_[k]) * t;
      cur = xs_[k];
      ++k;
    }
    if (xb > cur) t = detail::interval_numeric(z_, as_[k], gap_length(cur, xb)) * t;
    return t;
  }

  PeakonPair pair_;
  S z_;
  double x0_;
  S d1_, d2_;
  std::array<S, 2> v0_{};
  std::vector<R> xs_, bs_, ps_, as_;
};

/// Complex double-precision solution evaluator.
inline IvpSolution<std::complex<double>, double> solve_ivp(const PeakonPair& pair, std::complex<double> z,
                                                           double x0, std::complex<double> d1,
                                                           std::complex<double> d2) {
  return IvpSolution<std::complex<double>, double>(pair, z, x0, d1, d2);
}

/// Solution normalised like e^{x/2} at -infinity (minus side) or like
/// e^{-x/2} at +infinity (plus side), for real or complex z.
template <class S, class R = double>
IvpSolution<S, R> jost_solution(const PeakonPair& pair, S z, Side side) {
  using std::exp;
  if (side == Side::minus) {
    double x0 = pair.empty() ? 0.0 : pair.sites().front() - 1.0;
    R e = R(exp(R(x0) / 2));
    S u0 = S(eval_u<R>(pair, x0));
    return IvpSolution<S, R>(pair, z, x0, S(e), (S(R(0.5)) - z * u0) * S(e));
  }
  double x0 = pair.empty() ? 0.0 : pair.sites().back() + 1.0;
  R e = R(exp(-R(x0) / 2));
  S u0 = S(eval_u<R>(pair, x0));
  return IvpSolution<S, R>(pair, z, x0, S(e), (z * u0 - S(R(0.5))) * S(e));
}

}  // namespace chspec
