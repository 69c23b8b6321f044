#pragma once

#include <chspec/poly.hpp>

#include <array>
#include <complex>
#include <sstream>
#include <string>

namespace chspec {

/// Plain 2x2 matrix over a scalar type.
template <class S>
struct Mat2 {
  S a11{1}, a12{0}, a21{0}, a22{1};

  static Mat2 identity() { return Mat2{S(1), S(0), S(0), S(1)}; }
  S det() const { return a11 * a22 - a12 * a21; }
  /// Inverse of a unimodular matrix.
  Mat2 adjugate() const { return Mat2{a22, -a12, -a21, a11}; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return Mat2{x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
                x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }
  std::array<S, 2> apply(const std::array<S, 2>& v) const {
    return {a11 * v[0] + a12 * v[1], a21 * v[0] + a22 * v[1]};
  }
};

/// 2x2 matrix with polynomial entries in z.
template <class T>
struct PolyMatrix {
  Poly<T> a11 = Poly<T>::constant(T(1));
  Poly<T> a12;
  Poly<T> a21;
  Poly<T> a22 = Poly<T>::constant(T(1));

  static PolyMatrix identity() { return PolyMatrix{}; }

  const Poly<T>& entry(int row, int col) const {
    if (row == 1) return col == 1 ? a11 : a12;
    return col == 1 ? a21 : a22;
  }

  Poly<T> det() const { return a11 * a22 - a12 * a21; }
  int max_degree() const {
    return std::max({a11.degree(), a12.degree(), a21.degree(), a22.degree()});
  }

  friend PolyMatrix operator*(const PolyMatrix& x, const PolyMatrix& y) {
    return PolyMatrix{x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
                      x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }

  template <class S>
  Mat2<S> operator()(const S& z) const {
    return Mat2<S>{a11(z), a12(z), a21(z), a22(z)};
  }

  Mat2<std::complex<double>> eval_complex(std::complex<double> z) const {
    return {a11.eval_complex(z), a12.eval_complex(z), a21.eval_complex(z), a22.eval_complex(z)};
  }

  template <class U>
  PolyMatrix<U> cast() const {
    return PolyMatrix<U>{a11.template cast<U>(), a12.template cast<U>(),
                         a21.template cast<U>(), a22.template cast<U>()};
  }

  /// Coefficient lists, lowest order first, row by row.
  std::string to_debug_string() const {
    std::ostringstream os;
    os << "[[" << a11.to_string() << ", " << a12.to_string() << "], [" << a21.to_string()
       << ", " << a22.to_string() << "]]";
    return os.str();
  }
};

}  // namespace chspec
