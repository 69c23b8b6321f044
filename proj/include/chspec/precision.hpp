#pragma once

#include <chspec/error.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <type_traits>

namespace chspec {

using Real128 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<128, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;
using Real256 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

inline constexpr int default_precision_bits = 128;
inline constexpr int max_precision_bits = 256;

/// Knobs shared by every high-level entry point.
struct Options {
  /// Working significand for polynomial and continued-fraction arithmetic.
  /// Requests are rounded up to the nearest supported tier (53, 128, 256).
  int precision_bits = default_precision_bits;
  /// Retry once at the next tier when a numerical self-check fails.
  bool escalate = true;
};

template <class R>
inline constexpr int significand_bits = std::numeric_limits<R>::digits;

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};
template <class T>
inline constexpr bool is_complex_v = is_complex<T>::value;

/// Converts between the supported scalar types (double, Real128, Real256,
/// std::complex<double>).
template <class To, class From>
To convert(const From& v) {
  if constexpr (std::is_same_v<To, From>) {
    return v;
  } else if constexpr (is_complex_v<To> && is_complex_v<From>) {
    using T = typename To::value_type;
    return To(convert<T>(v.real()), convert<T>(v.imag()));
  } else if constexpr (is_complex_v<To>) {
    using T = typename To::value_type;
    return To(convert<T>(v), T(0));
  } else if constexpr (std::is_same_v<To, double>) {
    return static_cast<double>(v);
  } else {
    return To(v);
  }
}

/// Tier used for a requested precision.
inline int precision_tier(int bits) {
  if (bits < 53) {
    throw Error(ErrorCode::invalid_argument,
                "precision must be at least 53 bits, got " + std::to_string(bits));
  }
  if (bits <= 53) return 53;
  if (bits <= 128) return 128;
  if (bits <= max_precision_bits) return max_precision_bits;
  throw Error(ErrorCode::invalid_argument,
              "precision above " + std::to_string(max_precision_bits) + " bits is not supported");
}

/// Next tier for escalation, or 0 when already at the top.
inline int escalated_precision(int bits) {
  int tier = precision_tier(bits);
  if (tier == 53) return 128;
  if (tier == 128) return max_precision_bits;
  return 0;
}

/// Invokes `f.template operator()<R>()` with R matching the requested tier.
template <class F>
decltype(auto) with_precision(int bits, F&& f) {
  switch (precision_tier(bits)) {
    case 53: return f.template operator()<double>();
    case 128: return f.template operator()<Real128>();
    default: return f.template operator()<Real256>();
  }
}

/// Runs `f(bits)` at the requested tier and, if it throws a numerical
/// chspec::Error and escalation is enabled, once more at the next tier.
template <class F>
decltype(auto) with_escalation(const Options& opts, F&& f) {
  try {
    return f(precision_tier(opts.precision_bits));
  } catch (const Error& e) {
    int next = escalated_precision(opts.precision_bits);
    if (!opts.escalate || !e.numerical() || next == 0) throw;
    return f(next);
  }
}

}  // namespace chspec
