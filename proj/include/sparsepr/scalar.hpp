#pragma once

// Scalar policy. Every algorithm in the library is a template over the
// scalar type T, which is either `double` (continuous instances, compared
// with an explicit tolerance) or `Rational` (integer/rational instances,
// compared exactly).

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>

#include "sparsepr/error.hpp"

namespace sparsepr {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

/// Matching tolerances for floating mode. Ignored for exact scalars.
///
/// `position` is absolute and applies to locations and lags; `coefficient`
/// is relative (scaled by max(1, |a|, |b|)) and applies to weights.
struct Tolerance {
  double position = 1e-9;
  double coefficient = 1e-9;
};

template <Scalar T>
double to_double(const T& v) {
  if constexpr (is_exact_v<T>) {
    return v.template convert_to<double>();
  } else {
    return v;
  }
}

template <Scalar T>
T from_integer(long long v) {
  return T(v);
}

template <Scalar T>
T abs_value(const T& v) {
  return v < T(0) ? T(-v) : v;
}

template <Scalar T>
bool is_zero(const T& v) {
  return v == T(0);
}

/// Position/lag equality under the active policy.
template <Scalar T>
bool same_position(const T& a, const T& b, const Tolerance& tol) {
  if constexpr (is_exact_v<T>) {
    return a == b;
  } else {
    return std::abs(a - b) <= tol.position;
  }
}

/// Three-way position comparison; values within tolerance compare equal.
template <Scalar T>
int compare_position(const T& a, const T& b, const Tolerance& tol) {
  if (same_position(a, b, tol)) return 0;
  return a < b ? -1 : 1;
}

/// Sign of a position value, with |v| <= tol treated as zero.
template <Scalar T>
int position_sign(const T& v, const Tolerance& tol) {
  return compare_position(v, T(0), tol);
}

template <Scalar T>
bool same_coefficient(const T& a, const T& b, const Tolerance& tol) {
  if constexpr (is_exact_v<T>) {
    return a == b;
  } else {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= tol.coefficient * scale;
  }
}

template <Scalar T>
int compare_coefficient(const T& a, const T& b, const Tolerance& tol) {
  if (same_coefficient(a, b, tol)) return 0;
  return a < b ? -1 : 1;
}

inline std::optional<BigInt> exact_isqrt(const BigInt& v) {
  if (v < 0) return std::nullopt;
  BigInt r = boost::multiprecision::sqrt(v);
  if (r * r != v) return std::nullopt;
  return r;
}

/// Square root of a nonnegative scalar. In exact mode the result must be
/// rational; otherwise NotRepresentable is thrown.
template <Scalar T>
T sqrt_value(const T& v) {
  if constexpr (is_exact_v<T>) {
    if (v < 0) throw Error(ErrorKind::NotRepresentable, "square root of a negative rational");
    auto num = exact_isqrt(boost::multiprecision::numerator(v));
    auto den = exact_isqrt(boost::multiprecision::denominator(v));
    if (!num || !den) {
      throw Error(ErrorKind::NotRepresentable,
                  "square root of " + v.str() + " is not rational; use floating mode");
    }
    return Rational(*num, *den);
  } else {
    if (v < 0) throw Error(ErrorKind::NotRepresentable, "square root of a negative value");
    return std::sqrt(v);
  }
}

/// Exact scalars are written as "p/q" strings.
inline std::string format_rational(const Rational& v) {
  return boost::multiprecision::numerator(v).str() + "/" +
         boost::multiprecision::denominator(v).str();
}

/// Accepts "p", "p/q" and optional surrounding whitespace.
inline Rational parse_rational(const std::string& text) {
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t");
    const auto last = s.find_last_not_of(" \t");
    return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
  };
  const std::string s = trim(text);
  auto is_integer = [](const std::string& part) {
    if (part.empty()) return false;
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') return false;
    }
    return true;
  };
  auto to_int = [](const std::string& part) {
    return BigInt(part[0] == '+' ? part.substr(1) : part);
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (!is_integer(s)) throw Error(ErrorKind::ParseError, "not a rational: '" + text + "'");
    return Rational(to_int(s));
  }
  const std::string num = trim(s.substr(0, slash));
  const std::string den = trim(s.substr(slash + 1));
  if (!is_integer(num) || !is_integer(den)) {
    throw Error(ErrorKind::ParseError, "not a rational: '" + text + "'");
  }
  BigInt d = to_int(den);
  if (d == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + text + "'");
  return Rational(to_int(num), d);
}

}  // namespace sparsepr
