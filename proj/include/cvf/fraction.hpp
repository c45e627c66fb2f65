// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cvf {

/// Nonnegative exact rational, always stored in lowest terms.
///
/// Coefficients of chunks are built from literals by addition and
/// subtraction only, so an int64 numerator/denominator pair is enough for
/// every program this tool handles. Arithmetic that would overflow throws
/// std::overflow_error, subtraction below zero throws std::domain_error.
class Fraction {
 public:
  constexpr Fraction() = default;

  Fraction(std::int64_t num, std::int64_t den = 1) {
    if (den <= 0) throw std::invalid_argument("fraction denominator must be positive");
    if (num < 0) throw std::domain_error("fraction must be nonnegative");
    normalize(num, den);
  }

  static Fraction zero() { return {}; }
  static Fraction one() { return Fraction(1); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }

  Fraction operator+(const Fraction& o) const {
    __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
    __int128 d = static_cast<__int128>(den_) * o.den_;
    return from_wide(n, d);
  }

  Fraction operator-(const Fraction& o) const {
    __int128 n = static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_;
    if (n < 0) throw std::domain_error("fraction subtraction below zero");
    __int128 d = static_cast<__int128>(den_) * o.den_;
    return from_wide(n, d);
  }

  Fraction& operator+=(const Fraction& o) { return *this = *this + o; }
  Fraction& operator-=(const Fraction& o) { return *this = *this - o; }

  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Parses `p` or `p/q` with decimal digits only.
  static std::optional<Fraction> parse(std::string_view text) {
    auto slash = text.find('/');
    auto digits = [](std::string_view s, std::int64_t& out) {
      if (s.empty() || s.size() > 18) return false;
      out = 0;
      for (char c : s) {
        if (c < '0' || c > '9') return false;
        out = out * 10 + (c - '0');
      }
      return true;
    };
    std::int64_t n = 0, d = 1;
    if (slash == std::string_view::npos) {
      if (!digits(text, n)) return std::nullopt;
    } else if (!digits(text.substr(0, slash), n) || !digits(text.substr(slash + 1), d) || d == 0) {
      return std::nullopt;
    }
    return Fraction(n, d);
  }

 private:
  void normalize(std::int64_t n, std::int64_t d) {
    std::int64_t g = std::gcd(n, d);
    if (g == 0) g = 1;
    num_ = n / g;
    den_ = num_ == 0 ? 1 : d / g;
  }

  static Fraction from_wide(__int128 n, __int128 d) {
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a == 0) a = 1;
    n /= a;
    d /= a;
    constexpr __int128 kMax = INT64_MAX;
    if (n > kMax || d > kMax) throw std::overflow_error("fraction overflow");
    Fraction f;
    f.num_ = static_cast<std::int64_t>(n);
    f.den_ = n == 0 ? 1 : static_cast<std::int64_t>(d);
    return f;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace cvf
