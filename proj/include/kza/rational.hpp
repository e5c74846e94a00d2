#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace kza {

struct rational_overflow : std::overflow_error {
  rational_overflow() : std::overflow_error("rational arithmetic overflow") {}
};

// Exact fraction over int64 with checked arithmetic. The graded ideal
// eliminations keep coefficients tiny, so 64-bit numerators are plenty;
// any overflow throws instead of corrupting a basis.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}
  Rational(long long n, long long d) : Rational(__int128(n), __int128(d), raw{}) {}

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_zero() const { return num_ == 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(__int128(a.num_) * b.den_ + __int128(b.num_) * a.den_,
                    __int128(a.den_) * b.den_, raw{});
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(__int128(a.num_) * b.den_ - __int128(b.num_) * a.den_,
                    __int128(a.den_) * b.den_, raw{});
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(__int128(a.num_) * b.num_, __int128(a.den_) * b.den_, raw{});
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return Rational(__int128(a.num_) * b.den_, __int128(a.den_) * b.num_, raw{});
  }
  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

  double to_double() const { return double(num_) / double(den_); }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  static Rational parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  }

private:
  struct raw {};

  Rational(__int128 n, __int128 d, raw) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    num_ = checked(n);
    den_ = checked(d);
  }

  static long long checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw rational_overflow();
    return (long long)v;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }

  long long num_;
  long long den_;
};

}  // namespace kza
