#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dho {

// Exact rational number. Values are kept reduced with a positive denominator
// in int64 range; intermediates run through __int128 and narrowing past
// int64 throws std::overflow_error instead of silently wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(long long numerator) : num_(numerator), den_(1) {}  // NOLINT: implicit by design
  Rational(long long numerator, long long denominator) {
    *this = make(numerator, denominator);
  }

  long long num() const { return static_cast<long long>(num_); }
  long long den() const { return static_cast<long long>(den_); }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return make(a.num_ * b.den_, a.den_ * b.num_);
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
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  Rational abs() const { return num_ < 0 ? -*this : *this; }

  // Exponent is small and non-negative (operator polynomials cap at 16).
  Rational pow(int e) const {
    if (e < 0) throw std::domain_error("negative rational power");
    Rational r(1);
    for (int i = 0; i < e; ++i) r *= *this;
    return r;
  }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string to_string() const {
    std::string s = std::to_string(num());
    if (den_ != 1) s += "/" + std::to_string(den());
    return s;
  }

  // Accepts "3", "-3", "3/4", "0.25", "2.5e-3", "1e6". Decimal forms are
  // exact decimal fractions; a '/' form must be integer/integer.
  static Rational parse(std::string_view text);

 private:
  using i128 = __int128;

  static i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational make(i128 n, i128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (n == 0) d = 1;
    i128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr i128 lo = std::numeric_limits<std::int64_t>::min();
    constexpr i128 hi = std::numeric_limits<std::int64_t>::max();
    if (n < lo || n > hi || d > hi)
      throw std::overflow_error("rational magnitude exceeds 64-bit range");
    Rational r;
    r.num_ = n;
    r.den_ = d;
    return r;
  }

  i128 num_ = 0;
  i128 den_ = 1;
};

inline Rational Rational::parse(std::string_view text) {
  std::size_t pos = 0;
  auto fail = [&]() -> void {
    throw std::invalid_argument("bad rational literal: '" + std::string(text) + "'");
  };
  if (text.empty()) fail();

  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }

  auto digits = [&](i128& out) {
    std::size_t start = pos;
    out = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      out = out * 10 + (text[pos] - '0');
      if (out > i128(1) << 100) throw std::overflow_error("rational literal too large");
      ++pos;
    }
    return pos > start;
  };

  i128 ipart = 0;
  if (!digits(ipart)) fail();

  i128 num = ipart;
  i128 den = 1;

  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    i128 d = 0;
    if (!digits(d) || pos != text.size()) fail();
    return make(negative ? -num : num, d);
  }

  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t start = pos;
    i128 frac = 0;
    if (!digits(frac)) fail();
    for (std::size_t i = start; i < pos; ++i) {
      den *= 10;
      if (den > i128(1) << 100) throw std::overflow_error("rational literal too small");
    }
    num = num * den + frac;
  }

  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool eneg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      eneg = text[pos] == '-';
      ++pos;
    }
    i128 e = 0;
    if (!digits(e)) fail();
    if (e > 40) throw std::overflow_error("rational exponent out of range");
    for (i128 i = 0; i < e; ++i) {
      if (eneg)
        den *= 10;
      else
        num *= 10;
    }
  }

  if (pos != text.size()) fail();
  return make(negative ? -num : num, den);
}

// Complex number with exact rational parts; the coefficient field of the
// operator polynomials.
struct RationalComplex {
  Rational re;
  Rational im;

  constexpr RationalComplex() = default;
  RationalComplex(Rational real) : re(real) {}  // NOLINT: implicit by design
  RationalComplex(Rational real, Rational imag) : re(real), im(imag) {}

  static RationalComplex i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }
  bool is_imaginary() const { return re.is_zero() && !im.is_zero(); }

  RationalComplex conj() const { return {re, -im}; }

  friend RationalComplex operator+(const RationalComplex& a, const RationalComplex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend RationalComplex operator-(const RationalComplex& a, const RationalComplex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend RationalComplex operator*(const RationalComplex& a, const RationalComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend RationalComplex operator/(const RationalComplex& a, const RationalComplex& b) {
    Rational d = b.re * b.re + b.im * b.im;
    if (d.is_zero()) throw std::domain_error("rational complex division by zero");
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  RationalComplex operator-() const { return {-re, -im}; }
  RationalComplex& operator+=(const RationalComplex& o) { return *this = *this + o; }
  RationalComplex& operator-=(const RationalComplex& o) { return *this = *this - o; }
  RationalComplex& operator*=(const RationalComplex& o) { return *this = *this * o; }

  friend bool operator==(const RationalComplex& a, const RationalComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const RationalComplex& a, const RationalComplex& b) {
    return !(a == b);
  }
};

}  // namespace dho
