#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace fracsim {

// Exact fraction with 64-bit parts; arithmetic throws std::overflow_error when
// a reduced result no longer fits.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  int sign() const { return (num_ > 0) - (num_ < 0); }
  bool is_zero() const { return num_ == 0; }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend int compare(const Rational& a, const Rational& b);
  friend bool operator<(const Rational& a, const Rational& b) { return compare(a, b) < 0; }

 private:
  static Rational from_wide(__int128 num, __int128 den);
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// A real parameter that remembers its exact rational value when it has one.
// Arithmetic keeps exactness while it can and silently drops it on overflow.
struct Number {
  double value = 0.0;
  std::optional<Rational> exact;

  Number() = default;
  Number(double v) : value(v) {}
  Number(int v) : value(v), exact(Rational(v)) {}
  Number(const Rational& q) : value(q.to_double()), exact(q) {}

  static Number parse(const std::string& text);
  // The exact binary value of a double as a fraction over a power of two,
  // falling back to an inexact Number when the parts do not fit.
  static Number from_double(double v);
  bool is_exact() const { return exact.has_value(); }
  std::string str() const;

  Number operator-() const;
};

Number operator+(const Number& a, const Number& b);
Number operator-(const Number& a, const Number& b);
Number operator*(const Number& a, const Number& b);
Number operator/(const Number& a, const Number& b);

// Three-way comparison: exact when both sides are exact, otherwise values
// closer than `tol` compare equal.
int compare(const Number& a, const Number& b, double tol = 1e-12);
Number max(const Number& a, const Number& b);

}  // namespace fracsim
