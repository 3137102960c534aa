#include "fracsim/rational.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fracsim/errors.hpp"

namespace fracsim {

namespace {

__int128 gcd_wide(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() + 1 &&
         v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = gcd_wide(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  if (!fits(num) || !fits(den)) throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ +
                                 static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_,
                             static_cast<__int128>(a.den_) * b.num_);
}

int compare(const Rational& a, const Rational& b) {
  __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  return (lhs > rhs) - (lhs < rhs);
}

namespace {

// Parses an unsigned decimal literal such as "12", "0.125" or "3.5e-2" into an
// exact fraction. Returns nullopt if the digits do not fit.
std::optional<Rational> parse_decimal(const std::string& text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  __int128 mantissa = 0;
  int scale = 0;
  bool any_digit = false;
  bool after_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      any_digit = true;
      mantissa = mantissa * 10 + (c - '0');
      if (mantissa > static_cast<__int128>(1) << 100) return std::nullopt;
      if (after_point) --scale;
    } else if (c == '.' && !after_point) {
      after_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) return std::nullopt;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') return std::nullopt;
    ++pos;
    std::size_t used = 0;
    int exponent = 0;
    try {
      exponent = std::stoi(text.substr(pos), &used);
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (pos + used != text.size()) return std::nullopt;
    scale += exponent;
  }
  if (scale > 30 || scale < -30) return std::nullopt;
  __int128 den = 1;
  for (int i = 0; i < -scale; ++i) den *= 10;
  for (int i = 0; i < scale; ++i) mantissa *= 10;
  if (negative) mantissa = -mantissa;
  __int128 g = gcd_wide(mantissa, den);
  if (g > 1) {
    mantissa /= g;
    den /= g;
  }
  if (!fits(mantissa) || !fits(den)) return std::nullopt;
  return Rational(static_cast<std::int64_t>(mantissa), static_cast<std::int64_t>(den));
}

template <class Op>
Number combine(const Number& a, const Number& b, double value, Op op) {
  Number out(value);
  if (a.exact && b.exact) {
    try {
      out.exact = op(*a.exact, *b.exact);
      out.value = out.exact->to_double();
    } catch (const std::overflow_error&) {
      out.exact.reset();
    }
  }
  return out;
}

}  // namespace

Number Number::parse(const std::string& text) {
  auto bad = [&]() {
    return Error(ErrorKind::InvalidParameter, "not a number: '" + text + "'");
  };
  if (text.empty()) throw bad();
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    auto num = parse_decimal(text.substr(0, slash));
    auto den = parse_decimal(text.substr(slash + 1));
    if (!num || !den) throw bad();
    if (den->is_zero()) throw Error(ErrorKind::InvalidParameter, "zero denominator in '" + text + "'");
    try {
      return Number(*num / *den);
    } catch (const std::overflow_error&) {
      return Number(num->to_double() / den->to_double());
    }
  }
  if (auto q = parse_decimal(text)) return Number(*q);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw bad();
  }
  if (used != text.size()) throw bad();
  return Number(v);
}

Number Number::from_double(double v) {
  if (!std::isfinite(v)) return Number(v);
  if (v == 0.0) return Number(0);
  int e = 0;
  const double frac = std::frexp(v, &e);  // v = frac·2^e, 0.5 ≤ |frac| < 1
  auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
  int shift = 53 - e;  // v = mant / 2^shift
  while (shift > 0 && (mant & 1) == 0) {
    mant /= 2;
    --shift;
  }
  if (shift > 62 || shift < -9) return Number(v);
  if (shift <= 0) return Number(Rational(mant * (std::int64_t{1} << -shift)));
  return Number(Rational(mant, std::int64_t{1} << shift));
}

std::string Number::str() const {
  if (exact) return exact->str();
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Number Number::operator-() const {
  Number out(-value);
  if (exact) out.exact = -*exact;
  return out;
}

Number operator+(const Number& a, const Number& b) {
  return combine(a, b, a.value + b.value, [](const Rational& x, const Rational& y) { return x + y; });
}

Number operator-(const Number& a, const Number& b) {
  return combine(a, b, a.value - b.value, [](const Rational& x, const Rational& y) { return x - y; });
}

Number operator*(const Number& a, const Number& b) {
  return combine(a, b, a.value * b.value, [](const Rational& x, const Rational& y) { return x * y; });
}

Number operator/(const Number& a, const Number& b) {
  if (b.exact && b.exact->is_zero()) return Number(a.value / 0.0);
  return combine(a, b, a.value / b.value, [](const Rational& x, const Rational& y) { return x / y; });
}

int compare(const Number& a, const Number& b, double tol) {
  if (a.exact && b.exact) return compare(*a.exact, *b.exact);
  double diff = a.value - b.value;
  if (std::abs(diff) < tol) return 0;
  return diff > 0 ? 1 : -1;
}

Number max(const Number& a, const Number& b) { return compare(a, b, 0.0) >= 0 ? a : b; }

}  // namespace fracsim
