#include "fracsim/specfun.hpp"

#include <cmath>
#include <numbers>

#include "fracsim/errors.hpp"

namespace fracsim {

namespace {

constexpr double kPoleGuard = 1e-10;

bool near_pole(double x) { return x <= kPoleGuard && std::abs(x - std::round(x)) < kPoleGuard; }

}  // namespace

const char* to_string(Validity v) {
  switch (v) {
    case Validity::Valid: return "Valid";
    case Validity::PoleInGamma: return "PoleInGamma";
    case Validity::OutOfRange: return "OutOfRange";
  }
  return "?";
}

double gamma_checked(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::NonFiniteInput, "gamma of non-finite argument");
  if (near_pole(x)) throw Error(ErrorKind::GammaPole, "gamma pole", {{"argument", x}});
  return std::tgamma(x);
}

double gamma_factor(double rho, int N) {
  if (N < 1) throw Error(ErrorKind::InvalidParameter, "dimension N must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * N) * std::exp2(rho) * gamma_checked(0.5 * rho) /
         gamma_checked(0.5 * (N - rho));
}

double riesz_gamma_ratio(double alpha, double s, int N) {
  return std::exp2(-2.0 * s) * gamma_checked(0.5 * (N - alpha)) *
         gamma_checked(0.5 * (alpha - 2.0 * s)) /
         (gamma_checked(0.5 * alpha) * gamma_checked(0.5 * (N - alpha + 2.0 * s)));
}

double riesz_ratio_from_gamma_factor(double alpha, double s, int N) {
  return gamma_factor(N - alpha, N) / gamma_factor(N - alpha + 2.0 * s, N);
}

RieszConstant riesz_power_constant(double alpha, double s, int N) {
  RieszConstant r;
  r.alpha = alpha;
  r.s = s;
  r.N = N;
  if (N < 1 || !(s > 0.0) || !(s < 1.0) || !(2.0 * s < N) || !(alpha > 2.0 * s) || !(alpha < N)) {
    r.validity = Validity::OutOfRange;
    return r;
  }
  for (double arg : {0.5 * (N - alpha), 0.5 * (alpha - 2.0 * s), 0.5 * alpha,
                     0.5 * (N - alpha + 2.0 * s)}) {
    if (near_pole(arg)) {
      r.validity = Validity::PoleInGamma;
      return r;
    }
  }
  r.gamma_ratio = riesz_gamma_ratio(alpha, s, N);
  r.validity = Validity::Valid;
  return r;
}

double vss_sign_expression(double mtilde, double stilde, int N) {
  if (!(mtilde < 1.0)) throw Error(ErrorKind::OutOfRange, "requires mtilde < 1", {{"mtilde", mtilde}});
  const double den = N * (mtilde - 1.0) + 2.0 - 2.0 * stilde;
  if (den == 0.0) throw Error(ErrorKind::OutOfRange, "beta_2 is undefined at the borderline exponent");
  const double beta2 = 1.0 / den;
  const double alpha = (2.0 - 2.0 * stilde) / (1.0 - mtilde);
  if (!std::isfinite(alpha) || 0.5 * (N - alpha) <= -1.0 || alpha <= 2.0 * stilde) {
    throw Error(ErrorKind::OutOfRange, "power exponent outside the admissible strip",
                {{"alpha", alpha}, {"N", double(N)}});
  }
  const double kbar = riesz_gamma_ratio(alpha, stilde, N);
  return 2.0 * kbar * (1.0 - stilde * (2.0 - mtilde)) / ((1.0 - mtilde) * beta2);
}

Interval vss_type1_window(double stilde, int N) {
  return {(N - 2.0 + 4.0 * stilde) / (N + 2.0 * stilde), (N + 2.0 * stilde) / (N + 2.0)};
}

}  // namespace fracsim
