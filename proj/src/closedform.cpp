#include "fracsim/closedform.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fracsim/errors.hpp"
#include "fracsim/fracops.hpp"
#include "fracsim/specfun.hpp"

namespace fracsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_order(double s, const char* name) {
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorKind::InvalidParameter, std::string(name) + " must lie in (0,1)", {{name, s}});
}

// ∫_{R^N} (1 - |y|²)₊^p dy
double ball_power_integral(int N, double p) {
  return std::pow(std::numbers::pi, 0.5 * N) * std::tgamma(p + 1.0) / std::tgamma(p + 1.0 + 0.5 * N);
}

// (-Δ)^σ (1 - |y|²)₊^σ on the ball is this constant.
double cap_laplacian_constant(int N, double sigma) {
  return std::exp2(2.0 * sigma) * std::tgamma(1.0 + sigma) * std::tgamma(0.5 * N + sigma) / std::tgamma(0.5 * N);
}

double cap_height(int N, double p, double b, double mass) {
  // M = a^{p+N/2} b^{-N/2} ∫(1-|y|²)₊^p
  return std::pow(mass * std::pow(b, 0.5 * N) / ball_power_integral(N, p), 1.0 / (p + 0.5 * N));
}

RadialProfile sample_cap(const Grid& grid, double a, double b, double p) {
  return RadialProfile::sample(grid, [&](double y) {
    const double base = a - b * y * y;
    return base > 0.0 ? std::pow(base, p) : 0.0;
  });
}

}  // namespace

const char* to_string(Family family) {
  switch (family) {
    case Family::ParabolicCap: return "ParabolicCap";
    case Family::Model3Cap: return "Model3Cap";
    case Family::VSSTypeI: return "VSSTypeI";
    case Family::VSSTypeII: return "VSSTypeII";
  }
  return "?";
}

double ClosedFormSolution::constant(const std::string& name) const {
  auto it = constants.find(name);
  if (it == constants.end()) throw Error(ErrorKind::InvalidParameter, "solution has no constant " + name);
  return it->second;
}

double ClosedFormSolution::profile(double r) const {
  r = std::abs(r);
  const double s = params.order.value;
  switch (family) {
    case Family::ParabolicCap: {
      if (r >= constant("R")) return 0.0;
      const double base = constant("a") - constant("b") * r * r;
      return base > 0.0 ? std::pow(base, 1.0 - s) : 0.0;
    }
    case Family::Model3Cap: {
      const double R = constant("R");
      if (r >= R) return 0.0;
      return std::pow(constant("k") * std::pow(R * R - r * r, 1.0 - s), 1.0 / (params.nonlinearity.value - 1.0));
    }
    case Family::VSSTypeI:
      return r == 0.0 ? kInf : constant("C") * std::pow(r, -constant("alpha"));
    case Family::VSSTypeII:
      return r == 0.0 ? kInf : std::pow(r, -constant("alpha"));
  }
  return 0.0;
}

ClosedFormSolution barenblatt_cap(int N, double s, double mass, const CapOptions& options) {
  check_order(s, "s");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw Error(ErrorKind::InvalidParameter, "mass must be positive", {{"mass", mass}});
  ClosedFormSolution sol;
  sol.family = Family::ParabolicCap;
  sol.params = ModelParams::m2(N, Number::from_double(s), Number(2));
  sol.params.validate();
  sol.exponents = similarity_exponents(sol.params);
  const double beta = sol.exponents.beta;
  const double p = 1.0 - s;

  // ∇(-Δ)^{-s} b^p(R²-|y|²)^p = -(b^p D/N) y on the ball.
  const double b_exact = std::pow(beta * N / cap_laplacian_constant(N, p), 1.0 / p);
  double b = b_exact;

  if (N == 1 && options.calibrate) {
    const Grid& grid = options.grid;
    // Least-squares slope of the residual over the inner support; zero at the
    // calibrated b. Linear in b^p up to the sampling, so the secant is quick.
    // Calibrated at unit mass so that b stays a function of (N, s, grid).
    auto slope = [&](double bb) {
      const double a = cap_height(N, p, bb, 1.0);
      const RadialProfile cap = sample_cap(grid, a, bb, p);
      const std::vector<double> pg = potential_gradient(cap, s).values();
      const double inner = 0.9 * std::sqrt(a / bb);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < grid.n; ++i) {
        const double y = grid.x(i);
        if (std::abs(y) > inner) continue;
        num += pg[i] * y;
        den += y * y;
      }
      if (den == 0.0) throw Error(ErrorKind::CalibrationFailed, "cap support does not cover any grid point");
      return num / den + beta;
    };
    double b0 = b_exact, b1 = 1.02 * b_exact;
    double f0 = slope(b0), f1 = slope(b1);
    for (int it = 0; it < 30 && std::abs(f1) > 1e-13 * beta; ++it) {
      if (f1 == f0) break;
      const double next = b1 - f1 * (b1 - b0) / (f1 - f0);
      if (!(next > 0.0) || !std::isfinite(next))
        throw Error(ErrorKind::CalibrationFailed, "secant left the admissible range", {{"b", next}});
      b0 = b1;
      f0 = f1;
      b1 = next;
      f1 = slope(b1);
    }
    b = b1;
    const double a = cap_height(N, p, b, mass);
    ResidualOptions ro;
    ro.far_field = false;
    const ResidualReport rep = vector_residual(sample_cap(grid, a, b, p), sol.params, sol.exponents, ro);
    sol.constants["calibration_residual"] = rep.residual_sup;
    if (!(rep.residual_sup <= options.tolerance))
      throw Error(ErrorKind::CalibrationFailed, "cap residual above tolerance after calibration",
                  {{"residual_sup", rep.residual_sup}, {"tolerance", options.tolerance}, {"b", b}});
  }

  const double a = cap_height(N, p, b, mass);
  sol.constants["a"] = a;
  sol.constants["b"] = b;
  sol.constants["b_analytic"] = b_exact;
  sol.constants["R"] = std::sqrt(a / b);
  sol.constants["mass"] = mass;
  return sol;
}

ClosedFormSolution model3_cap(int N, double s_hat, double m_hat, double mass, const CapOptions& options) {
  if (!(m_hat > 1.0) || !std::isfinite(m_hat))
    throw Error(ErrorKind::OutOfRange, "model-3 cap needs m_hat > 1", {{"m_hat", m_hat}});
  const ClosedFormSolution cap = barenblatt_cap(N, s_hat, mass, options);
  ClosedFormSolution sol;
  sol.family = Family::Model3Cap;
  sol.params = ModelParams::m3(N, Number::from_double(s_hat), Number::from_double(m_hat));
  sol.exponents = similarity_exponents(sol.params);
  // φ^{m̂-1} = λΦ turns the M3 identity into λ times the cap identity.
  const double ratio = sol.exponents.beta / cap.exponents.beta;
  const double p = 1.0 - s_hat, q = 1.0 / (m_hat - 1.0);
  const double R = cap.constant("R");
  const double k = ratio * std::pow(cap.constant("b"), p);
  sol.constants["k"] = k;
  sol.constants["R"] = R;
  sol.constants["beta_ratio"] = ratio;
  sol.constants["cap_mass"] = mass;
  sol.constants["mass"] = std::pow(k, q) * std::pow(R, 2.0 * p * q + N) * ball_power_integral(N, p * q);
  if (cap.constants.count("calibration_residual"))
    sol.constants["cap_calibration_residual"] = cap.constant("calibration_residual");
  return sol;
}

ClosedFormSolution vss_type1(int N, double stilde, double mtilde) {
  check_order(stilde, "stilde");
  if (!(mtilde > 0.0 && mtilde < 1.0))
    throw Error(ErrorKind::NoVSS, "type-I VSS needs 0 < mtilde < 1", {{"mtilde", mtilde}});
  double sign = 0.0;
  try {
    sign = vss_sign_expression(mtilde, stilde, N);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::GammaPole) throw;
    throw Error(ErrorKind::NoVSS, std::string("type-I VSS sign test undefined: ") + e.what(), e.details());
  }
  if (!(sign > 0.0))
    throw Error(ErrorKind::NoVSS, "sign expression is not positive", {{"value", sign}, {"mtilde", mtilde}});

  ClosedFormSolution sol;
  sol.family = Family::VSSTypeI;
  sol.params = ModelParams::m2(N, Number::from_double(stilde), Number::from_double(mtilde));
  sol.exponents = similarity_exponents(sol.params);
  const double alpha = (2.0 - 2.0 * stilde) / (1.0 - mtilde);
  const double C = std::pow(sign, 1.0 / (1.0 - mtilde));
  sol.constants["alpha"] = alpha;
  sol.constants["C"] = C;
  // t^{-Nβ}C|x t^{-β}|^{-α} = C t^{β(α-N)}|x|^{-α}
  sol.constants["K"] = C;
  sol.constants["sign_expression"] = sign;
  sol.constants["time_exponent"] = (alpha - N) / exponent_denominator(sol.params).value;
  const Interval w = vss_type1_window(stilde, N);
  sol.constants["window_lo"] = w.lo;
  sol.constants["window_hi"] = w.hi;
  sol.constants["in_window"] = w.contains(mtilde) ? 1.0 : 0.0;
  if (!w.contains(mtilde)) sol.notes.push_back("sign test positive but mtilde lies outside the stated window");
  return sol;
}

ClosedFormSolution vss_type2(int N, double stilde, double mtilde, double T) {
  check_order(stilde, "stilde");
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorKind::InvalidParameter, "extinction time must be positive", {{"T", T}});
  const double upper = (N - 2.0 + 2.0 * stilde) / N;
  if (!(mtilde > 0.0 && mtilde < upper))
    throw Error(ErrorKind::NoVSS, "type-II VSS needs 0 < mtilde < (N-2+2s)/N", {{"mtilde", mtilde}, {"upper", upper}});

  ClosedFormSolution sol;
  sol.family = Family::VSSTypeII;
  sol.params = ModelParams::m2(N, Number::from_double(stilde), Number::from_double(mtilde));
  sol.exponents = similarity_exponents(sol.params);
  const double alpha = (2.0 - 2.0 * stilde) / (1.0 - mtilde);
  // k̄(α)(2s̃-α) with Γ(x)x = Γ(x+1) folded in, so α < 2s̃ needs no special case.
  const double kbar_factor = -2.0 * std::exp2(-2.0 * stilde) * gamma_checked(0.5 * (N - alpha)) *
                             gamma_checked(0.5 * (alpha - 2.0 * stilde) + 1.0) /
                             (gamma_checked(0.5 * alpha) * gamma_checked(0.5 * (N - alpha + 2.0 * stilde)));
  // -αm̃ + 2s̃ - 2 + N = N - α
  const double c_ode = kbar_factor * (N - alpha);
  if (!(c_ode < 0.0))
    throw Error(ErrorKind::SignViolation, "ODE constant is not negative", {{"C_ode", c_ode}, {"mtilde", mtilde}});
  sol.constants["alpha"] = alpha;
  sol.constants["C_ode"] = c_ode;
  sol.constants["T"] = T;
  sol.constants["K"] = std::pow(-c_ode * (1.0 - mtilde), 1.0 / (1.0 - mtilde));
  return sol;
}

double vss_amplitude(const ClosedFormSolution& sol, double t) {
  if (sol.family != Family::VSSTypeII) throw Error(ErrorKind::InvalidParameter, "amplitude is defined for VSS-II only");
  const double T = sol.constant("T");
  if (!(t >= 0.0)) throw Error(ErrorKind::OutOfTemporalDomain, "VSS-II needs t >= 0", {{"t", t}});
  if (t >= T) return 0.0;
  return sol.constant("K") * std::pow(T - t, 1.0 / (1.0 - sol.params.nonlinearity.value));
}

double evaluate(const ClosedFormSolution& sol, double radius, double t) {
  if (!std::isfinite(t) || !std::isfinite(radius)) throw Error(ErrorKind::NonFiniteInput, "non-finite evaluation point");
  if (sol.family == Family::VSSTypeII) {
    const double B = vss_amplitude(sol, t);
    if (B == 0.0) return 0.0;
    return radius == 0.0 ? kInf : B * sol.profile(radius);
  }
  if (!(t > 0.0)) throw Error(ErrorKind::OutOfTemporalDomain, "type-I solutions need t > 0", {{"t", t}});
  if (sol.family == Family::VSSTypeI)
    return radius == 0.0 ? kInf : std::pow(t, sol.constant("time_exponent")) * sol.profile(radius);
  const double beta = sol.exponents.beta, alpha = sol.exponents.alpha;
  return std::pow(t, -alpha) * sol.profile(radius * std::pow(t, -beta));
}

double evaluate(const ClosedFormSolution& sol, std::span<const double> x, double t) {
  if (x.size() != static_cast<std::size_t>(sol.params.N))
    throw Error(ErrorKind::InvalidParameter, "point dimension does not match N");
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return evaluate(sol, std::sqrt(r2), t);
}

RadialProfile sample(const ClosedFormSolution& sol, const Grid& grid) {
  switch (sol.family) {
    case Family::VSSTypeI: return power_law_profile(grid, sol.constant("C"), sol.constant("alpha"));
    case Family::VSSTypeII: return power_law_profile(grid, 1.0, sol.constant("alpha"));
    default: return RadialProfile::sample(grid, [&](double y) { return sol.profile(y); });
  }
}

}  // namespace fracsim
