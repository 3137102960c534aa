#pragma once

namespace fracsim {

// Γ with a pole guard: throws Error(GammaPole) within 1e-10 of a nonpositive integer.
double gamma_checked(double x);

// γ(ρ) = π^{N/2} 2^ρ Γ(ρ/2) / Γ((N-ρ)/2), the normalization of the Riesz kernel
// |x|^{ρ-N}/γ(ρ).
double gamma_factor(double rho, int N);

enum class Validity { Valid, PoleInGamma, OutOfRange };
const char* to_string(Validity v);

// Constant in (-Δ)^{-s}|x|^{-α} = k̄(α)|x|^{-α+2s}.
struct RieszConstant {
  double alpha = 0.0;
  double s = 0.0;
  int N = 1;
  double gamma_ratio = 0.0;
  Validity validity = Validity::OutOfRange;
};

// Classical window 2s < α < N; outside it the result is flagged OutOfRange.
RieszConstant riesz_power_constant(double alpha, double s, int N);

// The four-Gamma expression 2^{-2s}Γ((N-α)/2)Γ((α-2s)/2)/(Γ(α/2)Γ((N-α+2s)/2))
// without the window check; this is the analytic continuation used by the
// very singular solutions. Throws GammaPole.
double riesz_gamma_ratio(double alpha, double s, int N);

// Same constant through γ(N-α)/γ(N-α+2s).
double riesz_ratio_from_gamma_factor(double alpha, double s, int N);

// Signed existence test for the type-I very singular solution of M2:
// 2k̄(α)(1-s̃(2-m̃))/((1-m̃)β₂) with α = (2-2s̃)/(1-m̃). Requires m̃ < 1 and
// β₂ ≠ 0. Throws OutOfRange once α leaves the first continuation strip
// (N-α)/2 > -1 or drops to α ≤ 2s̃.
double vss_sign_expression(double mtilde, double stilde, int N);

// The stated existence window ((N-2+4s̃)/(N+2s̃), (N+2s̃)/(N+2)) for type-I
// very singular solutions, kept as a cross-check of the sign test.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x > lo && x < hi; }
  bool empty() const { return !(lo < hi); }
};
Interval vss_type1_window(double stilde, int N);

}  // namespace fracsim
