#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fracsim/fracops.hpp"
#include "fracsim/params.hpp"
#include "fracsim/profile.hpp"
#include "fracsim/transforms.hpp"

namespace fracsim {

enum class InitialCondition { Gaussian, Cap, Custom };
const char* to_string(InitialCondition ic);

struct SolverConfig {
  Grid grid;
  double dt = 0.0;            // initial pseudo-time step; 0 picks one from (m, s)
  double max_dt = 0.0;        // cap for the adaptive step; 0 picks one from m
  double max_time = 5000.0;   // pseudo-time budget
  std::size_t max_steps = 200000;
  double tolerance = 1e-8;    // on the sup of the vector residual
  double mass = 1.0;
  InitialCondition initial = InitialCondition::Gaussian;
  std::vector<double> custom;  // grid values for InitialCondition::Custom
  bool far_field = true;       // power-law closure of the operand beyond the grid
  bool adaptive = true;        // halve dt on residual growth, grow it after success
  bool symmetrize = true;
  std::size_t history_stride = 10;

  void validate() const;
};

struct ResidualSample {
  std::size_t step = 0;
  double time = 0.0;
  double residual_sup = 0.0;
};

struct SolveResult {
  RadialProfile profile;
  ResidualReport report;
  std::vector<ResidualSample> history;
  double time = 0.0;
  std::size_t steps = 0;
  std::size_t rejected = 0;
  double final_dt = 0.0;
  double mass_error = 0.0;         // largest |∫φ - M| over accepted steps
  std::size_t residual_increases = 0;  // accepted steps where the residual grew
  std::vector<std::string> notes;
};

// Steady state of ∂_τφ = -(-Δ)^s φ^m + β₁∇·(yφ) on a 1-D grid, i.e. the
// M1 similarity profile of mass M. Each step is upwind-conservative in the
// transport, linearly implicit in the diffusion and renormalized to the
// mass. Throws NoConvergence (history in the details) or Instability.
SolveResult solve_profile_m1(const ModelParams& p, const SolverConfig& cfg);

enum class DecayConstantRole { MassDependent, Limit, LogCorrected };
const char* to_string(DecayConstantRole role);

struct DecayFit {
  double exponent = 0.0;   // fitted: φ ~ constant·r^{-exponent}
  double constant = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
  double quality = 0.0;    // r² of the log-log fit
  double predicted = 0.0;
  DecayConstantRole role = DecayConstantRole::MassDependent;
  double sigma = 0.0;                  // mass exponent of the limit constant
  std::optional<double> limit_constant;  // predicted tail constant when m < m₁
  bool fallback_window = false;
};

struct FitWindow {
  double lo = 0.0;
  double hi = 0.0;
};

// Log-log least squares over r ∈ [lo, hi] on the positive half of the grid.
DecayFit fit_power_tail(const RadialProfile& profile, FitWindow window);

// Largest top-anchored dyadic window [0.9L/2^k, 0.9L] above half the radius
// holding 90% of the mass with r² ≥ 0.995, else [8, 40]. Throws
// WindowTooNoisy below r² = 0.99.
DecayFit fit_decay_auto(const RadialProfile& profile);

// fit_decay_auto plus the predicted exponent and constants for M1.
DecayFit decay_fit(const RadialProfile& profile, const ModelParams& p);

struct DemoSample {
  double time = 0.0;      // pseudo-time τ = log(1 + t)
  double distance = 0.0;  // sup |φ(τ) - φ₁|
};

struct ConvergenceReport {
  std::vector<DemoSample> series;
  double profile_max = 0.0;
  double final_distance = 0.0;
  double burn_in = 0.0;
  bool monotone_after_burn_in = false;
  RadialProfile target;
};

struct DemoConfig {
  SolverConfig solver;   // used for the target profile
  double dt = 0.01;      // fixed step of the evolution
  double final_time = 10.0;
  double burn_in = 1.0;
  std::size_t sample_stride = 10;
};

// Evolves u0 in similarity variables (u(x,t) = (1+t)^{-α}φ(x(1+t)^{-β}, log(1+t)))
// and records the distance to the profile of the same mass.
ConvergenceReport convergence_demo(const ModelParams& p, const RadialProfile& u0, const DemoConfig& cfg);

struct ChainReport {
  ModelParams source;
  SolveResult m1;
  ParameterMap map;
  bool linear = false;
  std::optional<ResidualReport> target_residual;
  std::optional<DecayFit> source_decay;
  std::optional<DecayFit> target_fit;
  std::optional<DecayLaw> target_law;
  std::optional<ParameterMap> mg_map;
  std::optional<ResidualReport> mg_residual;
  RadialProfile target_profile;
  std::vector<std::string> notes;
};

// Solves φ₁, maps it to M2, checks the M2 identity and the decay transport,
// and continues to MG at (m̃₀, ñ₀) = (2-1/m, 2) when the similarity types
// agree.
ChainReport solve_and_verify_chain(const ModelParams& p, const SolverConfig& cfg);

}  // namespace fracsim
