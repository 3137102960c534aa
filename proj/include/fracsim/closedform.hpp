#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fracsim/params.hpp"
#include "fracsim/profile.hpp"

namespace fracsim {

enum class Family { ParabolicCap, Model3Cap, VSSTypeI, VSSTypeII };
const char* to_string(Family family);

// An explicit solution family with its constants. Immutable once built.
//   ParabolicCap  Φ(y) = (a - b|y|²)₊^{1-s}            constants a, b, R
//   Model3Cap     φ(y) = (k(R² - |y|²)₊^{1-s})^{1/(m̂-1)} constants k, R
//   VSSTypeI      v = K t^{1/(1-m̃)} |x|^{-α}, K = C      constants C, K, alpha
//   VSSTypeII     U = B(t)|x|^{-α}, B' = 𝒞 B^{m̃}         constants C_ode, T, K, alpha
struct ClosedFormSolution {
  Family family = Family::ParabolicCap;
  ModelParams params;
  std::map<std::string, double> constants;
  ExponentSet exponents;
  std::vector<std::string> notes;

  double constant(const std::string& name) const;
  // Shape function in the similarity variable; for the VSS forms the spatial
  // factor |y|^{-α} times C (type I) or 1 (type II), +inf at the origin.
  double profile(double radius) const;
};

struct CapOptions {
  Grid grid;                // grid used by the N = 1 calibration
  double tolerance = 1e-3;  // admissible sup residual after calibration
  bool calibrate = true;    // run the grid calibration for N = 1
};

// M2 profile for m̃ = 2 with ∫Φ = M. b makes ∇(-Δ)^{-s}Φ = -β₂y on the
// support: the analytic value seeds a secant iteration on the grid residual
// (N = 1), after which the sup residual must be below the tolerance.
ClosedFormSolution barenblatt_cap(int N, double s, double mass, const CapOptions& options = {});

// M3 compact profile obtained from the cap of mass M through
// φ^{m̂-1} = (β₃/β₂)Φ; the support is therefore that of Φ for every m̂. The
// resulting mass of φ is reported as the constant "mass".
ClosedFormSolution model3_cap(int N, double s_hat, double m_hat, double mass,
                              const CapOptions& options = {});

// Type-I very singular solution of M2. Existence is decided by the sign of
// vss_sign_expression; the stated window is checked and a note is attached
// when the two disagree.
ClosedFormSolution vss_type1(int N, double stilde, double mtilde);

// Extinction-type very singular solution of M2, 0 < m̃ < (N-2+2s̃)/N.
ClosedFormSolution vss_type2(int N, double stilde, double mtilde, double T);

// u(x, t) at a radius or a point of R^N. Type-I forms need t > 0; VSS-II needs
// t ≥ 0 and vanishes after T. The VSS value at the origin is +inf.
double evaluate(const ClosedFormSolution& sol, double radius, double t);
double evaluate(const ClosedFormSolution& sol, std::span<const double> x, double t);

// VSS-II amplitude B(t).
double vss_amplitude(const ClosedFormSolution& sol, double t);

// Similarity profile on a grid. VSS forms go through power_law_profile, so
// their core is mollified.
RadialProfile sample(const ClosedFormSolution& sol, const Grid& grid);

}  // namespace fracsim
