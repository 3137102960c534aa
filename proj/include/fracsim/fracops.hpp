#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fracsim/params.hpp"
#include "fracsim/profile.hpp"
#include "fracsim/spectral.hpp"

namespace fracsim {

// How a nonlocal operator sees the outside of [-L, L).
enum class Boundary {
  Periodic,   // periodic extension of the grid data
  FreeSpace,  // zero outside the grid, exact convolution on the line
};

// (-Δ)^s, s ∈ (0, 1], by default on the periodic extension. Attaches a
// DomainTooSmall warning when the input does not decay below 1e-8 of its
// maximum at the domain ends. s = 1 is local and always periodic.
RadialProfile frac_laplacian(const RadialProfile& f, double s, Boundary boundary = Boundary::Periodic);

// (-Δ)^{-s} on the periodic extension with the zero mode dropped. Inverse of
// frac_laplacian on zero-mean data.
RadialProfile spectral_potential(const RadialProfile& f, double s);

// The gradient ∇(-Δ)^{-s}, an odd operator of order 1-2s. The result is odd
// when the input is even.
RadialProfile potential_gradient(const RadialProfile& f, double s,
                                 Boundary boundary = Boundary::FreeSpace);

// Power-law continuation of an operand beyond the grid for the free-space
// potential gradient. The operand is assumed to behave like c|x|^{-p} outside
// [-L, L); p and c are fitted from its values near the edges, so no decay law
// is imposed from outside. The exterior contribution shape is cached for the
// last exponent.
class FarField {
 public:
  FarField(double order, const Grid& grid);

  // Adds the exterior contribution to `out` for the operand `u`. Returns false
  // when the operand is negligible at the edges or its tail is not integrable
  // against the kernel, in which case nothing is added.
  bool add(std::span<const double> u, std::span<double> out);

  double exponent() const { return exponent_; }
  double amplitude() const { return amplitude_; }
  void set_refit_tolerance(double tol) { refit_tol_ = tol; }

 private:
  void build(double p);

  spectral::Multiplier mult_;
  Grid grid_;
  std::vector<double> shape_;
  double exponent_ = -1.0;
  double amplitude_ = 0.0;
  double refit_tol_ = 1e-4;
};

// ∇(-Δ)^{-s}u on the line for u supported on the grid plus its fitted
// power-law continuation.
std::vector<double> gradient_with_far_field(std::span<const double> u, double s, const Grid& grid,
                                            FarField* far = nullptr);

struct Interval1D {
  double lo = 0.0;
  double hi = 0.0;
};

struct ResidualReport {
  Model model = Model::M1;
  double residual_sup = 0.0;
  double residual_l2 = 0.0;
  Interval1D evaluation_region;  // |y| range over which the norms are taken
  Grid grid;
  std::size_t points = 0;        // grid points inside the region
  bool far_field = false;        // whether the exterior continuation was active
};

struct ResidualOptions {
  double threshold = 1e-6;       // relative to the maximum; defines the positivity set
  double inner_fraction = 0.9;   // fraction of the positivity radius evaluated
  double exclusion_radius = 0.0; // points with |y| < this are skipped
  bool far_field = true;
};

// Pointwise residual of the model's integrated profile identity:
//   M1  ∇(-Δ)^{s-1}φ^m + β y φ
//   M2  ∇(-Δ)^{-s̃}φ + β y φ^{2-m̃}   (β the rate of the similarity type)
//   M3  φ ∇(-Δ)^{-ŝ}φ^{m̂-1} + β y φ
//   MG  ∇(-Δ)^{-s̃₀}φ^{ñ₀-1} + β y φ^{2-m̃₀}
// N enters only through β; the grid is one-dimensional. Negative entries are
// rejected except inside the exclusion radius, where a regularized core may
// legitimately dip below zero.
std::vector<double> residual_field(const RadialProfile& profile, const ModelParams& p,
                                   const ExponentSet& exps, bool far_field = true,
                                   double exclusion_radius = 0.0);

// Norms of residual_field over the inner part of {φ > threshold·max φ}.
ResidualReport vector_residual(const RadialProfile& profile, const ModelParams& p,
                               const ExponentSet& exps, const ResidualOptions& options = {});

// C|x|^{-α} sampled on the grid with the singular core |x| < core_radius
// replaced by an even quartic whose discrete moments of order 0, 2 and 4
// match those of the (regularized) power law, then low-pass filtered so the
// grid-scale content does not alias. Defaults to four grid spacings.
RadialProfile power_law_profile(const Grid& grid, double C, double alpha, double core_radius = 0.0);

enum class OracleKind { Potential, Laplacian };

struct OracleOptions {
  double tolerance = 1e-6;
  std::vector<double> breakpoints;  // radii where f is not smooth
};

// Direct quadrature of (-Δ)^{-s} (Riesz integral normalized by γ(2s)) or of
// (-Δ)^s (hypersingular integral, N = 1 only) applied to a radial function
// f(|y|) at a point of radius x. N ≤ 3 for the potential. Slow; used to check
// the spectral operators and the Gamma constants.
double quadrature_oracle(const std::function<double(double)>& f, double s, int N, double x,
                         OracleKind kind, const OracleOptions& options = {});

// Same for a grid profile, linearly interpolated and zero outside the grid.
double quadrature_oracle(const RadialProfile& f, double s, int N, double x, OracleKind kind,
                         const OracleOptions& options = {});

}  // namespace fracsim
