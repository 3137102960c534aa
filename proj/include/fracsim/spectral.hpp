#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fracsim/profile.hpp"

namespace fracsim::spectral {

// Fourier multipliers in the angular wavenumber k = π j / L.
enum class SymbolKind {
  FractionalLaplacian,  // |k|^{2σ}
  PotentialGradient,    // i·sign(k)|k|^{1-2σ}, the 1-D gradient of (-Δ)^{-σ}
  Potential,            // |k|^{-2σ}, zero mode dropped
  Derivative,           // i·k
};

struct Multiplier {
  SymbolKind kind = SymbolKind::FractionalLaplacian;
  double order = 0.5;

  bool odd() const { return kind == SymbolKind::PotentialGradient || kind == SymbolKind::Derivative; }
  // Value at wavenumber k ≥ 0; the zero mode of singular symbols is 0.
  std::complex<double> at(double k) const;
};

// Owns one pair of FFTW buffers of a given size; cheap to keep per thread.
class Workspace {
 public:
  explicit Workspace(std::size_t n);
  ~Workspace();
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  std::size_t size() const { return n_; }
  double* real() { return real_; }
  std::complex<double>* spectrum() { return spectrum_; }
  std::size_t modes() const { return n_ / 2 + 1; }

  void forward();   // real() -> spectrum()
  void backward();  // spectrum() -> real(), scaled by 1/n

 private:
  std::size_t n_;
  double* real_;
  std::complex<double>* spectrum_;
  void* forward_plan_;
  void* backward_plan_;
};

// Thread-local workspace for size n.
Workspace& workspace(std::size_t n);

// Applies the multiplier through the FFT path. `out` may alias `in`.
void apply(const Multiplier& mult, const Grid& grid, std::span<const double> in,
           std::span<double> out);

// Multiplies a half spectrum in place by the symbol.
void multiply(const Multiplier& mult, const Grid& grid, std::complex<double>* spectrum);

// Precomputed symbol table for repeated application on one grid.
std::vector<std::complex<double>> symbol_table(const Multiplier& mult, const Grid& grid);

// Real-space kernel of the multiplier on the line, e.g. -1/(πz) for the
// gradient of (-Δ)^{-1/2}. Defined for z ≠ 0; throws for kinds without a
// decaying power kernel.
double kernel(const Multiplier& mult, double z);

// The same operator on the whole line for data that vanishes outside [-L, L).
// Applied as a convolution on the doubled grid whose kernel is the spectral
// one minus the analytic sum of its periodic images.
class FreeSpaceOperator {
 public:
  FreeSpaceOperator(const Multiplier& mult, const Grid& grid);
  void apply(std::span<const double> in, std::span<double> out) const;
  const Grid& grid() const { return grid_; }
  const Multiplier& multiplier() const { return mult_; }

 private:
  Multiplier mult_;
  Grid grid_;
  std::vector<std::complex<double>> table_;  // 2n-point half spectrum
};

// Cached per (multiplier, grid); construction is serialized.
const FreeSpaceOperator& free_space_operator(const Multiplier& mult, const Grid& grid);

namespace reference {
// Direct O(n²) discrete Fourier transform path, serial. Used to validate the
// FFT path and as the benchmark baseline.
void apply(const Multiplier& mult, const Grid& grid, std::span<const double> in,
           std::span<double> out);
}  // namespace reference

namespace kernels {
// Pointwise loops, OpenMP-parallel above a size threshold.
void power(std::span<const double> in, double exponent, std::span<double> out);
void scaled_power(std::span<const double> in, double scale, double exponent, std::span<double> out);
void multiply_table(const std::complex<double>* table, std::complex<double>* spectrum, std::size_t modes);
}  // namespace kernels

namespace serial {
void power(std::span<const double> in, double exponent, std::span<double> out);
void multiply_table(const std::complex<double>* table, std::complex<double>* spectrum, std::size_t modes);
}  // namespace serial

// Power with the common integer and half-integer exponents special-cased.
double fast_pow(double x, double exponent);

// Caps the number of OpenMP threads; reads FRACSIM_THREADS on first use.
void configure_threads();

}  // namespace fracsim::spectral
