#include "fracsim/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fracsim/errors.hpp"

namespace fracsim::spectral {

namespace {

constexpr std::size_t kParallelThreshold = 4096;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::complex<double> Multiplier::at(double k) const {
  const double a = std::abs(k);
  switch (kind) {
    case SymbolKind::FractionalLaplacian:
      return a == 0.0 ? 0.0 : std::pow(a, 2.0 * order);
    case SymbolKind::PotentialGradient:
      if (a == 0.0) return 0.0;
      return {0.0, std::copysign(std::pow(a, 1.0 - 2.0 * order), k)};
    case SymbolKind::Potential:
      return a == 0.0 ? 0.0 : std::pow(a, -2.0 * order);
    case SymbolKind::Derivative:
      return {0.0, k};
  }
  return 0.0;
}

Workspace::Workspace(std::size_t n) : n_(n) {
  real_ = fftw_alloc_real(n);
  spectrum_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n / 2 + 1));
  if (real_ == nullptr || spectrum_ == nullptr) throw std::bad_alloc();
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto* spec = reinterpret_cast<fftw_complex*>(spectrum_);
  forward_plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_, spec, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real_, FFTW_ESTIMATE);
}

Workspace::~Workspace() {
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  }
  fftw_free(real_);
  fftw_free(spectrum_);
}

void Workspace::forward() { fftw_execute(static_cast<fftw_plan>(forward_plan_)); }

void Workspace::backward() {
  fftw_execute(static_cast<fftw_plan>(backward_plan_));
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) real_[i] *= scale;
}

Workspace& workspace(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<Workspace>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Workspace>(n);
  return *slot;
}

std::vector<std::complex<double>> symbol_table(const Multiplier& mult, const Grid& grid) {
  const std::size_t modes = grid.n / 2 + 1;
  std::vector<std::complex<double>> table(modes);
  for (std::size_t j = 0; j < modes; ++j) table[j] = mult.at(grid.wavenumber(j));
  // The Nyquist mode of a real signal cannot carry an odd symbol.
  if (mult.odd()) table[modes - 1] = 0.0;
  return table;
}

void multiply(const Multiplier& mult, const Grid& grid, std::complex<double>* spectrum) {
  const auto table = symbol_table(mult, grid);
  kernels::multiply_table(table.data(), spectrum, table.size());
}

void apply(const Multiplier& mult, const Grid& grid, std::span<const double> in,
           std::span<double> out) {
  if (in.size() != grid.n || out.size() != grid.n)
    throw Error(ErrorKind::InvalidParameter, "operand size does not match the grid");
  Workspace& ws = workspace(grid.n);
  std::copy(in.begin(), in.end(), ws.real());
  ws.forward();
  multiply(mult, grid, ws.spectrum());
  ws.backward();
  std::copy(ws.real(), ws.real() + grid.n, out.begin());
}

double kernel(const Multiplier& mult, double z) {
  const double a = std::abs(z);
  switch (mult.kind) {
    case SymbolKind::PotentialGradient: {
      const double q = 1.0 - 2.0 * mult.order;
      return -std::tgamma(1.0 + q) / std::numbers::pi * std::cos(0.5 * std::numbers::pi * q) *
             std::copysign(std::pow(a, -1.0 - q), z);
    }
    case SymbolKind::FractionalLaplacian: {
      const double s = mult.order;
      return -std::tgamma(1.0 + 2.0 * s) / std::numbers::pi * std::sin(std::numbers::pi * s) *
             std::pow(a, -1.0 - 2.0 * s);
    }
    case SymbolKind::Derivative:
      return 0.0;
    case SymbolKind::Potential:
      break;
  }
  throw Error(ErrorKind::InvalidParameter, "operator has no decaying real-space kernel");
}

namespace {

// Sum over j ≠ 0 of kernel(z + P j) for |z| < P, paired symmetrically, with an
// Euler-Maclaurin tail.
double image_sum(const Multiplier& mult, double z, double period) {
  if (mult.kind == SymbolKind::Derivative) return 0.0;
  constexpr int kTerms = 64;
  const bool odd = mult.odd();
  double sum = 0.0;
  for (int j = 1; j <= kTerms; ++j) sum += kernel(mult, z + period * j) + kernel(mult, z - period * j);
  // Kernel magnitude is c·|z|^{-p}.
  const double p = odd ? 2.0 - 2.0 * mult.order : 1.0 + 2.0 * mult.order;
  const double c = std::abs(kernel(mult, 1.0));
  const double sgn = kernel(mult, 1.0) < 0 ? -1.0 : 1.0;
  const double T = period * (kTerms + 0.5);
  const double up = T + z, down = T - z;
  double tail;
  if (odd) {
    // Σ c[(Pt+z)^{-p} - (Pt-z)^{-p}]
    tail = std::abs(p - 1.0) < 1e-12 ? -std::log(up / down)
                                     : -(std::pow(up, 1.0 - p) - std::pow(down, 1.0 - p)) / (1.0 - p);
  } else {
    tail = (std::pow(up, 1.0 - p) + std::pow(down, 1.0 - p)) / (p - 1.0);
  }
  return sum + sgn * c * tail / period;
}

}  // namespace

FreeSpaceOperator::FreeSpaceOperator(const Multiplier& mult, const Grid& grid)
    : mult_(mult), grid_(grid) {
  const Grid wide{2.0 * grid.L, 2 * grid.n};
  const double dx = grid.dx();
  const double period = 2.0 * wide.L;
  Workspace& ws = workspace(wide.n);
  for (std::size_t i = 0; i < wide.n; ++i) {
    const double z = (i < grid.n ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(wide.n)) * dx;
    // Offsets between points of [-L, L) never reach ±2L, so index n is unused.
    ws.real()[i] = i == grid.n ? 0.0 : image_sum(mult, z, period) * dx;
  }
  ws.forward();
  table_ = symbol_table(mult, wide);
  for (std::size_t j = 0; j < table_.size(); ++j) table_[j] -= ws.spectrum()[j];
}

void FreeSpaceOperator::apply(std::span<const double> in, std::span<double> out) const {
  const std::size_t n = grid_.n;
  if (in.size() != n || out.size() != n)
    throw Error(ErrorKind::InvalidParameter, "operand size does not match the grid");
  Workspace& ws = workspace(2 * n);
  double* buf = ws.real();
  // Place [-L, L) at the middle of [-2L, 2L) so the offset of every pair of
  // points stays inside (-2L, 2L).
  std::fill(buf, buf + 2 * n, 0.0);
  std::copy(in.begin(), in.end(), buf + n / 2);
  ws.forward();
  kernels::multiply_table(table_.data(), ws.spectrum(), table_.size());
  ws.backward();
  std::copy(buf + n / 2, buf + n / 2 + n, out.begin());
}

const FreeSpaceOperator& free_space_operator(const Multiplier& mult, const Grid& grid) {
  using Key = std::tuple<int, double, double, std::size_t>;
  static std::mutex m;
  static std::map<Key, std::unique_ptr<FreeSpaceOperator>> cache;
  const Key key{static_cast<int>(mult.kind), mult.order, grid.L, grid.n};
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[key];
  if (!slot) slot = std::make_unique<FreeSpaceOperator>(mult, grid);
  return *slot;
}

namespace reference {

void apply(const Multiplier& mult, const Grid& grid, std::span<const double> in,
           std::span<double> out) {
  const std::size_t n = grid.n;
  if (in.size() != n || out.size() != n)
    throw Error(ErrorKind::InvalidParameter, "operand size does not match the grid");
  std::vector<double> c(n), s(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
    c[m] = std::cos(phase);
    s[m] = std::sin(phase);
  }
  const auto table = symbol_table(mult, grid);
  const std::size_t modes = n / 2 + 1;
  std::vector<std::complex<double>> spec(modes);
  for (std::size_t j = 0; j < modes; ++j) {
    double re = 0.0, im = 0.0;
    std::size_t idx = 0;
    for (std::size_t l = 0; l < n; ++l) {
      re += in[l] * c[idx];
      im -= in[l] * s[idx];
      idx += j;
      if (idx >= n) idx -= n;
    }
    spec[j] = table[j] * std::complex<double>(re, im);
  }
  std::vector<double> result(n);
  for (std::size_t l = 0; l < n; ++l) {
    double acc = spec[0].real() + spec[modes - 1].real() * ((l % 2 == 0) ? 1.0 : -1.0);
    std::size_t idx = l;
    for (std::size_t j = 1; j + 1 < modes; ++j) {
      acc += 2.0 * (spec[j].real() * c[idx] - spec[j].imag() * s[idx]);
      idx += l;
      if (idx >= n) idx -= n;
    }
    result[l] = acc / static_cast<double>(n);
  }
  std::copy(result.begin(), result.end(), out.begin());
}

}  // namespace reference

double fast_pow(double x, double exponent) {
  if (exponent == 1.0) return x;
  if (exponent == 2.0) return x * x;
  if (exponent == 0.5) return std::sqrt(x);
  if (exponent == 1.5) return x * std::sqrt(x);
  if (exponent == 3.0) return x * x * x;
  return std::pow(x, exponent);
}

namespace kernels {

void power(std::span<const double> in, double exponent, std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static) if (n >= static_cast<std::ptrdiff_t>(kParallelThreshold))
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = fast_pow(in[i], exponent);
}

void scaled_power(std::span<const double> in, double scale, double exponent, std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static) if (n >= static_cast<std::ptrdiff_t>(kParallelThreshold))
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = scale * fast_pow(in[i], exponent);
}

void multiply_table(const std::complex<double>* table, std::complex<double>* spectrum, std::size_t modes) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(modes);
#pragma omp parallel for schedule(static) if (n >= static_cast<std::ptrdiff_t>(kParallelThreshold))
  for (std::ptrdiff_t j = 0; j < n; ++j) spectrum[j] *= table[j];
}

}  // namespace kernels

namespace serial {

void power(std::span<const double> in, double exponent, std::span<double> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = fast_pow(in[i], exponent);
}

void multiply_table(const std::complex<double>* table, std::complex<double>* spectrum, std::size_t modes) {
  for (std::size_t j = 0; j < modes; ++j) spectrum[j] *= table[j];
}

}  // namespace serial

void configure_threads() {
#ifdef _OPENMP
  static std::once_flag once;
  std::call_once(once, [] {
    if (const char* env = std::getenv("FRACSIM_THREADS")) {
      try {
        const int cap = std::stoi(env);
        if (cap >= 1) omp_set_num_threads(cap);
      } catch (const std::exception&) {
      }
    }
  });
#endif
}

}  // namespace fracsim::spectral
