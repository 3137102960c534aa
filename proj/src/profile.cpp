#include "fracsim/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracsim/errors.hpp"

namespace fracsim {

double Grid::wavenumber(std::size_t j) const {
  return std::numbers::pi * static_cast<double>(j) / L;
}

void Grid::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw Error(ErrorKind::InvalidParameter, "grid half-width L must be positive");
  if (n < (1u << 10) || (n & (n - 1)) != 0)
    throw Error(ErrorKind::InvalidParameter, "grid size n must be a power of two >= 1024",
                {{"n", static_cast<double>(n)}});
}

std::vector<double> Grid::abscissae() const {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = this->x(i);
  return x;
}

double grid_mass(const Grid& grid, const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * grid.dx();
}

RadialProfile::RadialProfile(Grid grid, std::vector<double> values, bool even)
    : grid_(grid), values_(std::move(values)), even_(even) {
  grid_.validate();
  if (values_.size() != grid_.n)
    throw Error(ErrorKind::InvalidParameter, "profile length does not match the grid");
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteInput, "profile contains non-finite values");
  }
  mass_ = grid_mass(grid_, values_);
  if (even_) {
    double scale = 1.0;
    for (double v : values_) scale = std::max(scale, std::abs(v));
    if (parity_defect() > 1e-12 * scale)
      throw Error(ErrorKind::InvalidParameter, "profile flagged even is not symmetric");
  }
}

double RadialProfile::max() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double RadialProfile::parity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < grid_.n; ++i)
    worst = std::max(worst, std::abs(values_[i] - values_[grid_.mirror(i)]));
  return worst;
}

}  // namespace fracsim
