#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fracsim {

// Uniform periodic grid on [-L, L): x_i = -L + i·dx, dx = 2L/n. The point x = 0
// sits at index n/2 and the mirror of index i is (n - i) mod n.
struct Grid {
  double L = 50.0;
  std::size_t n = 1u << 14;

  double dx() const { return 2.0 * L / static_cast<double>(n); }
  double x(std::size_t i) const { return -L + static_cast<double>(i) * dx(); }
  std::size_t center() const { return n / 2; }
  std::size_t mirror(std::size_t i) const { return (n - i) % n; }
  // Angular wavenumber of real-to-complex index j ∈ [0, n/2].
  double wavenumber(std::size_t j) const;
  // Throws Error(InvalidParameter) unless n is a power of two ≥ 2^10 and L > 0.
  void validate() const;
  std::vector<double> abscissae() const;
};

// Grid function used for radial profiles, stored as the full even extension.
class RadialProfile {
 public:
  RadialProfile() = default;
  RadialProfile(Grid grid, std::vector<double> values, bool even = true);

  template <class F>
  static RadialProfile sample(const Grid& grid, F&& f, bool even = true) {
    std::vector<double> v(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) v[i] = f(grid.x(i));
    return RadialProfile(grid, std::move(v), even);
  }

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  bool even() const { return even_; }
  double mass() const { return mass_; }
  double max() const;
  // Largest deviation from values(-r) = values(r).
  double parity_defect() const;

  std::vector<std::string> warnings;

 private:
  Grid grid_;
  std::vector<double> values_;
  bool even_ = true;
  double mass_ = 0.0;
};

double grid_mass(const Grid& grid, const std::vector<double>& values);

}  // namespace fracsim
