#include "fracsim/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracsim/errors.hpp"
#include "fracsim/specfun.hpp"

namespace fracsim {

namespace {

using spectral::Multiplier;
using spectral::SymbolKind;

void check_order(double s, double lo, bool lo_open, double hi, bool hi_open, const char* what) {
  const bool ok = (lo_open ? s > lo : s >= lo) && (hi_open ? s < hi : s <= hi);
  if (!ok || !std::isfinite(s)) throw Error(ErrorKind::InvalidParameter, std::string(what) + " order out of range", {{"s", s}});
}

RadialProfile apply_periodic(const RadialProfile& f, const Multiplier& mult) {
  std::vector<double> out(f.size());
  spectral::apply(mult, f.grid(), f.values(), out);
  if (f.even()) {
    // High-order symbols amplify rounding; restore the exact parity.
    const Grid& g = f.grid();
    const double sign = mult.odd() ? -1.0 : 1.0;
    for (std::size_t i = 1; i < g.center(); ++i) {
      const std::size_t j = g.mirror(i);
      const double a = 0.5 * (out[i] + sign * out[j]);
      out[i] = a;
      out[j] = sign * a;
    }
    if (mult.odd()) out[0] = out[g.center()] = 0.0;
  }
  return RadialProfile(f.grid(), std::move(out), f.even() && !mult.odd());
}

}  // namespace

RadialProfile frac_laplacian(const RadialProfile& f, double s, Boundary boundary) {
  check_order(s, 0.0, true, 1.0, false, "fractional Laplacian");
  const Multiplier mult{SymbolKind::FractionalLaplacian, s};
  RadialProfile out;
  if (boundary == Boundary::Periodic || s == 1.0) {
    out = apply_periodic(f, mult);
  } else {
    std::vector<double> v(f.size());
    spectral::free_space_operator(mult, f.grid()).apply(f.values(), v);
    out = RadialProfile(f.grid(), std::move(v), f.even());
  }
  const double peak = std::max(std::abs(f.max()), 1e-300);
  const double edge = std::max(std::abs(f[1]), std::abs(f[f.size() - 1]));
  if (edge > 1e-8 * peak) out.warnings.emplace_back("DomainTooSmall");
  return out;
}

RadialProfile spectral_potential(const RadialProfile& f, double s) {
  check_order(s, 0.0, true, 1.0, true, "potential");
  return apply_periodic(f, {SymbolKind::Potential, s});
}

RadialProfile potential_gradient(const RadialProfile& f, double s, Boundary boundary) {
  check_order(s, 0.0, true, 1.0, true, "potential gradient");
  const Multiplier mult{SymbolKind::PotentialGradient, s};
  if (boundary == Boundary::Periodic) return apply_periodic(f, mult);
  std::vector<double> out(f.size());
  spectral::free_space_operator(mult, f.grid()).apply(f.values(), out);
  return RadialProfile(f.grid(), std::move(out), false);
}

FarField::FarField(double order, const Grid& grid)
    : mult_{SymbolKind::PotentialGradient, order}, grid_(grid), shape_(grid.n, 0.0) {}

void FarField::build(double p) {
  const std::size_t n = grid_.n;
  const double edge = grid_.L - 0.5 * grid_.dx();
  // ∫_{|z|>edge} K(y-z)|z|^{-p} dz with z = edge/t; both half-lines folded.
#pragma omp parallel
  {
    boost::math::quadrature::tanh_sinh<double> quad;
#pragma omp for schedule(dynamic, 64)
    for (std::size_t i = n / 2; i < n; ++i) {
      const double y = grid_.x(i);
      auto integrand = [&](double t) {
        if (t < 1e-14) return 0.0;
        const double z = edge / t;
        return std::pow(z, -p) * (spectral::kernel(mult_, y - z) + spectral::kernel(mult_, y + z)) * edge / (t * t);
      };
      shape_[i] = i == n / 2 ? 0.0 : quad.integrate(integrand, 0.0, 1.0);
    }
  }
  for (std::size_t i = n / 2 + 1; i < n; ++i) shape_[n - i] = -shape_[i];
  shape_[0] = 0.0;
  exponent_ = p;
}

bool FarField::add(std::span<const double> u, std::span<double> out) {
  const std::size_t n = grid_.n;
  const double dx = grid_.dx();
  const std::size_t ia = n / 2 + static_cast<std::size_t>(0.6 * grid_.L / dx);
  const std::size_t ib = n - 8;
  double peak = 0.0;
  for (double v : u) peak = std::max(peak, std::abs(v));
  const double ua = 0.5 * (u[ia] + u[n - ia]);
  const double ub = 0.5 * (u[ib] + u[n - ib]);
  amplitude_ = 0.0;
  if (!(ub > 1e-12 * peak) || !(ua > ub)) return false;
  const double ya = grid_.x(ia), yb = grid_.x(ib);
  const double p = std::log(ua / ub) / std::log(yb / ya);
  const double q = 1.0 - 2.0 * mult_.order;
  if (!std::isfinite(p) || p + q <= 0.0) return false;
  if (exponent_ < 0.0 || std::abs(p - exponent_) > refit_tol_) build(p);
  amplitude_ = ub * std::pow(yb, exponent_);
  for (std::size_t i = 0; i < n; ++i) out[i] += amplitude_ * shape_[i];
  return true;
}

std::vector<double> gradient_with_far_field(std::span<const double> u, double s, const Grid& grid,
                                            FarField* far) {
  std::vector<double> out(grid.n);
  spectral::free_space_operator({SymbolKind::PotentialGradient, s}, grid).apply(u, out);
  if (far) far->add(u, out);
  return out;
}

namespace {

struct ResidualParts {
  double order = 0.0;          // order of the potential gradient
  double operand_power = 1.0;  // power of φ inside the operator
  double transport_power = 1.0;
  bool multiply_by_profile = false;
};

ResidualParts parts_for(const ModelParams& p) {
  const double order = p.order.value, a = p.nonlinearity.value;
  switch (p.model) {
    case Model::M1: return {1.0 - order, a, 1.0, false};
    case Model::M2: return {order, 1.0, 2.0 - a, false};
    case Model::M3: return {order, a - 1.0, 1.0, true};
    case Model::MG: return {order, p.second.value - 1.0, 2.0 - a, false};
  }
  throw Error(ErrorKind::UnknownModel, "unknown model");
}

double safe_pow(double v, double e) {
  if (v <= 0.0) return e > 0.0 ? 0.0 : (e == 0.0 ? 1.0 : 0.0);
  return spectral::fast_pow(v, e);
}

}  // namespace

namespace {

std::vector<double> operand_of(const RadialProfile& profile, const ResidualParts& parts) {
  std::vector<double> u(profile.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = parts.operand_power == 1.0 ? profile[i] : safe_pow(profile[i], parts.operand_power);
  return u;
}

void check_sign(const RadialProfile& profile, double exclusion_radius) {
  const Grid& grid = profile.grid();
  for (std::size_t i = 0; i < grid.n; ++i)
    if (profile[i] < -1e-14 && std::abs(grid.x(i)) >= exclusion_radius)
      throw Error(ErrorKind::NegativeValue, "profile has negative entries", {{"x", grid.x(i)}, {"value", profile[i]}});
}

}  // namespace

std::vector<double> residual_field(const RadialProfile& profile, const ModelParams& p,
                                   const ExponentSet& exps, bool far_field, double exclusion_radius) {
  const ResidualParts parts = parts_for(p);
  const Grid& grid = profile.grid();
  const std::size_t n = grid.n;
  check_sign(profile, exclusion_radius);
  const std::vector<double> u = operand_of(profile, parts);
  FarField far(parts.order, grid);
  std::vector<double> r = gradient_with_far_field(u, parts.order, grid, far_field ? &far : nullptr);
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = std::max(profile[i], 0.0);
    if (parts.multiply_by_profile) r[i] *= phi;
    // Outside the positivity set a nonpositive power is not part of the identity.
    const double transport = phi > 0.0 ? safe_pow(phi, parts.transport_power) : 0.0;
    r[i] += exps.beta * grid.x(i) * transport;
  }
  return r;
}

ResidualReport vector_residual(const RadialProfile& profile, const ModelParams& p,
                               const ExponentSet& exps, const ResidualOptions& options) {
  p.validate();
  const Grid& grid = profile.grid();
  const std::size_t n = grid.n;
  ResidualReport rep;
  rep.model = p.model;
  rep.grid = grid;
  const double peak = profile.max();
  if (!(peak > 0.0)) {
    rep.evaluation_region = {options.exclusion_radius, options.exclusion_radius};
    return rep;
  }
  double radius = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    if (profile[i] > options.threshold * peak) radius = std::max(radius, std::abs(grid.x(i)));
  const double hi = options.inner_fraction * radius;
  rep.evaluation_region = {options.exclusion_radius, hi};

  const ResidualParts parts = parts_for(p);
  std::vector<double> r = residual_field(profile, p, exps, false, options.exclusion_radius);
  if (options.far_field) {
    const std::vector<double> u = operand_of(profile, parts);
    std::vector<double> extra(n, 0.0);
    FarField far(parts.order, grid);
    if (far.add(u, extra)) {
      rep.far_field = true;
      for (std::size_t i = 0; i < n; ++i)
        r[i] += parts.multiply_by_profile ? std::max(profile[i], 0.0) * extra[i] : extra[i];
    }
  }
  double sup = 0.0, sq = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double a = std::abs(grid.x(i));
    if (a > hi || a < options.exclusion_radius) continue;
    sup = std::max(sup, std::abs(r[i]));
    sq += r[i] * r[i];
    ++rep.points;
  }
  rep.residual_sup = sup;
  rep.residual_l2 = std::sqrt(sq * grid.dx());
  return rep;
}

RadialProfile power_law_profile(const Grid& grid, double C, double alpha, double core_radius) {
  grid.validate();
  if (!(C > 0.0) || !std::isfinite(alpha) || !(alpha > 0.0))
    throw Error(ErrorKind::InvalidParameter, "power law needs C > 0 and alpha > 0");
  const std::size_t n = grid.n, c = grid.center();
  const double dx = grid.dx();
  if (core_radius <= 0.0) core_radius = 4.0 * dx;
  // The core ends at a half-grid point so the discrete moments have clean limits.
  const std::size_t k = static_cast<std::size_t>(std::ceil(core_radius / dx));
  const double R = (static_cast<double>(k) - 0.5) * dx;
  for (int j : {0, 2, 4})
    if (std::abs(j + 1.0 - alpha) < 1e-8)
      throw Error(ErrorKind::InvalidParameter, "power law exponent hits a logarithmic moment", {{"alpha", alpha}});

  std::vector<double> v(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(grid.x(i));
    if (a > R) v[i] = C * std::pow(a, -alpha);
  }
  v[0] = C * std::pow(grid.L, -alpha);
  // Quartic a0 + a1 y² + a2 y⁴ on |y| < R. Its moments of orders 0, 2, 4 are
  // chosen so the discrete moments over |y| < W equal the regularized
  // moments 2C W^{j+1-α}/(j+1-α) of the power law. Matching the core
  // integrals alone would leave the quadrature error of the steep sampled
  // flank just outside R, which shows up as a spurious mass. The mass uses a
  // wide window; the higher moments a local one, since far out their
  // weights amplify roundoff.
  const std::size_t local = std::min<std::size_t>(std::max<std::size_t>(16 * k, 64), n / 4);
  double A[3][3] = {}, rhs[3];
  for (int row = 0; row < 3; ++row) {
    const int j = 2 * row;
    const std::size_t kw = row == 0 ? n / 4 : local;
    const double W = (static_cast<double>(kw) - 0.5) * dx;
    double flank = 0.0;
    for (std::size_t i = c - (kw - 1); i <= c + (kw - 1); ++i)
      flank += std::pow(grid.x(i), j) * v[i] * dx;
    rhs[row] = 2.0 * C * std::pow(W, j + 1.0 - alpha) / (j + 1.0 - alpha) - flank;
    for (std::size_t i = c - (k - 1); i <= c + (k - 1); ++i) {
      const double y = grid.x(i);
      for (int col = 0; col < 3; ++col) A[row][col] += std::pow(y, j + 2 * col) * dx;
    }
  }
  // Gaussian elimination on the 3x3 system.
  for (int col = 0; col < 3; ++col) {
    for (int row = col + 1; row < 3; ++row) {
      const double f = A[row][col] / A[col][col];
      for (int k2 = col; k2 < 3; ++k2) A[row][k2] -= f * A[col][k2];
      rhs[row] -= f * rhs[col];
    }
  }
  double coef[3];
  for (int row = 2; row >= 0; --row) {
    double acc = rhs[row];
    for (int k2 = row + 1; k2 < 3; ++k2) acc -= A[row][k2] * coef[k2];
    coef[row] = acc / A[row][row];
  }
  for (std::size_t i = c - (k - 1); i <= c + (k - 1); ++i) {
    const double y2 = grid.x(i) * grid.x(i);
    v[i] = coef[0] + coef[1] * y2 + coef[2] * y2 * y2;
  }

  // Strip grid-scale content with a smooth spectral cutoff.
  auto& ws = spectral::workspace(n);
  std::copy(v.begin(), v.end(), ws.real());
  ws.forward();
  const double kmax = grid.wavenumber(n / 2);
  // A gentle roll-off: a sharp cutoff rings and drives the flank negative.
  for (std::size_t j = 0; j < ws.modes(); ++j) ws.spectrum()[j] *= std::exp(-36.0 * std::pow(grid.wavenumber(j) / kmax, 8.0));
  ws.backward();
  std::copy(ws.real(), ws.real() + n, v.begin());
  for (std::size_t i = 1; i < n / 2; ++i) v[n - i] = v[i] = 0.5 * (v[i] + v[n - i]);
  return RadialProfile(grid, std::move(v), true);
}

namespace {

struct Quadrature {
  double tol;
  boost::math::quadrature::tanh_sinh<double> finite;

  // Endpoint samples can land on an integrable singularity; they carry no weight.
  template <class F>
  static auto guarded(F& f) {
    return [&f](double t) {
      const double v = f(t);
      return std::isfinite(v) ? v : 0.0;
    };
  }
  template <class F>
  double on(F&& f, double a, double b) {
    if (!(b > a)) return 0.0;
    double err = 0.0, l1 = 0.0;
    const double v = finite.integrate(guarded(f), a, b, tol, &err, &l1);
    check(v, err, l1);
    return v;
  }
  // ∫_0^∞ h(t) dt for h = f(r)·r on a logarithmic variable r. An algebraic
  // endpoint r^{-1±ε} becomes e^{-εt}; for small ε that decays too slowly for
  // any sampling limit, so the integral stops after 100 decades and the rest
  // is added as the exponential fitted to the last samples.
  template <class H>
  double logarithmic(H&& h) {
    constexpr double T = 100.0 * 2.302585092994046;
    double err = 0.0, l1 = 0.0, e2 = 0.0, l2 = 0.0;
    double v = finite.integrate(guarded(h), 0.0, 10.0, tol, &err, &l1);
    v += finite.integrate(guarded(h), 10.0, T, tol, &e2, &l2);
    const double v1 = h(T - 5.0), v2 = h(T);
    if (std::isfinite(v1) && std::isfinite(v2) && v2 != 0.0) {
      const double rate = std::log(v1 / v2) / 5.0;
      if (v1 / v2 > 1.0 && std::isfinite(rate)) {
        v += v2 / rate;
      } else if (std::abs(v2) > tol * std::abs(v)) {
        throw Error(ErrorKind::QuadratureNonConvergent, "integrand does not decay at the endpoint",
                    {{"estimate", v}, {"endpoint_value", v2}});
      }
    }
    check(v, err + e2, l1 + l2);
    return v;
  }
  template <class F>
  double tail(F&& f, double a) {
    return logarithmic([&](double t) {
      const double r = a * std::exp(t);
      return f(r) * r;
    });
  }
  // [0, b] through r = b·e^{-t}, for integrable power singularities at 0.
  template <class F>
  double head(F&& f, double b) {
    return logarithmic([&](double t) {
      const double r = b * std::exp(-t);
      return f(r) * r;
    });
  }
  // Smooth cancellation near the origin; Gauss-Kronrod never samples the endpoint.
  template <class F>
  double soft(F&& f, double a, double b) {
    double err = 0.0, l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(guarded(f), a, b, 15, tol, &err, &l1);
    check(v, err, l1);
    return v;
  }
  void check(double v, double err, double l1) const {
    if (!std::isfinite(v) || err > 1e3 * tol * std::max(l1, 1e-300))
      throw Error(ErrorKind::QuadratureNonConvergent, "quadrature did not converge", {{"estimate", v}, {"error", err}});
  }
};

// Integrates g(ρ, |ρ - x|) over (0, ∞). Pieces adjacent to the singular
// point x are parameterized by the distance to it so that distance is exact.
template <class G>
double line_integral(Quadrature& q, G&& g, double x, std::vector<double> cuts) {
  cuts.push_back(0.0);
  if (x > 0.0) {
    cuts.push_back(0.5 * x);
    cuts.push_back(x);
    cuts.push_back(2.0 * x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.size() == 1) cuts.push_back(1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (x > 0.0 && b == x) {
      sum += q.on([&](double h) { return g(x - h, h); }, 0.0, b - a);
    } else if (x > 0.0 && a == x) {
      sum += q.on([&](double h) { return g(x + h, h); }, 0.0, b - a);
    } else if (a == 0.0) {
      sum += q.head([&](double r) { return g(r, std::abs(r - x)); }, b);
    } else {
      sum += q.on([&](double r) { return g(r, std::abs(r - x)); }, a, b);
    }
  }
  return sum + q.tail([&](double r) { return g(r, r - x); }, cuts.back());
}

double sphere_area(int dim) {  // |S^{dim-1}|
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

}  // namespace

double quadrature_oracle(const std::function<double(double)>& f, double s, int N, double x,
                         OracleKind kind, const OracleOptions& options) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw Error(ErrorKind::InvalidParameter, "evaluation radius must be finite and >= 0");
  Quadrature q{options.tolerance, {}};
  std::vector<double> cuts = options.breakpoints;

  if (kind == OracleKind::Laplacian) {
    if (N != 1) throw Error(ErrorKind::InvalidParameter, "hypersingular oracle is one-dimensional");
    check_order(s, 0.0, true, 1.0, true, "fractional Laplacian");
    const double c = std::pow(4.0, s) * std::tgamma(0.5 + s) / (std::sqrt(std::numbers::pi) * std::abs(std::tgamma(-s)));
    const double fx = f(x);
    auto g = [&](double h) { return (2.0 * fx - f(x + h) - f(std::abs(x - h))) / std::pow(h, 1.0 + 2.0 * s); };
    std::vector<double> hcuts;
    if (x > 0.0) hcuts.push_back(x);
    for (double b : cuts)
      if (b > 0.0) {
        if (b != x) hcuts.push_back(std::abs(b - x));
        hcuts.push_back(b + x);
      }
    std::sort(hcuts.begin(), hcuts.end());
    double near = hcuts.empty() ? 1.0 : std::min(1.0, hcuts.front());
    if (near <= 0.0) near = 1.0;
    double sum = q.soft(g, 0.0, near);
    std::vector<double> rest;
    for (double b : hcuts)
      if (b > near) rest.push_back(b);
    rest.insert(rest.begin(), near);
    for (std::size_t i = 0; i + 1 < rest.size(); ++i) sum += q.on(g, rest[i], rest[i + 1]);
    sum += q.tail(g, rest.back());
    return c * sum;
  }

  if (!(s > 0.0) || !(2.0 * s < N)) throw Error(ErrorKind::InvalidParameter, "Riesz potential requires 0 < 2s < N");
  if (N > 3) throw Error(ErrorKind::InvalidParameter, "potential oracle supports N <= 3");
  const double norm = gamma_factor(2.0 * s, N);
  const double a = N - 2.0 * s;  // kernel |x - y|^{-a}

  if (N == 1) {
    // Reflected half-line plus the half-line through the evaluation point.
    auto g = [&](double y, double h) { return f(y) * (std::pow(h, -a) + std::pow(x + y, -a)); };
    return line_integral(q, g, x, cuts) / norm;
  }

  // Radial integral of ρ^{N-1} f(ρ) A(ρ), A the spherical mean of the kernel.
  auto angular = [&](double rho, double h) -> double {
    if (x == 0.0) return sphere_area(N) * std::pow(rho, -a);
    if (N == 3) {
      const double e = 2.0 - a;  // 2s - 1
      const double up = x + rho;
      const double bracket = std::abs(e) < 1e-10 ? std::log(up / h) : (std::pow(up, e) - std::pow(h, e)) / e;
      return 2.0 * std::numbers::pi * bracket / (x * rho);
    }
    boost::math::quadrature::tanh_sinh<double> inner;
    auto k = [&](double th) {
      const double sn = std::sin(0.5 * th);
      const double v = std::pow(h * h + 4.0 * x * rho * sn * sn, -0.5 * a);
      return std::isfinite(v) ? v : 0.0;
    };
    return 2.0 * inner.integrate(k, 0.0, std::numbers::pi, options.tolerance);
  };
  auto g = [&](double rho, double h) {
    if (rho <= 0.0) return 0.0;
    return std::pow(rho, N - 1.0) * f(rho) * angular(rho, h);
  };
  return line_integral(q, g, x, cuts) / norm;
}

double quadrature_oracle(const RadialProfile& f, double s, int N, double x, OracleKind kind,
                         const OracleOptions& options) {
  const Grid& grid = f.grid();
  const double dx = grid.dx();
  const std::size_t c = grid.center();
  auto value = [&](double r) {
    const double t = r / dx;
    const auto i = static_cast<std::size_t>(t);
    if (c + i + 1 >= grid.n) return 0.0;
    const double w = t - static_cast<double>(i);
    return (1.0 - w) * f[c + i] + w * f[c + i + 1];
  };
  OracleOptions opts = options;
  opts.breakpoints.push_back(grid.L - 2.0 * dx);
  return quadrature_oracle(value, s, N, x, kind, opts);
}

}  // namespace fracsim
