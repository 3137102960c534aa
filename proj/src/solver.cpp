#include "fracsim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracsim/errors.hpp"
#include "fracsim/specfun.hpp"
#include "fracsim/spectral.hpp"

namespace fracsim {

namespace {

using spectral::Multiplier;
using spectral::SymbolKind;

constexpr double kNoRefit = std::numeric_limits<double>::infinity();

// One family of rescaled M1 flows on a fixed grid. residual() must run before
// step(); it leaves the flux r = ∇(-Δ)^{s-1}φ^m + βyφ and the diffusion bound
// behind for the step.
class RescaledFlow {
 public:
  RescaledFlow(double m, double s, double beta, const Grid& grid, bool far_field)
      : m_(m), s_(s), beta_(beta), grid_(grid), far_on_(far_field),
        op_(spectral::free_space_operator({SymbolKind::PotentialGradient, 1.0 - s}, grid)),
        far_(1.0 - s, grid), ws_(grid.n), y_(grid.abscissae()), u_(grid.n), r_(grid.n), x_(grid.n),
        damping_(grid.n / 2 + 1) {
    for (std::size_t j = 0; j < damping_.size(); ++j) damping_[j] = std::pow(grid.wavenumber(j), 2.0 * s);
  }

  void allow_refit(bool allow, double tol = 1e-4) { far_.set_refit_tolerance(allow ? tol : kNoRefit); }

  double residual(const std::vector<double>& phi) {
    const std::size_t n = grid_.n;
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      u_[i] = std::max(phi[i], 0.0);
      peak = std::max(peak, u_[i]);
    }
    kappa_ = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (u_[i] > 1e-6 * peak) kappa_ = std::max(kappa_, m_ * std::pow(u_[i], m_ - 1.0));
    spectral::kernels::power(u_, m_, u_);
    op_.apply(u_, r_);
    if (far_on_) far_.add(u_, r_);
    double sup = 0.0;
    const double inner = 0.9 * grid_.L;
    for (std::size_t i = 0; i < n; ++i) {
      r_[i] += beta_ * y_[i] * phi[i];
      if (std::abs(y_[i]) <= inner) sup = std::max(sup, std::abs(r_[i]));
    }
    return sup;
  }

  // φ += dt·(1 + dt·β∂(y·))^{-1}(1 + dt·κ(-Δ)^s)^{-1}∇·r, zero flux at the ends.
  void step(std::vector<double>& phi, double dt) {
    const std::size_t n = grid_.n, c = grid_.center();
    const double dx = grid_.dx();
    double* F = ws_.real();
    // Upwind in the direction of the transport velocity -βy.
    F[0] = 0.0;
    for (std::size_t i = c + 1; i < n; ++i) F[i] = ((i + 1 < n ? r_[i + 1] : 0.0) - r_[i]) / dx;
    for (std::size_t i = 1; i < c; ++i) F[i] = (r_[i] - (i > 1 ? r_[i - 1] : 0.0)) / dx;
    F[c] = (r_[c + 1] - r_[c - 1]) / dx;
    ws_.forward();
    auto* U = ws_.spectrum();
    for (std::size_t j = 0; j < damping_.size(); ++j) U[j] /= 1.0 + dt * kappa_ * damping_[j];
    ws_.backward();
    // The node at -L is held at zero; hand its share to the neighbours.
    F[1] += 0.5 * F[0];
    F[n - 1] += 0.5 * F[0];
    F[0] = 0.0;

    const double lam = dt * beta_ / dx;
    x_[0] = 0.0;
    x_[1] = F[1] / (1.0 - lam * y_[1]);
    for (std::size_t i = 2; i < c; ++i) x_[i] = (F[i] - lam * y_[i - 1] * x_[i - 1]) / (1.0 - lam * y_[i]);
    x_[n - 1] = F[n - 1] / (1.0 + lam * y_[n - 1]);
    for (std::size_t i = n - 2; i > c; --i) x_[i] = (F[i] + lam * y_[i + 1] * x_[i + 1]) / (1.0 + lam * y_[i]);
    x_[c] = F[c] + lam * (y_[c + 1] * x_[c + 1] - y_[c - 1] * x_[c - 1]);
    for (std::size_t i = 0; i < n; ++i) phi[i] += dt * x_[i];
    phi[0] = 0.0;
  }

 private:
  double m_, s_, beta_;
  Grid grid_;
  bool far_on_;
  const spectral::FreeSpaceOperator& op_;
  FarField far_;
  spectral::Workspace ws_;
  std::vector<double> y_, u_, r_, x_, damping_;
  double kappa_ = 0.0;
};

double total(const Grid& g, const std::vector<double>& v) { return grid_mass(g, v); }

void renormalize(const Grid& g, std::vector<double>& phi, double mass) {
  const double now = total(g, phi);
  if (!(now > 0.0) || !std::isfinite(now))
    throw Error(ErrorKind::Instability, "mass is no longer positive and finite", {{"mass", now}});
  for (double& v : phi) v *= mass / now;
}

void symmetrize(std::vector<double>& phi) {
  const std::size_t n = phi.size();
  for (std::size_t i = 1; i < n / 2; ++i) phi[i] = phi[n - i] = 0.5 * (phi[i] + phi[n - i]);
}

std::vector<double> initial_data(const Grid& g, const SolverConfig& cfg) {
  std::vector<double> phi(g.n);
  switch (cfg.initial) {
    case InitialCondition::Gaussian:
      for (std::size_t i = 0; i < g.n; ++i) phi[i] = std::exp(-0.5 * g.x(i) * g.x(i));
      break;
    case InitialCondition::Cap:
      for (std::size_t i = 0; i < g.n; ++i) phi[i] = std::max(1.0 - 0.25 * g.x(i) * g.x(i), 0.0);
      break;
    case InitialCondition::Custom:
      if (cfg.custom.size() != g.n)
        throw Error(ErrorKind::InvalidParameter, "custom initial data does not match the grid");
      phi = cfg.custom;
      for (double v : phi)
        if (!(v >= 0.0) || !std::isfinite(v))
          throw Error(ErrorKind::InvalidParameter, "initial data must be finite and nonnegative");
      break;
  }
  phi[0] = 0.0;
  renormalize(g, phi, cfg.mass);
  return phi;
}

// Large steps stay stable but over-damp the diffusion; for m < 1 the frozen
// coefficient m·φ^{m-1} is largest in the tail and the useful step is small.
double default_dt(double m) { return m < 1.0 ? 0.02 : 0.25; }
double default_max_dt(double m) { return m < 1.0 ? 0.05 : 2.0; }

void require_m1(const ModelParams& p) {
  if (p.model != Model::M1) throw Error(ErrorKind::InvalidParameter, "the solver handles M1 only");
  p.validate();
  if (p.N != 1) throw Error(ErrorKind::InvalidParameter, "numerical profiles are one-dimensional (N = 1)");
  const double mc = std::max(1.0 - 2.0 * p.order.value / p.N, 0.0);
  if (!(p.nonlinearity.value > mc))
    throw Error(ErrorKind::OutOfRange, "m must exceed (N-2s)/N", {{"m", p.nonlinearity.value}, {"m_c", mc}});
}

}  // namespace

const char* to_string(InitialCondition ic) {
  switch (ic) {
    case InitialCondition::Gaussian: return "Gaussian";
    case InitialCondition::Cap: return "Cap";
    case InitialCondition::Custom: return "Custom";
  }
  return "?";
}

const char* to_string(DecayConstantRole role) {
  switch (role) {
    case DecayConstantRole::MassDependent: return "MassDependent";
    case DecayConstantRole::Limit: return "Limit";
    case DecayConstantRole::LogCorrected: return "LogCorrected";
  }
  return "?";
}

void SolverConfig::validate() const {
  grid.validate();
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::InvalidParameter, "dt must be nonnegative");
  if (!(max_dt >= 0.0)) throw Error(ErrorKind::InvalidParameter, "max_dt must be nonnegative");
  if (!(tolerance > 0.0)) throw Error(ErrorKind::InvalidParameter, "tolerance must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw Error(ErrorKind::InvalidParameter, "mass must be positive");
  if (!(max_time > 0.0)) throw Error(ErrorKind::InvalidParameter, "max_time must be positive");
}

SolveResult solve_profile_m1(const ModelParams& p, const SolverConfig& cfg) {
  require_m1(p);
  cfg.validate();
  const Grid& g = cfg.grid;
  const double m = p.nonlinearity.value, s = p.order.value;
  const ExponentSet exps = similarity_exponents(p);
  RescaledFlow flow(m, s, exps.beta, g, cfg.far_field);

  std::vector<double> phi = initial_data(g, cfg), saved;
  double dt = cfg.dt > 0.0 ? cfg.dt : default_dt(m);
  const double dt_floor = 1e-6 * dt;
  const double max_dt = cfg.max_dt > 0.0 ? cfg.max_dt : default_max_dt(m);
  SolveResult out;
  flow.allow_refit(true);
  double res = flow.residual(phi);
  out.history.push_back({0, 0.0, res});

  auto finish = [&]() {
    RadialProfile prof(g, phi, cfg.symmetrize);
    ResidualOptions ro;
    ro.far_field = cfg.far_field;
    out.report = vector_residual(prof, p, exps, ro);
    out.profile = std::move(prof);
    out.final_dt = dt;
  };

  std::size_t next_check = 0;
  while (true) {
    if (res <= cfg.tolerance && out.steps >= next_check) {
      finish();
      if (out.report.residual_sup <= cfg.tolerance) break;
      // The full check refits the closure; keep stepping a while before retrying.
      next_check = out.steps + 50;
    }
    if (out.time >= cfg.max_time || out.steps >= cfg.max_steps) {
      std::map<std::string, double> details{{"residual_sup", res}, {"time", out.time}, {"steps", double(out.steps)}};
      for (std::size_t k = out.history.size() > 5 ? out.history.size() - 5 : 0; k < out.history.size(); ++k)
        details["history_step_" + std::to_string(out.history[k].step)] = out.history[k].residual_sup;
      throw Error(ErrorKind::NoConvergence, "pseudo-time budget exhausted before the residual tolerance", details);
    }
    // The closure exponent follows the iterate; near convergence it must match
    // the fresh fit the final check makes.
    flow.allow_refit(out.steps % 50 == 0, res < 1e3 * cfg.tolerance ? 1e-10 : 1e-4);
    saved = phi;
    flow.step(phi, dt);
    bool ok = true;
    double next = 0.0;
    try {
      renormalize(g, phi, cfg.mass);
      if (cfg.symmetrize) symmetrize(phi);
      next = flow.residual(phi);
      ok = std::isfinite(next) && (!cfg.adaptive || next <= 2.0 * res);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Instability) throw;
      ok = false;
    }
    if (!ok) {
      if (!cfg.adaptive || dt * 0.5 < dt_floor)
        throw Error(ErrorKind::Instability, "step blew up; retry with dt/2", {{"dt", dt}, {"suggested_dt", 0.5 * dt}});
      phi = saved;
      dt *= 0.5;
      ++out.rejected;
      res = flow.residual(phi);
      continue;
    }
    ++out.steps;
    out.time += dt;
    out.mass_error = std::max(out.mass_error, std::abs(total(g, phi) - cfg.mass));
    if (next > 1.05 * res) ++out.residual_increases;
    if (cfg.adaptive && next < res) dt = std::min(1.2 * dt, max_dt);
    res = next;
    if (out.steps % cfg.history_stride == 0) out.history.push_back({out.steps, out.time, res});
  }
  if (out.history.back().step != out.steps) out.history.push_back({out.steps, out.time, out.report.residual_sup});

  // Shape checks on the converged profile.
  const std::vector<double>& v = out.profile.values();
  const double peak = out.profile.max();
  const std::size_t c = g.center();
  if (out.profile.parity_defect() > 1e-10 * peak)
    throw Error(ErrorKind::NoConvergence, "converged profile is not even", {{"defect", out.profile.parity_defect()}});
  // The zero-flux ends bend the last few nodes; check where the residual is.
  for (std::size_t i = c; i + 1 < g.n && g.x(i + 1) <= 0.9 * g.L; ++i) {
    if (v[i + 1] > v[i] + 1e-10 * peak)
      throw Error(ErrorKind::NoConvergence, "converged profile is not nonincreasing in r", {{"r", g.x(i + 1)}});
  }
  for (std::size_t i = c; i < g.n; ++i) {
    if (g.x(i) > 0.5 * g.L) break;
    if (!(v[i] > 1e-12 * peak))
      throw Error(ErrorKind::NoConvergence, "converged profile is not positive on the inner half-domain", {{"r", g.x(i)}});
  }
  if (out.residual_increases > 0)
    out.notes.push_back(std::to_string(out.residual_increases) + " accepted steps increased the residual by more than 5%");
  return out;
}

DecayFit fit_power_tail(const RadialProfile& profile, FitWindow window) {
  const Grid& g = profile.grid();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  std::size_t count = 0;
  for (std::size_t i = g.center() + 1; i < g.n; ++i) {
    const double r = g.x(i), v = profile[i];
    if (r < window.lo || r > window.hi) continue;
    if (!(v > 0.0)) throw Error(ErrorKind::WindowTooNoisy, "profile is not positive on the fit window", {{"r", r}});
    const double lx = std::log(r), ly = std::log(v);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
    ++count;
  }
  if (count < 3) throw Error(ErrorKind::WindowTooNoisy, "fit window holds fewer than three points", {{"lo", window.lo}, {"hi", window.hi}});
  const double k = static_cast<double>(count);
  const double vx = sxx - sx * sx / k, vy = syy - sy * sy / k, cxy = sxy - sx * sy / k;
  const double slope = cxy / vx;
  DecayFit fit;
  fit.exponent = -slope;
  fit.constant = std::exp((sy - slope * sx) / k);
  fit.r_lo = window.lo;
  fit.r_hi = window.hi;
  fit.quality = vy > 0.0 ? std::clamp(cxy * cxy / (vx * vy), 0.0, 1.0) : 1.0;
  return fit;
}

DecayFit fit_decay_auto(const RadialProfile& profile) {
  const Grid& g = profile.grid();
  const std::size_t c = g.center();
  // Radius holding 90% of the grid mass.
  const double mass = profile.mass();
  double acc = profile[c] * g.dx(), l_eff = g.L;
  for (std::size_t i = c + 1; i < g.n; ++i) {
    acc += 2.0 * profile[i] * g.dx();
    if (acc >= 0.9 * mass) {
      l_eff = g.x(i);
      break;
    }
  }
  const double top = 0.9 * g.L, floor = std::max(0.5 * l_eff, 4.0 * g.dx());
  std::optional<DecayFit> best;
  for (double lo = 0.5 * top; lo >= floor; lo *= 0.5) {
    try {
      DecayFit fit = fit_power_tail(profile, {lo, top});
      if (fit.quality >= 0.995) best = fit;
    } catch (const Error&) {
    }
  }
  if (best) return *best;
  DecayFit fit = fit_power_tail(profile, {8.0, 40.0});
  fit.fallback_window = true;
  if (fit.quality < 0.99)
    throw Error(ErrorKind::WindowTooNoisy, "log-log fit quality below 0.99", {{"quality", fit.quality}});
  return fit;
}

DecayFit decay_fit(const RadialProfile& profile, const ModelParams& p) {
  if (p.model != Model::M1) throw Error(ErrorKind::InvalidParameter, "decay_fit expects M1 parameters");
  DecayFit fit = fit_decay_auto(profile);
  const double N = p.N, s = p.order.value, m = p.nonlinearity.value;
  const double m1 = N / (N + 2.0 * s);
  const double beta = similarity_exponents(p).beta;
  fit.sigma = (m - m1) * (N + 2.0 * s) * beta;
  if (std::abs(m - m1) < 1e-10) {
    fit.role = DecayConstantRole::LogCorrected;
    fit.predicted = N + 2.0 * s;
  } else if (m > m1) {
    fit.role = DecayConstantRole::MassDependent;
    fit.predicted = N + 2.0 * s;
  } else {
    fit.role = DecayConstantRole::Limit;
    fit.predicted = 2.0 * s / (1.0 - m);
    // Tail balance of ∇(-Δ)^{s-1}φ^m against βyφ for φ ~ C r^{-a}.
    const double a = fit.predicted, sigma_op = 1.0 - s;
    try {
      const double k = riesz_gamma_ratio(a * m, sigma_op, p.N);
      const double c = k * (a * m - 2.0 * sigma_op) / beta;
      if (c > 0.0) fit.limit_constant = std::pow(c, 1.0 / (1.0 - m));
    } catch (const Error&) {
    }
  }
  return fit;
}

ConvergenceReport convergence_demo(const ModelParams& p, const RadialProfile& u0, const DemoConfig& cfg) {
  require_m1(p);
  const Grid& g = u0.grid();
  for (double v : u0.values())
    if (!(v >= 0.0)) throw Error(ErrorKind::InvalidParameter, "initial data must be nonnegative");
  const double mass = u0.mass();
  if (!(mass > 0.0)) throw Error(ErrorKind::InvalidParameter, "initial data must have positive mass");
  SolverConfig target_cfg = cfg.solver;
  target_cfg.grid = g;
  target_cfg.mass = mass;
  ConvergenceReport rep;
  rep.target = solve_profile_m1(p, target_cfg).profile;
  rep.profile_max = rep.target.max();
  rep.burn_in = cfg.burn_in;

  const ExponentSet exps = similarity_exponents(p);
  RescaledFlow flow(p.nonlinearity.value, p.order.value, exps.beta, g, cfg.solver.far_field);
  std::vector<double> phi = u0.values();
  phi[0] = 0.0;
  renormalize(g, phi, mass);
  auto distance = [&]() {
    double d = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) d = std::max(d, std::abs(phi[i] - rep.target[i]));
    return d;
  };
  const std::size_t steps = static_cast<std::size_t>(std::ceil(cfg.final_time / cfg.dt - 1e-9));
  rep.series.push_back({0.0, distance()});
  for (std::size_t k = 1; k <= steps; ++k) {
    flow.allow_refit(k % 50 == 1);
    const double res = flow.residual(phi);
    if (!std::isfinite(res)) throw Error(ErrorKind::Instability, "demo evolution blew up", {{"time", k * cfg.dt}});
    flow.step(phi, cfg.dt);
    renormalize(g, phi, mass);
    if (k % cfg.sample_stride == 0 || k == steps) rep.series.push_back({k * cfg.dt, distance()});
  }
  rep.final_distance = rep.series.back().distance;
  rep.monotone_after_burn_in = true;
  double last = std::numeric_limits<double>::infinity();
  for (const DemoSample& d : rep.series) {
    if (d.time < cfg.burn_in) continue;
    if (d.distance > last) rep.monotone_after_burn_in = false;
    last = d.distance;
  }
  return rep;
}

ChainReport solve_and_verify_chain(const ModelParams& p, const SolverConfig& cfg) {
  require_m1(p);
  ChainReport rep;
  rep.source = p;
  rep.map = map_m1_to_m2(p);
  rep.linear = rep.map.case_tag == MapCase::IdentityCase;
  if (rep.linear) rep.notes.push_back("m = 1: linear case, the M2 profile is φ₁ itself");
  rep.m1 = solve_profile_m1(p, cfg);
  rep.target_profile = transform_profile(rep.map, rep.m1.profile);
  ResidualOptions ro;
  ro.far_field = cfg.far_field;
  rep.target_residual = vector_residual(rep.target_profile, rep.map.target, rep.map.target_exponents, ro);

  try {
    rep.source_decay = decay_fit(rep.m1.profile, p);
    rep.target_fit = fit_power_tail(rep.target_profile, {rep.source_decay->r_lo, rep.source_decay->r_hi});
    rep.target_law = target_decay(rep.map);
    rep.target_fit->predicted = rep.target_law->exponent;
  } catch (const Error& e) {
    rep.notes.push_back(std::string("decay fit skipped: ") + e.what());
  }

  const Number one(1), two(2);
  const ModelParams mg = ModelParams::mg(p.N, one - p.order, two - one / p.nonlinearity, two);
  try {
    const ParameterMap forward = map_mg(mg);
    if (forward.source_exponents.type != forward.target_exponents.type) {
      rep.notes.push_back("MG continuation skipped: the MG and M1 similarity types differ");
    } else {
      rep.mg_map = invert(forward);
      const RadialProfile phi4 = transform_profile(*rep.mg_map, rep.m1.profile);
      rep.mg_residual = vector_residual(phi4, mg, rep.mg_map->target_exponents, ro);
    }
  } catch (const Error& e) {
    rep.notes.push_back(std::string("MG continuation skipped: ") + e.what());
  }
  return rep;
}

}  // namespace fracsim
