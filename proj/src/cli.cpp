#include "fracsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "fracsim/closedform.hpp"
#include "fracsim/errors.hpp"
#include "fracsim/fracops.hpp"
#include "fracsim/params.hpp"
#include "fracsim/report.hpp"
#include "fracsim/solver.hpp"
#include "fracsim/specfun.hpp"
#include "fracsim/spectral.hpp"
#include "fracsim/transforms.hpp"

namespace fracsim::cli {

namespace {

using report::Json;

Error invalid(const std::string& message) { return Error(ErrorKind::InvalidParameter, message); }

Number parse_number(const std::string& flag, const std::string& text) {
  Number x;
  try {
    x = Number::parse(text);
  } catch (const Error&) {
    throw invalid("--" + flag + ": not a number: '" + text + "'");
  }
  if (!std::isfinite(x.value)) throw Error(ErrorKind::NonFiniteInput, "--" + flag + " must be finite");
  return x;
}

double parse_real(const std::string& flag, const std::string& text) { return parse_number(flag, text).value; }

// Model flags shared by most subcommands. The generic --s and --m stand in for
// the order and the nonlinearity of whichever model is selected.
struct ModelFlags {
  std::string model = "m1";
  int N = 1;
  std::string s, stilde, shat, s0;
  std::string m, mtilde, mhat, mtilde0, ntilde0;

  void attach(CLI::App* app, bool with_model = true) {
    if (with_model) app->add_option("--model", model, "m1, m2, m3 or mg")->capture_default_str();
    app->add_option("--N", N, "space dimension")->capture_default_str();
    app->add_option("--s", s, "order of the selected model");
    app->add_option("--stilde", stilde, "order of M2");
    app->add_option("--shat", shat, "order of M3");
    app->add_option("--s0", s0, "order of MG");
    app->add_option("--m", m, "nonlinearity of the selected model");
    app->add_option("--mtilde", mtilde, "nonlinearity of M2");
    app->add_option("--mhat", mhat, "nonlinearity of M3");
    app->add_option("--mtilde0", mtilde0, "first nonlinearity of MG");
    app->add_option("--ntilde0", ntilde0, "second nonlinearity of MG");
  }

  Model kind() const { return parse_model(model); }

  static Number pick(const std::string& specific, const char* specific_name, const std::string& generic,
                     const char* generic_name) {
    if (!specific.empty()) return parse_number(specific_name, specific);
    if (!generic.empty()) return parse_number(generic_name, generic);
    throw invalid(std::string("missing --") + specific_name);
  }

  Number order() const {
    switch (kind()) {
      case Model::M1: return pick(s, "s", s, "s");
      case Model::M2: return pick(stilde, "stilde", s, "s");
      case Model::M3: return pick(shat, "shat", s, "s");
      case Model::MG: return pick(s0, "s0", s, "s");
    }
    throw invalid("unknown model");
  }

  ModelParams params() const {
    ModelParams p;
    p.model = kind();
    p.N = N;
    p.order = order();
    switch (p.model) {
      case Model::M1: p.nonlinearity = pick(m, "m", m, "m"); break;
      case Model::M2: p.nonlinearity = pick(mtilde, "mtilde", m, "m"); break;
      case Model::M3: p.nonlinearity = pick(mhat, "mhat", m, "m"); break;
      case Model::MG:
        p.nonlinearity = pick(mtilde0, "mtilde0", m, "m");
        p.second = pick(ntilde0, "ntilde0", "", "ntilde0");
        break;
    }
    p.validate();
    return p;
  }
};

struct GridFlags {
  std::size_t n = std::size_t{1} << 14;
  std::string L = "50";

  void attach(CLI::App* app) {
    app->add_option("--grid-n", n, "grid points, a power of two")->capture_default_str();
    app->add_option("--grid-L", L, "half width of the domain")->capture_default_str();
  }
  Grid grid() const {
    Grid g{parse_real("grid-L", L), n};
    g.validate();
    return g;
  }
};

void emit(std::ostream& out, const Json& doc, const std::string& path) {
  const std::string text = report::dump(doc);
  if (!path.empty()) {
    std::ofstream f(path);
    if (!f) throw invalid("cannot open " + path + " for writing");
    f << text;
  }
  out << text;
}

Json check(const std::string& name, double value, double tolerance, bool pass) {
  return Json{{"name", name}, {"value", report::real(value)}, {"tolerance", tolerance}, {"pass", pass}};
}

Json failed_check(const std::string& name, const Error& e) {
  Json j{{"name", name}, {"value", nullptr}, {"pass", false}};
  j["error"] = report::to_json(e);
  return j;
}

Json suite(const std::string& name, Json checks) {
  bool all = true;
  for (const auto& c : checks) all = all && c["pass"].get<bool>();
  return Json{{"suite", name}, {"checks", std::move(checks)}, {"pass", all}};
}

// ---------------------------------------------------------------- verify

Json verify_riesz(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Json checks = Json::array();
  for (int k = 0; k < count; ++k) {
    const int N = 1 + static_cast<int>(rng() % 3);
    const double s_hi = std::min(0.95, 0.5 * N - 0.05);
    const double s = 0.05 + (s_hi - 0.05) * unit(rng);
    const double margin = 0.1 * (N - 2.0 * s);
    const double alpha = 2.0 * s + margin + (N - 2.0 * s - 2.0 * margin) * unit(rng);
    std::ostringstream name;
    name.precision(6);
    name << "N=" << N << " s=" << s << " alpha=" << alpha;
    try {
      const double formula = riesz_power_constant(alpha, s, N).gamma_ratio;
      const double quad = quadrature_oracle([&](double r) { return std::pow(r, -alpha); }, s, N, 1.0,
                                            OracleKind::Potential);
      const double rel = std::abs(quad / formula - 1.0);
      checks.push_back(check(name.str(), rel, 1e-3, rel <= 1e-3));
    } catch (const Error& e) {
      checks.push_back(failed_check(name.str(), e));
    }
  }
  return suite("riesz", std::move(checks));
}

Json verify_cap(const Grid& grid) {
  Json checks = Json::array();
  CapOptions opts;
  opts.grid = grid;
  for (const double s : {0.25, 0.5, 0.75}) {
    const std::string name = "cap residual s=" + std::to_string(s).substr(0, 4);
    try {
      const auto cap = barenblatt_cap(1, s, 1.0, opts);
      const double r = cap.constant("calibration_residual");
      checks.push_back(check(name, r, 1e-3, r <= 1e-3));
    } catch (const Error& e) {
      checks.push_back(failed_check(name, e));
    }
  }
  for (const double mh : {1.5, 2.0, 3.0, 5.0}) {
    const std::string tag = "mhat=" + std::to_string(mh).substr(0, 3);
    try {
      const auto sol = model3_cap(1, 0.5, mh, 1.0, opts);
      const auto cap = barenblatt_cap(1, 0.5, 1.0, opts);
      const auto phi3 = sample(sol, grid);
      const auto phi2 = sample(cap, grid);
      std::size_t mismatched = 0;
      for (std::size_t i = 0; i < grid.n; ++i) mismatched += (phi3[i] > 0.0) != (phi2[i] > 0.0);
      checks.push_back(check("support " + tag, static_cast<double>(mismatched), 0.0, mismatched == 0));
      ResidualOptions ro;
      ro.far_field = false;
      const auto rep = vector_residual(phi3, sol.params, sol.exponents, ro);
      checks.push_back(check("M3 residual " + tag, rep.residual_sup, 5e-3, rep.residual_sup <= 5e-3));
    } catch (const Error& e) {
      checks.push_back(failed_check(tag, e));
    }
  }
  return suite("cap", std::move(checks));
}

Json verify_vss() {
  Json checks = Json::array();
  int found = 0;
  // One parameter point per (N, s̃): the middle of the admissible m̃ values.
  for (int i = 1; i <= 9 && found < 10; ++i) {
    const double st = 0.1 * i;
    for (int N = 1; N <= 3 && found < 10; ++N) {
      std::vector<double> admissible;
      for (int j = 1; j < 80; ++j) {
        try {
          vss_type1(N, st, j / 80.0);
          admissible.push_back(j / 80.0);
        } catch (const Error&) {
        }
      }
      if (admissible.empty()) continue;
      const double mt = admissible[admissible.size() / 2];
      const ClosedFormSolution sol = vss_type1(N, st, mt);
      ++found;
      const double alpha = sol.constant("alpha"), C = sol.constant("C");
      const double beta2 = 1.0 / exponent_denominator(sol.params).value;
      const double kbar = riesz_gamma_ratio(alpha, st, N);
      const double e1 = std::abs(-alpha * mt + 2.0 * st - 2.0 + alpha);
      const double rhs = -beta2 / (kbar * (2.0 * st - alpha));
      const double e2 = std::abs(std::pow(C, mt - 1.0) / rhs - 1.0);
      const double e3 = std::abs(sol.constant("time_exponent") + 1.0 / (1.0 - mt));
      std::ostringstream tag;
      tag << "N=" << N << " stilde=" << st << " mtilde=" << mt;
      checks.push_back(check("VSS-I exponent " + tag.str(), e1, 1e-12, e1 <= 1e-12));
      checks.push_back(check("VSS-I constant " + tag.str(), e2, 1e-12, e2 <= 1e-12));
      checks.push_back(check("VSS-I time exponent " + tag.str(), e3, 1e-14, e3 <= 1e-14));
    }
  }
  for (int N = 1; N <= 3; ++N) {
    for (const double st : {0.25, 0.5, 0.75}) {
      const double upper = (N - 2.0 + 2.0 * st) / N;
      if (upper <= 0.0) continue;
      for (const double f : {0.2, 0.5, 0.8}) {
        const double mt = f * upper;
        std::ostringstream tag;
        tag << "N=" << N << " stilde=" << st << " mtilde=" << mt;
        try {
          const auto sol = vss_type2(N, st, mt, 1.0);
          const double c = sol.constant("C_ode");
          checks.push_back(check("VSS-II sign " + tag.str(), c, 0.0, c < 0.0));
          double worst = 0.0;
          for (const double t : {0.0, 0.25, 0.5, 0.9}) {
            const double B = vss_amplitude(sol, t);
            const double dB = -sol.constant("K") / (1.0 - mt) * std::pow(1.0 - t, mt / (1.0 - mt));
            worst = std::max(worst, std::abs(dB - c * std::pow(B, mt)) / std::abs(dB));
          }
          checks.push_back(check("VSS-II ODE " + tag.str(), worst, 1e-10, worst <= 1e-10));
        } catch (const Error& e) {
          checks.push_back(failed_check("VSS-II " + tag.str(), e));
        }
      }
    }
  }
  return suite("vss", std::move(checks));
}

Json chain_checks(const ChainReport& c) {
  Json checks = Json::array();
  const std::string tag = std::string(to_string(c.map.case_tag));
  if (c.target_residual) {
    const double r = c.target_residual->residual_sup;
    checks.push_back(check(tag + " target residual", r, 5e-3, r <= 5e-3));
  }
  if (c.target_fit && c.target_law) {
    const double rel = std::abs(c.target_fit->exponent / c.target_law->exponent - 1.0);
    checks.push_back(check(tag + " target decay", rel, 0.07, rel <= 0.07));
  }
  return checks;
}

Json verify_chain(const std::vector<ModelParams>& cases, const SolverConfig& cfg) {
  Json checks = Json::array();
  Json runs = Json::array();
  for (const auto& p : cases) {
    try {
      const auto c = solve_and_verify_chain(p, cfg);
      for (auto& x : chain_checks(c)) checks.push_back(x);
      runs.push_back(report::to_json(c));
    } catch (const Error& e) {
      checks.push_back(failed_check("chain m=" + p.nonlinearity.str(), e));
    }
  }
  Json j = suite("chain", std::move(checks));
  j["runs"] = std::move(runs);
  return j;
}

// ---------------------------------------------------------------- config

void strip(std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// key=value lines mirroring the flags. Flags given on the command line win.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw invalid("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw invalid(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    strip(key);
    strip(value);
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (!given) args.push_back(flag + "=" + value);
  }
  return args;
}

bool is_validation(ErrorKind kind) {
  return kind == ErrorKind::InvalidParameter || kind == ErrorKind::NonFiniteInput ||
         kind == ErrorKind::UnknownModel;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int run(const std::vector<std::string>& input, std::ostream& out, std::ostream& err) {
  spectral::configure_threads();
  CLI::App app{"Self-similar solutions of fractional porous medium models", "fracsim"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  int code = Success;
  std::function<void()> action;

  // classify / exponents
  ModelFlags cls_flags;
  std::string cls_report, rate_c_text;
  auto* classify = app.add_subcommand("classify", "regime, propagation and critical exponents");
  cls_flags.attach(classify);
  classify->add_option("--report", cls_report, "also write the JSON report here");
  classify->callback([&] {
    action = [&] {
      const ModelParams p = cls_flags.params();
      Json doc = report::regime_document(p);
      try {
        const auto rows = parameter_plane(p.model, p.N, p.order, GridAxis{p.nonlinearity, Number(0), 1},
                                          GridAxis{p.second, Number(0), 1});
        if (!rows.empty() && !rows.front().mapped_case.empty()) {
          doc["mapped_case"] = rows.front().mapped_case;
          doc["mapped." + rows.front().mapped_name] = report::number(*rows.front().mapped);
        }
      } catch (const Error&) {
      }
      emit(out, doc, cls_report);
    };
  });

  ModelFlags exp_flags;
  std::string exp_report, exp_rate;
  auto* exponents = app.add_subcommand("exponents", "similarity exponents and type");
  exp_flags.attach(exponents);
  exponents->add_option("--rate-c", exp_rate, "free rate of the eternal type");
  exponents->add_option("--report", exp_report, "also write the JSON report here");
  exponents->callback([&] {
    action = [&] {
      const ModelParams p = exp_flags.params();
      const double c = exp_rate.empty() ? 1.0 : parse_real("rate-c", exp_rate);
      Json doc = report::regime_document(p, c);
      doc["denominator"] = report::number(exponent_denominator(p));
      emit(out, doc, exp_report);
    };
  });

  // map
  ModelFlags map_flags;
  std::string map_report, map_rate, map_target_mhat;
  bool map_inverse = false, map_check = false;
  GridFlags map_grid;
  auto* map = app.add_subcommand("map", "parameter map to the related model");
  map_flags.attach(map);
  map_grid.attach(map);
  map->add_option("--rate-c", map_rate, "free rate c of the eternal case (default β₁)");
  map->add_option("--to-mhat", map_target_mhat, "M2 at mtilde = 2: map to M3 with this mhat");
  map->add_flag("--inverse", map_inverse, "report the inverse map");
  map->add_flag("--check", map_check, "solve the source profile and check the target identity (M1 only)");
  map->add_option("--report", map_report, "also write the JSON report here");
  map->callback([&] {
    action = [&] {
      const ModelParams p = map_flags.params();
      std::optional<double> rate;
      if (!map_rate.empty()) rate = parse_real("rate-c", map_rate);
      ParameterMap pm;
      switch (p.model) {
        case Model::M1: pm = map_m1_to_m2(p, rate); break;
        case Model::M2:
          pm = map_target_mhat.empty() ? map_m2_to_m1(p, rate)
                                       : map_m2_to_m3(p, parse_number("to-mhat", map_target_mhat));
          break;
        case Model::MG: pm = map_mg(p); break;
        case Model::M3: pm = invert(map_m2_to_m3(ModelParams::m2(p.N, p.order, Number(2)), p.nonlinearity)); break;
      }
      if (map_inverse) pm = invert(pm);
      Json doc = report::to_json(pm);
      if (p.model == Model::M1 && pm.case_tag != MapCase::IdentityCase) {
        try {
          doc["target_decay"] = report::to_json(target_decay(pm));
        } catch (const Error& e) {
          doc["target_decay"] = report::to_json(e);
        }
      }
      if (map_check) {
        if (p.model != Model::M1) throw invalid("--check needs an M1 source");
        SolverConfig cfg;
        cfg.grid = map_grid.grid();
        const auto c = solve_and_verify_chain(p, cfg);
        doc["target_residual"] = c.target_residual ? report::to_json(*c.target_residual) : Json(nullptr);
        doc["chain"] = report::to_json(c);
      }
      emit(out, doc, map_report);
    };
  });

  // vss
  int vss_type = 1;
  ModelFlags vss_flags;
  std::string vss_T = "1", vss_t, vss_out, vss_report;
  GridFlags vss_grid;
  auto* vss = app.add_subcommand("vss", "very singular solutions of M2");
  vss->add_option("--type", vss_type, "1 (global) or 2 (extinction)")->check(CLI::IsMember({1, 2}));
  vss_flags.attach(vss, false);
  vss_flags.model = "m2";
  vss_grid.attach(vss);
  vss->add_option("--T", vss_T, "extinction time (type 2)")->capture_default_str();
  vss->add_option("--t", vss_t, "also report the amplitude at this time");
  vss->add_option("--out", vss_out, "profile CSV on the grid");
  vss->add_option("--report", vss_report, "also write the JSON report here");
  vss->callback([&] {
    action = [&] {
      const ModelParams p = vss_flags.params();
      const ClosedFormSolution sol = vss_type == 1
                                         ? vss_type1(p.N, p.order.value, p.nonlinearity.value)
                                         : vss_type2(p.N, p.order.value, p.nonlinearity.value, parse_real("T", vss_T));
      Json doc = report::to_json(sol);
      if (vss_type == 1) {
        doc["window"] = Json{{"lo", sol.constant("window_lo")},
                             {"hi", sol.constant("window_hi")},
                             {"contains", sol.constant("in_window") > 0.5}};
      }
      if (!vss_t.empty()) {
        const double t = parse_real("t", vss_t);
        doc["t"] = t;
        doc["amplitude"] = report::real(vss_type == 2 ? vss_amplitude(sol, t)
                                                      : std::pow(t, sol.constant("time_exponent")) * sol.constant("K"));
      }
      if (!vss_out.empty()) report::write_profile_csv(vss_out, sample(sol, vss_grid.grid()));
      emit(out, doc, vss_report);
    };
  });

  // closed-form
  std::string cf_family = "cap", cf_s, cf_mhat = "2", cf_mass = "1", cf_tol = "1e-3", cf_out, cf_report;
  int cf_N = 1;
  GridFlags cf_grid;
  auto* cf = app.add_subcommand("closed-form", "explicit compact profiles");
  cf->add_option("--family", cf_family, "cap (M2 at mtilde = 2) or model3")
      ->check(CLI::IsMember({"cap", "model3"}))
      ->capture_default_str();
  cf->add_option("--N", cf_N, "space dimension")->capture_default_str();
  cf->add_option("--s", cf_s, "order")->required();
  cf->add_option("--mhat", cf_mhat, "M3 nonlinearity (model3)")->capture_default_str();
  cf->add_option("--mass", cf_mass, "mass of the cap")->capture_default_str();
  cf->add_option("--tol", cf_tol, "calibration tolerance")->capture_default_str();
  cf_grid.attach(cf);
  cf->add_option("--out", cf_out, "profile CSV on the grid");
  cf->add_option("--report", cf_report, "also write the JSON report here");
  cf->callback([&] {
    action = [&] {
      CapOptions opts;
      opts.grid = cf_grid.grid();
      opts.tolerance = parse_real("tol", cf_tol);
      const double s = parse_real("s", cf_s), mass = parse_real("mass", cf_mass);
      const ClosedFormSolution sol = cf_family == "cap" ? barenblatt_cap(cf_N, s, mass, opts)
                                                        : model3_cap(cf_N, s, parse_real("mhat", cf_mhat), mass, opts);
      if (!cf_out.empty()) report::write_profile_csv(cf_out, sample(sol, opts.grid));
      emit(out, report::to_json(sol), cf_report);
    };
  });

  // solve
  ModelFlags solve_flags;
  GridFlags solve_grid;
  std::string solve_mass = "1", solve_dt, solve_tol = "1e-8", solve_max_time, solve_out, solve_report,
              solve_history, solve_initial = "gaussian";
  std::size_t solve_max_steps = 200000;
  auto* solve = app.add_subcommand("solve", "M1 similarity profile by rescaled evolution");
  solve_flags.attach(solve);
  solve_grid.attach(solve);
  solve->add_option("--mass", solve_mass, "mass of the profile")->capture_default_str();
  solve->add_option("--dt", solve_dt, "initial pseudo-time step");
  solve->add_option("--tol", solve_tol, "sup residual tolerance")->capture_default_str();
  solve->add_option("--max-time", solve_max_time, "pseudo-time budget");
  solve->add_option("--max-steps", solve_max_steps, "step budget")->capture_default_str();
  solve->add_option("--initial", solve_initial, "gaussian or cap")
      ->check(CLI::IsMember({"gaussian", "cap"}))
      ->capture_default_str();
  solve->add_option("--out", solve_out, "profile CSV");
  solve->add_option("--report", solve_report, "JSON report");
  solve->add_option("--history", solve_history, "residual history CSV");
  solve->callback([&] {
    action = [&] {
      const ModelParams p = solve_flags.params();
      if (p.model != Model::M1) throw invalid("solve supports --model m1 only");
      SolverConfig cfg;
      cfg.grid = solve_grid.grid();
      cfg.mass = parse_real("mass", solve_mass);
      cfg.tolerance = parse_real("tol", solve_tol);
      if (!solve_dt.empty()) cfg.dt = parse_real("dt", solve_dt);
      if (!solve_max_time.empty()) cfg.max_time = parse_real("max-time", solve_max_time);
      cfg.max_steps = solve_max_steps;
      cfg.initial = solve_initial == "cap" ? InitialCondition::Cap : InitialCondition::Gaussian;
      const SolveResult r = solve_profile_m1(p, cfg);
      Json doc{{"params", report::to_json(p)}, {"exponents", report::to_json(similarity_exponents(p))}};
      doc["solve"] = report::to_json(r);
      try {
        doc["decay"] = report::to_json(decay_fit(r.profile, p));
      } catch (const Error& e) {
        doc["decay"] = report::to_json(e);
      }
      if (!solve_out.empty()) report::write_profile_csv(solve_out, r.profile);
      if (!solve_history.empty()) report::write_history_csv(solve_history, r.history);
      emit(out, doc, solve_report);
    };
  });

  // decay
  ModelFlags decay_flags;
  GridFlags decay_grid;
  std::string decay_mass = "1", decay_report;
  auto* decay = app.add_subcommand("decay", "far-field decay of the M1 profile and of its M2 image");
  decay_flags.attach(decay);
  decay_grid.attach(decay);
  decay->add_option("--mass", decay_mass, "mass of the profile")->capture_default_str();
  decay->add_option("--report", decay_report, "also write the JSON report here");
  decay->callback([&] {
    action = [&] {
      const ModelParams p = decay_flags.params();
      if (p.model != Model::M1) throw invalid("decay supports --model m1 only");
      SolverConfig cfg;
      cfg.grid = decay_grid.grid();
      cfg.mass = parse_real("mass", decay_mass);
      const ChainReport c = solve_and_verify_chain(p, cfg);
      Json doc{{"params", report::to_json(p)}, {"case", to_string(c.map.case_tag)}};
      doc["source"] = c.source_decay ? report::to_json(*c.source_decay) : Json(nullptr);
      doc["target"] = c.target_fit ? report::to_json(*c.target_fit) : Json(nullptr);
      doc["target_law"] = c.target_law ? report::to_json(*c.target_law) : Json(nullptr);
      Json notes = Json::array();
      for (const auto& n : c.notes) notes.push_back(n);
      doc["notes"] = notes;
      emit(out, doc, decay_report);
    };
  });

  // plane
  std::string plane_model = "mg", plane_s = "1/2", plane_out;
  int plane_N = 3;
  std::string xs, xh, ys, yh;
  int xc = 0, yc = 0;
  auto* plane = app.add_subcommand("plane", "regime table over a rational parameter grid");
  plane->add_option("--model", plane_model, "m1, m2, m3 or mg")->capture_default_str();
  plane->add_option("--N", plane_N, "space dimension")->capture_default_str();
  plane->add_option("--s", plane_s, "order")->capture_default_str();
  plane->add_option("--x-start", xs, "first nonlinearity (m̃₀ for mg)");
  plane->add_option("--x-step", xh, "nonlinearity step");
  plane->add_option("--x-count", xc, "number of nonlinearity values");
  plane->add_option("--y-start", ys, "first ñ₀ (mg)");
  plane->add_option("--y-step", yh, "ñ₀ step");
  plane->add_option("--y-count", yc, "number of ñ₀ values");
  plane->add_option("--out", plane_out, "CSV path; stdout when absent");
  plane->callback([&] {
    action = [&] {
      const Model model = parse_model(plane_model);
      const Number order = parse_number("s", plane_s);
      const bool mg = model == Model::MG;
      GridAxis x{parse_number("x-start", xs.empty() ? (mg ? "1/4" : "1/20") : xs),
                 parse_number("x-step", xh.empty() ? (mg ? "1/4" : "1/20") : xh), xc > 0 ? xc : (mg ? 16 : 60)};
      GridAxis y{parse_number("y-start", ys.empty() ? "1/4" : ys), parse_number("y-step", yh.empty() ? "1/4" : yh),
                 yc > 0 ? yc : 16};
      if (x.count > 100000 || y.count > 100000) throw invalid("grid axis too long");
      const auto rows = parameter_plane(model, plane_N, order, x, y);
      if (plane_out.empty()) {
        report::write_plane_csv(out, model, rows);
      } else {
        report::write_plane_csv(plane_out, model, rows);
        Json doc{{"model", to_string(model)}, {"N", plane_N}, {"order", report::number(order)},
                 {"rows", rows.size()}, {"out", plane_out}};
        out << report::dump(doc);
      }
    };
  });

  // verify
  std::string verify_what;
  std::uint64_t verify_seed = 20240601;
  int verify_count = 20;
  GridFlags verify_grid;
  std::string verify_report;
  ModelFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "bundled identity checks: riesz, cap, vss, chain");
  verify->add_option("suite", verify_what, "riesz, cap, vss or chain")
      ->required()
      ->check(CLI::IsMember({"riesz", "cap", "vss", "chain"}));
  verify->add_option("--seed", verify_seed, "seed of the riesz draws")->capture_default_str();
  verify->add_option("--count", verify_count, "number of riesz draws")->capture_default_str();
  verify_grid.attach(verify);
  verify_flags.attach(verify);
  verify->add_option("--report", verify_report, "also write the JSON report here");
  verify->callback([&] {
    action = [&] {
      Json doc;
      if (verify_what == "riesz") {
        doc = verify_riesz(verify_seed, verify_count);
      } else if (verify_what == "cap") {
        doc = verify_cap(verify_grid.grid());
      } else if (verify_what == "vss") {
        doc = verify_vss();
      } else {
        SolverConfig cfg;
        cfg.grid = verify_grid.grid();
        std::vector<ModelParams> cases;
        if (!verify_flags.m.empty()) {
          cases.push_back(verify_flags.params());
        } else {
          cases.push_back(ModelParams::m1(1, Number(Rational(1, 2)), Number(2)));
          cases.push_back(ModelParams::m1(1, Number(Rational(3, 10)), Number(Rational(11, 20))));
        }
        doc = verify_chain(cases, cfg);
      }
      emit(out, doc, verify_report);
      if (!doc["pass"].get<bool>()) code = ComputationFailure;
    };
  });

  try {
    std::vector<std::string> args = merge_config(input);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      for (auto* sub : app.get_subcommands())
        if (sub->parsed()) out << sub->help();
      return Success;
    }
    err << "error: " << one_line(e.what()) << '\n';
    return ValidationFailure;
  } catch (const Error& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return ValidationFailure;
  }

  try {
    if (action) action();
    return code;
  } catch (const Error& e) {
    if (is_validation(e.kind())) {
      err << "error: " << one_line(e.what()) << '\n';
      return ValidationFailure;
    }
    out << report::dump(report::to_json(e));
    return ComputationFailure;
  } catch (const std::exception& e) {
    Json j{{"error", "Internal"}, {"message", e.what()}, {"details", Json::object()}};
    out << report::dump(j);
    return ComputationFailure;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace fracsim::cli
