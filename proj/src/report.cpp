#include "fracsim/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fracsim::report {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  // Keep floats recognizable as floats when they print as integers.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void escape(std::ostream& out, const std::string& s) {
  out << '"';
  for (const unsigned char c : s) {
    switch (c) {
      case '"': out << "\\\""; break;
      case '\\': out << "\\\\"; break;
      case '\n': out << "\\n"; break;
      case '\t': out << "\\t"; break;
      case '\r': out << "\\r"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out << buf;
        } else {
          out << c;
        }
    }
  }
  out << '"';
}

void write(std::ostream& out, const Json& j, int depth) {
  const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out << ",\n";
        first = false;
        out << pad;
        escape(out, k);
        out << ": ";
        write(out, v, depth + 1);
      }
      out << '\n' << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ",\n";
        out << pad;
        write(out, j[i], depth + 1);
      }
      out << '\n' << close << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isfinite(x)) {
        out << format_double(x);
      } else {
        escape(out, std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf"));
      }
      return;
    }
    case Json::value_t::string:
      escape(out, j.get<std::string>());
      return;
    default:
      out << j.dump();
  }
}

Json strings(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

Json constants(const std::map<std::string, double>& m) {
  Json o = Json::object();
  for (const auto& [k, v] : m) o[k] = real(v);
  return o;
}

std::ofstream open(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidParameter, "cannot open " + path + " for writing");
  return out;
}

}  // namespace

Json real(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

Json number(const Number& x) {
  // Binary fractions of decimal input are not worth printing.
  if (x.is_exact() && x.exact->den() != 1 && x.exact->den() <= 1000000000) return Json{{"value", real(x.value)}, {"exact", x.exact->str()}};
  return real(x.value);
}

Json to_json(const ModelParams& p) {
  Json j{{"model", to_string(p.model)}, {"N", p.N}, {"order", number(p.order)},
         {"nonlinearity", number(p.nonlinearity)}};
  if (p.model == Model::MG) j["second"] = number(p.second);
  return j;
}

Json to_json(const ExponentSet& e) {
  Json j{{"alpha", real(e.alpha)}, {"beta", real(e.beta)}, {"type", to_string(e.type)}};
  if (e.rate_c) j["rate_c"] = real(*e.rate_c);
  return j;
}

Json to_json(const RegimeReport& r) {
  Json j = Json::object();
  j["regime"] = to_string(r.regime);
  j["propagation"] = to_string(r.propagation);
  for (const auto& [k, v] : r.critical_values) j["critical." + k] = number(v);
  j["notes"] = strings(r.notes);
  return j;
}

Json to_json(const ResidualReport& r) {
  return Json{{"model", to_string(r.model)},
              {"residual_sup", real(r.residual_sup)},
              {"residual_l2", real(r.residual_l2)},
              {"region", Json{{"lo", real(r.evaluation_region.lo)}, {"hi", real(r.evaluation_region.hi)}}},
              {"grid", Json{{"L", r.grid.L}, {"n", r.grid.n}}},
              {"points", r.points},
              {"far_field", r.far_field}};
}

Json to_json(const ClosedFormSolution& sol) {
  return Json{{"family", to_string(sol.family)},
              {"params", to_json(sol.params)},
              {"exponents", to_json(sol.exponents)},
              {"constants", constants(sol.constants)},
              {"notes", strings(sol.notes)}};
}

Json to_json(const ParameterMap& map) {
  return Json{{"case", to_string(map.case_tag)},
              {"source", to_json(map.source)},
              {"target", to_json(map.target)},
              {"source_exponents", to_json(map.source_exponents)},
              {"target_exponents", to_json(map.target_exponents)},
              {"profile_power", real(map.profile_power)},
              {"scale_factor", real(map.scale_factor)},
              {"inverted", map.inverted},
              {"warnings", strings(map.warnings)}};
}

Json to_json(const DecayLaw& d) {
  return Json{{"exponent", real(d.exponent)}, {"type", to_string(d.type)}, {"law", d.law}};
}

Json to_json(const DecayFit& fit) {
  Json j{{"exponent", real(fit.exponent)},
         {"constant", real(fit.constant)},
         {"window", Json{{"lo", real(fit.r_lo)}, {"hi", real(fit.r_hi)}}},
         {"quality", real(fit.quality)},
         {"predicted", real(fit.predicted)},
         {"role", to_string(fit.role)},
         {"sigma", real(fit.sigma)},
         {"fallback_window", fit.fallback_window}};
  if (fit.limit_constant) j["limit_constant"] = real(*fit.limit_constant);
  return j;
}

Json to_json(const SolveResult& r) {
  return Json{{"residual", to_json(r.report)},
              {"time", real(r.time)},
              {"steps", r.steps},
              {"rejected", r.rejected},
              {"final_dt", real(r.final_dt)},
              {"mass", real(r.profile.mass())},
              {"max", real(r.profile.max())},
              {"mass_error", real(r.mass_error)},
              {"residual_increases", r.residual_increases},
              {"notes", strings(r.notes)}};
}

Json to_json(const ChainReport& r) {
  Json j{{"source", to_json(r.source)}, {"solve", to_json(r.m1)}, {"map", to_json(r.map)}, {"linear", r.linear}};
  j["target_residual"] = r.target_residual ? to_json(*r.target_residual) : Json(nullptr);
  j["source_decay"] = r.source_decay ? to_json(*r.source_decay) : Json(nullptr);
  j["target_fit"] = r.target_fit ? to_json(*r.target_fit) : Json(nullptr);
  j["target_law"] = r.target_law ? to_json(*r.target_law) : Json(nullptr);
  j["mg_map"] = r.mg_map ? to_json(*r.mg_map) : Json(nullptr);
  j["mg_residual"] = r.mg_residual ? to_json(*r.mg_residual) : Json(nullptr);
  j["notes"] = strings(r.notes);
  return j;
}

Json to_json(const ConvergenceReport& r) {
  Json series = Json::array();
  for (const auto& s : r.series) series.push_back(Json::array({real(s.time), real(s.distance)}));
  return Json{{"profile_max", real(r.profile_max)},
              {"final_distance", real(r.final_distance)},
              {"relative_distance", real(r.final_distance / r.profile_max)},
              {"burn_in", real(r.burn_in)},
              {"monotone_after_burn_in", r.monotone_after_burn_in},
              {"series", series}};
}

Json to_json(const Error& e) {
  Json det = Json::object();
  for (const auto& [k, v] : e.details()) det[k] = real(v);
  return Json{{"error", to_string(e.kind())}, {"message", e.what()}, {"details", det}};
}

Json regime_document(const ModelParams& p, double rate_c) {
  Json j = to_json(p);
  const RegimeReport r = critical_exponents(p);
  std::vector<std::string> notes = r.notes;
  try {
    const ExponentSet e = similarity_exponents(p, rate_c);
    const Json ej = to_json(e);
    for (const auto& [k, v] : ej.items()) j[k] = v;
  } catch (const Error& e) {
    j["alpha"] = nullptr;
    j["beta"] = nullptr;
    j["type"] = nullptr;
    notes.push_back(std::string(to_string(e.kind())) + ": " + e.what());
  }
  Json rj = to_json(r);
  rj["notes"] = strings(notes);
  for (const auto& [k, v] : rj.items()) j[k] = v;
  return j;
}

std::string dump(const Json& j) {
  std::ostringstream out;
  write(out, j, 0);
  out << '\n';
  return out.str();
}

void write_profile_csv(const std::string& path, const RadialProfile& profile) {
  auto out = open(path);
  out << "r,value\n";
  const Grid& g = profile.grid();
  for (std::size_t i = 0; i < profile.size(); ++i)
    out << format_double(g.x(i)) << ',' << format_double(profile[i]) << '\n';
}

void write_history_csv(const std::string& path, const std::vector<ResidualSample>& history) {
  auto out = open(path);
  out << "step,residual_sup\n";
  for (const auto& h : history) out << h.step << ',' << format_double(h.residual_sup) << '\n';
}

void write_series_csv(const std::string& path, const std::vector<DemoSample>& series) {
  auto out = open(path);
  out << "time,distance\n";
  for (const auto& s : series) out << format_double(s.time) << ',' << format_double(s.distance) << '\n';
}

void write_plane_csv(std::ostream& out, Model model, const std::vector<PlaneRow>& rows) {
  auto cell = [](const Number& x) { return x.is_exact() ? x.exact->str() : format_double(x.value); };
  const Number one(1), two(2), four(4);
  if (model == Model::MG) {
    out << "mtilde0,ntilde0,regime,mapped_case,mapped_name,mapped,m_line,mtilde_line\n";
  } else {
    out << "nonlinearity,regime,mapped_case,mapped_name,mapped\n";
  }
  for (const auto& r : rows) {
    for (const auto& c : r.coords) out << cell(c) << ',';
    out << to_string(r.regime) << ',' << r.mapped_case << ',' << r.mapped_name << ','
        << (r.mapped ? cell(*r.mapped) : "");
    if (model == Model::MG) {
      // Parameters of the two line families through the point.
      const Number& mt0 = r.coords[0];
      const Number& nt0 = r.coords[1];
      out << ',' << (compare(mt0, two) != 0 ? cell((nt0 - one) / (two - mt0)) : "");
      out << ',' << (compare(nt0, one) != 0 ? cell((two * nt0 + mt0 - four) / (nt0 - one)) : "");
    }
    out << '\n';
  }
}

void write_plane_csv(const std::string& path, Model model, const std::vector<PlaneRow>& rows) {
  auto out = open(path);
  write_plane_csv(out, model, rows);
}

}  // namespace fracsim::report
