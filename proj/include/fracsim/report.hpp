#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracsim/closedform.hpp"
#include "fracsim/errors.hpp"
#include "fracsim/fracops.hpp"
#include "fracsim/params.hpp"
#include "fracsim/solver.hpp"
#include "fracsim/transforms.hpp"

namespace fracsim::report {

using Json = nlohmann::ordered_json;

Json number(const Number& x);   // value, plus "p/q" text when exact
Json real(double x);            // non-finite values become "inf", "-inf", "nan"

Json to_json(const ModelParams& p);
Json to_json(const ExponentSet& e);
Json to_json(const RegimeReport& r);
Json to_json(const ResidualReport& r);
Json to_json(const ClosedFormSolution& sol);
Json to_json(const ParameterMap& map);
Json to_json(const DecayLaw& d);
Json to_json(const DecayFit& fit);
Json to_json(const SolveResult& r);
Json to_json(const ChainReport& r);
Json to_json(const ConvergenceReport& r);
Json to_json(const Error& e);

// Flat document: model, N, order, nonlinearity, [second,] alpha, beta, type,
// regime, propagation, critical.*. Exponents that cannot be formed are null
// and the reason goes to the notes.
Json regime_document(const ModelParams& p, double rate_c = 1.0);

// Deterministic text: keys in insertion order, floats with 17 significant
// digits, two-space indentation.
std::string dump(const Json& j);

// CSV writers. Profiles carry the full even extension.
void write_profile_csv(const std::string& path, const RadialProfile& profile);
void write_history_csv(const std::string& path, const std::vector<ResidualSample>& history);
void write_series_csv(const std::string& path, const std::vector<DemoSample>& series);
void write_plane_csv(const std::string& path, Model model, const std::vector<PlaneRow>& rows);
void write_plane_csv(std::ostream& out, Model model, const std::vector<PlaneRow>& rows);

}  // namespace fracsim::report
