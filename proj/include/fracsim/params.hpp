#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fracsim/rational.hpp"

namespace fracsim {

// M1: u_t + (-Δ)^s u^m = 0
// M2: v_t = ∇·(v^{m̃-1} ∇(-Δ)^{-s̃} v)
// M3: u_t = ∇·(u ∇(-Δ)^{-ŝ} u^{m̂-1})
// MG: w_t = ∇·(w^{m̃₀-1} ∇(-Δ)^{-s̃₀} w^{ñ₀-1})
enum class Model { M1, M2, M3, MG };

const char* to_string(Model model);
Model parse_model(const std::string& text);

struct ModelParams {
  Model model = Model::M1;
  int N = 1;
  Number order;         // s, s̃, ŝ or s̃₀
  Number nonlinearity;  // m, m̃, m̂ or m̃₀
  Number second;        // ñ₀ (MG only)

  static ModelParams m1(int N, Number s, Number m);
  static ModelParams m2(int N, Number stilde, Number mtilde);
  static ModelParams m3(int N, Number shat, Number mhat);
  static ModelParams mg(int N, Number s0, Number mtilde0, Number ntilde0);

  // Throws Error(InvalidParameter) when an invariant is violated.
  void validate() const;
};

enum class SimilarityType { TypeI, TypeII, TypeIII };
const char* to_string(SimilarityType type);

struct ExponentSet {
  double alpha = 0.0;
  double beta = 0.0;  // positive in all branches; for TypeII this is the extinction rate
  SimilarityType type = SimilarityType::TypeI;
  std::optional<double> rate_c;  // TypeIII only
};

enum class Regime { GlobalTypeI, ExtinctionTypeII, EternalTypeIII, OutOfTheory };
enum class Propagation { Finite, Infinite, Unknown };
const char* to_string(Regime regime);
const char* to_string(Propagation propagation);

struct RegimeReport {
  std::map<std::string, Number> critical_values;
  Regime regime = Regime::OutOfTheory;
  Propagation propagation = Propagation::Unknown;
  std::vector<std::string> notes;
};

// Denominator 1/β of the model's self-similarity exponent, exact when possible.
Number exponent_denominator(const ModelParams& p);

ExponentSet similarity_exponents(const ModelParams& p, double rate_c = 1.0);
RegimeReport critical_exponents(const ModelParams& p);

struct GridAxis {
  Number start;
  Number step;
  int count = 1;
  Number at(int i) const { return start + step * Number(i); }
};

struct PlaneRow {
  std::vector<Number> coords;
  Regime regime = Regime::OutOfTheory;
  std::string mapped_case;  // which transformation applies, empty if none
  std::string mapped_name;  // name of the mapped parameter
  std::optional<Number> mapped;
};

// Parameter sweep behind the regime diagrams. `x` runs over the nonlinearity
// (m̃₀ for MG); `y` runs over ñ₀ and is used for MG only.
std::vector<PlaneRow> parameter_plane(Model model, int N, Number order, const GridAxis& x,
                                      const GridAxis& y = {});

// Straight lines of the MG plane. For a fixed M1 exponent m the line is
// ñ₀ = m(2 - m̃₀) + 1; for a fixed M2 exponent m̃ it is ñ₀(m̃ - 2) = m̃₀ - 4 + m̃.
bool on_m1_line(const Number& mtilde0, const Number& ntilde0, const Number& m);
bool on_m2_line(const Number& mtilde0, const Number& ntilde0, const Number& mtilde);

}  // namespace fracsim
