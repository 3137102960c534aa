#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracsim/params.hpp"
#include "fracsim/profile.hpp"

namespace fracsim {

enum class MapCase {
  M1M2Global,     // M1 → M2, m > N/(N+2s), type-I target
  M1M2Extinction, // M1 → M2, (N-2s)/N < m < N/(N+2s), type-II target
  M1M2Eternal,    // M1 → M2 at m = N/(N+2s), type-III target
  M2M3,           // M2 at m̃ = 2 → M3
  MGM1,           // MG with m̃₀ < 2 → M1
  MGM2,           // MG with m̃₀ ≥ 2 → M2
  IdentityCase,   // m = 1: both sides are the linear equation
  Composite,
};
const char* to_string(MapCase c);

// φ_target = scale_factor · φ_source^{profile_power}.
struct ParameterMap {
  ModelParams source;
  ModelParams target;
  ExponentSet source_exponents;
  ExponentSet target_exponents;
  double profile_power = 1.0;
  double scale_factor = 1.0;
  MapCase case_tag = MapCase::IdentityCase;
  bool inverted = false;  // built by inverting a forward map
  std::vector<std::string> warnings;
};

// m̃ = (2m-1)/m, s̃ = 1-s. The case follows from m against N/(N+2s). The
// type-III rate c defaults to β₁ so the prefactor is 1.
ParameterMap map_m1_to_m2(const ModelParams& p, std::optional<double> rate_c = std::nullopt);

// m = 1/(2-m̃), s = 1-s̃; the inverse of the above.
ParameterMap map_m2_to_m1(const ModelParams& p, std::optional<double> rate_c = std::nullopt);

// φ₃ = ((β₃/β₂)φ₂)^{1/(m̂-1)} from the m̃ = 2 profile, ŝ = s̃.
ParameterMap map_m2_to_m3(const ModelParams& p, const Number& m_hat);

// MG → M1 (m̃₀ < 2) or MG → M2 (m̃₀ ≥ 2).
ParameterMap map_mg(const ModelParams& p);

// The MG → M2 recipe m̃ = (2ñ₀+m̃₀-4)/(ñ₀-1), power ñ₀-1, used for any m̃₀;
// below m̃₀ = 2 it is what MG → M1 → M2 composes to.
ParameterMap map_mg_to_m2(const ModelParams& p);

// Runs a map backwards: φ_source = (φ_target/factor)^{1/power}.
ParameterMap invert(const ParameterMap& map);

// Applies `second` after `first`; the target of `first` must be the source of
// `second`.
ParameterMap compose(const ParameterMap& first, const ParameterMap& second);

// Pointwise scale·φ^power on the same grid. Values in [-1e-14, 0) are clamped
// to 0; anything more negative throws NegativeValue.
RadialProfile transform_profile(const ParameterMap& map, const RadialProfile& profile);

struct DecayLaw {
  double exponent = 0.0;  // φ_target ~ |x|^{-exponent}
  SimilarityType type = SimilarityType::TypeI;
  std::string law;
};

// Far-field power of the target profile of an M1 → M2 map.
DecayLaw target_decay(const ParameterMap& map);

}  // namespace fracsim
