#include "fracsim/transforms.hpp"

#include <cmath>

#include "fracsim/errors.hpp"

namespace fracsim {

namespace {

// base^{exponent} with base near 1 and a large exponent kept accurate.
double ratio_power(double num, double den, double exponent) {
  return std::exp(exponent * std::log1p((num - den) / den));
}

void require_model(const ModelParams& p, Model m, const char* op) {
  if (p.model != m)
    throw Error(ErrorKind::InvalidParameter, std::string(op) + " expects model " + to_string(m) + ", got " + to_string(p.model));
  p.validate();
}

void check_map(ParameterMap& map) {
  if (!(map.profile_power > 0.0) || !std::isfinite(map.profile_power) || !(map.scale_factor > 0.0) ||
      !std::isfinite(map.scale_factor))
    throw Error(ErrorKind::DegenerateMap, "map power and factor must be finite and positive",
                {{"power", map.profile_power}, {"factor", map.scale_factor}});
}

ParameterMap identity_map(const ModelParams& m1, const ModelParams& m2) {
  ParameterMap map;
  map.source = m1;
  map.target = m2;
  map.source_exponents = similarity_exponents(m1);
  map.target_exponents = similarity_exponents(m2);
  map.case_tag = MapCase::IdentityCase;
  map.warnings.push_back("m = 1 is the linear equation on both sides; the map is the identity");
  return map;
}

}  // namespace

const char* to_string(MapCase c) {
  switch (c) {
    case MapCase::M1M2Global: return "M1M2Global";
    case MapCase::M1M2Extinction: return "M1M2Extinction";
    case MapCase::M1M2Eternal: return "M1M2Eternal";
    case MapCase::M2M3: return "M2M3";
    case MapCase::MGM1: return "MGM1";
    case MapCase::MGM2: return "MGM2";
    case MapCase::IdentityCase: return "IdentityCase";
    case MapCase::Composite: return "Composite";
  }
  return "?";
}

ParameterMap map_m1_to_m2(const ModelParams& p, std::optional<double> rate_c) {
  require_model(p, Model::M1, "map_m1_to_m2");
  const Number one(1), two(2), N(p.N);
  const Number& s = p.order;
  const Number& m = p.nonlinearity;
  const Number mc = max(one - two * s / N, Number(0));
  if (compare(m, mc) <= 0)
    throw Error(ErrorKind::OutOfRange, "m must exceed (N-2s)/N", {{"m", m.value}, {"m_c", mc.value}});
  const Number mt = (two * m - one) / m;
  if (compare(mt, Number(0)) <= 0)
    throw Error(ErrorKind::OutOfRange, "mapped exponent (2m-1)/m is not positive", {{"m", m.value}});
  const ModelParams target = ModelParams::m2(p.N, one - s, mt);
  if (compare(m, one) == 0) return identity_map(p, target);

  ParameterMap map;
  map.source = p;
  map.target = target;
  map.source_exponents = similarity_exponents(p);
  const double beta1 = map.source_exponents.beta;
  const double c = rate_c.value_or(beta1);
  map.target_exponents = similarity_exponents(target, c);
  const double expo = m.value / (1.0 - m.value);
  map.profile_power = m.value;
  // λ^{1-m̃} = β₁/β_target with 1-m̃ = (1-m)/m
  map.scale_factor = ratio_power(beta1, map.target_exponents.beta, expo);
  const Number m1 = N / (N + two * s);
  const int side = compare(m, m1);
  if (map.target_exponents.type == SimilarityType::TypeIII || side == 0) {
    if (map.target_exponents.type != SimilarityType::TypeIII)
      throw Error(ErrorKind::DegenerateExponent, "borderline m did not produce a type-III target");
    map.case_tag = MapCase::M1M2Eternal;
    map.profile_power = p.N / (p.N + 2.0 * s.value);
    map.scale_factor = std::pow(beta1 / c, p.N / (2.0 * s.value));
  } else {
    map.case_tag = side > 0 ? MapCase::M1M2Global : MapCase::M1M2Extinction;
  }
  check_map(map);
  return map;
}

ParameterMap map_m2_to_m1(const ModelParams& p, std::optional<double> rate_c) {
  require_model(p, Model::M2, "map_m2_to_m1");
  const Number one(1), two(2);
  if (compare(p.nonlinearity, two) >= 0)
    throw Error(ErrorKind::OutOfRange, "mtilde >= 2 has no M1 preimage", {{"mtilde", p.nonlinearity.value}});
  const ModelParams source = ModelParams::m1(p.N, one - p.order, one / (two - p.nonlinearity));
  return invert(map_m1_to_m2(source, rate_c));
}

ParameterMap map_m2_to_m3(const ModelParams& p, const Number& m_hat) {
  require_model(p, Model::M2, "map_m2_to_m3");
  if (compare(p.nonlinearity, Number(2)) != 0)
    throw Error(ErrorKind::InvalidParameter, "the M3 map starts from mtilde = 2", {{"mtilde", p.nonlinearity.value}});
  if (compare(m_hat, Number(1)) <= 0)
    throw Error(ErrorKind::OutOfRange, "m_hat must exceed 1", {{"m_hat", m_hat.value}});
  ParameterMap map;
  map.source = p;
  map.target = ModelParams::m3(p.N, p.order, m_hat);
  map.source_exponents = similarity_exponents(p);
  map.target_exponents = similarity_exponents(map.target);
  map.case_tag = MapCase::M2M3;
  map.profile_power = 1.0 / (m_hat.value - 1.0);
  map.scale_factor = std::pow(map.target_exponents.beta / map.source_exponents.beta, map.profile_power);
  check_map(map);
  return map;
}

ParameterMap map_mg(const ModelParams& p) {
  require_model(p, Model::MG, "map_mg");
  const Number one(1), two(2);
  const Number& m0 = p.nonlinearity;
  const Number& n0 = p.second;
  if (compare(n0, one) <= 0) throw Error(ErrorKind::OutOfRange, "ntilde0 must exceed 1", {{"ntilde0", n0.value}});
  if (compare(m0, two) >= 0) return map_mg_to_m2(p);

  ParameterMap map;
  map.source = p;
  map.target = ModelParams::m1(p.N, one - p.order, (n0 - one) / (two - m0));
  map.source_exponents = similarity_exponents(p);
  map.target_exponents = similarity_exponents(map.target);
  map.case_tag = MapCase::MGM1;
  map.profile_power = 2.0 - m0.value;
  const double m = map.target.nonlinearity.value;
  if (compare(map.target.nonlinearity, one) == 0) {
    // β₁ = β₄ here and the prefactor exponent is singular.
    map.scale_factor = 1.0;
    map.warnings.push_back("m = 1 target: the prefactor is 1");
  } else {
    map.scale_factor = ratio_power(map.target_exponents.beta, map.source_exponents.beta, 1.0 / (m - 1.0));
  }
  if (map.source_exponents.type != map.target_exponents.type)
    map.warnings.push_back("source and target similarity types differ");
  check_map(map);
  return map;
}

ParameterMap map_mg_to_m2(const ModelParams& p) {
  require_model(p, Model::MG, "map_mg_to_m2");
  const Number one(1), two(2), four(4);
  const Number& m0 = p.nonlinearity;
  const Number& n0 = p.second;
  if (compare(n0, one) <= 0) throw Error(ErrorKind::OutOfRange, "ntilde0 must exceed 1", {{"ntilde0", n0.value}});
  ParameterMap map;
  map.source = p;
  map.target = ModelParams::m2(p.N, p.order, (two * n0 + m0 - four) / (n0 - one));
  map.target.validate();
  map.source_exponents = similarity_exponents(p);
  map.target_exponents = similarity_exponents(map.target);
  map.case_tag = MapCase::MGM2;
  map.profile_power = n0.value - 1.0;
  const double mt = map.target.nonlinearity.value;
  if (compare(map.target.nonlinearity, one) == 0)
    throw Error(ErrorKind::DegenerateMap, "mapped mtilde = 1 makes the prefactor singular");
  map.scale_factor = ratio_power(map.target_exponents.beta, map.source_exponents.beta, 1.0 / (mt - 1.0));
  if (compare(m0, two) < 0) map.warnings.push_back("m̃₀ < 2: recipe used outside its stated range");
  if (map.source_exponents.type != map.target_exponents.type)
    map.warnings.push_back("source and target similarity types differ");
  check_map(map);
  return map;
}

ParameterMap invert(const ParameterMap& map) {
  ParameterMap inv = map;
  std::swap(inv.source, inv.target);
  std::swap(inv.source_exponents, inv.target_exponents);
  inv.profile_power = 1.0 / map.profile_power;
  inv.scale_factor = std::pow(map.scale_factor, -inv.profile_power);
  inv.inverted = !map.inverted;
  return inv;
}

ParameterMap compose(const ParameterMap& first, const ParameterMap& second) {
  const auto same = [](const ModelParams& a, const ModelParams& b) {
    return a.model == b.model && a.N == b.N && compare(a.order, b.order) == 0 &&
           compare(a.nonlinearity, b.nonlinearity) == 0 &&
           (a.model != Model::MG || compare(a.second, b.second) == 0);
  };
  if (!same(first.target, second.source))
    throw Error(ErrorKind::InvalidParameter, "maps do not chain: target of the first is not the source of the second");
  ParameterMap map;
  map.source = first.source;
  map.target = second.target;
  map.source_exponents = first.source_exponents;
  map.target_exponents = second.target_exponents;
  map.case_tag = MapCase::Composite;
  map.profile_power = first.profile_power * second.profile_power;
  map.scale_factor = second.scale_factor * std::pow(first.scale_factor, second.profile_power);
  map.warnings = first.warnings;
  map.warnings.insert(map.warnings.end(), second.warnings.begin(), second.warnings.end());
  check_map(map);
  return map;
}

RadialProfile transform_profile(const ParameterMap& map, const RadialProfile& profile) {
  std::vector<double> v = profile.values();
  for (double& x : v) {
    if (x < -1e-14) throw Error(ErrorKind::NegativeValue, "profile has negative entries", {{"value", x}});
    if (x < 0.0) x = 0.0;
  }
  if (!(map.profile_power == 1.0 && map.scale_factor == 1.0)) {
    for (double& x : v) x = map.scale_factor * std::pow(x, map.profile_power);
  }
  RadialProfile out(profile.grid(), std::move(v), profile.even());
  out.warnings = profile.warnings;
  return out;
}

DecayLaw target_decay(const ParameterMap& map) {
  const ModelParams& t = map.target;
  if (t.model != Model::M2 || map.source.model != Model::M1)
    throw Error(ErrorKind::InvalidParameter, "decay transport is defined for M1 → M2 maps");
  const double N = t.N, st = t.order.value, mt = t.nonlinearity.value;
  DecayLaw d;
  d.type = map.target_exponents.type;
  switch (map.case_tag) {
    case MapCase::M1M2Global:
    case MapCase::IdentityCase:
      d.exponent = (N + 2.0 - 2.0 * st) / (2.0 - mt);
      d.law = "(N+2-2s)/(2-m)";
      break;
    case MapCase::M1M2Extinction:
      d.exponent = 2.0 * (1.0 - st) / (1.0 - mt);
      d.law = "2(1-s)/(1-m)";
      break;
    case MapCase::M1M2Eternal:
      d.exponent = N;
      d.law = "N";
      break;
    default:
      throw Error(ErrorKind::InvalidParameter, "decay transport is defined for M1 → M2 maps");
  }
  return d;
}

}  // namespace fracsim
