#include "fracsim/params.hpp"

#include <cmath>
#include <limits>

#include "fracsim/errors.hpp"

namespace fracsim {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::DegenerateExponent: return "DegenerateExponent";
    case ErrorKind::GammaPole: return "GammaPole";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::CalibrationFailed: return "CalibrationFailed";
    case ErrorKind::NoVSS: return "NoVSS";
    case ErrorKind::SignViolation: return "SignViolation";
    case ErrorKind::OutOfTemporalDomain: return "OutOfTemporalDomain";
    case ErrorKind::DegenerateMap: return "DegenerateMap";
    case ErrorKind::NegativeValue: return "NegativeValue";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::UnknownModel: return "UnknownModel";
    case ErrorKind::QuadratureNonConvergent: return "QuadratureNonConvergent";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::Instability: return "Instability";
    case ErrorKind::WindowTooNoisy: return "WindowTooNoisy";
  }
  return "Unknown";
}

const char* to_string(Model model) {
  switch (model) {
    case Model::M1: return "m1";
    case Model::M2: return "m2";
    case Model::M3: return "m3";
    case Model::MG: return "mg";
  }
  return "?";
}

Model parse_model(const std::string& text) {
  if (text == "m1" || text == "M1") return Model::M1;
  if (text == "m2" || text == "M2") return Model::M2;
  if (text == "m3" || text == "M3") return Model::M3;
  if (text == "mg" || text == "MG") return Model::MG;
  throw Error(ErrorKind::UnknownModel, "unknown model '" + text + "'");
}

const char* to_string(SimilarityType type) {
  switch (type) {
    case SimilarityType::TypeI: return "TypeI";
    case SimilarityType::TypeII: return "TypeII";
    case SimilarityType::TypeIII: return "TypeIII";
  }
  return "?";
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::GlobalTypeI: return "GlobalTypeI";
    case Regime::ExtinctionTypeII: return "ExtinctionTypeII";
    case Regime::EternalTypeIII: return "EternalTypeIII";
    case Regime::OutOfTheory: return "OutOfTheory";
  }
  return "?";
}

const char* to_string(Propagation propagation) {
  switch (propagation) {
    case Propagation::Finite: return "Finite";
    case Propagation::Infinite: return "Infinite";
    case Propagation::Unknown: return "Unknown";
  }
  return "?";
}

ModelParams ModelParams::m1(int N, Number s, Number m) {
  ModelParams p{Model::M1, N, s, m, {}};
  p.validate();
  return p;
}

ModelParams ModelParams::m2(int N, Number stilde, Number mtilde) {
  ModelParams p{Model::M2, N, stilde, mtilde, {}};
  p.validate();
  return p;
}

ModelParams ModelParams::m3(int N, Number shat, Number mhat) {
  ModelParams p{Model::M3, N, shat, mhat, {}};
  p.validate();
  return p;
}

ModelParams ModelParams::mg(int N, Number s0, Number mtilde0, Number ntilde0) {
  ModelParams p{Model::MG, N, s0, mtilde0, ntilde0};
  p.validate();
  return p;
}

void ModelParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidParameter, what); };
  if (N < 1) fail("dimension N must be >= 1");
  if (!std::isfinite(order.value) || !std::isfinite(nonlinearity.value))
    fail("parameters must be finite");
  if (compare(order, Number(0), 0.0) <= 0 || compare(order, Number(1), 0.0) >= 0)
    fail("order must lie strictly inside (0,1), got " + order.str());
  if (compare(nonlinearity, Number(0), 0.0) <= 0)
    fail("nonlinearity exponent must be positive, got " + nonlinearity.str());
  if (model == Model::MG) {
    if (!std::isfinite(second.value) || compare(second, Number(0), 0.0) <= 0)
      fail("second MG exponent must be positive, got " + second.str());
  }
}

Number exponent_denominator(const ModelParams& p) {
  const Number N(p.N);
  const Number one(1), two(2), three(3);
  switch (p.model) {
    case Model::M1: return N * (p.nonlinearity - one) + two * p.order;
    case Model::M2:
    case Model::M3: return N * (p.nonlinearity - one) + two - two * p.order;
    case Model::MG: return N * (p.nonlinearity + p.second - three) + two - two * p.order;
  }
  throw Error(ErrorKind::UnknownModel, "unknown model");
}

ExponentSet similarity_exponents(const ModelParams& p, double rate_c) {
  p.validate();
  const Number den = exponent_denominator(p);
  const bool exact_zero = den.exact && den.exact->is_zero();
  if (p.model == Model::M2 && (exact_zero || (!den.exact && std::abs(den.value) < 1e-12))) {
    if (!(rate_c > 0.0) || !std::isfinite(rate_c))
      throw Error(ErrorKind::InvalidParameter, "rate c must be positive");
    ExponentSet e;
    e.type = SimilarityType::TypeIII;
    e.beta = rate_c;
    e.alpha = p.N * rate_c;
    e.rate_c = rate_c;
    return e;
  }
  if (exact_zero || std::abs(den.value) <= 1e-14) {
    throw Error(ErrorKind::DegenerateExponent,
                std::string("similarity exponent denominator vanishes for model ") +
                    to_string(p.model),
                {{"denominator", den.value}});
  }
  const double beta = 1.0 / den.value;
  ExponentSet e;
  e.type = beta > 0 ? SimilarityType::TypeI : SimilarityType::TypeII;
  e.beta = std::abs(beta);
  e.alpha = p.N * e.beta;
  return e;
}

namespace {

struct Orders {
  Number s;   // order of the M1 operator
  Number st;  // order of the potential in M2-type models
};

Orders orders_of(const ModelParams& p) {
  if (p.model == Model::M1) return {p.order, Number(1) - p.order};
  return {Number(1) - p.order, p.order};
}

}  // namespace

RegimeReport critical_exponents(const ModelParams& p) {
  p.validate();
  RegimeReport r;
  const Number N(p.N);
  const Number one(1), two(2), four(4), zero(0);
  const auto [s, st] = orders_of(p);

  const Number mc = max(N - two * s, zero) / N;
  const Number m1 = N / (N + two * s);
  const Number mex = (N + two - two * s) / (N + two * s);
  const Number mt_borderline = (N - two + two * st) / N;
  const Number mt_upper = (N + two * st) / (N + two);
  const Number mt_vss_lower = (N - two + four * st) / (N + two * st);
  const Number mt_vss_upper = (N + four * st) / (N + two + two * st);
  const Number gap = N - two * s;
  const Number mt_star = compare(gap, zero, 0.0) > 0
                             ? (N - four * s) / gap
                             : Number(-std::numeric_limits<double>::infinity());

  r.critical_values = {{"m_c", mc},
                       {"m_1", m1},
                       {"m_ex", mex},
                       {"mtilde_borderline", mt_borderline},
                       {"mtilde_c2", mt_upper},
                       {"mtilde_vss_lower", mt_vss_lower},
                       {"mtilde_vss_upper", mt_vss_upper},
                       {"mtilde_star", mt_star}};

  const Number& x = p.nonlinearity;
  switch (p.model) {
    case Model::M1: {
      const bool above = compare(x, mc, 0.0) > 0;
      r.regime = above ? Regime::GlobalTypeI : Regime::OutOfTheory;
      r.propagation = above ? Propagation::Infinite : Propagation::Unknown;
      if (compare(x, m1) == 0) r.notes.push_back("m = m_1: far-field decay carries a logarithmic correction");
      if (compare(x, one) == 0) r.notes.push_back("m = 1: linear fractional heat equation");
      break;
    }
    case Model::M2: {
      const int c = compare(x, mt_borderline);
      r.regime = c < 0 ? Regime::ExtinctionTypeII
                       : (c == 0 ? Regime::EternalTypeIII : Regime::GlobalTypeI);
      if (compare(x, two, 0.0) >= 0) {
        r.propagation = Propagation::Finite;
      } else if (x.value > mt_star.value) {
        r.propagation = Propagation::Infinite;
        if (compare(x, one, 0.0) <= 0)
          r.notes.push_back("infinite propagation inferred from positivity of self-similar profiles only");
      } else {
        r.propagation = Propagation::Unknown;
      }
      break;
    }
    case Model::M3: {
      r.regime = compare(x, one, 0.0) > 0 ? Regime::GlobalTypeI : Regime::OutOfTheory;
      r.propagation = compare(x, two, 0.0) == 0 ? Propagation::Finite : Propagation::Unknown;
      break;
    }
    case Model::MG: {
      const bool ok = compare(p.second, one, 0.0) > 0 && exponent_denominator(p).value > 0;
      r.regime = ok ? Regime::GlobalTypeI : Regime::OutOfTheory;
      r.propagation = Propagation::Unknown;
      break;
    }
  }
  return r;
}

bool on_m1_line(const Number& mtilde0, const Number& ntilde0, const Number& m) {
  return compare(ntilde0, m * (Number(2) - mtilde0) + Number(1)) == 0;
}

bool on_m2_line(const Number& mtilde0, const Number& ntilde0, const Number& mtilde) {
  return compare(ntilde0 * (mtilde - Number(2)), mtilde0 - Number(4) + mtilde) == 0;
}

std::vector<PlaneRow> parameter_plane(Model model, int N, Number order, const GridAxis& x,
                                      const GridAxis& y) {
  std::vector<PlaneRow> rows;
  const Number one(1), two(2), four(4);
  auto regime_of = [&](const ModelParams& p) {
    try {
      return critical_exponents(p).regime;
    } catch (const Error&) {
      return Regime::OutOfTheory;
    }
  };
  if (model == Model::MG) {
    for (int j = 0; j < y.count; ++j) {
      for (int i = 0; i < x.count; ++i) {
        PlaneRow row;
        const Number mt0 = x.at(i), nt0 = y.at(j);
        row.coords = {mt0, nt0};
        if (mt0.value <= 0 || nt0.value <= 0) {
          rows.push_back(row);
          continue;
        }
        ModelParams p{Model::MG, N, order, mt0, nt0};
        row.regime = regime_of(p);
        if (compare(nt0, one, 0.0) > 0) {
          if (compare(mt0, two, 0.0) < 0) {
            row.mapped_case = "MGM1";
            row.mapped_name = "m";
            row.mapped = (nt0 - one) / (two - mt0);
          } else {
            row.mapped_case = "MGM2";
            row.mapped_name = "mtilde";
            row.mapped = (two * nt0 + mt0 - four) / (nt0 - one);
          }
        }
        rows.push_back(row);
      }
    }
    return rows;
  }
  for (int i = 0; i < x.count; ++i) {
    PlaneRow row;
    const Number v = x.at(i);
    row.coords = {v};
    if (v.value <= 0) {
      rows.push_back(row);
      continue;
    }
    ModelParams p{model, N, order, v, {}};
    row.regime = regime_of(p);
    const Number Nn(N);
    if (model == Model::M1) {
      const Number s = order;
      const Number mc = max(Nn - two * s, Number(0)) / Nn;
      const Number m1 = Nn / (Nn + two * s);
      if (compare(v, mc) > 0) {
        const int c = compare(v, m1);
        if (compare(v, one) == 0) {
          row.mapped_case = "IdentityCase";
        } else {
          row.mapped_case = c > 0 ? "M1M2Global" : (c < 0 ? "M1M2Extinction" : "M1M2Eternal");
        }
        row.mapped_name = "mtilde";
        row.mapped = (two * v - one) / v;
      }
    } else if (model == Model::M2) {
      if (compare(v, two, 0.0) < 0) {
        const Number crit = (Nn - two + two * order) / Nn;
        const int c = compare(v, crit);
        row.mapped_case = compare(v, one) == 0 ? "IdentityCase"
                                               : (c > 0 ? "M1M2Global" : (c < 0 ? "M1M2Extinction" : "M1M2Eternal"));
        row.mapped_name = "m";
        row.mapped = one / (two - v);
      } else if (compare(v, two) == 0) {
        row.mapped_case = "M2M3";
        row.mapped_name = "mhat";
        row.mapped = two;
      }
    } else if (model == Model::M3) {
      if (compare(v, one, 0.0) > 0) {
        row.mapped_case = "M2M3";
        row.mapped_name = "mtilde";
        row.mapped = two;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fracsim
