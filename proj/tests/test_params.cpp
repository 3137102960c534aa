#include <doctest.h>

#include <cstring>
#include <random>

#include "fracsim/errors.hpp"
#include "fracsim/params.hpp"

using namespace fracsim;

namespace {
Number q(std::int64_t p, std::int64_t d = 1) { return Number(Rational(p, d)); }
bool exact_equal(const Number& a, const Number& b) { return a.exact && b.exact && *a.exact == *b.exact; }
}  // namespace

TEST_SUITE("params") {
  TEST_CASE("linear M1 in two dimensions") {
    const auto e = similarity_exponents(ModelParams::m1(2, q(1, 2), q(1)));
    CHECK(e.beta == 1.0);
    CHECK(e.alpha == 2.0);
    CHECK(e.type == SimilarityType::TypeI);
  }

  TEST_CASE("negative M2 denominator gives the extinction type with beta = -beta2") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    int checked = 0;
    for (int k = 0; k < 1000; ++k) {
      const int N = 1 + static_cast<int>(rng() % 3);
      const double st = u(rng), mt = 2.0 * u(rng);
      const double den = N * (mt - 1.0) + 2.0 - 2.0 * st;
      if (std::abs(den) < 1e-6) continue;
      const auto e = similarity_exponents(ModelParams::m2(N, Number(st), Number(mt)));
      const double beta2 = 1.0 / den;
      if (den < 0) {
        CHECK(e.type == SimilarityType::TypeII);
        CHECK(std::abs(e.beta - (-beta2)) <= 1e-14 * std::abs(beta2));
        ++checked;
      } else {
        CHECK(e.type == SimilarityType::TypeI);
        CHECK(std::abs(e.beta - beta2) <= 1e-14 * beta2);
      }
      CHECK(e.alpha - N * e.beta == 0.0);
    }
    CHECK(checked > 100);
  }

  TEST_CASE("borderline M2 is the eternal type") {
    const auto exact = similarity_exponents(ModelParams::m2(2, q(1, 2), q(1, 2)));
    CHECK(exact.type == SimilarityType::TypeIII);
    REQUIRE(exact.rate_c);
    CHECK(*exact.rate_c > 0.0);
    // An inexact input within 1e-12 of the threshold is also borderline.
    const auto near = similarity_exponents(ModelParams::m2(2, q(1, 2), Number(0.5 + 1e-13)));
    CHECK(near.type == SimilarityType::TypeIII);
    const auto off = similarity_exponents(ModelParams::m2(2, q(1, 2), Number::parse("0.5000001")));
    CHECK(off.type == SimilarityType::TypeI);
  }

  TEST_CASE("vanishing denominators without an eternal branch are degenerate") {
    // N(m-1) + 2s = 0 at N = 1, s = 1/4, m = 1/2
    try {
      similarity_exponents(ModelParams::m1(1, q(1, 4), q(1, 2)));
      FAIL("expected DegenerateExponent");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateExponent);
    }
    // N(m̂-1) + 2 - 2ŝ = 0 at N = 2, ŝ = 1/2, m̂ = 1/2
    CHECK_THROWS_AS(similarity_exponents(ModelParams::m3(2, q(1, 2), q(1, 2))), Error);
  }

  TEST_CASE("MG exponent") {
    // β₄ = 1/(N(m̃₀+ñ₀-3) + 2 - 2s̃₀)
    const auto e = similarity_exponents(ModelParams::mg(1, q(1, 2), q(3, 2), q(2)));
    CHECK(e.beta == doctest::Approx(1.0 / 1.5));
  }

  TEST_CASE("critical exponents at N = 2, s = 1/2") {
    const auto r = critical_exponents(ModelParams::m1(2, q(1, 2), q(1)));
    CHECK(exact_equal(r.critical_values.at("m_c"), q(1, 2)));
    CHECK(exact_equal(r.critical_values.at("m_1"), q(2, 3)));
    CHECK(exact_equal(r.critical_values.at("m_ex"), q(1)));
    CHECK(r.regime == Regime::GlobalTypeI);
    CHECK(r.propagation == Propagation::Infinite);
  }

  TEST_CASE("M2 propagation flags") {
    for (const char* st : {"0.1", "1/2", "0.9"}) {
      const auto r = critical_exponents(ModelParams::m2(1, Number::parse(st), Number::parse("1.5")));
      CHECK(r.propagation == Propagation::Infinite);
    }
    for (int N = 1; N <= 4; ++N) {
      CHECK(critical_exponents(ModelParams::m2(N, q(1, 3), Number::parse("2.5"))).propagation == Propagation::Finite);
      CHECK(critical_exponents(ModelParams::m2(N, q(1, 3), q(2))).propagation == Propagation::Finite);
    }
    // m̃_* = (N-4s)/(N-2s) with s = 1 - s̃; N = 3, s̃ = 3/4 gives m̃_* = 4/5.
    const auto below = critical_exponents(ModelParams::m2(3, q(3, 4), q(1, 2)));
    CHECK(below.propagation == Propagation::Unknown);
    const auto weak = critical_exponents(ModelParams::m2(3, q(3, 4), q(9, 10)));
    CHECK(weak.propagation == Propagation::Infinite);
    CHECK_FALSE(weak.notes.empty());
  }

  TEST_CASE("m_1 lies above m_c on a sweep") {
    for (int N = 1; N <= 6; ++N)
      for (int k = 1; k < 100; ++k) {
        const Number s = q(k, 100);
        const auto r = critical_exponents(ModelParams::m1(N, s, q(1)));
        CHECK(compare(r.critical_values.at("m_1"), r.critical_values.at("m_c")) > 0);
        CHECK(compare(r.critical_values.at("m_ex"), r.critical_values.at("m_1")) > 0);
      }
  }

  TEST_CASE("critical_exponents is deterministic") {
    const auto p = ModelParams::m2(3, Number(0.37), Number(0.81));
    const auto a = critical_exponents(p), b = critical_exponents(p);
    REQUIRE(a.critical_values.size() == b.critical_values.size());
    for (const auto& [k, v] : a.critical_values) {
      const double w = b.critical_values.at(k).value;
      CHECK(std::memcmp(&v.value, &w, sizeof(double)) == 0);
    }
    CHECK(a.regime == b.regime);
  }

  TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(ModelParams::m1(1, q(0), q(2)).validate(), Error);
    CHECK_THROWS_AS(ModelParams::m1(1, q(1), q(2)).validate(), Error);
    CHECK_THROWS_AS(ModelParams::m1(0, q(1, 2), q(2)).validate(), Error);
    CHECK_THROWS_AS(ModelParams::m2(1, q(1, 2), q(-1)).validate(), Error);
    CHECK_THROWS_AS(ModelParams::mg(1, q(1, 2), q(1), q(0)).validate(), Error);
    CHECK_THROWS_AS(parse_model("m7"), Error);
    CHECK(parse_model("MG") == Model::MG);
  }

  TEST_CASE("MG plane rows and line families") {
    const GridAxis x{q(1, 4), q(1, 4), 16}, y{q(1, 4), q(1, 4), 16};
    const auto rows = parameter_plane(Model::MG, 3, q(1, 2), x, y);
    REQUIRE(rows.size() == 256);
    bool seen_22 = false, seen_12 = false;
    for (const auto& r : rows) {
      const Number& mt0 = r.coords[0];
      const Number& nt0 = r.coords[1];
      if (compare(mt0, q(2)) == 0 && compare(nt0, q(2)) == 0) {
        seen_22 = true;
        CHECK(on_m1_line(mt0, nt0, q(2)) == false);  // m̃₀ = 2 is the vertical of the M1 family
        CHECK(on_m2_line(mt0, nt0, q(2)));
        CHECK(r.mapped_case == "MGM2");
        CHECK(exact_equal(*r.mapped, q(2)));
      }
      if (compare(mt0, q(1)) == 0 && compare(nt0, q(2)) == 0) {
        seen_12 = true;
        CHECK(r.mapped_case == "MGM1");
        CHECK(exact_equal(*r.mapped, q(1)));
        CHECK(on_m1_line(mt0, nt0, q(1)));
      }
    }
    CHECK(seen_22);
    CHECK(seen_12);
  }

  TEST_CASE("the two families meet at (2, 2) with m = m̃ = 2 as a limit") {
    // ñ₀ = m(2 - m̃₀) + 1 passes through (2, 1) for every m; the M2 line for
    // m̃ = 2 is ñ₀·0 = m̃₀ - 2, i.e. the vertical m̃₀ = 2.
    CHECK(on_m2_line(q(2), q(2), q(2)));
    CHECK(on_m2_line(q(2), q(7, 3), q(2)));
    CHECK(on_m1_line(q(2), q(1), q(5)));
  }

  TEST_CASE("M2 regime boundary at N = 2, s̃ = 1/2") {
    const GridAxis x{q(1, 8), q(1, 8), 15};
    const auto rows = parameter_plane(Model::M2, 2, q(1, 2), x);
    for (const auto& r : rows) {
      const int c = compare(r.coords[0], q(1, 2));
      const Regime expect = c < 0 ? Regime::ExtinctionTypeII : (c == 0 ? Regime::EternalTypeIII : Regime::GlobalTypeI);
      CHECK(r.regime == expect);
      if (compare(r.coords[0], q(2)) < 0) CHECK(r.mapped_name == "m");
    }
  }
}
