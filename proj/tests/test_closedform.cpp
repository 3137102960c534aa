#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "fracsim/closedform.hpp"
#include "fracsim/errors.hpp"
#include "fracsim/specfun.hpp"
#include "oracles.hpp"

using namespace fracsim;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// k̄(α) straight from the four-Gamma expression.
double kbar(double alpha, double s, int N) {
  return std::pow(2.0, -2.0 * s) * std::tgamma(0.5 * (N - alpha)) * std::tgamma(0.5 * (alpha - 2.0 * s)) /
         (std::tgamma(0.5 * alpha) * std::tgamma(0.5 * (N - alpha + 2.0 * s)));
}

double beta_m2(int N, double st, double mt) { return 1.0 / (N * (mt - 1.0) + 2.0 - 2.0 * st); }

CapOptions quick() {
  CapOptions o;
  o.calibrate = false;
  return o;
}

}  // namespace

TEST_SUITE("closedform") {
  TEST_CASE("cap width does not depend on the mass") {
    for (double s : {0.25, 0.5, 0.75}) {
      const auto a = barenblatt_cap(1, s, 1.0), b = barenblatt_cap(1, s, 2.0);
      CHECK(rel(a.constant("b"), b.constant("b")) < 1e-6);
      CHECK(a.constant("calibration_residual") <= 1e-3);
      // The analytic value and the grid calibration agree to discretization accuracy.
      CHECK(rel(a.constant("b"), a.constant("b_analytic")) < 2e-2);
    }
    for (int N : {2, 3}) {
      const auto a = barenblatt_cap(N, 0.4, 1.0), b = barenblatt_cap(N, 0.4, 5.0);
      CHECK(a.constant("b") == b.constant("b"));
      CHECK(b.constant("R") > a.constant("R"));
    }
  }

  TEST_CASE("cap profile carries the requested mass") {
    const auto cap = barenblatt_cap(1, 0.5, 1.7, quick());
    const double R = cap.constant("R");
    auto f = [&](double y) { return cap.profile(y); };
    boost::math::quadrature::tanh_sinh<double> ts;
    CHECK(rel(ts.integrate(f, -R, R, 1e-12), 1.7) < 1e-9);
  }

  TEST_CASE("cap vanishes at the support edge like a Hölder power") {
    for (double s : {0.25, 0.5, 0.75}) {
      const auto cap = barenblatt_cap(1, s, 1.0, quick());
      const double R = cap.constant("R");
      CHECK(cap.profile(R) == 0.0);
      CHECK(cap.profile(1.01 * R) == 0.0);
      const double e = 1e-7;
      const double ratio = cap.profile(R * (1 - e)) / cap.profile(R * (1 - 2 * e));
      CHECK(std::abs(std::log(ratio) / std::log(0.5) - (1.0 - s)) < 1e-5);
    }
  }

  TEST_CASE("model-3 cap at mhat = 2 is the parabolic cap") {
    const auto cap = barenblatt_cap(1, 0.5, 1.0, quick());
    const auto m3 = model3_cap(1, 0.5, 2.0, 1.0, quick());
    CHECK(m3.constant("R") == doctest::Approx(cap.constant("R")).epsilon(1e-15));
    for (double y : {0.0, 0.3, 0.9, 1.4})
      CHECK(m3.profile(y) == doctest::Approx(cap.profile(y)).epsilon(1e-13));
  }

  TEST_CASE("model-3 cap is a power of the scaled cap") {
    const int N = 1;
    const double s = 0.4;
    for (double mh : {1.5, 3.0, 5.0}) {
      const auto cap = barenblatt_cap(N, s, 1.0, quick());
      const auto m3 = model3_cap(N, s, mh, 1.0, quick());
      const double b3 = 1.0 / (N * (mh - 1.0) + 2.0 - 2.0 * s);
      const double b2 = 1.0 / (N + 2.0 - 2.0 * s);
      CHECK(m3.constant("R") == cap.constant("R"));
      for (double y : {0.0, 0.2, 0.7, 0.95 * cap.constant("R")})
        CHECK(m3.profile(y) == doctest::Approx(std::pow(b3 / b2 * cap.profile(y), 1.0 / (mh - 1.0))).epsilon(1e-12));
    }
    CHECK_THROWS_AS(model3_cap(1, 0.5, 1.0, 1.0, quick()), Error);
  }

  TEST_CASE("type-I VSS resubstitutes into the equation") {
    int tested = 0;
    for (int N = 1; N <= 3; ++N)
      for (double st : {0.25, 0.5, 0.75}) {
        const Interval w = vss_type1_window(st, N);
        if (w.empty()) continue;
        const double mt = 0.5 * (w.lo + w.hi);
        const auto v = vss_type1(N, st, mt);
        const double alpha = v.constant("alpha");
        CHECK(std::abs(alpha * (1.0 - mt) - (2.0 - 2.0 * st)) < 1e-14);
        // v = K t^τ|x|^{-α} gives τ = 1/(1-m̃) and K^{1-m̃} = (1-m̃)k̄(2s̃-α)(N-α).
        const double K = v.constant("K");
        const double rhs = (1.0 - mt) * kbar(alpha, st, N) * (2.0 * st - alpha) * (N - alpha);
        CHECK(rel(std::pow(K, 1.0 - mt), rhs) < 1e-12);
        CHECK(std::abs(v.constant("time_exponent") * (1.0 - mt) - 1.0) < 1e-12);
        CHECK(rel(v.constant("time_exponent"), beta_m2(N, st, mt) * (alpha - N)) < 1e-14);
        CHECK(v.constant("in_window") == 1.0);
        ++tested;
      }
    CHECK(tested >= 5);
  }

  TEST_CASE("type-I VSS is refused where the sign test fails") {
    try {
      vss_type1(2, 0.5, 0.4);
      FAIL("expected NoVSS");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NoVSS);
    }
    CHECK_THROWS_AS(vss_type1(2, 0.5, 1.2), Error);
  }

  TEST_CASE("type-II VSS amplitude solves its ODE") {
    const int N = 3;
    for (double st : {0.25, 0.5, 0.75}) {
      const double upper = (N - 2.0 + 2.0 * st) / N;
      for (double frac : {0.2, 0.5, 0.8}) {
        const double mt = frac * upper, T = 2.0;
        const auto sol = vss_type2(N, st, mt, T);
        const double alpha = (2.0 - 2.0 * st) / (1.0 - mt);
        const double C = kbar(alpha, st, N) * (2.0 * st - alpha) * (N - alpha);
        CHECK(C < 0.0);
        CHECK(rel(sol.constant("C_ode"), C) < 1e-12);
        const double K = sol.constant("K");
        auto B = [&](std::complex<double> t) { return K * std::pow(T - t, 1.0 / (1.0 - mt)); };
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 10; ++k) {
          const double t = 0.19 * k;
          const double b = vss_amplitude(sol, t);
          CHECK(rel(b, B(t).real()) < 1e-14);
          CHECK(rel(oracle::complex_step(B, t), C * std::pow(b, mt)) < 1e-10);
          CHECK(b < prev);
          prev = b;
        }
        CHECK(vss_amplitude(sol, T) == 0.0);
        CHECK(vss_amplitude(sol, T + 1.0) == 0.0);
      }
    }
  }

  TEST_CASE("evaluate") {
    const auto cap = barenblatt_cap(1, 0.5, 1.0, quick());
    const double beta = cap.exponents.beta, alpha = cap.exponents.alpha;
    SUBCASE("zero outside the support") {
      CHECK(evaluate(cap, 1.0001 * cap.constant("R"), 1.0) == 0.0);
      CHECK(evaluate(cap, 10.0, 1.0) == 0.0);
    }
    SUBCASE("self-similar scaling") {
      const double lam = 2.0;
      for (double x : {0.0, 0.2, 0.6})
        CHECK(evaluate(cap, std::pow(lam, beta) * x, lam * 1.3) ==
              doctest::Approx(std::pow(lam, -alpha) * evaluate(cap, x, 1.3)).epsilon(1e-13));
    }
    SUBCASE("point form agrees with the radius form") {
      const auto cap2 = barenblatt_cap(2, 0.5, 1.0, quick());
      const std::array<double, 2> x{0.3, 0.4};
      CHECK(evaluate(cap2, x, 2.0) == evaluate(cap2, 0.5, 2.0));
      const std::array<double, 3> bad{0.1, 0.2, 0.3};
      CHECK_THROWS_AS(evaluate(cap2, bad, 2.0), Error);
    }
    SUBCASE("temporal domains") {
      try {
        evaluate(cap, 0.1, 0.0);
        FAIL("expected OutOfTemporalDomain");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OutOfTemporalDomain);
      }
      const auto v2 = vss_type2(3, 0.5, 0.2, 1.0);
      CHECK(evaluate(v2, 0.5, 1.0) == 0.0);
      CHECK(evaluate(v2, 0.5, 3.0) == 0.0);
      CHECK(evaluate(v2, 0.5, 0.5) > 0.0);
      CHECK_THROWS_AS(evaluate(v2, 0.5, -0.1), Error);
      CHECK(std::isinf(evaluate(v2, 0.0, 0.5)));
      const auto v1 = vss_type1(2, 0.5, 0.7);
      CHECK(std::isinf(evaluate(v1, 0.0, 1.0)));
      CHECK_THROWS_AS(evaluate(v1, 1.0, std::nan("")), Error);
    }
  }

  TEST_CASE("Gamma sign identity behind the negative ODE constant") {
    const int N = 3;
    const double st = 0.5, mt = 0.3;
    const double alpha = (2.0 - 2.0 * st) / (1.0 - mt);
    const double x = 0.5 * (alpha - 2.0 * st);
    CHECK(rel(std::tgamma(x) * (-alpha + 2.0 * st) / 2.0, -std::tgamma(x + 1.0)) < 1e-14);
    CHECK(vss_type2(N, st, mt, 1.0).constant("C_ode") < 0.0);
  }
}
