#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "homsurf/differentials.hpp"
#include "homsurf/examples.hpp"
#include "homsurf/ode.hpp"

using namespace homsurf;

TEST_CASE("rk4 utilities hit classical oracles") {
  // y' = y from 0 to 1: y(1) = e at fourth order.
  auto expo = [](double, const OdeState<1>& y) { return y; };
  OdeState<1> y0;
  y0 << 1.0;
  const auto traj = rk4_integrate(expo, y0, 0.0, 1.0, 1e-3);
  CHECK(std::abs(traj.y.back()[0] - std::exp(1.0)) < 1e-11);

  // Dense output: the Hermite evaluation stays at interpolation order between
  // samples of the circular oscillator.
  auto circle = [](double, const OdeState<2>& y) {
    OdeState<2> dy;
    dy << y[1], -y[0];
    return dy;
  };
  OdeState<2> c0;
  c0 << 1.0, 0.0;
  const auto ct = rk4_integrate(circle, c0, 0.0, 2.0, 1e-3);
  for (double x : {0.1234, 0.777, 1.5005}) {
    const auto v = ct.eval(x);
    CHECK(std::abs(v[0] - std::cos(x)) < 1e-10);
    CHECK(std::abs(v[1] + std::sin(x)) < 1e-10);
  }

  // Backward integration reaches the same law.
  const auto back = rk4_integrate(expo, y0, 0.0, -1.0, 1e-3);
  CHECK(std::abs(back.y.front()[0] - std::exp(-1.0)) < 1e-11);
  CHECK(back.x.front() == doctest::Approx(-1.0));
  CHECK(back.x.back() == doctest::Approx(0.0));
}

TEST_CASE("implicit root solve: safeguarded Newton against a known root") {
  const ScalarCurve g = [](double h) { return std::make_pair(h * h * h + 2.0 * h, 3.0 * h * h + 2.0); };
  const ScalarCurve f = [](double h) { return std::make_pair(std::sin(h), std::cos(h)); };
  const double h_star = 0.4;
  const double t = 0.2;
  const double s = (h_star * h_star * h_star + 2.0 * h_star) - t * std::sin(h_star);
  const double root = solve_implicit_H(g, f, s, t, 0.0, 1.0);
  CHECK(std::abs(root - h_star) < 1e-10);

  // No sign change over the bracket: rejected, not silently bisected.
  CHECK_THROWS_AS(solve_implicit_H(g, f, s, t, 0.6, 1.0), std::domain_error);
}

TEST_CASE("closed-form family: pinned node values and the constant product differential") {
  const ConformalGrid grid(0.0, 0.0, 1e-2, 1e-2, 100, 20);
  Example31Params params;  // a = 1, b = 1, kappa = -1
  const auto d = gen_example31(params, grid);

  // s = 0 values, straight from the hyperbolic profile: lambda = 2/sinh^2(1),
  // H = -cosh(1)/(2 sqrt(2)), A = 1/(2 sinh(1)).
  CHECK(d.lambda.at(0, 0) == doctest::Approx(2.0 / std::pow(std::sinh(1.0), 2)).epsilon(1e-12));
  CHECK(d.H.at(0, 0) ==
        doctest::Approx(-std::cosh(1.0) / (2.0 * std::sqrt(2.0))).epsilon(1e-12));
  CHECK(d.A.at(0, 0).real() == doctest::Approx(0.5 / std::sinh(1.0)).epsilon(1e-12));
  CHECK(d.A.at(0, 0).imag() == 0.0);
  CHECK(d.u.at(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));

  // P == -1/4 at every node, for both curvature signs.
  for (const double kappa : {-1.0, 1.0}) {
    Example31Params pk;
    pk.kappa = kappa;
    pk.b = kappa < 0 ? 1.0 : 0.5;
    const ConformalGrid gk(0.1, 0.0, 1e-2, 1e-2, 100, 20);
    const auto dk = gen_example31(pk, gk);
    const auto P = ar_P(dk);
    for (int i = 0; i < gk.ns; ++i)
      for (int j = 0; j < gk.nt; ++j)
        CHECK(std::abs(P.coeff.at(i, j) - Complex(-0.25, 0.0)) < 1e-12);
    CHECK(check_all(dk).pass);
    // All fields depend on s only.
    for (int i = 0; i < gk.ns; ++i)
      for (int j = 1; j < gk.nt; ++j) CHECK(dk.H.at(i, j) == dk.H.at(i, 0));
  }
}

TEST_CASE("closed-form family rejects a degenerate profile argument") {
  Example31Params params;
  params.b = 0.0;
  const ConformalGrid grid(-0.5, 0.0, 1e-2, 1e-2, 100, 20);  // a s + b crosses 0
  CHECK_THROWS_AS(gen_example31(params, grid), std::domain_error);
  params.a = 0.0;
  CHECK_THROWS_AS(gen_example31(params, ConformalGrid(0.1, 0, 1e-2, 1e-2, 10, 10)),
                  std::domain_error);
  params.a = 1.0;
  params.kappa = 2.0;  // only +-1 are the product models
  CHECK_THROWS_AS(gen_example31(params, ConformalGrid(0.1, 0, 1e-2, 1e-2, 10, 10)),
                  std::domain_error);
}

TEST_CASE("rotational family: integrable to FD order with unit Q, both profiles") {
  const ConformalGrid grid(-0.2, -0.2, 2e-3, 2e-3, 201, 201);
  for (const int delta : {1, -1}) {
    CAPTURE(delta);
    Example32Params params;
    params.delta = delta;
    const auto d = gen_example32(params, grid);
    CHECK(validate_fundamental(d).empty());

    const auto report = check_all(d);
    CHECK(report.pass);

    const auto Q = abresch_rosenberg(d);
    double worst = 0.0;
    for (int i = 0; i < grid.ns; ++i)
      for (int j = 0; j < grid.nt; ++j)
        worst = std::max(worst, std::abs(Q.coeff.at(i, j) - Complex(1.0, 0.0)));
    CHECK(worst <= 1e-8);
    CHECK(holomorphy_residual(Q).max <= 1e-6);

    // A is real for the s-profile and purely imaginary for the t-profile.
    for (int i = 0; i < grid.ns; i += 40)
      for (int j = 0; j < grid.nt; j += 40) {
        if (delta == 1) CHECK(d.A.at(i, j).imag() == 0.0);
        if (delta == -1) CHECK(d.A.at(i, j).real() == 0.0);
      }

    // Profile coordinate: fields constant along the other axis.
    for (int i = 1; i < grid.ns; ++i)
      for (int j = 1; j < grid.nt; ++j) {
        if (delta == 1) CHECK(d.H.at(i, j) == d.H.at(i, 0));
        if (delta == -1) CHECK(d.H.at(i, j) == d.H.at(0, j));
      }

    // The flip maps solutions to solutions.
    CHECK(check_all(flip_orientation(d)).pass);
  }
}

TEST_CASE("rotational family guards its profile invariants") {
  const ConformalGrid grid(0.0, 0.0, 2e-3, 2e-3, 101, 101);
  Example32Params bad;
  bad.alpha0 = 0.0;
  CHECK_THROWS_AS(gen_example32(bad, grid), std::domain_error);
  bad.alpha0 = 3.2;  // above pi
  CHECK_THROWS_AS(gen_example32(bad, grid), std::domain_error);
  bad = {};
  bad.alphaPrime0 = 0.0;
  CHECK_THROWS_AS(gen_example32(bad, grid), std::domain_error);
  bad = {};
  bad.step = -1.0;
  CHECK_THROWS_AS(gen_example32(bad, grid), std::domain_error);

  // alpha' driven through zero mid-patch: the monotonicity guard reports it.
  Example32Params turning;
  turning.alpha0 = 1.0;
  turning.alphaPrime0 = 0.05;
  CHECK_THROWS_AS(gen_example32(turning, ConformalGrid(0.0, 0.0, 2e-3, 2e-3, 101, 101)),
                  std::domain_error);
}

TEST_CASE("transport family: structure identities hold, curvature defect stays") {
  Example33Params params;  // kappa = -1, tau = -0.3, + branch, H0 = 0.35, tuned slope
  const int n = 104;
  const double step = 1e-4;
  const double half = 0.5 * (n - 1) * step;
  const ConformalGrid grid(-half, -half, step, step, n, n);
  const auto d = gen_example33(params, grid);
  CHECK(validate_fundamental(d).empty());

  // Admissibility and genuinely varying mean curvature.
  double h_min = 1e9, h_max = -1e9;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double h = d.H.at(i, j);
      CHECK(4.0 * h * h + params.kappa < 0.0);
      h_min = std::min(h_min, h);
      h_max = std::max(h_max, h);
    }
  CHECK(h_max - h_min >= 1e-4);

  // Q == 1 by construction.
  const auto Q = abresch_rosenberg(d);
  double worst_q = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      worst_q = std::max(worst_q, std::abs(Q.coeff.at(i, j) - Complex(1.0, 0.0)));
  CHECK(worst_q <= 1e-6);

  // Structure residuals: all six small, the algebraic reality identity tiny.
  const auto structure = non_cmc_structure_residuals(d);
  CHECK(structure.excluded_nodes == 0);
  for (const auto& entry : structure.entries) {
    CAPTURE(entry.name);
    CHECK(entry.norm.max <= 1e-4);
  }
  REQUIRE(structure.find("hz_reality") != nullptr);
  CHECK(structure.find("hz_reality")->norm.max <= 1e-10);

  // The family is overdetermined: the curvature identity keeps an O(1)
  // defect no grid refinement removes, so the full report cannot pass.
  const auto report = check_all(d);
  CHECK_FALSE(report.pass);
  REQUIRE(report.find("Gauss") != nullptr);
  CHECK_FALSE(report.find("Gauss")->pass);
  CHECK(report.find("Gauss")->norm.max > 1e-2);
  REQUIRE(report.find("C4") != nullptr);
  CHECK(report.find("C4")->pass);  // the algebraic constraint is exact
}

TEST_CASE("transport family: tuned seed slope beats a detuned one off the line") {
  Example33Params params;
  const double tuned = example33_tuned_gprime0(params);
  CHECK(tuned > 0.0);

  const int n = 54;
  const double step = 1e-4;
  const double half = 0.5 * (n - 1) * step;
  const ConformalGrid grid(-half, -half, step, step, n, n);

  auto worst_c = [&](double gp0) {
    Example33Params p = params;
    p.gPrime0 = gp0;
    const auto report = check_all(gen_example33(p, grid));
    double w = 0.0;
    for (const char* name : {"C0", "C1", "C2", "C3"}) w = std::max(w, report.find(name)->norm.max);
    return w;
  };
  CHECK(worst_c(tuned) < 0.5 * worst_c(2.0 * tuned));
}

TEST_CASE("transport family rejects inadmissible parameters") {
  const ConformalGrid grid(-2e-3, -2e-3, 1e-4, 1e-4, 41, 41);
  Example33Params bad;
  bad.tau = 0.0;
  CHECK_THROWS_AS(gen_example33(bad, grid), std::domain_error);
  bad = {};
  bad.kappa = 1.0;
  CHECK_THROWS_AS(gen_example33(bad, grid), std::domain_error);
  bad = {};
  bad.H0 = 0.6;  // 4 H0^2 + kappa >= 0
  CHECK_THROWS_AS(gen_example33(bad, grid), std::domain_error);
}

TEST_CASE("cylinder controls: exact residuals and the consistency window of zero Q") {
  const ConformalGrid grid(-0.2, -0.2, 1e-2, 1e-2, 41, 41);
  CHECK_THROWS_AS(gen_cmc_control({-1.0, 0.0}, 0.0, grid), std::domain_error);

  const auto exact = gen_cmc_zero_q({-1.0, -0.3}, 0.5, grid);  // 4 c^2 = -kappa
  CHECK(check_all(exact).pass);
  CHECK(residual_norm(residual_C3(exact)).max < 1e-14);

  // Away from 4 c^2 = -kappa the zero-Q choice breaks exactly one equation,
  // by the predictable constant (c - i tau)/2 + (kappa - 4 tau^2)/(8 (c + i tau)).
  const double c = 0.3, tau = -0.3, kappa = -1.0;
  const auto off = gen_cmc_zero_q({kappa, tau}, c, grid);
  const double k4 = kappa - 4.0 * tau * tau;
  const Complex predicted = 0.5 * Complex(c, -tau) + k4 / (8.0 * Complex(c, tau));
  CHECK(residual_norm(residual_C3(off)).max == doctest::Approx(std::abs(predicted)).epsilon(1e-10));
  CHECK(residual_norm(residual_C0(off)).max < 1e-14);
}
