#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "homsurf/calculus.hpp"

using namespace homsurf;

namespace {

ComplexField sample(const ConformalGrid& g, const std::function<Complex(Complex)>& f) {
  ComplexField out(g);
  for (int i = 0; i < g.ns; ++i)
    for (int j = 0; j < g.nt; ++j) out.at(i, j) = f(g.z_at(i, j));
  return out;
}

double max_interior_err(const ComplexField& got, const std::function<Complex(Complex)>& want) {
  const int ring = got.excluded_rings();
  double err = 0.0;
  for (int i = ring; i < got.grid.ns - ring; ++i)
    for (int j = ring; j < got.grid.nt - ring; ++j)
      err = std::max(err, std::abs(got.at(i, j) - want(got.grid.z_at(i, j))));
  return err;
}

}  // namespace

TEST_CASE("derivatives of constants and affine functions are exact") {
  const ConformalGrid g(-0.5, -0.5, 1e-2, 1e-2, 101, 101);
  const auto c = sample(g, [](Complex) { return Complex(2.0, -3.0); });
  CHECK(residual_norm(d_z(c)).max == 0.0);
  CHECK(residual_norm(d_zbar(c)).max == 0.0);

  const auto z = sample(g, [](Complex z) { return z; });
  CHECK(max_interior_err(d_z(z), [](Complex) { return Complex(1.0); }) < 1e-14);
  CHECK(max_interior_err(d_zbar(z), [](Complex) { return Complex(0.0); }) < 1e-14);

  const auto zb = sample(g, [](Complex z) { return std::conj(z); });
  CHECK(max_interior_err(d_zbar(zb), [](Complex) { return Complex(1.0); }) < 1e-14);
  CHECK(max_interior_err(d_z(zb), [](Complex) { return Complex(0.0); }) < 1e-14);
}

TEST_CASE("quadratics differentiate to closed form within roundoff") {
  const ConformalGrid g(-0.5, -0.5, 1e-2, 1e-2, 101, 101);
  const auto z2 = sample(g, [](Complex z) { return z * z; });
  CHECK(max_interior_err(d_z(z2), [](Complex z) { return 2.0 * z; }) <= 1e-12);

  const auto mod2 = sample(g, [](Complex z) { return z * std::conj(z); });
  CHECK(max_interior_err(d_zbar(mod2), [](Complex z) { return z; }) <= 1e-12);
  CHECK(max_interior_err(d_z(mod2), [](Complex z) { return std::conj(z); }) <= 1e-12);
}

TEST_CASE("d_zbar annihilates holomorphic quadratics and meets the cubic truncation law") {
  const ConformalGrid g(0.0, 0.0, 1e-2, 1e-2, 101, 101);
  const auto q = sample(g, [](Complex z) { return (3.0 - Complex(0, 2)) * z * z - 2.0 * z; });
  CHECK(residual_norm(d_zbar(q)).max <= 1e-12);

  // The 3-point stencil leaves (ds^2 + dt^2) f''' / 12 on holomorphic f;
  // for a cubic that is a sharp constant across the grid.
  const auto c = sample(g, [](Complex z) { return z * z * z - 2.0 * z + Complex(0, 1); });
  const double predicted = (g.ds * g.ds + g.dt * g.dt) * 6.0 / 12.0;
  CHECK(residual_norm(d_zbar(c)).max == doctest::Approx(predicted).epsilon(1e-6));
}

TEST_CASE("linearity holds to roundoff") {
  const ConformalGrid g(-0.3, 0.1, 2e-2, 1e-2, 21, 21);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  ComplexField f(g), h(g);
  for (int i = 0; i < g.ns; ++i)
    for (int j = 0; j < g.nt; ++j) {
      f.at(i, j) = Complex(unit(rng), unit(rng));
      h.at(i, j) = Complex(unit(rng), unit(rng));
    }
  const Complex a(0.7, -0.2), b(-1.3, 0.4);
  ComplexField combo(g);
  combo.values = a * f.values + b * h.values;
  const auto lhs = d_z(combo);
  const auto dfa = d_z(f), dhb = d_z(h);
  // Scaling before or after the stencil rounds differently; the gap is
  // bounded by a few ulps divided by the cell size.
  const int ring = lhs.excluded_rings();
  for (int i = ring; i < g.ns - ring; ++i)
    for (int j = ring; j < g.nt - ring; ++j)
      CHECK(std::abs(lhs.at(i, j) - (a * dfa.at(i, j) + b * dhb.at(i, j))) < 1e-13);
}

TEST_CASE("conjugation identity d_zbar(f) == conj(d_z(conj f))") {
  const ConformalGrid g(-0.3, 0.1, 2e-2, 1e-2, 21, 21);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  ComplexField f(g);
  for (int i = 0; i < g.ns; ++i)
    for (int j = 0; j < g.nt; ++j) f.at(i, j) = Complex(unit(rng), unit(rng));
  ComplexField fc(g);
  fc.values = f.values.conjugate();
  const auto lhs = d_zbar(f);
  const auto rhs = d_z(fc);
  const int ring = lhs.excluded_rings();
  for (int i = ring; i < g.ns - ring; ++i)
    for (int j = ring; j < g.nt - ring; ++j)
      CHECK(std::abs(lhs.at(i, j) - std::conj(rhs.at(i, j))) == 0.0);
}

TEST_CASE("convergence on exp(z): order 2, order 4 on square cells") {
  // The truncation of d_z on a holomorphic sample is (ds^2 - dt^2) f''' / 12,
  // so square cells cancel it and jump to fourth order.
  auto err_at = [](double ds, double dt) {
    const int ns = static_cast<int>(std::lround(1.0 / ds)) + 1;
    const int nt = static_cast<int>(std::lround(1.0 / dt)) + 1;
    const ConformalGrid g(0.0, 0.0, ds, dt, ns, nt);
    const auto f = sample(g, [](Complex z) { return std::exp(z); });
    return max_interior_err(d_z(f), [](Complex z) { return std::exp(z); });
  };
  const double rect = err_at(2e-2, 1e-2) / err_at(1e-2, 5e-3);
  CHECK(rect > 3.5);
  CHECK(rect < 4.5);
  const double square = err_at(2e-2, 2e-2) / err_at(1e-2, 1e-2);
  CHECK(square > 12.0);
  CHECK(square < 20.0);
}

TEST_CASE("residual_norm matches the worked examples") {
  const ConformalGrid g5(0.0, 0.0, 1e-2, 1e-2, 5, 5);
  ComplexField zero(g5);
  const Norm nz = residual_norm(zero);
  CHECK(nz.max == 0.0);
  CHECK(nz.l2 == 0.0);

  ComplexField spike(g5);
  spike.at(2, 2) = Complex(0.0, 3.0);
  const Norm ns = residual_norm(spike);
  CHECK(ns.max == doctest::Approx(3.0));
  CHECK(ns.l2 == doctest::Approx(1.0));  // one node of modulus 3 among 9 interior

  ComplexField ic(g5);
  ic.values.setConstant(Complex(0.0, 1.0));
  const Norm nc = residual_norm(ic);
  CHECK(nc.max == doctest::Approx(1.0));
  CHECK(nc.l2 == doctest::Approx(1.0));
}

TEST_CASE("border bookkeeping: stacked derivatives widen the excluded ring") {
  const ConformalGrid g(0.0, 0.0, 1e-2, 1e-2, 9, 9);
  const auto f = sample(g, [](Complex z) { return z * z * std::conj(z); });
  const auto d1 = d_z(f);
  CHECK(d1.border == 1);
  const auto d2 = d_zbar(d1);
  CHECK(d2.border == 2);
  // The fresh ring is NaN and the norms skip it.
  CHECK(std::isnan(d2.at(1, 1).real()));
  CHECK(std::isfinite(residual_norm(d2).max));
  // (z^2 zbar)_{z zbar} = 2z, with O(h^2) truncation from the cubic terms.
  const int ring = d2.excluded_rings();
  for (int i = ring; i < g.ns - ring; ++i)
    for (int j = ring; j < g.nt - ring; ++j)
      CHECK(std::abs(d2.at(i, j) - 2.0 * g.z_at(i, j)) < 5e-4);
}

TEST_CASE("axis derivatives agree with the Wirtinger combinations") {
  const ConformalGrid g(-0.2, 0.3, 1e-2, 2e-2, 15, 15);
  const auto f = sample(g, [](Complex z) { return std::sin(z) + std::conj(z) * z; });
  const auto fs = d_s(f), ft = d_t(f), fz = d_z(f), fzb = d_zbar(f);
  const int ring = fz.excluded_rings();
  for (int i = ring; i < g.ns - ring; ++i)
    for (int j = ring; j < g.nt - ring; ++j) {
      const Complex combo_z = 0.5 * (fs.at(i, j) - Complex(0, 1) * ft.at(i, j));
      const Complex combo_zb = 0.5 * (fs.at(i, j) + Complex(0, 1) * ft.at(i, j));
      CHECK(std::abs(fz.at(i, j) - combo_z) < 1e-15);
      CHECK(std::abs(fzb.at(i, j) - combo_zb) < 1e-15);
    }
}

TEST_CASE("too-small grids are rejected") {
  CHECK_THROWS_AS(ConformalGrid(0, 0, 1e-2, 1e-2, 4, 10), std::invalid_argument);
  CHECK_THROWS_AS(ConformalGrid(0, 0, -1e-2, 1e-2, 10, 10), std::invalid_argument);
}
