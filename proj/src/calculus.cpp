#include "homsurf/calculus.hpp"

#include <cmath>
#include <limits>

namespace homsurf {

namespace {

template <typename T>
T quiet_nan();
template <>
double quiet_nan<double>() {
  return std::numeric_limits<double>::quiet_NaN();
}
template <>
Complex quiet_nan<Complex>() {
  const double n = std::numeric_limits<double>::quiet_NaN();
  return {n, n};
}

// sign = -1 gives d_z, sign = +1 gives d_zbar.
template <typename T>
ComplexField wirtinger(const ScalarField<T>& f, double sign) {
  if (f.grid.ns < 3 || f.grid.nt < 3)
    throw std::invalid_argument("wirtinger derivative: grid too small");
  ComplexField out(f.grid, f.border + 1);
  out.values.setConstant(quiet_nan<Complex>());
  const double inv2ds = 1.0 / (2.0 * f.grid.ds);
  const double inv2dt = 1.0 / (2.0 * f.grid.dt);
  for (int i = 1; i < f.grid.ns - 1; ++i)
    for (int j = 1; j < f.grid.nt - 1; ++j) {
      const Complex fs = Complex(f.values(i + 1, j)) - Complex(f.values(i - 1, j));
      const Complex ft = Complex(f.values(i, j + 1)) - Complex(f.values(i, j - 1));
      out.values(i, j) = 0.5 * (fs * inv2ds + sign * Complex(0.0, 1.0) * ft * inv2dt);
    }
  return out;
}

template <typename T>
ScalarField<T> axis_diff(const ScalarField<T>& f, bool along_s) {
  if (f.grid.ns < 3 || f.grid.nt < 3)
    throw std::invalid_argument("axis derivative: grid too small");
  ScalarField<T> out(f.grid, f.border + 1);
  out.values.setConstant(quiet_nan<T>());
  const double inv2h = 1.0 / (2.0 * (along_s ? f.grid.ds : f.grid.dt));
  for (int i = 1; i < f.grid.ns - 1; ++i)
    for (int j = 1; j < f.grid.nt - 1; ++j)
      out.values(i, j) = along_s ? (f.values(i + 1, j) - f.values(i - 1, j)) * inv2h
                                 : (f.values(i, j + 1) - f.values(i, j - 1)) * inv2h;
  return out;
}

template <typename T>
Norm norm_impl(const ScalarField<T>& f) {
  const int ring = f.excluded_rings();
  double mx = 0.0, sum = 0.0;
  long count = 0;
  for (int i = ring; i < f.grid.ns - ring; ++i)
    for (int j = ring; j < f.grid.nt - ring; ++j) {
      const double a = std::abs(f.values(i, j));
      if (std::isnan(a)) continue;
      if (a > mx) mx = a;
      sum += a * a;
      ++count;
    }
  Norm n;
  n.max = mx;
  n.l2 = count > 0 ? std::sqrt(sum / double(count)) : 0.0;
  return n;
}

}  // namespace

ComplexField d_z(const RealField& f) { return wirtinger(f, -1.0); }
ComplexField d_z(const ComplexField& f) { return wirtinger(f, -1.0); }
ComplexField d_zbar(const RealField& f) { return wirtinger(f, +1.0); }
ComplexField d_zbar(const ComplexField& f) { return wirtinger(f, +1.0); }

ComplexField d_s(const ComplexField& f) { return axis_diff(f, true); }
ComplexField d_t(const ComplexField& f) { return axis_diff(f, false); }
RealField d_s(const RealField& f) { return axis_diff(f, true); }
RealField d_t(const RealField& f) { return axis_diff(f, false); }

Norm residual_norm(const RealField& f) { return norm_impl(f); }
Norm residual_norm(const ComplexField& f) { return norm_impl(f); }

}  // namespace homsurf
