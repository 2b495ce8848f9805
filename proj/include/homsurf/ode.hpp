#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace homsurf {

template <int N>
using OdeState = Eigen::Matrix<double, N, 1>;

template <int N, class Rhs>
OdeState<N> rk4_step(const Rhs& f, double x, const OdeState<N>& y, double h) {
  const OdeState<N> k1 = f(x, y);
  const OdeState<N> k2 = f(x + 0.5 * h, OdeState<N>(y + 0.5 * h * k1));
  const OdeState<N> k3 = f(x + 0.5 * h, OdeState<N>(y + 0.5 * h * k2));
  const OdeState<N> k4 = f(x + h, OdeState<N>(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Uniformly sampled trajectory, ascending in x, with the right-hand side
/// stored at each sample for cubic Hermite dense output.
template <int N>
struct Trajectory {
  std::vector<double> x;
  std::vector<OdeState<N>> y;
  std::vector<OdeState<N>> dy;

  double x_min() const { return x.front(); }
  double x_max() const { return x.back(); }

  OdeState<N> eval(double xq) const {
    if (x.size() == 1) return y.front();
    const double h = x[1] - x[0];
    int k = static_cast<int>(std::floor((xq - x.front()) / h));
    if (k < 0) k = 0;
    if (k > static_cast<int>(x.size()) - 2) k = static_cast<int>(x.size()) - 2;
    const double xi = (xq - x[k]) / h;
    const double xi2 = xi * xi, xi3 = xi2 * xi;
    const OdeState<N> m0 = h * dy[k], m1 = h * dy[k + 1];
    return (2.0 * xi3 - 3.0 * xi2 + 1.0) * y[k] + (xi3 - 2.0 * xi2 + xi) * m0 +
           (-2.0 * xi3 + 3.0 * xi2) * y[k + 1] + (xi3 - xi2) * m1;
  }
};

/// Classical fixed-step RK4 over exactly n steps from xa to xb (either
/// direction); samples are stored in ascending x order regardless.
template <int N, class Rhs>
Trajectory<N> rk4_integrate_n(const Rhs& f, OdeState<N> y0, double xa, double xb, int n) {
  if (n < 0) throw std::invalid_argument("rk4_integrate_n: negative step count");
  Trajectory<N> tr;
  tr.x.resize(n + 1);
  tr.y.resize(n + 1);
  tr.dy.resize(n + 1);
  const double h = n > 0 ? (xb - xa) / n : 0.0;
  const bool forward = xb >= xa;
  double x = xa;
  OdeState<N> y = y0;
  for (int i = 0; i <= n; ++i) {
    const int slot = forward ? i : n - i;
    tr.x[slot] = x;
    tr.y[slot] = y;
    tr.dy[slot] = f(x, y);
    if (!tr.y[slot].allFinite() || !tr.dy[slot].allFinite())
      throw std::runtime_error("rk4_integrate: non-finite state at x = " + std::to_string(x));
    if (i < n) {
      y = rk4_step(f, x, y, h);
      x = xa + (i + 1) * h;
    }
  }
  return tr;
}

/// Step-targeted variant: the actual step is |xb-xa|/ceil(|xb-xa|/step), the
/// largest node-aligned step not exceeding the request.
template <int N, class Rhs>
Trajectory<N> rk4_integrate(const Rhs& f, const OdeState<N>& y0, double xa, double xb,
                            double step) {
  if (!(step > 0.0)) throw std::invalid_argument("rk4_integrate: step must be positive");
  const double span = std::abs(xb - xa);
  const int n = span == 0.0 ? 0 : static_cast<int>(std::ceil(span / step - 1e-12));
  return rk4_integrate_n(f, y0, xa, xb, n < 1 ? (span > 0.0 ? 1 : 0) : n);
}

/// Joins two trajectories that share their meeting sample (typically the two
/// directions out of one seed point).
template <int N>
Trajectory<N> merge_trajectories(const Trajectory<N>& left, const Trajectory<N>& right) {
  if (left.x.empty() || right.x.empty())
    throw std::invalid_argument("merge_trajectories: empty input");
  if (std::abs(left.x.back() - right.x.front()) > 1e-12)
    throw std::invalid_argument("merge_trajectories: tables do not meet");
  Trajectory<N> tr = left;
  tr.x.insert(tr.x.end(), right.x.begin() + 1, right.x.end());
  tr.y.insert(tr.y.end(), right.y.begin() + 1, right.y.end());
  tr.dy.insert(tr.dy.end(), right.dy.begin() + 1, right.dy.end());
  return tr;
}

}  // namespace homsurf
