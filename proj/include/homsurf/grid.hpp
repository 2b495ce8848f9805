#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace homsurf {

using Complex = std::complex<double>;

/// Uniform rectangular grid in the conformal coordinate z = s + i t.
/// Node (i, j) sits at s = s0 + i*ds, t = t0 + j*dt.
struct ConformalGrid {
  double s0 = 0.0;
  double t0 = 0.0;
  double ds = 1e-2;
  double dt = 1e-2;
  int ns = 5;
  int nt = 5;

  ConformalGrid() = default;
  ConformalGrid(double s0_, double t0_, double ds_, double dt_, int ns_, int nt_)
      : s0(s0_), t0(t0_), ds(ds_), dt(dt_), ns(ns_), nt(nt_) {
    if (!(ds > 0.0) || !(dt > 0.0))
      throw std::invalid_argument("ConformalGrid: steps must be positive");
    if (ns < 5 || nt < 5)
      throw std::invalid_argument("ConformalGrid: need at least 5 nodes per side");
  }

  double s_at(int i) const { return s0 + i * ds; }
  double t_at(int j) const { return t0 + j * dt; }
  Complex z_at(int i, int j) const { return {s_at(i), t_at(j)}; }
  // Largest step, the h of truncation-error estimates.
  double h() const { return ds > dt ? ds : dt; }

  bool same_layout(const ConformalGrid& o) const {
    return s0 == o.s0 && t0 == o.t0 && ds == o.ds && dt == o.dt && ns == o.ns && nt == o.nt;
  }
};

/// Grid-aligned field of real or complex samples. `border` counts boundary
/// rings that hold no trustworthy data (each central-difference pass grows
/// it by one); norms and comparisons skip those rings.
template <typename T>
struct ScalarField {
  ConformalGrid grid;
  Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic> values;  // (ns x nt), row i = s index
  int border = 0;

  ScalarField() = default;
  explicit ScalarField(const ConformalGrid& g, int border_ = 0)
      : grid(g), values(g.ns, g.nt), border(border_) {
    values.setZero();
  }

  T& at(int i, int j) { return values(i, j); }
  const T& at(int i, int j) const { return values(i, j); }

  // Rings excluded from norms: at least one (central differences never
  // certify the outermost ring), more if the field was built by stacked
  // derivative passes.
  int excluded_rings() const { return border > 1 ? border : 1; }
};

using RealField = ScalarField<double>;
using ComplexField = ScalarField<Complex>;

struct Norm {
  double max = 0.0;
  double l2 = 0.0;  // root mean square over the counted nodes
};

}  // namespace homsurf
