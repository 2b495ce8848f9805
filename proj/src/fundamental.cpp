#include "homsurf/fundamental.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace homsurf {

namespace {

// Residual fields carry a border ring without trustworthy data; NaN there
// keeps accidental reads loud.
template <typename T>
ScalarField<T> nan_bordered(const ConformalGrid& g, int border) {
  ScalarField<T> f(g, border);
  f.values.setConstant(std::numeric_limits<double>::quiet_NaN());
  return f;
}

}  // namespace

FundamentalField make_fundamental_field(const SpaceParams& space, const ConformalGrid& grid) {
  FundamentalField d;
  d.space = space;
  d.grid = grid;
  d.lambda = RealField(grid);
  d.u = RealField(grid);
  d.H = RealField(grid);
  d.p = ComplexField(grid);
  d.A = ComplexField(grid);
  d.lambda.values.setOnes();
  return d;
}

std::vector<std::string> validate_fundamental(const FundamentalField& data, double tol_alg) {
  std::vector<std::string> out;
  const auto& g = data.grid;
  auto complain = [&out](int i, int j, const std::string& what) {
    if (out.size() >= 8) return;  // a handful of nodes is enough to diagnose
    std::ostringstream os;
    os << what << " at node (" << i << ", " << j << ")";
    out.push_back(os.str());
  };

  for (int i = 0; i < g.ns; ++i)
    for (int j = 0; j < g.nt; ++j) {
      const double lam = data.lambda.at(i, j);
      const double uu = data.u.at(i, j);
      const double hh = data.H.at(i, j);
      const Complex pp = data.p.at(i, j), aa = data.A.at(i, j);
      if (!std::isfinite(lam) || !std::isfinite(uu) || !std::isfinite(hh) ||
          !std::isfinite(pp.real()) || !std::isfinite(pp.imag()) || !std::isfinite(aa.real()) ||
          !std::isfinite(aa.imag())) {
        complain(i, j, "non-finite field value");
        continue;
      }
      if (!(lam > 0.0)) complain(i, j, "lambda not positive");
      if (std::abs(uu) > 1.0 + 1e-12) complain(i, j, "|u| exceeds 1");
      if (lam > 0.0) {
        const double c4 = 4.0 * std::norm(aa) / lam - (1.0 - uu * uu);
        if (std::abs(c4) > tol_alg) complain(i, j, "algebraic constraint 4|A|^2/lambda = 1-u^2 violated");
      }
      if (data.space.tau == 0.0 && std::abs(hh) < 1e-9)
        complain(i, j, "H below 1e-9 with tau = 0 (minimal points excluded)");
    }
  return out;
}

FundamentalField flip_orientation(const FundamentalField& data) {
  FundamentalField out = data;
  const auto& g = data.grid;
  out.grid.t0 = -(g.t0 + (g.nt - 1) * g.dt);
  for (int i = 0; i < g.ns; ++i)
    for (int j = 0; j < g.nt; ++j) {
      const int jr = g.nt - 1 - j;
      out.lambda.at(i, j) = data.lambda.at(i, jr);
      out.u.at(i, j) = -data.u.at(i, jr);
      out.H.at(i, j) = -data.H.at(i, jr);
      out.p.at(i, j) = -std::conj(data.p.at(i, jr));
      out.A.at(i, j) = std::conj(data.A.at(i, jr));
    }
  return out;
}

namespace {

RealField log_field(const RealField& f) {
  RealField out(f.grid, f.border);
  out.values = f.values.log();
  return out;
}

}  // namespace

ComplexField residual_C1(const FundamentalField& d) {
  const double k4 = d.space.kappa - 4.0 * d.space.tau * d.space.tau;
  ComplexField p_zb = d_zbar(d.p);
  ComplexField Hz = d_z(d.H);
  ComplexField out = nan_bordered<Complex>(d.grid, 1);
  for (int i = 1; i < d.grid.ns - 1; ++i)
    for (int j = 1; j < d.grid.nt - 1; ++j)
      out.at(i, j) = p_zb.at(i, j) -
                     0.5 * d.lambda.at(i, j) * (Hz.at(i, j) + d.u.at(i, j) * d.A.at(i, j) * k4);
  return out;
}

ComplexField residual_C2(const FundamentalField& d) {
  const Complex itau(0.0, d.space.tau);
  ComplexField A_zb = d_zbar(d.A);
  ComplexField out = nan_bordered<Complex>(d.grid, 1);
  for (int i = 1; i < d.grid.ns - 1; ++i)
    for (int j = 1; j < d.grid.nt - 1; ++j)
      out.at(i, j) = A_zb.at(i, j) - 0.5 * d.u.at(i, j) * d.lambda.at(i, j) *
                                       (Complex(d.H.at(i, j)) + itau);
  return out;
}

ComplexField residual_C3(const FundamentalField& d) {
  const Complex itau(0.0, d.space.tau);
  ComplexField uz = d_z(d.u);
  ComplexField out = nan_bordered<Complex>(d.grid, 1);
  for (int i = 1; i < d.grid.ns - 1; ++i)
    for (int j = 1; j < d.grid.nt - 1; ++j)
      out.at(i, j) = uz.at(i, j) + (Complex(d.H.at(i, j)) - itau) * d.A.at(i, j) +
                     2.0 * d.p.at(i, j) * std::conj(d.A.at(i, j)) / d.lambda.at(i, j);
  return out;
}

RealField residual_C4(const FundamentalField& d) {
  RealField out(d.grid, 0);
  for (int i = 0; i < d.grid.ns; ++i)
    for (int j = 0; j < d.grid.nt; ++j)
      out.at(i, j) =
          4.0 * std::norm(d.A.at(i, j)) / d.lambda.at(i, j) -
          (1.0 - d.u.at(i, j) * d.u.at(i, j));
  return out;
}

ComplexField residual_C0(const FundamentalField& d) {
  ComplexField Az = d_z(d.A);
  ComplexField loglam_z = d_z(log_field(d.lambda));
  ComplexField out = nan_bordered<Complex>(d.grid, 1);
  for (int i = 1; i < d.grid.ns - 1; ++i)
    for (int j = 1; j < d.grid.nt - 1; ++j)
      out.at(i, j) = Az.at(i, j) - loglam_z.at(i, j) * d.A.at(i, j) -
                     d.u.at(i, j) * d.p.at(i, j);
  return out;
}

ComplexField gauss_residual(const FundamentalField& d) {
  const double k4 = d.space.kappa - 4.0 * d.space.tau * d.space.tau;
  const double tau2 = d.space.tau * d.space.tau;
  ComplexField lzz = d_zbar(d_z(log_field(d.lambda)));
  ComplexField out = nan_bordered<Complex>(d.grid, 2);
  for (int i = 2; i < d.grid.ns - 2; ++i)
    for (int j = 2; j < d.grid.nt - 2; ++j) {
      const double lam = d.lambda.at(i, j);
      const double uu = d.u.at(i, j), hh = d.H.at(i, j);
      out.at(i, j) = lzz.at(i, j) - 2.0 * std::norm(d.p.at(i, j)) / lam +
                     0.5 * lam * uu * uu * k4 + 0.5 * lam * (hh * hh + tau2);
    }
  return out;
}

DerivedQuantities derived_quantities(const FundamentalField& d) {
  DerivedQuantities q;
  ComplexField lzz = d_zbar(d_z(log_field(d.lambda)));
  q.K = RealField(d.grid, 2);
  q.K.values.setConstant(std::numeric_limits<double>::quiet_NaN());
  // Mixed central differences commute exactly, so Im(lzz) is pure roundoff.
  for (int i = 2; i < d.grid.ns - 2; ++i)
    for (int j = 2; j < d.grid.nt - 2; ++j)
      q.K.at(i, j) = -2.0 * lzz.at(i, j).real() / d.lambda.at(i, j);

  q.T_coeff = ComplexField(d.grid, 0);
  q.detS = RealField(d.grid, 0);
  for (int i = 0; i < d.grid.ns; ++i)
    for (int j = 0; j < d.grid.nt; ++j) {
      const double lam = d.lambda.at(i, j);
      q.T_coeff.at(i, j) = 2.0 * std::conj(d.A.at(i, j)) / lam;
      const double hh = d.H.at(i, j);
      q.detS.at(i, j) = hh * hh - 4.0 * std::norm(d.p.at(i, j)) / (lam * lam);
    }
  return q;
}

double field_magnitude_scale(const FundamentalField& d) {
  double M = 1.0;
  M = std::max(M, d.lambda.values.abs().maxCoeff());
  M = std::max(M, d.u.values.abs().maxCoeff());
  M = std::max(M, d.H.values.abs().maxCoeff());
  M = std::max(M, d.p.values.abs().maxCoeff());
  M = std::max(M, d.A.values.abs().maxCoeff());
  return M;
}

const ResidualEntry* ResidualReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

ResidualReport check_all(const FundamentalField& data, const ToleranceProfile& tol) {
  ResidualReport rep;
  rep.h = data.grid.h();
  rep.M = field_magnitude_scale(data);
  const double tol1 = tol.first_order(rep.h, rep.M);
  const double tol2 = tol.second_order(rep.h, rep.M);

  auto push = [&rep](const std::string& name, const Norm& n, double t) {
    rep.entries.push_back({name, n, t, n.max <= t});
  };
  push("C0", residual_norm(residual_C0(data)), tol1);
  push("C1", residual_norm(residual_C1(data)), tol1);
  push("C2", residual_norm(residual_C2(data)), tol1);
  push("C3", residual_norm(residual_C3(data)), tol1);
  push("C4", residual_norm(residual_C4(data)), tol.algebraic);
  push("Gauss", residual_norm(gauss_residual(data)), tol2);

  rep.pass = true;
  for (const auto& e : rep.entries) rep.pass = rep.pass && e.pass;
  return rep;
}

}  // namespace homsurf
