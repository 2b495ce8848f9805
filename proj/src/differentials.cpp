#include "homsurf/differentials.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace homsurf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Complex w_of(const FundamentalField& d, int i, int j) {
  return {d.H.at(i, j), d.space.tau};
}

[[noreturn]] void guard_trip(const char* op, int i, int j) {
  std::ostringstream os;
  os << op << ": |H + i tau| below " << kDivisionGuard << " at node (" << i << ", " << j
     << "); tau = 0 data must keep H away from 0";
  throw std::domain_error(os.str());
}

}  // namespace

QuadraticDifferential abresch_rosenberg(const FundamentalField& data) {
  const double k4 = data.space.kappa - 4.0 * data.space.tau * data.space.tau;
  QuadraticDifferential qd;
  qd.kind = DifferentialKind::AR_Q;
  qd.coeff = ComplexField(data.grid, 0);
  for (int i = 0; i < data.grid.ns; ++i)
    for (int j = 0; j < data.grid.nt; ++j) {
      const Complex w = w_of(data, i, j);
      if (std::abs(w) < kDivisionGuard) guard_trip("abresch_rosenberg", i, j);
      const Complex a = data.A.at(i, j);
      qd.coeff.at(i, j) = 2.0 * data.p.at(i, j) - k4 * a * a / w;
    }
  return qd;
}

QuadraticDifferential p_differential(const FundamentalField& data) {
  QuadraticDifferential qd;
  qd.kind = DifferentialKind::Hopf;
  qd.coeff = data.p;
  return qd;
}

QuadraticDifferential ar_P(const FundamentalField& data) {
  const double k4 = data.space.kappa - 4.0 * data.space.tau * data.space.tau;
  QuadraticDifferential qd;
  qd.kind = DifferentialKind::AR_P;
  qd.coeff = ComplexField(data.grid, 0);
  for (int i = 0; i < data.grid.ns; ++i)
    for (int j = 0; j < data.grid.nt; ++j) {
      const Complex a = data.A.at(i, j);
      qd.coeff.at(i, j) = 2.0 * data.p.at(i, j) * w_of(data, i, j) - k4 * a * a;
    }
  return qd;
}

Norm holomorphy_residual(const QuadraticDifferential& qd) {
  return residual_norm(d_zbar(qd.coeff));
}

ComplexField codazzi_Q_residual(const FundamentalField& data) {
  const double k4 = data.space.kappa - 4.0 * data.space.tau * data.space.tau;
  ComplexField Qzb = d_zbar(abresch_rosenberg(data).coeff);
  ComplexField Hz = d_z(data.H);
  ComplexField out(data.grid, 1);
  out.values.setConstant(Complex(kNaN, kNaN));
  for (int i = 1; i < data.grid.ns - 1; ++i)
    for (int j = 1; j < data.grid.nt - 1; ++j) {
      const Complex w = w_of(data, i, j);
      const Complex a = data.A.at(i, j);
      out.at(i, j) = Qzb.at(i, j) - data.lambda.at(i, j) * Hz.at(i, j) -
                     k4 * std::conj(Hz.at(i, j)) * a * a / (w * w);
    }
  return out;
}

ZeroQCmcAudit zero_Q_cmc_audit(const FundamentalField& data, double tol,
                               const ToleranceProfile& profile) {
  ZeroQCmcAudit audit;
  audit.residuals = check_all(data, profile);

  QuadraticDifferential q = abresch_rosenberg(data);
  audit.max_abs_Q = q.coeff.values.abs().maxCoeff();

  const double mean_H = data.H.values.mean();
  audit.h_spread = (data.H.values - mean_H).abs().maxCoeff();

  const auto& g = data.grid;
  const double diameter = std::hypot((g.ns - 1) * g.ds, (g.nt - 1) * g.dt);
  const double lam_min = data.lambda.values.minCoeff();
  audit.spread_bound = 10.0 * tol * diameter / (g.h() * std::max(lam_min, 1e-12));

  if (audit.max_abs_Q > tol)
    audit.status = ZeroQCmcAudit::Status::QNotSmall;
  else if (audit.h_spread <= audit.spread_bound)
    audit.status = ZeroQCmcAudit::Status::Pass;
  else
    audit.status = ZeroQCmcAudit::Status::Fail;
  return audit;
}

const char* feasibility_tag_name(FeasibilityTag tag) {
  switch (tag) {
    case FeasibilityTag::CMCOnly: return "CMCOnly";
    case FeasibilityTag::NonCMCExists: return "NonCMCExists";
    case FeasibilityTag::Unknown: return "Unknown";
  }
  return "Unknown";
}

FeasibilityVerdict feasibility_audit(const SpaceParams& space) {
  const double kappa = space.kappa;
  const double k4 = kappa - 4.0 * space.tau * space.tau;
  const double k8 = kappa - 8.0 * space.tau * space.tau;
  FeasibilityVerdict v;
  if (k4 < 0.0 && kappa >= 0.0) {
    v.tag = FeasibilityTag::CMCOnly;
    v.citation =
        "4(H^2+tau^2) <= 4tau^2-kappa forces 4H^2 <= -kappa <= 0, so H must be constant";
  } else if (k4 > 0.0 && k8 <= 0.0) {
    v.tag = FeasibilityTag::CMCOnly;
    v.citation =
        "4(H^2+tau^2) <= kappa-4tau^2 forces 4H^2 <= kappa-8tau^2 <= 0, so H must be constant";
  } else if (k4 < 0.0) {
    v.tag = FeasibilityTag::NonCMCExists;
    const double bound = 0.5 * std::sqrt(-kappa);
    v.allowed_H_interval = {{-bound, bound}};
    v.citation =
        "kappa < 0 leaves the band 4H^2 + kappa <= 0, i.e. |H| <= sqrt(-kappa)/2; "
        "nonconstant examples realize it";
  } else {
    v.tag = FeasibilityTag::Unknown;
    const double bound = 0.5 * std::sqrt(k8);
    v.allowed_H_interval = {{-bound, bound}};
    v.citation =
        "kappa - 8tau^2 > 0 leaves the band 4H^2 <= kappa-8tau^2 open; existence is undecided";
  }
  return v;
}

const NamedResidual* StructureResiduals::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

StructureResiduals non_cmc_structure_residuals(const FundamentalField& data) {
  const double kappa = data.space.kappa;
  const double tau = data.space.tau;
  const double k4 = kappa - 4.0 * tau * tau;
  if (!(k4 < 0.0))
    throw std::invalid_argument(
        "non_cmc_structure_residuals: requires kappa - 4 tau^2 < 0");

  const auto& g = data.grid;
  ComplexField Hz_fd = d_z(data.H);

  auto nan_complex = [&g](int border) {
    ComplexField f(g, border);
    f.values.setConstant(Complex(kNaN, kNaN));
    return f;
  };
  auto nan_real = [&g](int border) {
    RealField f(g, border);
    f.values.setConstant(kNaN);
    return f;
  };

  ComplexField r_main1 = nan_complex(0);
  RealField r_main4 = nan_real(0);
  RealField r_main5 = nan_real(0);
  ComplexField r_main7 = nan_complex(1);
  RealField r_main8 = nan_real(0);
  ComplexField r_main9 = nan_complex(2);

  StructureResiduals out;

  for (int i = 0; i < g.ns; ++i)
    for (int j = 0; j < g.nt; ++j) {
      const double hh = data.H.at(i, j);
      const double uu = data.u.at(i, j);
      const Complex aa = data.A.at(i, j);
      const Complex w(hh, tau);
      const double W = hh * hh + tau * tau;

      if (std::abs(w) < kDivisionGuard || std::abs(aa) < 1e-12) {
        ++out.excluded_nodes;
        continue;
      }

      r_main1.at(i, j) = 2.0 * data.p.at(i, j) - 1.0 - k4 * aa * aa / w;
      r_main4.at(i, j) = (1.0 - uu * uu) - 4.0 * W / std::abs(k4);

      const double radicand = (4.0 * hh * hh + kappa) / k4;
      if (radicand >= 0.0)
        r_main5.at(i, j) = uu - std::sqrt(radicand);
      else
        ++out.excluded_nodes;

      // The data hold the derivative of H in A; reading it back keeps the
      // reality identity free of FD truncation.
      const Complex Hz_alg = uu * W / (4.0 * hh * aa);
      const double Hs = 2.0 * Hz_alg.real();
      const double Ht = -2.0 * Hz_alg.imag();
      r_main8.at(i, j) = tau * (Hs * Hs - Ht * Ht) - 2.0 * hh * Hs * Ht;
    }

  const double hz_guard = 1e-12;
  for (int i = 1; i < g.ns - 1; ++i)
    for (int j = 1; j < g.nt - 1; ++j) {
      const double hh = data.H.at(i, j);
      const double uu = data.u.at(i, j);
      const Complex hz = Hz_fd.at(i, j);
      if (std::abs(hz) < hz_guard || std::abs(hh) < kDivisionGuard) {
        ++out.excluded_nodes;
        continue;
      }
      const double W = hh * hh + tau * tau;
      r_main7.at(i, j) = data.A.at(i, j) - uu * W / (4.0 * hh * hz);
    }

  // Second-order identity: with q = 4H^2 + kappa,
  //   (log W)_{z zbar} = 8 H^2 |H_z|^2 / (W q) + q (H + i tau) H_z^2 / (4 |H_z|^2 W).
  RealField logW(g, 0);
  for (int i = 0; i < g.ns; ++i)
    for (int j = 0; j < g.nt; ++j) {
      const double hh = data.H.at(i, j);
      logW.at(i, j) = std::log(hh * hh + tau * tau);
    }
  ComplexField logW_zzb = d_zbar(d_z(logW));
  for (int i = 2; i < g.ns - 2; ++i)
    for (int j = 2; j < g.nt - 2; ++j) {
      const double hh = data.H.at(i, j);
      const Complex hz = Hz_fd.at(i, j);
      const double hz2 = std::norm(hz);
      if (hz2 < hz_guard * hz_guard) {
        ++out.excluded_nodes;
        continue;
      }
      const double W = hh * hh + tau * tau;
      const double q = 4.0 * hh * hh + kappa;
      const Complex w(hh, tau);
      r_main9.at(i, j) = logW_zzb.at(i, j) - 8.0 * hh * hh * hz2 / (W * q) -
                         q * w * hz * hz / (4.0 * hz2 * W);
    }

  out.entries.push_back({"q_normalization", residual_norm(r_main1)});
  out.entries.push_back({"u_amplitude", residual_norm(r_main4)});
  out.entries.push_back({"u_formula", residual_norm(r_main5)});
  out.entries.push_back({"a_formula", residual_norm(r_main7)});
  out.entries.push_back({"hz_reality", residual_norm(r_main8)});
  out.entries.push_back({"h_log_pde", residual_norm(r_main9)});
  return out;
}

}  // namespace homsurf
