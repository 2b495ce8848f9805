#pragma once

#include <optional>
#include <string>
#include <vector>

#include "homsurf/fundamental.hpp"

namespace homsurf {

enum class DifferentialKind { Hopf, AR_Q, AR_P };

/// Coefficient of a quadratic differential with respect to dz^2 in the grid
/// coordinate. Finite at every valid node.
struct QuadraticDifferential {
  DifferentialKind kind = DifferentialKind::Hopf;
  ComplexField coeff;
};

// Nodes where tau = 0 and |H| drops below this are excluded from any formula
// dividing by H + i tau (minimal points carry no Q).
inline constexpr double kDivisionGuard = 1e-9;

/// Q = 2p - (kappa - 4 tau^2) A^2 / (H + i tau), node-local.
/// Throws std::domain_error naming the first guarded node when the division
/// guard trips.
QuadraticDifferential abresch_rosenberg(const FundamentalField& data);

/// The plain Hopf coefficient p.
QuadraticDifferential p_differential(const FundamentalField& data);

/// P = (H + i tau) Q, assembled divide-free as 2p(H + i tau) - (kappa - 4
/// tau^2) A^2, hence defined even where the Q guard trips.
QuadraticDifferential ar_P(const FundamentalField& data);

/// residual_norm(d_zbar(coeff)); zero for holomorphic coefficients.
Norm holomorphy_residual(const QuadraticDifferential& qd);

/// Node-wise Q_zbar - lambda H_z - (kappa - 4 tau^2) H_zbar A^2 / (H + i
/// tau)^2, the derivative-level identity tying Q to the mean curvature.
/// Vanishes exactly on CMC data and to FD order on integrable data.
ComplexField codazzi_Q_residual(const FundamentalField& data);

/// Empirical corroboration that vanishing Q forces constant H. Preconditions:
/// max |Q| <= tol (violation reported as QNotSmall, distinct from Fail) and
/// data passing check_all; a Fail verdict therefore flags inconsistent input
/// data, with the attached residual report as evidence.
struct ZeroQCmcAudit {
  enum class Status { Pass, Fail, QNotSmall };
  Status status = Status::Fail;
  double max_abs_Q = 0.0;
  double h_spread = 0.0;      // max |H - mean(H)| over the grid
  double spread_bound = 0.0;  // allowance derived from tol, see below
  ResidualReport residuals;   // check_all at the supplied profile
};

// Spread allowance: |Q| <= tol resolves Q's derivative only to ~tol/h, and
// the Codazzi identity converts that to a mean-curvature drift of order
// tol * D / (h * min lambda) across a patch of diameter D. Factor 10 slack.
ZeroQCmcAudit zero_Q_cmc_audit(const FundamentalField& data, double tol,
                               const ToleranceProfile& profile = {});

enum class FeasibilityTag { CMCOnly, NonCMCExists, Unknown };

/// Verdict of the case analysis of the necessary bound 4(H^2 + tau^2) <=
/// |kappa - 4 tau^2| for surfaces with holomorphic Q and nonconstant H.
struct FeasibilityVerdict {
  FeasibilityTag tag = FeasibilityTag::Unknown;
  // Closed interval of mean curvatures the bound leaves available; empty for
  // CMCOnly (nonconstant H is ruled out entirely).
  std::optional<std::pair<double, double>> allowed_H_interval;
  std::string citation;  // the inequality chain deciding the case
};

const char* feasibility_tag_name(FeasibilityTag tag);

/// Exact sign analysis, no tolerances. Invariant under tau -> -tau.
///   kappa - 4 tau^2 < 0, kappa >= 0          -> CMCOnly
///   kappa - 4 tau^2 > 0, kappa - 8 tau^2 <= 0 -> CMCOnly
///   kappa - 4 tau^2 < 0, kappa < 0           -> NonCMCExists, |H| <= sqrt(-kappa)/2
///   kappa - 4 tau^2 > 0, kappa - 8 tau^2 > 0  -> Unknown
FeasibilityVerdict feasibility_audit(const SpaceParams& space);

struct NamedResidual {
  std::string name;
  Norm norm;
};

/// Residual norms of the structure identities satisfied by any surface with
/// Q identically 1 and nonconstant H (kappa - 4 tau^2 < 0 required):
///   q_normalization  2p - 1 - (kappa-4tau^2) A^2/(H+i tau)
///   u_amplitude      (1 - u^2) - 4(H^2+tau^2)/|kappa-4tau^2|
///   u_formula        u - sqrt((4H^2+kappa)/(kappa-4tau^2))
///   a_formula        A - u (H^2+tau^2) / (4 H H_z), H_z by central FD
///   hz_reality       tau (H_s^2 - H_t^2) - 2 H H_s H_t, derivative
///                    components read off A through the a_formula identity
///                    (exact where the data store them), so the entry is an
///                    algebraic identity rather than an FD estimate
///   h_log_pde        (log(H^2+tau^2))_{z zbar} minus its closed-form value
///                    in H and H_z, the second-order consequence of the
///                    system; FD derivatives
/// Guarded nodes (H_z, H, A or the u_formula radicand degenerate) are set to
/// NaN, skipped by the norms, and counted in excluded_nodes.
struct StructureResiduals {
  std::vector<NamedResidual> entries;
  int excluded_nodes = 0;

  const NamedResidual* find(const std::string& name) const;
};

StructureResiduals non_cmc_structure_residuals(const FundamentalField& data);

}  // namespace homsurf
