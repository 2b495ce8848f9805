#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>

namespace homsurf {

/// Curvature pair (kappa, tau) of a homogeneous 3-space with 4-dimensional
/// isometry group. kappa = 4 tau^2 is the round-sphere/Euclidean degeneration
/// and is rejected.
struct SpaceParams {
  double kappa = -1.0;
  double tau = 0.0;

  SpaceParams() = default;
  SpaceParams(double kappa_, double tau_) : kappa(kappa_), tau(tau_) {
    if (kappa == 4.0 * tau * tau)
      throw std::invalid_argument("SpaceParams: kappa must differ from 4*tau^2");
  }
};

enum class SpaceFamily {
  ProductH2xR,   // tau = 0, kappa < 0
  ProductS2xR,   // tau = 0, kappa > 0
  Heisenberg,    // tau != 0, kappa = 0
  BergerSphere,  // tau != 0, kappa > 0
  PSL2R_cover,   // tau != 0, kappa < 0
};

SpaceFamily classify(const SpaceParams& params);
const char* family_name(SpaceFamily f);

/// Rotationally symmetric chart: metric
///   mu^2 (dx^2 + dy^2) + (tau * mu * (y dx - x dy) + dz)^2,
///   mu(x, y) = 1 / (1 + kappa (x^2 + y^2) / 4).
/// Domain is the full (x, y) plane for kappa >= 0 and the disk
/// x^2 + y^2 < -4/kappa for kappa < 0 (with a conditioning cutoff), times R in z.
/// The fiber direction is d/dz; (dx, dy, dz) is positively oriented.
class AmbientChart {
 public:
  explicit AmbientChart(const SpaceParams& params)
      : kappa_(params.kappa), tau_(params.tau) {}
  // Unchecked pair, accepts the degenerate kappa = 4 tau^2 geometries too.
  // The chart formulas do not need the nondegeneracy constraint.
  static AmbientChart raw(double kappa, double tau) { return AmbientChart(kappa, tau); }

  double kappa() const { return kappa_; }
  double tau() const { return tau_; }

  bool in_domain(const Eigen::Vector3d& point) const;
  double mu(double x, double y) const;

  Eigen::Matrix3d metric_tensor(const Eigen::Vector3d& point) const;
  // gamma[i](j, k) = Gamma^i_{jk}, symmetric in (j, k).
  std::array<Eigen::Matrix3d, 3> christoffel(const Eigen::Vector3d& point) const;

  // Unit Killing field tangent to the fibers (chart components).
  Eigen::Vector3d vertical_field(const Eigen::Vector3d& point) const;

  // Riemannian cross product: <v x w, u> = vol(v, w, u).
  Eigen::Vector3d cross_product(const Eigen::Vector3d& point, const Eigen::Vector3d& v,
                                const Eigen::Vector3d& w) const;

  // Covariant derivative (nabla_X V)^i = X(V^i) + Gamma^i_{jk} X^j V^k for a
  // field with constant chart components V; used for Killing-residual tests.
  Eigen::Vector3d covariant_in_direction(const Eigen::Vector3d& point, const Eigen::Vector3d& X,
                                         const Eigen::Vector3d& V,
                                         const Eigen::Matrix3d& dV) const;

 private:
  AmbientChart(double kappa, double tau) : kappa_(kappa), tau_(tau) {}
  void require_domain(const Eigen::Vector3d& point) const;

  double kappa_;
  double tau_;
};

// Residual of the Killing identity nabla_X xi = tau * X x xi for the vertical
// field, with all pieces evaluated analytically at `point`.
Eigen::Vector3d killing_residual(const AmbientChart& chart, const Eigen::Vector3d& point,
                                 const Eigen::Vector3d& X);

}  // namespace homsurf
