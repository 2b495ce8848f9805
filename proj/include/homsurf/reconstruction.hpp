#pragma once

#include <optional>
#include <string>
#include <vector>

#include "homsurf/fundamental.hpp"
#include "homsurf/space.hpp"

namespace homsurf {

/// Tensor-product Lagrange interpolation of one grid field on a 6-node
/// stencil per axis (5 when the grid is only 5 wide), shifted inward at the
/// edges rather than clamped, so value and first partials keep full order up
/// to the boundary; polynomials of degree <= 5 per axis reproduce exactly.
/// That headroom keeps the sampling bias far below the frame integrator's
/// truncation error. Supplies the value and both first partials, which is
/// what the integrator consumes between nodes.
class FieldSampler {
 public:
  explicit FieldSampler(const RealField& f);

  double value(double s, double t) const;
  void value_and_partials(double s, double t, double& v, double& vs, double& vt) const;

 private:
  ConformalGrid grid_;
  Eigen::ArrayXXd values_;
};

/// Chart point with an adapted orthonormal frame: E1, E2 span the tangent
/// plane, N is the unit normal, all measured by the ambient metric there.
struct FrameState {
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  Eigen::Vector3d E1 = Eigen::Vector3d::UnitX();
  Eigen::Vector3d E2 = Eigen::Vector3d::UnitY();
  Eigen::Vector3d N = Eigen::Vector3d::UnitZ();
};

struct SurfaceMesh {
  ConformalGrid grid;
  std::vector<Eigen::Vector3d> points;   // row-major, i * grid.nt + j
  std::vector<Eigen::Vector3d> normals;
  std::vector<FrameState> frames;        // full frames kept for data recovery
  std::optional<FundamentalField> recovered;
  std::vector<std::string> log;          // gauge choice, re-orthonormalization events

  int idx(int i, int j) const { return i * grid.nt + j; }
};

/// Frame at the chart origin matching the data's corner node: <N, xi> = u and
/// <xi, sqrt(lambda)(E1 - i E2)/2> = A there. The leftover rotation about the
/// fiber is fixed by aligning E1's horizontal part with the +x chart
/// direction; the chosen angle is reported through gauge_note when given.
FrameState make_default_seed(const FundamentalField& data, const AmbientChart& chart,
                             std::string* gauge_note = nullptr);

/// Moving-frame integration of the data over a coarser mesh grid (spacing
/// `step`, clipped inside the data extent): the first column runs along t
/// from the seed, then every row runs along s, rows in parallel. Frame
/// orthonormality is monitored at each node; drift beyond 1e-6 is repaired by
/// metric Gram-Schmidt and logged, drift beyond 1e-3 aborts (the data cannot
/// be integrable). Points leaving the chart domain abort as well.
SurfaceMesh integrate_surface(const FundamentalField& data, const AmbientChart& chart,
                              const FrameState& seed, double step = 1e-2);

/// Maximum deviations of the mesh from the data it was built from. The FD
/// extraction consumes one boundary ring. Also fills mesh.recovered with the
/// full fundamental data read back off the mesh.
struct ReconstructionReport {
  double metric_rel_dev = 0.0;        // induced metric vs lambda, relative
  double u_dev = 0.0;                 // <N, xi> vs u
  double A_dev = 0.0;                 // <xi, psi_z> vs A
  std::optional<double> hz_dev;       // tau = 0 only: fiber-coordinate h_z vs A

  double worst() const;
};

ReconstructionReport verify_reconstruction(SurfaceMesh& mesh, const FundamentalField& data);

/// Integrates seed -> far corner along the two boundary paths (t-then-s and
/// s-then-t) and reports the endpoint mismatch; a numerical witness of the
/// integrability the residual equations encode.
struct PathIndependence {
  double point_dist = 0.0;   // chart-coordinate distance
  double frame_dist = 0.0;   // Frobenius norm over the stacked frame vectors

  double worst() const { return point_dist > frame_dist ? point_dist : frame_dist; }
};

PathIndependence path_independence_check(const FundamentalField& data, const AmbientChart& chart,
                                         const FrameState& seed, double step = 1e-2);

}  // namespace homsurf
