#include "homsurf/space.hpp"

namespace homsurf {

SpaceFamily classify(const SpaceParams& params) {
  if (params.tau == 0.0)
    return params.kappa < 0.0 ? SpaceFamily::ProductH2xR : SpaceFamily::ProductS2xR;
  if (params.kappa == 0.0) return SpaceFamily::Heisenberg;
  return params.kappa > 0.0 ? SpaceFamily::BergerSphere : SpaceFamily::PSL2R_cover;
}

const char* family_name(SpaceFamily f) {
  switch (f) {
    case SpaceFamily::ProductH2xR: return "H2xR";
    case SpaceFamily::ProductS2xR: return "S2xR";
    case SpaceFamily::Heisenberg: return "Heisenberg";
    case SpaceFamily::BergerSphere: return "BergerSphere";
    case SpaceFamily::PSL2R_cover: return "PSL2R_cover";
  }
  return "?";
}

double AmbientChart::mu(double x, double y) const {
  return 1.0 / (1.0 + kappa_ * (x * x + y * y) / 4.0);
}

bool AmbientChart::in_domain(const Eigen::Vector3d& point) const {
  const double denom = 1.0 + kappa_ * (point.x() * point.x() + point.y() * point.y()) / 4.0;
  // For kappa < 0 the chart ends at the disk boundary; 1e-6 keeps mu <= 1e6.
  return denom > 1e-6;
}

void AmbientChart::require_domain(const Eigen::Vector3d& point) const {
  if (!in_domain(point)) throw std::invalid_argument("AmbientChart: point outside chart domain");
}

Eigen::Matrix3d AmbientChart::metric_tensor(const Eigen::Vector3d& point) const {
  require_domain(point);
  const double x = point.x(), y = point.y();
  const double m = mu(x, y), t = tau_;
  Eigen::Matrix3d g;
  g(0, 0) = m * m * (1.0 + t * t * y * y);
  g(1, 1) = m * m * (1.0 + t * t * x * x);
  g(0, 1) = g(1, 0) = -t * t * m * m * x * y;
  g(0, 2) = g(2, 0) = t * m * y;
  g(1, 2) = g(2, 1) = -t * m * x;
  g(2, 2) = 1.0;
  return g;
}

namespace {

// Closed-form x- and y-partials of the metric entries. The metric is
// z-invariant, so these two matrices are the whole derivative.
void metric_partials(double kappa, double tau, double x, double y, double m,
                     Eigen::Matrix3d& dgx, Eigen::Matrix3d& dgy) {
  const double mx = -0.5 * kappa * x * m * m;
  const double my = -0.5 * kappa * y * m * m;
  const double t = tau;

  dgx.setZero();
  dgx(0, 0) = 2.0 * m * mx * (1.0 + t * t * y * y);
  dgx(1, 1) = 2.0 * m * mx * (1.0 + t * t * x * x) + 2.0 * t * t * x * m * m;
  dgx(0, 1) = dgx(1, 0) = -t * t * y * (m * m + 2.0 * m * mx * x);
  dgx(0, 2) = dgx(2, 0) = t * y * mx;
  dgx(1, 2) = dgx(2, 1) = -t * (m + x * mx);

  dgy.setZero();
  dgy(0, 0) = 2.0 * m * my * (1.0 + t * t * y * y) + 2.0 * t * t * y * m * m;
  dgy(1, 1) = 2.0 * m * my * (1.0 + t * t * x * x);
  dgy(0, 1) = dgy(1, 0) = -t * t * x * (m * m + 2.0 * m * my * y);
  dgy(0, 2) = dgy(2, 0) = t * (m + y * my);
  dgy(1, 2) = dgy(2, 1) = -t * x * my;
}

}  // namespace

std::array<Eigen::Matrix3d, 3> AmbientChart::christoffel(const Eigen::Vector3d& point) const {
  const Eigen::Matrix3d g = metric_tensor(point);
  const Eigen::Matrix3d ginv = g.inverse();
  Eigen::Matrix3d dg[3];
  metric_partials(kappa_, tau_, point.x(), point.y(), mu(point.x(), point.y()), dg[0], dg[1]);
  dg[2].setZero();

  std::array<Eigen::Matrix3d, 3> gamma;
  for (int i = 0; i < 3; ++i) {
    gamma[i].setZero();
    for (int j = 0; j < 3; ++j)
      for (int k = j; k < 3; ++k) {
        double sum = 0.0;
        for (int l = 0; l < 3; ++l)
          sum += ginv(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
        gamma[i](j, k) = 0.5 * sum;
        gamma[i](k, j) = gamma[i](j, k);
      }
  }
  return gamma;
}

Eigen::Vector3d AmbientChart::vertical_field(const Eigen::Vector3d& point) const {
  require_domain(point);
  // d/dz has squared length g_22 = 1 already.
  return {0.0, 0.0, 1.0};
}

Eigen::Vector3d AmbientChart::cross_product(const Eigen::Vector3d& point, const Eigen::Vector3d& v,
                                            const Eigen::Vector3d& w) const {
  const double m = mu(point.x(), point.y());
  require_domain(point);
  // sqrt(det g) = mu^2, so the metric volume form is mu^2 * (Euclidean one)
  // and the cross product is the Euclidean one pushed through g^{-1}.
  const Eigen::Vector3d e = v.cross(w);
  return m * m * (metric_tensor(point).inverse() * e);
}

Eigen::Vector3d AmbientChart::covariant_in_direction(const Eigen::Vector3d& point,
                                                     const Eigen::Vector3d& X,
                                                     const Eigen::Vector3d& V,
                                                     const Eigen::Matrix3d& dV) const {
  const auto gamma = christoffel(point);
  Eigen::Vector3d out = dV * X;
  for (int i = 0; i < 3; ++i) out[i] += X.dot(gamma[i] * V);
  return out;
}

Eigen::Vector3d killing_residual(const AmbientChart& chart, const Eigen::Vector3d& point,
                                 const Eigen::Vector3d& X) {
  const Eigen::Vector3d xi = chart.vertical_field(point);
  const Eigen::Vector3d lhs =
      chart.covariant_in_direction(point, X, xi, Eigen::Matrix3d::Zero());
  return lhs - chart.tau() * chart.cross_product(point, X, xi);
}

}  // namespace homsurf
