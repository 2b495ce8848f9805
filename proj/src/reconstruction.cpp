#include "homsurf/reconstruction.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "homsurf/ode.hpp"
#include "homsurf/parallel.hpp"

namespace homsurf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

constexpr int kMaxStencil = 6;

// Lagrange basis weights and derivatives at xi (in node units) for m nodes
// placed at 0, 1, ..., m-1.
void lagrange_weights(double xi, int m, double w[kMaxStencil], double dw[kMaxStencil]) {
  for (int k = 0; k < m; ++k) {
    double denom = 1.0, num = 1.0;
    for (int l = 0; l < m; ++l) {
      if (l == k) continue;
      denom *= k - l;
      num *= xi - l;
    }
    w[k] = num / denom;
    double dnum = 0.0;  // product rule over the numerator factors
    for (int j = 0; j < m; ++j) {
      if (j == k) continue;
      double term = 1.0;
      for (int l = 0; l < m; ++l) {
        if (l == k || l == j) continue;
        term *= xi - l;
      }
      dnum += term;
    }
    dw[k] = dnum / denom;
  }
}

// Stencil of m consecutive nodes centered on the query's cell, shifted
// inward at the edges; xi is the query in node units relative to node i0.
void stencil_for(double x, int n, int& i0, int& m, double& xi) {
  m = n < kMaxStencil ? n : kMaxStencil;
  const int cell = static_cast<int>(std::floor(x));
  i0 = clampi(cell - (m / 2 - 1), 0, n - m);
  xi = x - i0;
}

}  // namespace

FieldSampler::FieldSampler(const RealField& f) : grid_(f.grid), values_(f.values) {}

void FieldSampler::value_and_partials(double s, double t, double& v, double& vs,
                                      double& vt) const {
  const double xs = (s - grid_.s0) / grid_.ds;
  const double xt = (t - grid_.t0) / grid_.dt;
  int i0, j0, ms, mt;
  double xis, xit;
  stencil_for(xs, grid_.ns, i0, ms, xis);
  stencil_for(xt, grid_.nt, j0, mt, xit);

  double ws[kMaxStencil], dws[kMaxStencil], wt[kMaxStencil], dwt[kMaxStencil];
  lagrange_weights(xis, ms, ws, dws);
  lagrange_weights(xit, mt, wt, dwt);

  v = vs = vt = 0.0;
  for (int a = 0; a < ms; ++a) {
    double row = 0.0, drow = 0.0;
    for (int b = 0; b < mt; ++b) {
      row += wt[b] * values_(i0 + a, j0 + b);
      drow += dwt[b] * values_(i0 + a, j0 + b);
    }
    v += ws[a] * row;
    vs += dws[a] * row;
    vt += ws[a] * drow;
  }
  vs /= grid_.ds;
  vt /= grid_.dt;
}

double FieldSampler::value(double s, double t) const {
  double v, vs, vt;
  value_and_partials(s, t, v, vs, vt);
  return v;
}

namespace {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct DataSamplers {
  FieldSampler lambda, H, p_re, p_im;

  explicit DataSamplers(const FundamentalField& d)
      : lambda(d.lambda), H(d.H), p_re(real_part(d.p)), p_im(imag_part(d.p)) {}

  static RealField real_part(const ComplexField& f) {
    RealField out(f.grid, f.border);
    out.values = f.values.real();
    return out;
  }
  static RealField imag_part(const ComplexField& f) {
    RealField out(f.grid, f.border);
    out.values = f.values.imag();
    return out;
  }
};

// Frame integration state: point, E1, E2, N packed as 12 reals.
using Y12 = Eigen::Matrix<double, 12, 1>;

Y12 pack(const FrameState& f) {
  Y12 y;
  y.segment<3>(0) = f.point;
  y.segment<3>(3) = f.E1;
  y.segment<3>(6) = f.E2;
  y.segment<3>(9) = f.N;
  return y;
}

FrameState unpack(const Y12& y) {
  FrameState f;
  f.point = y.segment<3>(0);
  f.E1 = y.segment<3>(3);
  f.E2 = y.segment<3>(6);
  f.N = y.segment<3>(9);
  return f;
}

// Coordinate derivative of the frame when moving along s (along_s) or t.
// Covariant rates come from the conformal surface connection and the shape
// operator; the chart's Christoffel contraction converts them to plain
// component derivatives.
Y12 frame_rhs(const AmbientChart& chart, const DataSamplers& data, double s, double t,
              const Y12& y, bool along_s) {
  double lam, lam_s, lam_t;
  data.lambda.value_and_partials(s, t, lam, lam_s, lam_t);
  if (!(lam > 1e-12))
    throw std::runtime_error("integrate_surface: sampled lambda not positive at s = " +
                             std::to_string(s) + ", t = " + std::to_string(t));
  const double H = data.H.value(s, t);
  const double p_re = data.p_re.value(s, t);
  const double p_im = data.p_im.value(s, t);

  const double S11 = H + 2.0 * p_re / lam;
  const double S22 = H - 2.0 * p_re / lam;
  const double S12 = -2.0 * p_im / lam;
  const double sq = std::sqrt(lam);

  const Vec3 point = y.segment<3>(0);
  const Vec3 E1 = y.segment<3>(3);
  const Vec3 E2 = y.segment<3>(6);
  const Vec3 N = y.segment<3>(9);

  Vec3 cov_E1, cov_E2, cov_N, velocity;
  if (along_s) {
    velocity = sq * E1;
    cov_E1 = -(lam_t / (2.0 * lam)) * E2 + sq * S11 * N;
    cov_E2 = (lam_t / (2.0 * lam)) * E1 + sq * S12 * N;
    cov_N = -sq * (S11 * E1 + S12 * E2);
  } else {
    velocity = sq * E2;
    cov_E1 = (lam_s / (2.0 * lam)) * E2 + sq * S12 * N;
    cov_E2 = -(lam_s / (2.0 * lam)) * E1 + sq * S22 * N;
    cov_N = -sq * (S12 * E1 + S22 * E2);
  }

  const std::array<Mat3, 3> gamma = chart.christoffel(point);
  auto correct = [&](const Vec3& V) {
    Vec3 c;
    for (int i = 0; i < 3; ++i) c[i] = velocity.dot(gamma[i] * V);
    return c;
  };

  Y12 dy;
  dy.segment<3>(0) = velocity;
  dy.segment<3>(3) = cov_E1 - correct(E1);
  dy.segment<3>(6) = cov_E2 - correct(E2);
  dy.segment<3>(9) = cov_N - correct(N);
  return dy;
}

double gram_drift(const AmbientChart& chart, const FrameState& f) {
  const Mat3 g = chart.metric_tensor(f.point);
  Mat3 frame;
  frame.col(0) = f.E1;
  frame.col(1) = f.E2;
  frame.col(2) = f.N;
  const Mat3 gram = frame.transpose() * g * frame;
  return (gram - Mat3::Identity()).cwiseAbs().maxCoeff();
}

void metric_gram_schmidt(const AmbientChart& chart, FrameState& f) {
  const Mat3 g = chart.metric_tensor(f.point);
  auto dot = [&g](const Vec3& a, const Vec3& b) { return a.dot(g * b); };
  f.E1 /= std::sqrt(dot(f.E1, f.E1));
  f.E2 -= dot(f.E2, f.E1) * f.E1;
  f.E2 /= std::sqrt(dot(f.E2, f.E2));
  f.N -= dot(f.N, f.E1) * f.E1 + dot(f.N, f.E2) * f.E2;
  f.N /= std::sqrt(dot(f.N, f.N));
}

// One mesh-cell RK4 step plus the per-node health checks. Appends to `log`
// when a repair fires.
FrameState advance_node(const AmbientChart& chart, const DataSamplers& data, FrameState from,
                        double s, double t, double h, bool along_s,
                        std::vector<std::string>* log) {
  auto rhs = [&](double x, const Y12& y) {
    return along_s ? frame_rhs(chart, data, x, t, y, true)
                   : frame_rhs(chart, data, s, x, y, false);
  };
  const double x0 = along_s ? s : t;
  FrameState next = unpack(rk4_step(rhs, x0, pack(from), h));

  if (!chart.in_domain(next.point)) {
    std::ostringstream os;
    os << "integrate_surface: point left the chart domain near s = " << (along_s ? x0 + h : s)
       << ", t = " << (along_s ? t : x0 + h);
    throw std::runtime_error(os.str());
  }
  const double drift = gram_drift(chart, next);
  if (drift > 1e-3) {
    std::ostringstream os;
    os << "integrate_surface: frame drift " << drift
       << " exceeds the hard limit 1e-3 (inconsistent data) near s = " << s << ", t = " << t;
    throw std::runtime_error(os.str());
  }
  if (drift > 1e-6) {
    metric_gram_schmidt(chart, next);
    if (log) {
      std::ostringstream os;
      os << "re-orthonormalized frame (drift " << drift << ") near s = " << s << ", t = " << t;
      log->push_back(os.str());
    }
  }
  return next;
}

ConformalGrid mesh_grid_for(const ConformalGrid& data_grid, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("integrate_surface: step must be positive");
  const double span_s = (data_grid.ns - 1) * data_grid.ds;
  const double span_t = (data_grid.nt - 1) * data_grid.dt;
  const int ns = static_cast<int>(std::floor(span_s / step + 1e-9)) + 1;
  const int nt = static_cast<int>(std::floor(span_t / step + 1e-9)) + 1;
  if (ns < 5 || nt < 5)
    throw std::invalid_argument("integrate_surface: step too coarse for the data extent");
  return ConformalGrid(data_grid.s0, data_grid.t0, step, step, ns, nt);
}

void check_seed(const FundamentalField& data, const AmbientChart& chart,
                const FrameState& seed) {
  if (gram_drift(chart, seed) > 1e-6)
    throw std::invalid_argument("integrate_surface: seed frame is not orthonormal");
  const Mat3 g = chart.metric_tensor(seed.point);
  const Vec3 xi = chart.vertical_field(seed.point);
  const double u0 = data.u.at(0, 0);
  const double lam0 = data.lambda.at(0, 0);
  const Complex A0 = data.A.at(0, 0);
  const double uN = xi.dot(g * seed.N);
  const Complex Aseed = 0.5 * std::sqrt(lam0) *
                        Complex(xi.dot(g * seed.E1), -xi.dot(g * seed.E2));
  if (std::abs(uN - u0) > 1e-6 || std::abs(Aseed - A0) > 1e-6)
    throw std::invalid_argument(
        "integrate_surface: seed frame disagrees with the data's corner node "
        "(<N,xi> or <xi,psi_z> mismatch)");
}

}  // namespace

FrameState make_default_seed(const FundamentalField& data, const AmbientChart& chart,
                             std::string* gauge_note) {
  const double u0 = data.u.at(0, 0);
  const double lam0 = data.lambda.at(0, 0);
  const Complex A0 = data.A.at(0, 0);

  FrameState f;
  f.point = Vec3::Zero();
  const Mat3 g = chart.metric_tensor(f.point);
  const Vec3 xi = chart.vertical_field(f.point);
  auto dot = [&g](const Vec3& a, const Vec3& b) { return a.dot(g * b); };

  // Horizontal unit direction seeding the normal's tangential tilt.
  Vec3 h1 = Vec3::UnitX() - dot(Vec3::UnitX(), xi) * xi;
  h1 /= std::sqrt(dot(h1, h1));

  const double tilt = std::sqrt(std::max(0.0, 1.0 - u0 * u0));
  f.N = u0 * xi + tilt * h1;

  Vec3 t1;
  if (tilt > 1e-9) {
    t1 = (xi - u0 * f.N) / tilt;
  } else {
    t1 = Vec3::UnitX() - dot(Vec3::UnitX(), f.N) * f.N;
    t1 /= std::sqrt(dot(t1, t1));
  }
  const Vec3 t2 = chart.cross_product(f.point, f.N, t1);

  const double a1 = 2.0 * A0.real() / std::sqrt(lam0);
  const double a2 = -2.0 * A0.imag() / std::sqrt(lam0);
  const double theta = std::atan2(-a2, a1);
  f.E1 = std::cos(theta) * t1 + std::sin(theta) * t2;
  f.E2 = -std::sin(theta) * t1 + std::cos(theta) * t2;

  // Remaining gauge: rotation about the origin's fiber. Align E1's (or,
  // degenerately, E2's) horizontal part with +x.
  double chi = 0.0;
  if (std::hypot(f.E1.x(), f.E1.y()) > 1e-12)
    chi = std::atan2(f.E1.y(), f.E1.x());
  else if (std::hypot(f.E2.x(), f.E2.y()) > 1e-12)
    chi = std::atan2(f.E2.y(), f.E2.x());
  Mat3 rot;
  const double c = std::cos(-chi), s = std::sin(-chi);
  rot << c, -s, 0, s, c, 0, 0, 0, 1;
  f.E1 = rot * f.E1;
  f.E2 = rot * f.E2;
  f.N = rot * f.N;

  if (gauge_note) {
    std::ostringstream os;
    os << "seed gauge: frame rotated by " << -chi << " rad about the origin fiber";
    *gauge_note = os.str();
  }
  return f;
}

SurfaceMesh integrate_surface(const FundamentalField& data, const AmbientChart& chart,
                              const FrameState& seed, double step) {
  {
    const auto problems = validate_fundamental(data, std::numeric_limits<double>::infinity());
    if (!problems.empty())
      throw std::invalid_argument("integrate_surface: invalid data: " + problems.front());
  }
  check_seed(data, chart, seed);

  SurfaceMesh mesh;
  mesh.grid = mesh_grid_for(data.grid, step);
  const int ns = mesh.grid.ns, nt = mesh.grid.nt;
  mesh.frames.resize(static_cast<size_t>(ns) * nt);
  mesh.points.resize(mesh.frames.size());
  mesh.normals.resize(mesh.frames.size());

  const DataSamplers samplers(data);

  // First column, then rows off it; every row only reads its own column seed.
  std::vector<std::string> column_log;
  mesh.frames[mesh.idx(0, 0)] = seed;
  for (int j = 0; j + 1 < nt; ++j)
    mesh.frames[mesh.idx(0, j + 1)] =
        advance_node(chart, samplers, mesh.frames[mesh.idx(0, j)], mesh.grid.s0,
                     mesh.grid.t_at(j), mesh.grid.dt, false, &column_log);

  std::vector<std::vector<std::string>> row_logs(nt);
  parallel_for(nt, [&](int j) {
    const double t = mesh.grid.t_at(j);
    for (int i = 0; i + 1 < ns; ++i)
      mesh.frames[mesh.idx(i + 1, j)] =
          advance_node(chart, samplers, mesh.frames[mesh.idx(i, j)], mesh.grid.s_at(i), t,
                       mesh.grid.ds, true, &row_logs[j]);
  });

  mesh.log = std::move(column_log);
  for (auto& rl : row_logs)
    mesh.log.insert(mesh.log.end(), rl.begin(), rl.end());

  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j) {
      mesh.points[mesh.idx(i, j)] = mesh.frames[mesh.idx(i, j)].point;
      mesh.normals[mesh.idx(i, j)] = mesh.frames[mesh.idx(i, j)].N;
    }
  return mesh;
}

double ReconstructionReport::worst() const {
  double w = std::max(metric_rel_dev, std::max(u_dev, A_dev));
  if (hz_dev) w = std::max(w, *hz_dev);
  return w;
}

ReconstructionReport verify_reconstruction(SurfaceMesh& mesh, const FundamentalField& data) {
  const AmbientChart chart(data.space);
  const ConformalGrid& g = mesh.grid;
  if (static_cast<int>(mesh.points.size()) != g.ns * g.nt)
    throw std::invalid_argument("verify_reconstruction: mesh size mismatch");

  FieldSampler lam_data(data.lambda);
  FieldSampler u_data(data.u);
  FieldSampler A_re(DataSamplers::real_part(data.A));
  FieldSampler A_im(DataSamplers::imag_part(data.A));

  FundamentalField rec = make_fundamental_field(data.space, g);
  rec.lambda.border = rec.u.border = rec.H.border = 1;
  rec.p.border = rec.A.border = 1;
  rec.lambda.values.setConstant(kNaN);
  rec.u.values.setConstant(kNaN);
  rec.H.values.setConstant(kNaN);
  rec.p.values.setConstant(Complex(kNaN, kNaN));
  rec.A.values.setConstant(Complex(kNaN, kNaN));

  ReconstructionReport report;
  if (data.space.tau == 0.0) report.hz_dev = 0.0;

  for (int i = 1; i < g.ns - 1; ++i)
    for (int j = 1; j < g.nt - 1; ++j) {
      const Vec3& P = mesh.points[mesh.idx(i, j)];
      const Mat3 met = chart.metric_tensor(P);
      const Vec3 xi = chart.vertical_field(P);
      const double s = g.s_at(i), t = g.t_at(j);

      const Vec3 psi_s =
          (mesh.points[mesh.idx(i + 1, j)] - mesh.points[mesh.idx(i - 1, j)]) / (2.0 * g.ds);
      const Vec3 psi_t =
          (mesh.points[mesh.idx(i, j + 1)] - mesh.points[mesh.idx(i, j - 1)]) / (2.0 * g.dt);

      const double lam_ref = lam_data.value(s, t);
      const double gss = psi_s.dot(met * psi_s);
      const double gtt = psi_t.dot(met * psi_t);
      const double gst = psi_s.dot(met * psi_t);
      const double rel = std::max({std::abs(gss - lam_ref), std::abs(gtt - lam_ref),
                                   std::abs(gst)}) /
                         lam_ref;
      report.metric_rel_dev = std::max(report.metric_rel_dev, rel);

      const FrameState& fr = mesh.frames[mesh.idx(i, j)];
      const double u_rec = xi.dot(met * fr.N);
      report.u_dev = std::max(report.u_dev, std::abs(u_rec - u_data.value(s, t)));

      const Complex A_rec = 0.5 * Complex(xi.dot(met * psi_s), -xi.dot(met * psi_t));
      const Complex A_ref(A_re.value(s, t), A_im.value(s, t));
      report.A_dev = std::max(report.A_dev, std::abs(A_rec - A_ref));

      if (report.hz_dev) {
        const double hs = (mesh.points[mesh.idx(i + 1, j)].z() -
                           mesh.points[mesh.idx(i - 1, j)].z()) /
                          (2.0 * g.ds);
        const double ht = (mesh.points[mesh.idx(i, j + 1)].z() -
                           mesh.points[mesh.idx(i, j - 1)].z()) /
                          (2.0 * g.dt);
        const Complex hz(0.5 * hs, -0.5 * ht);
        report.hz_dev = std::max(*report.hz_dev, std::abs(hz - A_ref));
      }

      // Shape operator read off the normal's covariant rate; fills the
      // recovered data alongside the deviation report.
      const std::array<Mat3, 3> gamma = chart.christoffel(P);
      auto cov_along = [&](const Vec3& vel, const Vec3& dN_coord) {
        Vec3 corr;
        for (int k = 0; k < 3; ++k) corr[k] = vel.dot(gamma[k] * fr.N);
        return Vec3(dN_coord + corr);
      };
      const Vec3 dN_s = (mesh.frames[mesh.idx(i + 1, j)].N - mesh.frames[mesh.idx(i - 1, j)].N) /
                        (2.0 * g.ds);
      const Vec3 dN_t = (mesh.frames[mesh.idx(i, j + 1)].N - mesh.frames[mesh.idx(i, j - 1)].N) /
                        (2.0 * g.dt);
      const Vec3 covN_s = cov_along(psi_s, dN_s);
      const Vec3 covN_t = cov_along(psi_t, dN_t);
      const double lam_rec = 0.5 * (gss + gtt);
      const double sq = std::sqrt(lam_rec);
      const double S11 = -covN_s.dot(met * fr.E1) / sq;
      const double S12a = -covN_s.dot(met * fr.E2) / sq;
      const double S21a = -covN_t.dot(met * fr.E1) / sq;
      const double S22 = -covN_t.dot(met * fr.E2) / sq;
      const double S12 = 0.5 * (S12a + S21a);

      rec.lambda.at(i, j) = lam_rec;
      rec.u.at(i, j) = u_rec;
      rec.H.at(i, j) = 0.5 * (S11 + S22);
      rec.p.at(i, j) = 0.25 * lam_rec * Complex(S11 - S22, -2.0 * S12);
      rec.A.at(i, j) = A_rec;
    }

  mesh.recovered = std::move(rec);
  return report;
}

PathIndependence path_independence_check(const FundamentalField& data, const AmbientChart& chart,
                                         const FrameState& seed, double step) {
  {
    const auto problems = validate_fundamental(data, std::numeric_limits<double>::infinity());
    if (!problems.empty())
      throw std::invalid_argument("path_independence_check: invalid data: " + problems.front());
  }
  check_seed(data, chart, seed);

  const ConformalGrid g = mesh_grid_for(data.grid, step);
  const DataSamplers samplers(data);
  const double s_far = g.s_at(g.ns - 1), t_far = g.t_at(g.nt - 1);

  auto run_t = [&](FrameState f, double s_fixed) {
    for (int j = 0; j + 1 < g.nt; ++j)
      f = advance_node(chart, samplers, f, s_fixed, g.t_at(j), g.dt, false, nullptr);
    return f;
  };
  auto run_s = [&](FrameState f, double t_fixed) {
    for (int i = 0; i + 1 < g.ns; ++i)
      f = advance_node(chart, samplers, f, g.s_at(i), t_fixed, g.ds, true, nullptr);
    return f;
  };

  const FrameState end_ts = run_s(run_t(seed, g.s0), t_far);
  const FrameState end_st = run_t(run_s(seed, g.t0), s_far);

  PathIndependence out;
  out.point_dist = (end_ts.point - end_st.point).norm();
  Mat3 fa, fb;
  fa.col(0) = end_ts.E1;
  fa.col(1) = end_ts.E2;
  fa.col(2) = end_ts.N;
  fb.col(0) = end_st.E1;
  fb.col(1) = end_st.E2;
  fb.col(2) = end_st.N;
  out.frame_dist = (fa - fb).norm();
  return out;
}

}  // namespace homsurf
