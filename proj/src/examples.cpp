#include "homsurf/examples.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "homsurf/parallel.hpp"

namespace homsurf {

namespace {

[[noreturn]] void reject(const std::string& what) { throw std::domain_error(what); }

}  // namespace

FundamentalField gen_example31(const Example31Params& params, const ConformalGrid& grid) {
  const double a = params.a, b = params.b, kappa = params.kappa;
  if (a == 0.0) reject("gen_example31: parameter a must be nonzero");
  if (kappa != 1.0 && kappa != -1.0) reject("gen_example31: kappa restricted to +-1");

  const double s_lo = grid.s_at(0), s_hi = grid.s_at(grid.ns - 1);
  const double w_min = std::min(a * s_lo + b, a * s_hi + b);
  if (w_min < 1e-3)
    reject("gen_example31: a*s + b must stay >= 1e-3 on the grid (margin violated at w = " +
           std::to_string(w_min) + ")");

  const double root1a = std::sqrt(1.0 + a * a);
  FundamentalField d = make_fundamental_field(SpaceParams(kappa, 0.0), grid);
  for (int i = 0; i < grid.ns; ++i) {
    const double w = a * grid.s_at(i) + b;
    const double hp = kappa < 0.0 ? 1.0 / std::sinh(w) : 1.0 / std::cosh(w);
    const double lam = (1.0 + a * a) * hp * hp;
    const double H = -0.5 / root1a * std::sqrt(-kappa + 1.0 / (hp * hp));
    for (int j = 0; j < grid.nt; ++j) {
      d.lambda.at(i, j) = lam;
      d.u.at(i, j) = a / root1a;
      d.H.at(i, j) = H;
      d.p.at(i, j) = -0.5 * lam * H;
      d.A.at(i, j) = 0.5 * hp;
    }
  }
  return d;
}

FundamentalField gen_example32(const Example32Params& params, const ConformalGrid& grid) {
  const double pi = 3.14159265358979323846;
  if (params.delta != 1 && params.delta != -1) reject("gen_example32: delta must be +-1");
  if (!(params.alpha0 > 0.0 && params.alpha0 < pi))
    reject("gen_example32: alpha0 must lie in (0, pi)");
  if (std::abs(params.alphaPrime0) < 1e-9)
    reject("gen_example32: alphaPrime0 must be nonzero (lambda = 1/alpha'^2)");
  if (!(params.step > 0.0)) reject("gen_example32: step must be positive");

  const bool along_s = params.delta == 1;
  const double r_lo = along_s ? grid.s0 : grid.t0;
  const double dr = along_s ? grid.ds : grid.dt;
  const int nr = along_s ? grid.ns : grid.nt;

  const double delta = params.delta;
  auto rhs = [delta](double, const OdeState<2>& y) {
    const double al = y[0], ap = y[1];
    return OdeState<2>(ap, ap * ap * std::cos(al) / std::sin(al) - delta * std::cos(al));
  };

  // RK4 substeps snapped so every grid node is an integration sample.
  const int m = std::max(1, static_cast<int>(std::ceil(dr / params.step - 1e-12)));
  OdeState<2> y0(params.alpha0, params.alphaPrime0);
  if (r_lo != 0.0) {
    const int n1 = std::max(1, static_cast<int>(std::ceil(std::abs(r_lo) * m / dr - 1e-12)));
    y0 = rk4_integrate_n(rhs, y0, 0.0, r_lo, n1).eval(r_lo);
  }
  Trajectory<2> table = rk4_integrate_n(rhs, y0, r_lo, r_lo + (nr - 1) * dr, (nr - 1) * m);

  const double sgn0 = params.alphaPrime0 > 0.0 ? 1.0 : -1.0;
  for (size_t k = 0; k < table.y.size(); ++k) {
    const double al = table.y[k][0], ap = table.y[k][1];
    if (!(al > 0.0 && al < pi))
      reject("gen_example32: alpha left (0, pi) at r = " + std::to_string(table.x[k]));
    if (std::abs(ap) < 1e-9 || ap * sgn0 < 0.0)
      reject("gen_example32: alpha' vanished at r = " + std::to_string(table.x[k]));
  }

  FundamentalField d = make_fundamental_field(SpaceParams(-1.0, 0.0), grid);
  for (int k = 0; k < nr; ++k) {
    const double al = table.y[static_cast<size_t>(k) * m][0];
    const double ap = table.y[static_cast<size_t>(k) * m][1];
    const double lam = 1.0 / (ap * ap);
    const double H = 0.5 * std::sin(al);
    const double u = std::cos(al);
    const double p = 0.5 - delta * std::sin(al) / (4.0 * ap * ap);
    const double A_mag = std::sin(al) / (2.0 * ap);
    const Complex A = along_s ? Complex(A_mag, 0.0) : Complex(0.0, A_mag);
    const int n_other = along_s ? grid.nt : grid.ns;
    for (int l = 0; l < n_other; ++l) {
      const int i = along_s ? k : l;
      const int j = along_s ? l : k;
      d.lambda.at(i, j) = lam;
      d.u.at(i, j) = u;
      d.H.at(i, j) = H;
      d.p.at(i, j) = p;
      d.A.at(i, j) = A;
    }
  }
  return d;
}

namespace {

// Branch data for the characteristic transport H_t = f(H) H_s and the forced
// seed-profile ODE H'' = alpha(H) H'^2 + beta(H) it must satisfy on t = 0.
struct TransportCoefs {
  double kappa, tau, sigma;

  double R(double h) const { return std::sqrt(h * h + tau * tau); }
  double f(double h) const { return (-h + sigma * R(h)) / tau; }
  double fp(double h) const { return (-1.0 + sigma * h / R(h)) / tau; }
  double fpp(double h) const { const double r = R(h); return sigma * tau / (r * r * r); }

  double alpha(double h) const {
    const double W = h * h + tau * tau;
    const double fv = f(h), fpv = fp(h);
    const double opf = 1.0 + fv * fv;
    return -1.0 / h + 2.0 * h / W + 4.0 * h / (4.0 * h * h + kappa) - 2.0 * fv * fpv / opf;
  }
  double beta(double h) const {
    const double fv = f(h);
    const double opf = 1.0 + fv * fv;
    return sigma * R(h) * (4.0 * h * h + kappa) / (2.0 * h * opf);
  }
  // Squared seed slope cancelling the cubic term of the off-line residual
  // expansion; negative on branches where no real tuning exists.
  double rho(double h) const {
    return -3.0 * beta(h) * fp(h) / (fpp(h) + alpha(h) * fp(h));
  }

  bool admissible(double h) const {
    return std::abs(h) > 1e-9 && 4.0 * h * h + kappa < -1e-12;
  }
};

TransportCoefs make_coefs(const Example33Params& p) {
  if (!(p.kappa < 0.0)) reject("gen_example33: kappa must be negative");
  if (p.tau == 0.0) reject("gen_example33: tau must be nonzero");
  if (p.branch != 1 && p.branch != -1) reject("gen_example33: branch must be +-1");
  if (!(4.0 * p.H0 * p.H0 + p.kappa < 0.0))
    reject("gen_example33: 4 H0^2 + kappa must be negative");
  const double sigma = p.branch * (p.tau > 0.0 ? 1.0 : -1.0);
  return TransportCoefs{p.kappa, p.tau, sigma};
}

// Seed profile H(zeta) with H(g0) = H0, H'(g0) = m0, grown in both directions
// until the span is covered or a guard (H -> 0, 4H^2 + kappa -> 0) stops it.
Trajectory<2> build_profile(const TransportCoefs& tc, const Example33Params& p, double m0) {
  auto rhs = [&tc](double, const OdeState<2>& y) {
    return OdeState<2>(y[1], tc.alpha(y[0]) * y[1] * y[1] + tc.beta(y[0]));
  };
  auto grow = [&](double direction) {
    Trajectory<2> tr;
    double x = p.g0;
    OdeState<2> y(p.H0, m0);
    const int n = static_cast<int>(std::round(p.profile_span / p.profile_step));
    tr.x.reserve(n + 1);
    tr.y.reserve(n + 1);
    tr.dy.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
      tr.x.push_back(x);
      tr.y.push_back(y);
      tr.dy.push_back(rhs(x, y));
      if (i == n) break;
      const OdeState<2> next = rk4_step(rhs, x, y, direction * p.profile_step);
      if (!next.allFinite() || !tc.admissible(next[0])) break;  // maximal safe interval
      y = next;
      x = p.g0 + direction * (i + 1) * p.profile_step;
    }
    if (direction < 0.0) {
      std::reverse(tr.x.begin(), tr.x.end());
      std::reverse(tr.y.begin(), tr.y.end());
      std::reverse(tr.dy.begin(), tr.dy.end());
    }
    return tr;
  };
  if (!tc.admissible(p.H0)) reject("gen_example33: H0 outside the admissible band");
  return merge_trajectories(grow(-1.0), grow(1.0));
}

}  // namespace

double example33_tuned_gprime0(const Example33Params& params) {
  const TransportCoefs tc = make_coefs(params);
  const double r = tc.rho(params.H0);
  if (!(r > 0.0))
    reject("example33_tuned_gprime0: tuning square is nonpositive on this branch; "
           "supply gPrime0 explicitly");
  return 1.0 / std::sqrt(r);
}

FundamentalField gen_example33(const Example33Params& params, const ConformalGrid& grid) {
  const TransportCoefs tc = make_coefs(params);
  if (!(params.profile_step > 0.0) || !(params.profile_span > 0.0))
    reject("gen_example33: profile step and span must be positive");
  if (params.newton_max_iter < 1 || !(params.newton_tol > 0.0))
    reject("gen_example33: root-finder settings invalid");

  const double gp0 = params.gPrime0 == 0.0 ? example33_tuned_gprime0(params) : params.gPrime0;
  const double m0 = 1.0 / gp0;

  const Trajectory<2> profile = build_profile(tc, params, m0);
  const double z_lo = profile.x_min(), z_hi = profile.x_max();

  const double k4 = params.kappa - 4.0 * params.tau * params.tau;
  FundamentalField d = make_fundamental_field(SpaceParams(params.kappa, params.tau), grid);

  parallel_for(grid.ns, [&](int i) {
    const double s = grid.s_at(i);
    for (int j = 0; j < grid.nt; ++j) {
      const double t = grid.t_at(j);

      // Characteristic root: zeta - s - t f(H(zeta)) = 0, Newton clamped to
      // the profile table. zeta is the seed-line position the node's
      // characteristic emanates from.
      double zeta = std::min(std::max(s, z_lo), z_hi);
      double G = 0.0, dG = 1.0;
      bool converged = false;
      for (int it = 0; it < params.newton_max_iter; ++it) {
        const OdeState<2> y = profile.eval(zeta);
        G = zeta - s - t * tc.f(y[0]);
        dG = 1.0 - t * tc.fp(y[0]) * y[1];
        if (std::abs(G) <= params.newton_tol) {
          converged = true;
          break;
        }
        if (std::abs(dG) < 1e-10) break;
        zeta = std::min(std::max(zeta - G / dG, z_lo), z_hi);
      }
      auto node_str = [i, j] {
        std::ostringstream os;
        os << "node (" << i << ", " << j << ")";
        return os.str();
      };
      if (!converged) {
        if (std::abs(dG) < 1e-10)
          reject("gen_example33: g' - t f' vanished (H_s singular) at " + node_str());
        reject("gen_example33: characteristic root not bracketed by the profile at " +
               node_str() + "; widen profile_span or shrink the grid");
      }
      if (zeta <= z_lo + params.profile_step || zeta >= z_hi - params.profile_step)
        reject("gen_example33: profile range exhausted at " + node_str() +
               "; widen profile_span");

      const OdeState<2> y = profile.eval(zeta);
      const double H = y[0];
      if (!tc.admissible(H))
        reject("gen_example33: 4H^2 + kappa >= 0 reached at " + node_str());

      const double denom = 1.0 - t * tc.fp(H) * y[1];
      if (std::abs(denom) < 1e-10)
        reject("gen_example33: g' - t f' vanished (H_s singular) at " + node_str());
      const double Hs = y[1] / denom;
      const double Ht = tc.f(H) * Hs;
      const Complex Hz(0.5 * Hs, -0.5 * Ht);
      if (std::abs(Hz) < 1e-12)
        reject("gen_example33: H_z vanished at " + node_str());

      const double W = H * H + params.tau * params.tau;
      const double u = std::sqrt((4.0 * H * H + params.kappa) / k4);
      const Complex A = u * W / (4.0 * H * Hz);
      const Complex w(H, params.tau);

      d.H.at(i, j) = H;
      d.u.at(i, j) = u;
      d.A.at(i, j) = A;
      d.lambda.at(i, j) = -std::norm(A) * k4 / W;
      d.p.at(i, j) = 0.5 * (1.0 + k4 * A * A / w);
    }
  });
  return d;
}

FundamentalField gen_cmc_control(const SpaceParams& space, double c, const ConformalGrid& grid) {
  if (space.tau == 0.0 && c == 0.0)
    reject("gen_cmc_control: tau = 0 with c = 0 is excluded (minimal data)");
  FundamentalField d = make_fundamental_field(space, grid);
  d.lambda.values.setConstant(1.0);
  d.u.values.setConstant(0.0);
  d.H.values.setConstant(c);
  d.p.values.setConstant(Complex(-0.5 * c, 0.5 * space.tau));
  d.A.values.setConstant(Complex(0.5, 0.0));
  return d;
}

FundamentalField gen_cmc_zero_q(const SpaceParams& space, double c, const ConformalGrid& grid) {
  FundamentalField d = gen_cmc_control(space, c, grid);
  const double k4 = space.kappa - 4.0 * space.tau * space.tau;
  const Complex w(c, space.tau);
  d.p.values.setConstant(k4 * 0.25 / (2.0 * w));
  return d;
}

double solve_implicit_H(const ScalarCurve& g, const ScalarCurve& f, double s, double t,
                        double lo, double hi, double tol, int max_iter) {
  if (!(lo < hi)) throw std::invalid_argument("solve_implicit_H: empty bracket");
  auto F = [&](double H) {
    const auto [gv, gs] = g(H);
    const auto [fv, fs] = f(H);
    return std::pair<double, double>(s + t * fv - gv, t * fs - gs);
  };
  double Flo = F(lo).first, Fhi = F(hi).first;
  if (Flo == 0.0) return lo;
  if (Fhi == 0.0) return hi;
  if ((Flo > 0.0) == (Fhi > 0.0))
    throw std::domain_error("solve_implicit_H: no sign change over the bracket");

  double x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const auto [Fx, dFx] = F(x);
    if (std::abs(Fx) <= tol) return x;
    if ((Fx > 0.0) == (Fhi > 0.0)) {
      hi = x;
      Fhi = Fx;
    } else {
      lo = x;
      Flo = Fx;
    }
    double next = dFx != 0.0 ? x - Fx / dFx : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection safeguard
    x = next;
  }
  throw std::runtime_error("solve_implicit_H: max iterations without convergence");
}

}  // namespace homsurf
