#include <cstdio>
#include <limits>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "homsurf/differentials.hpp"
#include "homsurf/examples.hpp"
#include "homsurf/fundamental.hpp"
#include "homsurf/io.hpp"
#include "homsurf/reconstruction.hpp"
#include "homsurf/space.hpp"

namespace {

using homsurf::Json;

constexpr int kExitPass = 0;
constexpr int kExitResidualFail = 1;
constexpr int kExitInputError = 2;

// Arguments documented as <json> accept a file path or an inline object.
Json json_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') {
    try {
      return Json::parse(arg);
    } catch (const Json::parse_error& e) {
      throw std::invalid_argument(std::string("malformed inline JSON: ") + e.what());
    }
  }
  return homsurf::load_json_file(arg);
}

homsurf::ConformalGrid checked_grid(const Json& j) {
  const homsurf::ConformalGrid g = homsurf::grid_from_json(j);
  return homsurf::ConformalGrid(g.s0, g.t0, g.ds, g.dt, g.ns, g.nt);
}

homsurf::ToleranceProfile profile_from_json(const Json& j) {
  homsurf::ToleranceProfile tol;
  tol.algebraic = j.value("algebraic", tol.algebraic);
  tol.first_order_factor = j.value("first_order_factor", tol.first_order_factor);
  tol.second_order_factor = j.value("second_order_factor", tol.second_order_factor);
  return tol;
}

homsurf::FundamentalField generate(const std::string& family, const Json& params,
                                   const homsurf::ConformalGrid& grid) {
  if (family == "ex31") {
    homsurf::Example31Params p;
    p.a = params.value("a", p.a);
    p.b = params.value("b", p.b);
    p.kappa = params.value("kappa", p.kappa);
    return homsurf::gen_example31(p, grid);
  }
  if (family == "ex32") {
    homsurf::Example32Params p;
    p.delta = params.value("delta", p.delta);
    p.alpha0 = params.value("alpha0", p.alpha0);
    p.alphaPrime0 = params.value("alphaPrime0", p.alphaPrime0);
    p.step = params.value("step", p.step);
    return homsurf::gen_example32(p, grid);
  }
  if (family == "ex33") {
    homsurf::Example33Params p;
    p.kappa = params.value("kappa", p.kappa);
    p.tau = params.value("tau", p.tau);
    p.branch = params.value("branch", p.branch);
    p.H0 = params.value("H0", p.H0);
    p.g0 = params.value("g0", p.g0);
    p.gPrime0 = params.value("gPrime0", p.gPrime0);
    p.profile_step = params.value("profile_step", p.profile_step);
    p.profile_span = params.value("profile_span", p.profile_span);
    p.newton_max_iter = params.value("newton_max_iter", p.newton_max_iter);
    p.newton_tol = params.value("newton_tol", p.newton_tol);
    return homsurf::gen_example33(p, grid);
  }
  if (family == "cmc") {
    const homsurf::SpaceParams space(params.value("kappa", -1.0), params.value("tau", 0.0));
    const double c = params.value("c", 0.5);
    if (params.value("zero_q", false)) return homsurf::gen_cmc_zero_q(space, c, grid);
    return homsurf::gen_cmc_control(space, c, grid);
  }
  throw std::invalid_argument("unknown family \"" + family +
                              "\" (choose ex31, ex32, ex33 or cmc)");
}

void print_report(const homsurf::ResidualReport& report) {
  for (const auto& e : report.entries)
    std::printf("%-14s max %.3e  rms %.3e  tol %.3e  %s\n", e.name.c_str(), e.norm.max,
                e.norm.l2, e.tolerance, e.pass ? "pass" : "FAIL");
  std::printf("overall: %s  (h = %g, M = %g)\n", report.pass ? "pass" : "FAIL", report.h,
              report.M);
}

homsurf::FrameState seed_from_json(const Json& j) {
  homsurf::FrameState f;
  auto vec = [&](const char* key) {
    const Json& v = j.at(key);
    if (!v.is_array() || v.size() != 3)
      throw std::invalid_argument(std::string("seed: \"") + key + "\" must be [x, y, z]");
    return Eigen::Vector3d(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
  };
  f.point = vec("point");
  f.E1 = vec("E1");
  f.E2 = vec("E2");
  f.N = vec("N");
  return f;
}

int run_gen(const std::string& family, const std::string& params_arg,
            const std::string& grid_arg, const std::string& out, bool flip) {
  const Json params = params_arg.empty() ? Json::object() : json_arg(params_arg);
  const homsurf::ConformalGrid grid = checked_grid(json_arg(grid_arg));
  homsurf::FundamentalField data = [&] {
    try {
      return generate(family, params, grid);
    } catch (const std::runtime_error& e) {
      // Generator blowups are parameter problems, not residual failures.
      throw std::invalid_argument(e.what());
    }
  }();
  if (flip) data = homsurf::flip_orientation(data);
  homsurf::write_json_file(homsurf::fundamental_to_json(data), out);
  std::printf("wrote %s (%d x %d nodes, kappa = %g, tau = %g)\n", out.c_str(), grid.ns,
              grid.nt, data.space.kappa, data.space.tau);
  return kExitPass;
}

int run_check(const std::string& data_path, const std::string& tol_arg,
              const std::string& report_path, bool differentials, bool flip) {
  homsurf::FundamentalField data = homsurf::fundamental_from_json(json_arg(data_path));
  if (flip) data = homsurf::flip_orientation(data);
  {
    // Structural validity only; algebraic-constraint violations must reach
    // the report (that is what check is for), so the C4 gate is skipped.
    const auto problems =
        homsurf::validate_fundamental(data, std::numeric_limits<double>::infinity());
    if (!problems.empty())
      throw std::invalid_argument("invalid fundamental data: " + problems.front());
  }
  const homsurf::ToleranceProfile tol =
      tol_arg.empty() ? homsurf::ToleranceProfile{} : profile_from_json(json_arg(tol_arg));

  homsurf::ResidualReport report = homsurf::check_all(data, tol);
  if (differentials) {
    const double bound = tol.first_order(report.h, report.M);
    auto add = [&](const char* name, const homsurf::Norm& n) {
      homsurf::ResidualEntry e;
      e.name = name;
      e.norm = n;
      e.tolerance = bound;
      e.pass = n.max <= bound;
      report.entries.push_back(e);
      report.pass = report.pass && e.pass;
    };
    add("Q_holomorphy", homsurf::holomorphy_residual(homsurf::abresch_rosenberg(data)));
    add("P_holomorphy", homsurf::holomorphy_residual(homsurf::ar_P(data)));
    add("Q_codazzi", homsurf::residual_norm(homsurf::codazzi_Q_residual(data)));
  }

  print_report(report);
  if (!report_path.empty()) homsurf::write_json_file(homsurf::report_to_json(report), report_path);
  return report.pass ? kExitPass : kExitResidualFail;
}

int run_audit_space(double kappa, double tau, const std::string& report_path) {
  const homsurf::FeasibilityVerdict v = homsurf::feasibility_audit({kappa, tau});
  std::printf("verdict: %s\n", homsurf::feasibility_tag_name(v.tag));
  if (v.allowed_H_interval)
    std::printf("allowed |H| interval: [%g, %g]\n", v.allowed_H_interval->first,
                v.allowed_H_interval->second);
  std::printf("reason: %s\n", v.citation.c_str());
  if (!report_path.empty())
    homsurf::write_json_file(homsurf::feasibility_to_json(v), report_path);
  return kExitPass;
}

int run_audit_data(const std::string& data_path, double q_tol, const std::string& report_path,
                   bool flip) {
  homsurf::FundamentalField data = homsurf::fundamental_from_json(json_arg(data_path));
  if (flip) data = homsurf::flip_orientation(data);
  const homsurf::ZeroQCmcAudit audit = homsurf::zero_Q_cmc_audit(data, q_tol);
  const char* status = audit.status == homsurf::ZeroQCmcAudit::Status::Pass ? "Pass"
                       : audit.status == homsurf::ZeroQCmcAudit::Status::QNotSmall
                           ? "QNotSmall"
                           : "Fail";
  std::printf("zero-Q audit: %s\n", status);
  std::printf("max |Q| = %.3e (tolerance %.3e)\n", audit.max_abs_Q, q_tol);
  std::printf("H spread = %.3e (allowance %.3e)\n", audit.h_spread, audit.spread_bound);
  if (!report_path.empty()) homsurf::write_json_file(homsurf::audit_to_json(audit), report_path);
  return audit.status == homsurf::ZeroQCmcAudit::Status::Pass ? kExitPass : kExitResidualFail;
}

int run_reconstruct(const std::string& data_path, const std::string& seed_arg, double step,
                    const std::string& out, bool verify, double verify_tol, bool flip) {
  homsurf::FundamentalField data = homsurf::fundamental_from_json(json_arg(data_path));
  if (flip) data = homsurf::flip_orientation(data);
  const homsurf::AmbientChart chart(data.space);

  homsurf::FrameState seed;
  std::string gauge_note;
  if (seed_arg == "default") {
    seed = homsurf::make_default_seed(data, chart, &gauge_note);
  } else {
    seed = seed_from_json(json_arg(seed_arg));
  }

  homsurf::SurfaceMesh mesh = homsurf::integrate_surface(data, chart, seed, step);
  if (!gauge_note.empty()) mesh.log.insert(mesh.log.begin(), gauge_note);
  homsurf::export_mesh(mesh, out);
  std::printf("wrote %s (%d x %d mesh at step %g)\n", out.c_str(), mesh.grid.ns, mesh.grid.nt,
              step);
  for (const auto& line : mesh.log) std::printf("note: %s\n", line.c_str());

  if (verify) {
    const homsurf::ReconstructionReport report = homsurf::verify_reconstruction(mesh, data);
    const homsurf::PathIndependence paths =
        homsurf::path_independence_check(data, chart, seed, step);
    std::printf("metric deviation %.3e, u deviation %.3e, A deviation %.3e\n",
                report.metric_rel_dev, report.u_dev, report.A_dev);
    if (report.hz_dev) std::printf("h_z deviation %.3e\n", *report.hz_dev);
    std::printf("path independence: point %.3e, frame %.3e\n", paths.point_dist,
                paths.frame_dist);
    if (report.worst() > verify_tol) {
      std::printf("verification FAILED (worst %.3e > %.3e)\n", report.worst(), verify_tol);
      return kExitResidualFail;
    }
    std::printf("verification pass (worst %.3e <= %.3e)\n", report.worst(), verify_tol);
  }
  return kExitPass;
}

int run_export(const std::string& mesh_path, const std::string& out) {
  const homsurf::SurfaceMesh mesh = homsurf::import_mesh(mesh_path);
  homsurf::export_mesh(mesh, out);
  std::printf("wrote %s (%d x %d mesh)\n", out.c_str(), mesh.grid.ns, mesh.grid.nt);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "homsurf: fundamental data of surfaces in homogeneous 3-spaces. Generation, residual "
      "checking, feasibility audits, frame-integration reconstruction, mesh export."};
  app.require_subcommand(1);

  // gen
  std::string gen_family, gen_params, gen_grid, gen_out;
  bool gen_flip = false;
  auto* gen = app.add_subcommand("gen", "Generate fundamental data for a built-in family");
  gen->add_option("--family", gen_family, "Family: ex31, ex32, ex33 or cmc")->required();
  gen->add_option("--params", gen_params,
                  "Family parameters, JSON file or inline object (defaults per family)");
  gen->add_option("--grid", gen_grid, "Grid spec {s0,t0,ds,dt,ns,nt}, JSON file or inline")
      ->required();
  gen->add_option("--out", gen_out, "Output field JSON path")->required();
  gen->add_flag("--flip-orientation", gen_flip, "Mirror t and flip (u, H, p, A) accordingly");

  // check
  std::string check_data, check_tol, check_report;
  bool check_diff = false, check_flip = false;
  auto* check = app.add_subcommand("check", "Run the integrability residual suite on a field");
  check->add_option("--data", check_data, "Field JSON path")->required();
  check->add_option("--tol-profile", check_tol,
                    "Tolerance profile JSON {algebraic, first_order_factor, "
                    "second_order_factor}");
  check->add_option("--report", check_report, "Write the residual report JSON here");
  check->add_flag("--differentials", check_diff,
                  "Also check holomorphy of the Q and P differentials");
  check->add_flag("--flip-orientation", check_flip,
                  "Check the orientation-flipped data instead");

  // audit
  std::optional<double> audit_kappa, audit_tau;
  std::string audit_data, audit_report;
  double audit_qtol = 1e-8;
  bool audit_flip = false;
  auto* audit = app.add_subcommand(
      "audit", "Feasibility verdict for a space (--kappa/--tau) or zero-Q CMC audit (--data)");
  audit->add_option("--kappa", audit_kappa, "Base curvature kappa");
  audit->add_option("--tau", audit_tau, "Bundle curvature tau");
  audit->add_option("--data", audit_data, "Field JSON path for the zero-Q audit");
  audit->add_option("--q-tol", audit_qtol, "Zero-Q audit: bound on max |Q| (default 1e-8)");
  audit->add_option("--report", audit_report, "Write the verdict JSON here");
  audit->add_flag("--flip-orientation", audit_flip, "Audit the orientation-flipped data");

  // reconstruct
  std::string rec_data, rec_seed = "default", rec_out;
  double rec_step = 1e-2, rec_vtol = 1e-3;
  bool rec_verify = false, rec_flip = false;
  auto* rec = app.add_subcommand("reconstruct",
                                 "Integrate the moving frame and export the surface mesh");
  rec->add_option("--data", rec_data, "Field JSON path")->required();
  rec->add_option("--seed", rec_seed,
                  "\"default\" or seed JSON {point, E1, E2, N} (file or inline)");
  rec->add_option("--step", rec_step, "Mesh step (default 1e-2)");
  rec->add_option("--out", rec_out, "Output mesh path (.obj, .csv or .json)")->required();
  rec->add_flag("--verify", rec_verify,
                "Check the round trip (metric, u, A, h_z, path independence)");
  rec->add_option("--verify-tol", rec_vtol,
                  "Round-trip deviation bound for --verify (default 1e-3)");
  rec->add_flag("--flip-orientation", rec_flip, "Reconstruct the orientation-flipped data");

  // export
  std::string exp_mesh, exp_out;
  auto* exp = app.add_subcommand("export", "Re-export a stored mesh JSON as OBJ, CSV or JSON");
  exp->add_option("--mesh", exp_mesh, "Mesh JSON path")->required();
  exp->add_option("--out", exp_out, "Output mesh path (.obj, .csv or .json)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (gen->parsed()) return run_gen(gen_family, gen_params, gen_grid, gen_out, gen_flip);
    if (check->parsed())
      return run_check(check_data, check_tol, check_report, check_diff, check_flip);
    if (audit->parsed()) {
      if (!audit_data.empty()) return run_audit_data(audit_data, audit_qtol, audit_report, audit_flip);
      if (audit_kappa && audit_tau)
        return run_audit_space(*audit_kappa, *audit_tau, audit_report);
      throw std::invalid_argument("audit needs either --data or both --kappa and --tau");
    }
    if (rec->parsed())
      return run_reconstruct(rec_data, rec_seed, rec_step, rec_out, rec_verify, rec_vtol,
                             rec_flip);
    if (exp->parsed()) return run_export(exp_mesh, exp_out);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  } catch (const std::runtime_error& e) {
    // Integration aborts signal inconsistent data; file problems say so in
    // the message either way.
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitResidualFail;
  }
  return kExitInputError;
}
