#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string binary() {
  const char* env = std::getenv("HOMSURF_BIN");
  REQUIRE(env != nullptr);
  return env;
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "homsurf_cli_test";
  fs::create_directories(dir);
  return dir;
}

// Runs the CLI with stdout captured into `out`; returns the exit status.
int run(const std::string& args, std::string* out = nullptr) {
  const fs::path capture = work_dir() / "stdout.txt";
  const std::string cmd = binary() + " " + args + " > " + capture.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  REQUIRE(raw != -1);
  if (out) {
    std::ifstream in(capture);
    std::ostringstream ss;
    ss << in.rdbuf();
    *out = ss.str();
  }
  return WEXITSTATUS(raw);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kGrid21 = R"('{"s0":-0.1,"t0":-0.1,"ds":0.01,"dt":0.01,"ns":21,"nt":21}')";

}  // namespace

TEST_CASE("gen + check pipeline: generated data pass, output is deterministic") {
  const fs::path dir = work_dir();
  const fs::path a = dir / "cmc_a.json", b = dir / "cmc_b.json";
  const std::string params = R"('{"kappa":-1,"tau":-0.3,"c":0.4}')";

  CHECK(run("gen --family cmc --params " + params + " --grid " + kGrid21 + " --out " +
            a.string()) == 0);
  CHECK(run("gen --family cmc --params " + params + " --grid " + kGrid21 + " --out " +
            b.string()) == 0);
  CHECK(slurp(a) == slurp(b));

  std::string out;
  CHECK(run("check --data " + a.string(), &out) == 0);
  CHECK(out.find("pass") != std::string::npos);

  CHECK(run("check --data " + a.string() + " --differentials --flip-orientation") == 0);
}

TEST_CASE("check flags faulted data with exit 1 and a report naming the equations") {
  const fs::path dir = work_dir();
  const fs::path clean = dir / "clean.json", faulted = dir / "faulted.json";
  const fs::path report = dir / "report.json";
  CHECK(run("gen --family ex32 --params '{}' --grid "
            R"('{"s0":-0.2,"t0":-0.2,"ds":0.002,"dt":0.002,"ns":201,"nt":201}')"
            " --out " + clean.string()) == 0);

  json data = json::parse(slurp(clean));
  auto& values = data["u"];
  values[100 * 201 + 100] = values[100 * 201 + 100].get<double>() + 0.05;
  std::ofstream(faulted) << data.dump(2) << "\n";

  CHECK(run("check --data " + faulted.string() + " --report " + report.string()) == 1);
  const json rep = json::parse(slurp(report));
  CHECK(rep.at("pass").get<bool>() == false);
  bool c3_failed = false, c4_failed = false;
  for (const auto& entry : rep.at("entries")) {
    if (entry.at("name") == "C3" && !entry.at("pass").get<bool>()) c3_failed = true;
    if (entry.at("name") == "C4" && !entry.at("pass").get<bool>()) c4_failed = true;
  }
  CHECK(c3_failed);
  CHECK(c4_failed);
}

// P = (H + i tau) Q is holomorphic iff H is constant. On the rotational family
// H varies while Q stays 1, so with --differentials the P entry alone must
// fail; the integrability suite and both Q entries still pass.
TEST_CASE("check --differentials flags nonconstant H through P alone") {
  const fs::path dir = work_dir();
  const fs::path data = dir / "noncmc.json", report = dir / "noncmc_report.json";
  CHECK(run("gen --family ex32 --params '{}' --grid "
            R"('{"s0":-0.2,"t0":-0.2,"ds":0.002,"dt":0.002,"ns":201,"nt":201}')"
            " --out " + data.string()) == 0);

  CHECK(run("check --data " + data.string() + " --differentials --report " +
            report.string()) == 1);
  const json rep = json::parse(slurp(report));
  CHECK(rep.at("pass").get<bool>() == false);
  for (const auto& entry : rep.at("entries")) {
    const bool is_P = entry.at("name") == "P_holomorphy";
    CHECK(entry.at("pass").get<bool>() == !is_P);
  }
  bool saw_P = false, saw_Q = false, saw_codazzi = false;
  for (const auto& entry : rep.at("entries")) {
    if (entry.at("name") == "P_holomorphy") saw_P = true;
    if (entry.at("name") == "Q_holomorphy") saw_Q = true;
    if (entry.at("name") == "Q_codazzi") saw_codazzi = true;
  }
  CHECK(saw_P);
  CHECK(saw_Q);
  CHECK(saw_codazzi);
}

TEST_CASE("feasibility audit prints the verdict and always exits 0") {
  std::string out;
  CHECK(run("audit --kappa 8 --tau 1", &out) == 0);
  CHECK(out.find("CMCOnly") != std::string::npos);

  CHECK(run("audit --kappa -1 --tau 0.5", &out) == 0);
  CHECK(out.find("NonCMCExists") != std::string::npos);
  CHECK(out.find("0.5") != std::string::npos);  // |H| <= sqrt(-kappa)/2

  CHECK(run("audit --kappa 9 --tau 1", &out) == 0);
  CHECK(out.find("Unknown") != std::string::npos);
}

TEST_CASE("zero-Q audit distinguishes genuine and spurious candidates") {
  const fs::path dir = work_dir();
  const fs::path zq = dir / "zero_q.json", ctl = dir / "control.json";
  CHECK(run(R"(gen --family cmc --params '{"kappa":-1,"tau":-0.3,"c":0.5,"zero_q":true}' --grid )" +
            kGrid21 + " --out " + zq.string()) == 0);
  std::string out;
  CHECK(run("audit --data " + zq.string(), &out) == 0);
  CHECK(out.find("Pass") != std::string::npos);

  CHECK(run(R"(gen --family cmc --params '{"kappa":-1,"tau":-0.3,"c":0.3}' --grid )" + kGrid21 +
            " --out " + ctl.string()) == 0);
  CHECK(run("audit --data " + ctl.string(), &out) == 1);
  CHECK(out.find("QNotSmall") != std::string::npos);
}

TEST_CASE("reconstruct with verification, then re-export the stored mesh") {
  const fs::path dir = work_dir();
  const fs::path data = dir / "rec_data.json";
  const fs::path mesh_json = dir / "mesh.json", mesh_obj = dir / "mesh.obj";
  CHECK(run(R"(gen --family cmc --params '{"kappa":-1,"tau":0,"c":0.3}' --grid )" + kGrid21 +
            " --out " + data.string()) == 0);

  std::string out;
  CHECK(run("reconstruct --data " + data.string() + " --out " + mesh_json.string() +
            " --verify --verify-tol 1e-3", &out) == 0);
  CHECK(out.find("verification pass") != std::string::npos);
  CHECK(out.find("path independence") != std::string::npos);

  CHECK(run("export --mesh " + mesh_json.string() + " --out " + mesh_obj.string()) == 0);
  const std::string obj = slurp(mesh_obj);
  CHECK(obj.find("v ") != std::string::npos);
  CHECK(obj.find("f ") != std::string::npos);
}

TEST_CASE("input errors exit with code 2") {
  const fs::path dir = work_dir();
  // Degenerate family parameters.
  CHECK(run(R"(gen --family ex31 --params '{"a":0}' --grid )" + kGrid21 + " --out " +
            (dir / "bad.json").string()) == 2);
  // kappa = 4 tau^2 is outside every space family here.
  CHECK(run(R"(gen --family cmc --params '{"kappa":1,"tau":0.5,"c":0.3}' --grid )" + kGrid21 +
            " --out " + (dir / "bad.json").string()) == 2);
  // Missing file.
  CHECK(run("check --data " + (dir / "no_such_file.json").string()) == 2);
  // Unknown subcommand and missing required options are parse errors.
  CHECK(run("frobnicate") == 2);
  CHECK(run("gen --family cmc") == 2);
  // Help is not an error.
  CHECK(run("--help") == 0);
}
