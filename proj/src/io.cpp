#include "homsurf/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <type_traits>

namespace homsurf {

namespace {

// Fixed 17-significant-digit formatting for text exports; round-trips every
// finite double bit-exactly.
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json complex_to_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument(std::string(what) + ": complex entries must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json vec3_to_json(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec3_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 3)
    throw std::invalid_argument(std::string(what) + ": vectors must be [x, y, z] triples");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

double require_number(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw std::invalid_argument(std::string("missing or non-numeric field \"") + key + "\"");
  return j[key].get<double>();
}

int require_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw std::invalid_argument(std::string("missing or non-integer field \"") + key + "\"");
  return j[key].get<int>();
}

const Json& require_key(const Json& j, const char* key) {
  if (!j.contains(key))
    throw std::invalid_argument(std::string("missing field \"") + key + "\"");
  return j[key];
}

template <typename T, typename Reader>
void read_values(ScalarField<T>& f, const Json& arr, const char* what, Reader reader) {
  const long n = static_cast<long>(f.grid.ns) * f.grid.nt;
  if (!arr.is_array() || static_cast<long>(arr.size()) != n) {
    std::ostringstream os;
    os << what << ": expected " << n << " values (row-major ns*nt), got "
       << (arr.is_array() ? arr.size() : 0);
    throw std::invalid_argument(os.str());
  }
  for (int i = 0; i < f.grid.ns; ++i)
    for (int j = 0; j < f.grid.nt; ++j) f.at(i, j) = reader(arr[i * f.grid.nt + j]);
}

}  // namespace

Json space_to_json(const SpaceParams& space) {
  return Json{{"kappa", space.kappa}, {"tau", space.tau}};
}

SpaceParams space_from_json(const Json& j) {
  return SpaceParams(require_number(j, "kappa"), require_number(j, "tau"));
}

Json grid_to_json(const ConformalGrid& grid) {
  return Json{{"s0", grid.s0}, {"t0", grid.t0}, {"ds", grid.ds},
              {"dt", grid.dt}, {"ns", grid.ns}, {"nt", grid.nt}};
}

ConformalGrid grid_from_json(const Json& j) {
  ConformalGrid g;
  g.s0 = require_number(j, "s0");
  g.t0 = require_number(j, "t0");
  g.ds = require_number(j, "ds");
  g.dt = require_number(j, "dt");
  g.ns = require_int(j, "ns");
  g.nt = require_int(j, "nt");
  if (!(g.ds > 0.0) || !(g.dt > 0.0))
    throw std::invalid_argument("grid: steps ds, dt must be positive");
  if (g.ns < 2 || g.nt < 2) throw std::invalid_argument("grid: need at least 2 nodes per side");
  return g;
}

namespace {

template <typename T>
Json field_to_json_impl(const ScalarField<T>& f) {
  Json values = Json::array();
  for (int i = 0; i < f.grid.ns; ++i)
    for (int j = 0; j < f.grid.nt; ++j) {
      if constexpr (std::is_same_v<T, Complex>)
        values.push_back(complex_to_json(f.at(i, j)));
      else
        values.push_back(f.at(i, j));
    }
  return Json{{"grid", grid_to_json(f.grid)}, {"values", std::move(values)},
              {"border", f.border}};
}

}  // namespace

Json field_to_json(const RealField& f) { return field_to_json_impl(f); }
Json field_to_json(const ComplexField& f) { return field_to_json_impl(f); }

RealField real_field_from_json(const Json& j) {
  RealField f(grid_from_json(require_key(j, "grid")));
  f.border = j.value("border", 0);
  read_values(f, require_key(j, "values"), "field values",
              [](const Json& v) { return v.get<double>(); });
  return f;
}

ComplexField complex_field_from_json(const Json& j) {
  ComplexField f(grid_from_json(require_key(j, "grid")));
  f.border = j.value("border", 0);
  read_values(f, require_key(j, "values"), "field values",
              [](const Json& v) { return complex_from_json(v, "field values"); });
  return f;
}

namespace {

template <typename T>
void write_field_csv_impl(const ScalarField<T>& f, std::ostream& out) {
  out << "s,t,re,im\n";
  for (int i = 0; i < f.grid.ns; ++i)
    for (int j = 0; j < f.grid.nt; ++j) {
      double re, im;
      if constexpr (std::is_same_v<T, Complex>) {
        re = f.at(i, j).real();
        im = f.at(i, j).imag();
      } else {
        re = f.at(i, j);
        im = 0.0;
      }
      out << fmt17(f.grid.s_at(i)) << ',' << fmt17(f.grid.t_at(j)) << ',' << fmt17(re) << ','
          << fmt17(im) << '\n';
    }
}

}  // namespace

void write_field_csv(const RealField& f, std::ostream& out) { write_field_csv_impl(f, out); }
void write_field_csv(const ComplexField& f, std::ostream& out) { write_field_csv_impl(f, out); }

Json fundamental_to_json(const FundamentalField& data) {
  auto flat_real = [](const RealField& f) {
    Json arr = Json::array();
    for (int i = 0; i < f.grid.ns; ++i)
      for (int j = 0; j < f.grid.nt; ++j) arr.push_back(f.at(i, j));
    return arr;
  };
  auto flat_complex = [](const ComplexField& f) {
    Json arr = Json::array();
    for (int i = 0; i < f.grid.ns; ++i)
      for (int j = 0; j < f.grid.nt; ++j) arr.push_back(complex_to_json(f.at(i, j)));
    return arr;
  };
  return Json{{"schema", kSchemaTag},
              {"space", space_to_json(data.space)},
              {"grid", grid_to_json(data.grid)},
              {"lambda", flat_real(data.lambda)},
              {"u", flat_real(data.u)},
              {"H", flat_real(data.H)},
              {"p", flat_complex(data.p)},
              {"A", flat_complex(data.A)}};
}

FundamentalField fundamental_from_json(const Json& j) {
  const SpaceParams space = space_from_json(require_key(j, "space"));
  const ConformalGrid lenient = grid_from_json(require_key(j, "grid"));
  // Fundamental data need interior room; the checked constructor enforces it.
  const ConformalGrid grid(lenient.s0, lenient.t0, lenient.ds, lenient.dt, lenient.ns,
                           lenient.nt);
  FundamentalField data = make_fundamental_field(space, grid);
  read_values(data.lambda, require_key(j, "lambda"), "lambda",
              [](const Json& v) { return v.get<double>(); });
  read_values(data.u, require_key(j, "u"), "u", [](const Json& v) { return v.get<double>(); });
  read_values(data.H, require_key(j, "H"), "H", [](const Json& v) { return v.get<double>(); });
  read_values(data.p, require_key(j, "p"), "p",
              [](const Json& v) { return complex_from_json(v, "p"); });
  read_values(data.A, require_key(j, "A"), "A",
              [](const Json& v) { return complex_from_json(v, "A"); });
  return data;
}

Json report_to_json(const ResidualReport& report) {
  Json entries = Json::array();
  for (const auto& e : report.entries)
    entries.push_back(Json{{"name", e.name},
                           {"max", e.norm.max},
                           {"l2", e.norm.l2},
                           {"tolerance", e.tolerance},
                           {"pass", e.pass}});
  return Json{{"schema", kSchemaTag},
              {"h", report.h},
              {"M", report.M},
              {"pass", report.pass},
              {"entries", std::move(entries)}};
}

Json structure_to_json(const StructureResiduals& res) {
  Json entries = Json::array();
  for (const auto& e : res.entries)
    entries.push_back(Json{{"name", e.name}, {"max", e.norm.max}, {"l2", e.norm.l2}});
  return Json{{"schema", kSchemaTag},
              {"entries", std::move(entries)},
              {"excluded_nodes", res.excluded_nodes}};
}

Json feasibility_to_json(const FeasibilityVerdict& verdict) {
  Json j{{"schema", kSchemaTag},
         {"tag", feasibility_tag_name(verdict.tag)},
         {"citation", verdict.citation}};
  if (verdict.allowed_H_interval)
    j["allowed_H_interval"] =
        Json::array({verdict.allowed_H_interval->first, verdict.allowed_H_interval->second});
  else
    j["allowed_H_interval"] = nullptr;
  return j;
}

Json audit_to_json(const ZeroQCmcAudit& audit) {
  const char* status = audit.status == ZeroQCmcAudit::Status::Pass       ? "Pass"
                       : audit.status == ZeroQCmcAudit::Status::QNotSmall ? "QNotSmall"
                                                                          : "Fail";
  return Json{{"schema", kSchemaTag},
              {"status", status},
              {"max_abs_Q", audit.max_abs_Q},
              {"h_spread", audit.h_spread},
              {"spread_bound", audit.spread_bound},
              {"residuals", report_to_json(audit.residuals)}};
}

Json reconstruction_report_to_json(const ReconstructionReport& report) {
  Json j{{"schema", kSchemaTag},
         {"metric_rel_dev", report.metric_rel_dev},
         {"u_dev", report.u_dev},
         {"A_dev", report.A_dev},
         {"worst", report.worst()}};
  if (report.hz_dev)
    j["hz_dev"] = *report.hz_dev;
  else
    j["hz_dev"] = nullptr;
  return j;
}

Json mesh_to_json(const SurfaceMesh& mesh) {
  Json points = Json::array(), normals = Json::array();
  Json e1 = Json::array(), e2 = Json::array();
  for (size_t k = 0; k < mesh.points.size(); ++k) {
    points.push_back(vec3_to_json(mesh.points[k]));
    normals.push_back(vec3_to_json(mesh.normals[k]));
    e1.push_back(vec3_to_json(mesh.frames[k].E1));
    e2.push_back(vec3_to_json(mesh.frames[k].E2));
  }
  return Json{{"schema", kSchemaTag},
              {"grid", grid_to_json(mesh.grid)},
              {"points", std::move(points)},
              {"normals", std::move(normals)},
              {"E1", std::move(e1)},
              {"E2", std::move(e2)},
              {"log", mesh.log}};
}

SurfaceMesh mesh_from_json(const Json& j) {
  SurfaceMesh mesh;
  mesh.grid = grid_from_json(require_key(j, "grid"));
  const long n = static_cast<long>(mesh.grid.ns) * mesh.grid.nt;
  const Json& points = require_key(j, "points");
  const Json& normals = require_key(j, "normals");
  const Json& e1 = require_key(j, "E1");
  const Json& e2 = require_key(j, "E2");
  if (static_cast<long>(points.size()) != n || static_cast<long>(normals.size()) != n ||
      static_cast<long>(e1.size()) != n || static_cast<long>(e2.size()) != n)
    throw std::invalid_argument("mesh: points/normals/E1/E2 must each hold ns*nt entries");
  mesh.points.resize(n);
  mesh.normals.resize(n);
  mesh.frames.resize(n);
  for (long k = 0; k < n; ++k) {
    mesh.points[k] = vec3_from_json(points[k], "mesh points");
    mesh.normals[k] = vec3_from_json(normals[k], "mesh normals");
    mesh.frames[k].point = mesh.points[k];
    mesh.frames[k].E1 = vec3_from_json(e1[k], "mesh E1");
    mesh.frames[k].E2 = vec3_from_json(e2[k], "mesh E2");
    mesh.frames[k].N = mesh.normals[k];
  }
  if (j.contains("log")) mesh.log = j["log"].get<std::vector<std::string>>();
  return mesh;
}

void write_mesh_obj(const SurfaceMesh& mesh, std::ostream& out) {
  const int ns = mesh.grid.ns, nt = mesh.grid.nt;
  for (const auto& p : mesh.points)
    out << "v " << fmt17(p.x()) << ' ' << fmt17(p.y()) << ' ' << fmt17(p.z()) << '\n';
  for (const auto& nv : mesh.normals)
    out << "vn " << fmt17(nv.x()) << ' ' << fmt17(nv.y()) << ' ' << fmt17(nv.z()) << '\n';
  // Quad (i,j)-(i+1,j)-(i+1,j+1)-(i,j+1) split along its first diagonal.
  for (int i = 0; i + 1 < ns; ++i)
    for (int j = 0; j + 1 < nt; ++j) {
      const int a = mesh.idx(i, j) + 1;
      const int b = mesh.idx(i + 1, j) + 1;
      const int c = mesh.idx(i + 1, j + 1) + 1;
      const int d = mesh.idx(i, j + 1) + 1;
      out << "f " << a << "//" << a << ' ' << b << "//" << b << ' ' << c << "//" << c << '\n';
      out << "f " << a << "//" << a << ' ' << c << "//" << c << ' ' << d << "//" << d << '\n';
    }
}

void write_mesh_csv(const SurfaceMesh& mesh, std::ostream& out) {
  out << "s,t,x,y,z,nx,ny,nz\n";
  for (int i = 0; i < mesh.grid.ns; ++i)
    for (int j = 0; j < mesh.grid.nt; ++j) {
      const auto& p = mesh.points[mesh.idx(i, j)];
      const auto& nv = mesh.normals[mesh.idx(i, j)];
      out << fmt17(mesh.grid.s_at(i)) << ',' << fmt17(mesh.grid.t_at(j)) << ',' << fmt17(p.x())
          << ',' << fmt17(p.y()) << ',' << fmt17(p.z()) << ',' << fmt17(nv.x()) << ','
          << fmt17(nv.y()) << ',' << fmt17(nv.z()) << '\n';
    }
}

namespace {

std::string lower_ext(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  return out;
}

}  // namespace

void export_mesh(const SurfaceMesh& mesh, const std::string& path) {
  const std::string ext = lower_ext(path);
  if (ext == "obj") {
    auto out = open_out(path);
    write_mesh_obj(mesh, out);
  } else if (ext == "csv") {
    auto out = open_out(path);
    write_mesh_csv(mesh, out);
  } else if (ext == "json") {
    write_json_file(mesh_to_json(mesh), path);
  } else {
    throw std::invalid_argument("export_mesh: unsupported extension \"" + ext +
                                "\" (use obj, csv or json)");
  }
}

SurfaceMesh import_mesh(const std::string& path) {
  if (lower_ext(path) != "json")
    throw std::invalid_argument("import_mesh: only JSON meshes can be re-imported");
  return mesh_from_json(load_json_file(path));
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
}

void write_json_file(const Json& j, const std::string& path) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace homsurf
