#pragma once

#include <string>

#include "json.hpp"

#include "homsurf/differentials.hpp"
#include "homsurf/fundamental.hpp"
#include "homsurf/reconstruction.hpp"

namespace homsurf {

using Json = nlohmann::json;

// Every file this library writes carries the same schema tag.
inline constexpr const char* kSchemaTag = "homsurf/1";

Json space_to_json(const SpaceParams& space);
SpaceParams space_from_json(const Json& j);

Json grid_to_json(const ConformalGrid& grid);
ConformalGrid grid_from_json(const Json& j);

// Scalar fields: {"grid": {...}, "values": [...]} row-major (i * nt + j).
// Complex values are [re, im] pairs, real values bare floats.
Json field_to_json(const RealField& f);
Json field_to_json(const ComplexField& f);
RealField real_field_from_json(const Json& j);
ComplexField complex_field_from_json(const Json& j);

// CSV with one row per node: s, t, re, im (im = 0 for real fields).
void write_field_csv(const RealField& f, std::ostream& out);
void write_field_csv(const ComplexField& f, std::ostream& out);

Json fundamental_to_json(const FundamentalField& data);
FundamentalField fundamental_from_json(const Json& j);

Json report_to_json(const ResidualReport& report);
Json structure_to_json(const StructureResiduals& res);
Json feasibility_to_json(const FeasibilityVerdict& verdict);
Json audit_to_json(const ZeroQCmcAudit& audit);
Json reconstruction_report_to_json(const ReconstructionReport& report);

// Mesh JSON stores grid, points, normals and the full frames; parsing it
// back reproduces every coordinate bit-exactly.
Json mesh_to_json(const SurfaceMesh& mesh);
SurfaceMesh mesh_from_json(const Json& j);

// Wavefront OBJ: "v x y z" per node in chart coordinates, "vn" normals,
// grid quads split into two triangles, 17 significant digits.
void write_mesh_obj(const SurfaceMesh& mesh, std::ostream& out);
// CSV: header s,t,x,y,z,nx,ny,nz then one row per node.
void write_mesh_csv(const SurfaceMesh& mesh, std::ostream& out);

// Dispatch on the path's extension: .obj, .csv or .json.
void export_mesh(const SurfaceMesh& mesh, const std::string& path);
SurfaceMesh import_mesh(const std::string& path);

Json load_json_file(const std::string& path);
void write_json_file(const Json& j, const std::string& path);

}  // namespace homsurf
