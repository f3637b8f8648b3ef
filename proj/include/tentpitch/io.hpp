#pragma once

#include "tentpitch/ground_mesh.hpp"
#include "tentpitch/pitcher.hpp"
#include "tentpitch/spacetime.hpp"
#include "tentpitch/verifier.hpp"

#include <optional>
#include <string>
#include <utility>

namespace tentpitch {

enum class MeshFormat { TriangleNodeEle, JsonMesh };

/// "triangle" / "node" / "ele" or "json". Throws ConfigError otherwise.
MeshFormat parse_format_name(const std::string& name);
/// Inferred from the extension (.node, .ele, .json). Throws ConfigError.
MeshFormat format_from_path(const std::string& path);

/// Triangle-style .node/.ele pair. Indexing base follows the first vertex
/// number in the .node file; the first element attribute, if any, is read as
/// the wave speed. Errors carry line numbers.
RawMesh parse_triangle(const std::string& node_text, const std::string& ele_text);
std::pair<std::string, std::string> write_triangle(const RawMesh& raw);

/// {dim, vertices, elements, speeds?, initial_times?}. Errors name the JSON path.
RawMesh parse_json_mesh(const std::string& text);
std::string write_json_mesh(const RawMesh& raw);

RawMesh to_raw(const GroundMesh& mesh);

/// Reads a ground mesh file. For the triangle format, `path` may name either
/// the .node or the .ele file, or their common stem.
RawMesh read_mesh_file(const std::string& path, std::optional<MeshFormat> format = std::nullopt);

struct StoredSpaceTimeMesh {
  SpaceTimeMesh mesh;
  double target_time = 0.0;
  double epsilon = 0.0;
};

std::string write_spacetime_json(const SpaceTimeMesh& mesh, double target_time, double epsilon);
StoredSpaceTimeMesh parse_spacetime_json(const std::string& text);

std::string write_trace_json(const RunTrace& trace);
RunTrace parse_trace_json(const std::string& text);

std::string write_stats_json(const MeshStats& stats);
std::string write_report_json(const VerifyReport& report);

/// Legacy ASCII VTK unstructured grid: triangles for d = 1, tetrahedra for
/// d = 2, with patch id and duration as cell data. UnsupportedError for d = 3.
std::string write_vtk(const SpaceTimeMesh& mesh);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace tentpitch
