#include "tentpitch/io.hpp"

#include "tentpitch/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace tentpitch {

using nlohmann::json;

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string lower_extension(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return {};
  std::string ext = path.substr(dot + 1);
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

// Non-empty, comment-stripped lines split into tokens, with their line numbers.
struct TokenLine {
  long number = 0;
  std::vector<std::string> tokens;
};

std::vector<TokenLine> tokenize(const std::string& text) {
  std::vector<TokenLine> out;
  std::istringstream in(text);
  std::string line;
  long number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    TokenLine tl{number, {}};
    for (std::string w; words >> w;) tl.tokens.push_back(w);
    if (!tl.tokens.empty()) out.push_back(std::move(tl));
  }
  return out;
}

double to_double(const std::string& s, long line, const char* file) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
    throw ParseError(std::string(file) + ": '" + s + "' is not a finite number", line);
  return v;
}

std::int64_t to_int(const std::string& s, long line, const char* file) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError(std::string(file) + ": '" + s + "' is not an integer", line);
  return v;
}

long end_line(const std::string& text) {
  return static_cast<long>(std::count(text.begin(), text.end(), '\n')) + 1;
}

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ParseError((path.empty() ? std::string("/") : path) + ": " + what, 0);
}

const json& member(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(path + "/" + key, "missing");
  return *it;
}

const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array");
  return j;
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(path, "expected a finite number");
  return v;
}

std::int64_t integer_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::vector<double> numbers_at(const json& j, const std::string& path) {
  array_at(j, path);
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_at(j[i], path + "/" + std::to_string(i)));
  return out;
}

Index index_at(const json& j, const std::string& path) {
  const auto v = integer_at(j, path);
  if (v < kNone || v > std::numeric_limits<Index>::max()) schema_error(path, "index out of range");
  return static_cast<Index>(v);
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("invalid JSON: ") + err.what(), 0);
  }
}

}  // namespace

MeshFormat parse_format_name(const std::string& name) {
  if (name == "triangle" || name == "node" || name == "ele") return MeshFormat::TriangleNodeEle;
  if (name == "json") return MeshFormat::JsonMesh;
  throw ConfigError("unknown mesh format '" + name + "' (expected triangle or json)");
}

MeshFormat format_from_path(const std::string& path) {
  const std::string ext = lower_extension(path);
  if (ext == "node" || ext == "ele") return MeshFormat::TriangleNodeEle;
  if (ext == "json") return MeshFormat::JsonMesh;
  throw ConfigError("cannot infer the mesh format of '" + path + "'; pass --format");
}

RawMesh parse_triangle(const std::string& node_text, const std::string& ele_text) {
  RawMesh raw;
  raw.dim = 2;
  const auto nodes = tokenize(node_text);
  if (nodes.empty()) throw ParseError(".node: missing header", end_line(node_text));
  const auto& nh = nodes[0];
  const std::int64_t nv = to_int(nh.tokens[0], nh.number, ".node");
  const std::int64_t dim = nh.tokens.size() > 1 ? to_int(nh.tokens[1], nh.number, ".node") : 2;
  const std::int64_t nattr = nh.tokens.size() > 2 ? to_int(nh.tokens[2], nh.number, ".node") : 0;
  const std::int64_t nmark = nh.tokens.size() > 3 ? to_int(nh.tokens[3], nh.number, ".node") : 0;
  if (nv < 0 || dim != 2 || nattr < 0 || nmark < 0 || nmark > 1)
    throw ParseError(".node: header must read '<vertices> 2 <attributes> <0|1>'", nh.number);
  if (static_cast<std::int64_t>(nodes.size()) - 1 < nv)
    throw ParseError(".node: header declares " + std::to_string(nv) + " vertices but the file ends after " +
                         std::to_string(nodes.size() - 1),
                     end_line(node_text));
  if (static_cast<std::int64_t>(nodes.size()) - 1 > nv)
    throw ParseError(".node: more vertex lines than the header declares", nodes[static_cast<std::size_t>(nv) + 1].number);
  std::int64_t base = 0;
  for (std::int64_t i = 0; i < nv; ++i) {
    const auto& l = nodes[static_cast<std::size_t>(i) + 1];
    if (static_cast<std::int64_t>(l.tokens.size()) != 3 + nattr + nmark)
      throw ParseError(".node: expected " + std::to_string(3 + nattr + nmark) + " fields, found " +
                           std::to_string(l.tokens.size()),
                       l.number);
    const std::int64_t id = to_int(l.tokens[0], l.number, ".node");
    if (i == 0) {
      if (id != 0 && id != 1) throw ParseError(".node: first vertex must be numbered 0 or 1", l.number);
      base = id;
    } else if (id != base + i) {
      throw ParseError(".node: vertex numbers must be consecutive", l.number);
    }
    raw.vertices.push_back({to_double(l.tokens[1], l.number, ".node"), to_double(l.tokens[2], l.number, ".node")});
  }

  const auto eles = tokenize(ele_text);
  if (eles.empty()) throw ParseError(".ele: missing header", end_line(ele_text));
  const auto& eh = eles[0];
  const std::int64_t ne = to_int(eh.tokens[0], eh.number, ".ele");
  const std::int64_t per = eh.tokens.size() > 1 ? to_int(eh.tokens[1], eh.number, ".ele") : 3;
  const std::int64_t eattr = eh.tokens.size() > 2 ? to_int(eh.tokens[2], eh.number, ".ele") : 0;
  if (ne < 0 || per != 3 || eattr < 0)
    throw ParseError(".ele: header must read '<triangles> 3 <attributes>'", eh.number);
  if (static_cast<std::int64_t>(eles.size()) - 1 < ne)
    throw ParseError(".ele: header declares " + std::to_string(ne) + " triangles but the file ends after " +
                         std::to_string(eles.size() - 1),
                     end_line(ele_text));
  if (static_cast<std::int64_t>(eles.size()) - 1 > ne)
    throw ParseError(".ele: more triangle lines than the header declares", eles[static_cast<std::size_t>(ne) + 1].number);
  for (std::int64_t i = 0; i < ne; ++i) {
    const auto& l = eles[static_cast<std::size_t>(i) + 1];
    if (static_cast<std::int64_t>(l.tokens.size()) != 4 + eattr)
      throw ParseError(".ele: expected " + std::to_string(4 + eattr) + " fields, found " + std::to_string(l.tokens.size()),
                       l.number);
    std::vector<std::int64_t> tri;
    for (int k = 1; k <= 3; ++k) {
      const std::int64_t v = to_int(l.tokens[static_cast<std::size_t>(k)], l.number, ".ele") - base;
      if (v < 0 || v >= nv)
        throw ParseError(".ele: vertex " + l.tokens[static_cast<std::size_t>(k)] + " out of range", l.number);
      tri.push_back(v);
    }
    raw.elements.push_back(std::move(tri));
    if (eattr > 0) raw.speeds.push_back(to_double(l.tokens[4], l.number, ".ele"));
  }
  return raw;
}

std::pair<std::string, std::string> write_triangle(const RawMesh& raw) {
  if (raw.dim != 2) throw UnsupportedError("the .node/.ele format holds planar meshes only");
  std::ostringstream node, ele;
  node << raw.vertices.size() << " 2 0 0\n";
  for (std::size_t i = 0; i < raw.vertices.size(); ++i)
    node << i << ' ' << num(raw.vertices[i].at(0)) << ' ' << num(raw.vertices[i].at(1)) << '\n';
  const bool speeds = !raw.speeds.empty();
  ele << raw.elements.size() << " 3 " << (speeds ? 1 : 0) << '\n';
  for (std::size_t i = 0; i < raw.elements.size(); ++i) {
    ele << i;
    for (auto v : raw.elements[i]) ele << ' ' << v;
    if (speeds) ele << ' ' << num(raw.speeds[i]);
    ele << '\n';
  }
  return {node.str(), ele.str()};
}

RawMesh parse_json_mesh(const std::string& text) {
  const json doc = parse_document(text);
  RawMesh raw;
  const auto dim = integer_at(member(doc, "", "dim"), "/dim");
  if (dim < 1 || dim > kMaxDim) throw UnsupportedError("unsupported ground dimension " + std::to_string(dim));
  raw.dim = static_cast<int>(dim);
  const json& verts = array_at(member(doc, "", "vertices"), "/vertices");
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const std::string path = "/vertices/" + std::to_string(i);
    auto coords = numbers_at(verts[i], path);
    if (coords.size() != static_cast<std::size_t>(dim))
      schema_error(path, "expected " + std::to_string(dim) + " coordinates, found " + std::to_string(coords.size()));
    raw.vertices.push_back(std::move(coords));
  }
  const json& elems = array_at(member(doc, "", "elements"), "/elements");
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const std::string path = "/elements/" + std::to_string(i);
    array_at(elems[i], path);
    if (elems[i].size() != static_cast<std::size_t>(dim + 1))
      schema_error(path, "expected " + std::to_string(dim + 1) + " vertex indices");
    std::vector<std::int64_t> ids;
    for (std::size_t k = 0; k < elems[i].size(); ++k)
      ids.push_back(integer_at(elems[i][k], path + "/" + std::to_string(k)));
    raw.elements.push_back(std::move(ids));
  }
  if (doc.contains("speeds")) raw.speeds = numbers_at(doc["speeds"], "/speeds");
  if (doc.contains("initial_times")) {
    raw.initial_times = numbers_at(doc["initial_times"], "/initial_times");
    if (raw.initial_times.size() != raw.vertices.size())
      schema_error("/initial_times", "expected one time per vertex");
  }
  return raw;
}

std::string write_json_mesh(const RawMesh& raw) {
  json doc;
  doc["dim"] = raw.dim;
  doc["vertices"] = raw.vertices;
  doc["elements"] = raw.elements;
  if (!raw.speeds.empty()) doc["speeds"] = raw.speeds;
  if (!raw.initial_times.empty()) doc["initial_times"] = raw.initial_times;
  return doc.dump() + "\n";
}

RawMesh to_raw(const GroundMesh& mesh) {
  RawMesh raw;
  raw.dim = mesh.dim();
  for (const auto& p : mesh.vertices()) raw.vertices.emplace_back(p.data(), p.data() + p.size());
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const auto ids = mesh.element(e);
    raw.elements.emplace_back(ids.begin(), ids.end());
  }
  const auto speeds = mesh.speeds();
  if (std::any_of(speeds.begin(), speeds.end(), [](double c) { return c != 1.0; }))
    raw.speeds.assign(speeds.begin(), speeds.end());
  return raw;
}

RawMesh read_mesh_file(const std::string& path, std::optional<MeshFormat> format) {
  const MeshFormat fmt = format ? *format : format_from_path(path);
  if (fmt == MeshFormat::JsonMesh) return parse_json_mesh(read_text_file(path));
  std::string stem = path;
  const std::string ext = lower_extension(path);
  if (ext == "node" || ext == "ele") stem = path.substr(0, path.size() - ext.size() - 1);
  return parse_triangle(read_text_file(stem + ".node"), read_text_file(stem + ".ele"));
}

std::string write_spacetime_json(const SpaceTimeMesh& mesh, double target_time, double epsilon) {
  json doc;
  doc["format"] = "tentpitch-spacetime";
  doc["version"] = 1;
  doc["ground_dim"] = mesh.ground_dim();
  doc["target_time"] = target_time;
  doc["epsilon"] = epsilon;
  const auto d = static_cast<std::size_t>(mesh.ground_dim());
  json ground_vertices = json::array();
  for (Index v = 0; v < mesh.ground_vertex_count(); ++v) {
    const auto c = mesh.coords().subspan(static_cast<std::size_t>(v) * d, d);
    ground_vertices.push_back(std::vector<double>(c.begin(), c.end()));
  }
  doc["ground_vertices"] = std::move(ground_vertices);
  json ground_elements = json::array();
  for (Index e = 0; e < mesh.ground_element_count(); ++e) {
    const auto ids = mesh.ground_element(e);
    ground_elements.push_back(std::vector<Index>(ids.begin(), ids.end()));
  }
  doc["ground_elements"] = std::move(ground_elements);
  doc["times"] = std::vector<double>(mesh.times().begin(), mesh.times().end());
  doc["vertex_ground"] = std::vector<Index>(mesh.vertex_grounds().begin(), mesh.vertex_grounds().end());
  json elements = json::array();
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const auto& el = mesh.element(e);
    const auto ids = mesh.element_vertices(e);
    elements.push_back({{"vertices", std::vector<Index>(ids.begin(), ids.end())},
                        {"patch", el.patch},
                        {"ground_element", el.ground_element},
                        {"source", el.source}});
  }
  doc["elements"] = std::move(elements);
  json patches = json::array();
  for (const auto& p : mesh.patches())
    patches.push_back({{"id", p.id},
                       {"ground_vertex", p.ground_vertex},
                       {"base", p.base},
                       {"apex", p.apex},
                       {"first_element", p.first_element},
                       {"element_count", p.element_count}});
  doc["patches"] = std::move(patches);
  return doc.dump() + "\n";
}

StoredSpaceTimeMesh parse_spacetime_json(const std::string& text) {
  const json doc = parse_document(text);
  const auto gd = integer_at(member(doc, "", "ground_dim"), "/ground_dim");
  if (gd < 1 || gd > kMaxDim) throw UnsupportedError("unsupported ground dimension " + std::to_string(gd));
  const auto d = static_cast<std::size_t>(gd);
  const double target = number_at(member(doc, "", "target_time"), "/target_time");
  const double epsilon = number_at(member(doc, "", "epsilon"), "/epsilon");

  std::vector<std::vector<double>> ground_vertices;
  const json& gv = array_at(member(doc, "", "ground_vertices"), "/ground_vertices");
  for (std::size_t i = 0; i < gv.size(); ++i) {
    const std::string path = "/ground_vertices/" + std::to_string(i);
    ground_vertices.push_back(numbers_at(gv[i], path));
    if (ground_vertices.back().size() != d) schema_error(path, "wrong coordinate count");
  }
  std::vector<Index> connectivity;
  const json& ge = array_at(member(doc, "", "ground_elements"), "/ground_elements");
  for (std::size_t i = 0; i < ge.size(); ++i) {
    const std::string path = "/ground_elements/" + std::to_string(i);
    array_at(ge[i], path);
    if (ge[i].size() != d + 1) schema_error(path, "wrong vertex count");
    for (std::size_t k = 0; k < ge[i].size(); ++k) connectivity.push_back(index_at(ge[i][k], path + "/" + std::to_string(k)));
  }
  std::vector<double> times = numbers_at(member(doc, "", "times"), "/times");
  std::vector<Index> vertex_ground;
  const json& vg = array_at(member(doc, "", "vertex_ground"), "/vertex_ground");
  for (std::size_t i = 0; i < vg.size(); ++i) {
    const Index g = index_at(vg[i], "/vertex_ground/" + std::to_string(i));
    if (g < 0 || static_cast<std::size_t>(g) >= ground_vertices.size())
      schema_error("/vertex_ground/" + std::to_string(i), "unknown ground vertex");
    vertex_ground.push_back(g);
  }
  if (vertex_ground.size() != times.size()) schema_error("/vertex_ground", "expected one entry per time");
  std::vector<double> coords;
  coords.reserve(times.size() * d);
  for (auto g : vertex_ground)
    for (double x : ground_vertices[static_cast<std::size_t>(g)]) coords.push_back(x);

  std::vector<SpaceTimeElement> elements;
  const json& els = array_at(member(doc, "", "elements"), "/elements");
  for (std::size_t i = 0; i < els.size(); ++i) {
    const std::string path = "/elements/" + std::to_string(i);
    SpaceTimeElement el;
    el.vertices.fill(kNone);
    const json& vs = array_at(member(els[i], path, "vertices"), path + "/vertices");
    if (vs.size() != d + 2) schema_error(path + "/vertices", "expected " + std::to_string(d + 2) + " vertices");
    for (std::size_t k = 0; k < vs.size(); ++k) el.vertices[k] = index_at(vs[k], path + "/vertices/" + std::to_string(k));
    el.patch = index_at(member(els[i], path, "patch"), path + "/patch");
    el.ground_element = index_at(member(els[i], path, "ground_element"), path + "/ground_element");
    el.source = index_at(member(els[i], path, "source"), path + "/source");
    elements.push_back(el);
  }
  std::vector<Patch> patches;
  const json& ps = array_at(member(doc, "", "patches"), "/patches");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string path = "/patches/" + std::to_string(i);
    Patch p;
    p.id = index_at(member(ps[i], path, "id"), path + "/id");
    p.ground_vertex = index_at(member(ps[i], path, "ground_vertex"), path + "/ground_vertex");
    p.base = index_at(member(ps[i], path, "base"), path + "/base");
    p.apex = index_at(member(ps[i], path, "apex"), path + "/apex");
    p.first_element = index_at(member(ps[i], path, "first_element"), path + "/first_element");
    p.element_count = index_at(member(ps[i], path, "element_count"), path + "/element_count");
    patches.push_back(p);
  }
  return {SpaceTimeMesh::from_records(static_cast<int>(gd), std::move(connectivity), std::move(coords),
                                      std::move(times), std::move(vertex_ground), std::move(elements),
                                      std::move(patches)),
          target, epsilon};
}

std::string write_trace_json(const RunTrace& trace) {
  json doc;
  doc["target_time"] = trace.target_time;
  doc["epsilon"] = trace.epsilon;
  doc["initial_times"] = trace.initial_times;
  json lifts = json::array();
  for (const auto& l : trace.lifts)
    lifts.push_back({{"vertex", l.vertex},
                     {"old_time", l.old_time},
                     {"new_time", l.new_time},
                     {"binding", to_string(l.binding.kind)},
                     {"element", l.binding.element},
                     {"face", l.binding.face},
                     {"patch", l.patch},
                     {"phase", l.phase}});
  doc["lifts"] = std::move(lifts);
  return doc.dump() + "\n";
}

RunTrace parse_trace_json(const std::string& text) {
  const json doc = parse_document(text);
  RunTrace trace;
  trace.target_time = number_at(member(doc, "", "target_time"), "/target_time");
  trace.epsilon = number_at(member(doc, "", "epsilon"), "/epsilon");
  trace.initial_times = numbers_at(member(doc, "", "initial_times"), "/initial_times");
  const json& lifts = array_at(member(doc, "", "lifts"), "/lifts");
  for (std::size_t i = 0; i < lifts.size(); ++i) {
    const std::string path = "/lifts/" + std::to_string(i);
    const json& l = lifts[i];
    LiftRecord r;
    r.vertex = index_at(member(l, path, "vertex"), path + "/vertex");
    r.old_time = number_at(member(l, path, "old_time"), path + "/old_time");
    r.new_time = number_at(member(l, path, "new_time"), path + "/new_time");
    const json& b = member(l, path, "binding");
    if (!b.is_string()) schema_error(path + "/binding", "expected a string");
    try {
      r.binding.kind = binding_kind_from_string(b.get<std::string>());
    } catch (const Error& err) {
      schema_error(path + "/binding", err.what());
    }
    r.binding.element = index_at(member(l, path, "element"), path + "/element");
    r.binding.face = index_at(member(l, path, "face"), path + "/face");
    r.patch = index_at(member(l, path, "patch"), path + "/patch");
    r.phase = integer_at(member(l, path, "phase"), path + "/phase");
    trace.lifts.push_back(r);
  }
  return trace;
}

std::string write_stats_json(const MeshStats& s) {
  json doc;
  doc["elements"] = s.elements;
  doc["patches"] = s.patches;
  doc["seconds"] = s.seconds;
  doc["elements_per_second"] = s.elements_per_second;
  doc["duration_min"] = s.duration_min;
  doc["duration_max"] = s.duration_max;
  doc["duration_mean"] = s.duration_mean;
  doc["duration_ratio"] = s.duration_ratio;
  json hist = json::object();
  for (const auto& [size, count] : s.patch_size_histogram) hist[std::to_string(size)] = count;
  doc["patch_size_histogram"] = std::move(hist);
  return doc.dump(2) + "\n";
}

std::string write_report_json(const VerifyReport& report) {
  json doc;
  doc["passed"] = report.passed();
  json checks = json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"skipped", c.skipped},
                      {"message", c.message},
                      {"offenders", c.offenders},
                      {"metrics", c.metrics}});
  doc["checks"] = std::move(checks);
  return doc.dump(2) + "\n";
}

std::string write_vtk(const SpaceTimeMesh& mesh) {
  if (mesh.ground_dim() > 2) throw UnsupportedError("VTK export covers 1+1 and 2+1 dimensional meshes only");
  const int d = mesh.ground_dim();
  std::ostringstream out;
  out << "# vtk DataFile Version 3.0\n"
      << "tentpitch space-time mesh\n"
      << "ASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertex_count() << " double\n";
  for (Index v = 0; v < mesh.vertex_count(); ++v) {
    const auto c = mesh.coords().subspan(static_cast<std::size_t>(v) * static_cast<std::size_t>(d),
                                         static_cast<std::size_t>(d));
    if (d == 1)
      out << num(c[0]) << ' ' << num(mesh.time(v)) << " 0\n";
    else
      out << num(c[0]) << ' ' << num(c[1]) << ' ' << num(mesh.time(v)) << '\n';
  }
  const Index ne = mesh.element_count();
  const int per = d + 2;
  out << "CELLS " << ne << ' ' << static_cast<long long>(ne) * (per + 1) << '\n';
  for (Index e = 0; e < ne; ++e) {
    out << per;
    for (auto v : mesh.element_vertices(e)) out << ' ' << v;
    out << '\n';
  }
  out << "CELL_TYPES " << ne << '\n';
  for (Index e = 0; e < ne; ++e) out << (d == 1 ? 5 : 10) << '\n';
  out << "CELL_DATA " << ne << '\n';
  out << "SCALARS patch_id int 1\nLOOKUP_TABLE default\n";
  for (Index e = 0; e < ne; ++e) out << mesh.element(e).patch << '\n';
  out << "SCALARS duration double 1\nLOOKUP_TABLE default\n";
  for (Index e = 0; e < ne; ++e) out << num(mesh.element_duration(e)) << '\n';
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace tentpitch
