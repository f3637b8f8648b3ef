#include "tentpitch/cli.hpp"

#include "tentpitch/errors.hpp"
#include "tentpitch/io.hpp"
#include "tentpitch/pitcher.hpp"
#include "tentpitch/verifier.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace tentpitch {
namespace {

struct PitchArgs {
  std::string input, format, strategy = "greedy", out, vtk, stats, trace;
  double target_time = 0.0;
  double epsilon = kDefaultEpsilon;
  std::uint64_t seed = 0;
};

struct VerifyArgs {
  std::string mesh, ground, format, trace, report;
  double tolerance = kDefaultTolerance;
  double sample_rate = 0.01;
};

struct InfoArgs {
  std::string input, format;
  double epsilon = kDefaultEpsilon;
};

std::optional<MeshFormat> format_option(const std::string& name) {
  if (name.empty()) return std::nullopt;
  return parse_format_name(name);
}

int do_pitch(const PitchArgs& a, std::ostream& out) {
  const Strategy strategy = a.strategy == "mis" ? Strategy::mis(a.seed) : Strategy::greedy();
  const PitchConfig config(a.target_time, a.epsilon, strategy);
  const RawMesh raw = read_mesh_file(a.input, format_option(a.format));
  const GroundMesh ground = GroundMesh::load(raw);
  const RunResult result = run(ground, config, raw.initial_times);
  const MeshStats s = stats(result.mesh, result.seconds);
  if (!a.out.empty()) write_text_file(a.out, write_spacetime_json(result.mesh, config.target_time(), config.epsilon()));
  if (!a.vtk.empty()) write_text_file(a.vtk, write_vtk(result.mesh));
  if (!a.stats.empty()) write_text_file(a.stats, write_stats_json(s));
  if (!a.trace.empty()) write_text_file(a.trace, write_trace_json(result.trace));
  out << "elements " << s.elements << "\npatches " << s.patches << "\nseconds " << s.seconds
      << "\nelements_per_second " << s.elements_per_second << "\nduration_ratio " << s.duration_ratio << '\n';
  return kExitOk;
}

int do_verify(const VerifyArgs& a, std::ostream& out) {
  const GroundMesh ground = GroundMesh::load(read_mesh_file(a.ground, format_option(a.format)));
  const StoredSpaceTimeMesh stored = parse_spacetime_json(read_text_file(a.mesh));
  std::optional<RunTrace> trace;
  if (!a.trace.empty()) trace = parse_trace_json(read_text_file(a.trace));
  VerifyOptions options;
  options.tolerance = a.tolerance;
  options.oracle_sample_rate = a.sample_rate;
  const VerifyReport report = verify(stored.mesh, ground, stored.target_time, stored.epsilon, options, trace);
  for (const auto& c : report.checks)
    out << (c.skipped ? "SKIP " : c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.message << '\n';
  if (!a.report.empty()) write_text_file(a.report, write_report_json(report));
  return report.passed() ? kExitOk : kExitFailure;
}

int do_info(const InfoArgs& a, std::ostream& out) {
  const GroundMesh ground = GroundMesh::load(read_mesh_file(a.input, format_option(a.format)));
  const MeshConstants constants = precompute(ground, a.epsilon);
  const auto speeds = ground.speeds();
  const auto [cmin, cmax] = std::minmax_element(speeds.begin(), speeds.end());
  const auto [wmin, wmax] = std::minmax_element(constants.omega.begin(), constants.omega.end());
  out << "dim " << ground.dim() << "\nvertices " << ground.vertex_count() << "\nelements " << ground.element_count()
      << "\nspeed_min " << *cmin << "\nspeed_max " << *cmax << "\nomega_min " << *wmin << "\nomega_max " << *wmax
      << "\ninverse_omega_sum " << constants.inverse_omega_sum() << "\ncapped_faces " << constants.faces.size()
      << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tent pitching space-time mesh generator"};
  app.require_subcommand(1);

  PitchArgs pa;
  auto* pitch = app.add_subcommand("pitch", "Build a space-time mesh over a ground mesh");
  pitch->add_option("--input", pa.input, "Ground mesh (.json, .node or .ele)")->required();
  pitch->add_option("--format", pa.format, "Input format: json or triangle");
  pitch->add_option("--target-time", pa.target_time, "Target time T")->required();
  pitch->add_option("--epsilon", pa.epsilon, "Progress parameter in (0, 1/2]")->capture_default_str();
  pitch->add_option("--strategy", pa.strategy, "greedy or mis")
      ->check(CLI::IsMember({"greedy", "mis"}))
      ->capture_default_str();
  pitch->add_option("--seed", pa.seed, "Scan-order seed for the mis strategy")->capture_default_str();
  pitch->add_option("--out", pa.out, "Space-time mesh JSON output");
  pitch->add_option("--vtk", pa.vtk, "Legacy VTK output");
  pitch->add_option("--stats", pa.stats, "Statistics JSON output");
  pitch->add_option("--trace", pa.trace, "Lift trace JSON output");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Check a space-time mesh against its ground mesh");
  ver->add_option("--mesh", va.mesh, "Space-time mesh JSON")->required();
  ver->add_option("--ground", va.ground, "Ground mesh")->required();
  ver->add_option("--format", va.format, "Ground mesh format: json or triangle");
  ver->add_option("--trace", va.trace, "Lift trace JSON to cross-check");
  ver->add_option("--tol", va.tolerance, "Relative tolerance")->capture_default_str();
  ver->add_option("--sample-rate", va.sample_rate, "Fraction of lifts checked by the bisection oracle")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  ver->add_option("--report", va.report, "Write the report as JSON");

  InfoArgs ia;
  auto* info = app.add_subcommand("info", "Summarize a ground mesh");
  info->add_option("--input", ia.input, "Ground mesh")->required();
  info->add_option("--format", ia.format, "Input format: json or triangle");
  info->add_option("--epsilon", ia.epsilon, "Epsilon used for face caps")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*pitch) return do_pitch(pa, out);
    if (*ver) return do_verify(va, out);
    return do_info(ia, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace tentpitch
