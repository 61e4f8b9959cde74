// seayaw: temporally fused boat heading estimation from per-frame
// orientation distributions.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seayaw/angles.hpp"
#include "seayaw/commands.hpp"
#include "seayaw/errors.hpp"

namespace {

struct Overrides {
  std::optional<std::string> config;
  std::optional<int> grid_cells;
  std::optional<int> k;
  std::optional<int> t;
  std::optional<std::string> fusion_mode;
  std::optional<double> flip_threshold_deg;
  std::optional<std::string> method;
};

void add_fusion_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration");
  cmd->add_option("--grid-cells", o.grid_cells, "expected number of orientation cells");
  cmd->add_option("--k", o.k, "fusion window length");
  cmd->add_option("--t", o.t, "zero-weight prefix of the window");
  cmd->add_option("--fusion-mode", o.fusion_mode, "convex|literal");
  cmd->add_option("--flip-threshold-deg", o.flip_threshold_deg, "flip gate threshold in degrees");
}

seayaw::io::RunConfig resolve(const Overrides& o) {
  using namespace seayaw;
  io::RunConfig c = o.config ? io::read_config_file(*o.config) : io::RunConfig{};
  if (o.grid_cells) c.grid_cells = *o.grid_cells;
  if (o.k) c.fusion.k = *o.k;
  if (o.t) c.fusion.t = *o.t;
  if (o.fusion_mode) c.fusion.mode = io::parse_fusion_mode(*o.fusion_mode);
  if (o.flip_threshold_deg) c.fusion.flip_gate_threshold = deg_to_rad(*o.flip_threshold_deg);
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace seayaw;
  CLI::App app{"Temporally fused, geolocated boat heading estimation"};
  app.require_subcommand(1);

  SimulateOptions sim;
  std::optional<std::string> sim_config;
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic scenario");
  simulate->add_option("--scenario", sim.scenario, "scenario JSON");
  simulate->add_option("--out", sim.out_dir, "output directory");
  simulate->add_option("--seed", sim.seed, "override the scenario seed");
  simulate->add_option("--grid-cells", sim.grid_cells, "override the grid resolution");
  simulate->add_option("--config", sim_config, "JSON run configuration (seed, grid_cells, paths)");

  TrackOptions trk;
  Overrides trk_o;
  std::optional<std::string> trk_method;
  auto* track = app.add_subcommand("track", "track detections and fuse their orientations");
  track->add_option("--detections", trk.detections, "detections JSONL");
  track->add_option("--camera", trk.camera, "camera metadata JSON");
  track->add_option("--out", trk.output, "fused output JSONL (default stdout)");
  track->add_option("--method", trk_method, "method reported as yaw_rel_deg");
  add_fusion_flags(track, trk_o);

  EvalOptions ev;
  Overrides ev_o;
  std::optional<std::string> ev_methods;
  std::optional<std::string> ev_policy;
  auto* eval = app.add_subcommand("eval", "score fused streams against ground truth");
  eval->add_option("--fused", ev.fused, "fused JSONL, optionally PATH=METHOD")->expected(1, -1);
  eval->add_option("--gt", ev.ground_truth, "ground-truth JSONL");
  eval->add_option("--method", ev_methods, "comma-separated methods");
  eval->add_option("--csv", ev.csv, "write the report as CSV here");
  eval->add_option("--camera", ev.camera, "score absolute headings with this camera");
  eval->add_option("--undefined", ev_policy, "penalty|skip");
  eval->add_option("--config", ev_o.config, "JSON run configuration");

  ExportOptions exp;
  auto* export_cmd = app.add_subcommand("export-geojson", "write fused tracks as GeoJSON points");
  export_cmd->add_option("--fused", exp.fused, "fused JSONL");
  export_cmd->add_option("--camera", exp.camera, "camera metadata JSON");
  export_cmd->add_option("--out", exp.output, "GeoJSON output");

  ProjectOptions prj;
  std::vector<double> pixel;
  auto* project = app.add_subcommand("project", "one-shot geometry query");
  project->add_option("--camera", prj.camera, "camera metadata JSON");
  project->add_option("--pixel", pixel, "pixel u v")->expected(2);
  project->add_option("--yaw-rel", prj.yaw_rel_deg, "relative yaw in degrees");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*simulate) {
      if (sim_config) {
        const auto c = io::read_config_file(*sim_config);
        if (!sim.seed) sim.seed = c.seed;
        if (!sim.grid_cells) sim.grid_cells = c.grid_cells;
        if (!sim.scenario) sim.scenario = c.paths.scenario;
        if (!sim.out_dir) sim.out_dir = c.paths.out_dir;
      }
      return cmd_simulate(sim, std::cout, std::cerr);
    }
    if (*track) {
      trk.config = resolve(trk_o);
      if (trk_method) {
        const auto m = parse_method(*trk_method);
        if (!m) throw ConfigError("unknown method \"" + *trk_method + "\"");
        trk.config.method = *m;
      }
      if (!trk.detections) trk.detections = trk.config.paths.detections;
      if (!trk.camera) trk.camera = trk.config.paths.camera;
      if (!trk.output) trk.output = trk.config.paths.fused;
      return cmd_track(trk, std::cout, std::cerr);
    }
    if (*eval) {
      ev.config = resolve(ev_o);
      if (ev_methods) ev.config.eval_methods = io::parse_method_list(*ev_methods);
      if (ev_policy) ev.config.undefined_policy = io::parse_undefined_policy(*ev_policy);
      if (ev.fused.empty() && ev.config.paths.fused) ev.fused.push_back(ev.config.paths.fused->string());
      if (!ev.ground_truth) ev.ground_truth = ev.config.paths.ground_truth;
      return cmd_eval(ev, std::cout, std::cerr);
    }
    if (*export_cmd) return cmd_export_geojson(exp, std::cout, std::cerr);
    if (*project) {
      if (pixel.size() == 2) prj.pixel = std::make_pair(pixel[0], pixel[1]);
      return cmd_project(prj, std::cout, std::cerr);
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
