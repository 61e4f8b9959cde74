#include "seayaw/commands.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <ostream>

#include "seayaw/angles.hpp"
#include "seayaw/errors.hpp"

namespace seayaw {
namespace {

std::unique_ptr<std::ifstream> open_input(const std::filesystem::path& path, const char* what) {
  auto in = std::make_unique<std::ifstream>(path);
  if (!*in) throw ConfigError(std::string("cannot open ") + what + " file: " + path.string());
  return in;
}

std::unique_ptr<std::ofstream> open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto out = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*out) throw Error("cannot write file: " + path.string());
  return out;
}

template <typename T>
const T& required(const std::optional<T>& v, const char* flag) {
  if (!v) throw ConfigError(std::string("missing required option ") + flag);
  return *v;
}

// Maps library errors onto exit codes; usage/config/schema errors are 2.
template <typename Fn>
int guarded(const char* cmd, std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << cmd << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const SchemaError& e) {
    err << cmd << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const GridMismatch& e) {
    err << cmd << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << cmd << ": " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

void write_simulation(const std::vector<FrameTruth>& frames, std::ostream& detections,
                      std::ostream& ground_truth) {
  for (const auto& ft : frames) {
    for (const auto& b : ft.boats) {
      if (b.emission) io::write_detection(detections, b.emission->detection, b.emission->logits);
    }
    for (const auto& b : ft.boats) {
      if (b.bbox) ground_truth << io::ground_truth_to_json(ft.frame, b).dump() << '\n';
    }
  }
}

TrackSummary track_stream(std::istream& detections, const std::optional<CameraPose>& camera,
                          const PipelineConfig& config, std::ostream& fused) {
  const auto frames = io::read_detections(detections);
  Pipeline pipeline(config, camera);
  TrackSummary summary;
  for (const auto& f : frames) {
    ++summary.frames;
    summary.detections += f.detections.size();
    for (const auto& o : pipeline.step_frame(f.frame, f.detections)) {
      fused << io::track_output_to_json(o).dump() << '\n';
      ++summary.outputs;
      if (o.flip_flagged) ++summary.flagged;
    }
  }
  summary.tracks = pipeline.tracks_created();
  return summary;
}

Comparison evaluate_streams(const std::vector<FusedSource>& fused, std::istream& ground_truth,
                            const std::vector<Method>& methods, const CompareOptions& options) {
  // Records of several files describing the same (frame, id) are merged.
  std::map<std::pair<int, int>, Prediction> merged;
  for (const auto& src : fused) {
    for (auto& p : io::read_predictions(*src.stream, src.method)) {
      auto [it, fresh] = merged.try_emplace({p.frame, p.id}, p);
      if (fresh) continue;
      for (Method m : kAllMethods) {
        if (!it->second.yaw_rel_deg[m]) it->second.yaw_rel_deg[m] = p.yaw_rel_deg[m];
      }
      if (!it->second.bbox) it->second.bbox = p.bbox;
    }
  }
  std::vector<Prediction> preds;
  preds.reserve(merged.size());
  for (auto& [key, p] : merged) preds.push_back(std::move(p));
  const auto truth = io::read_ground_truth(ground_truth);
  return compare(preds, truth, methods, options);
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("simulate", err, [&] {
    const auto& path = required(opts.scenario, "--scenario");
    const auto& dir = required(opts.out_dir, "--out");
    io::json j;
    {
      auto in = open_input(path, "scenario");
      try {
        j = io::json::parse(*in);
      } catch (const io::json::exception& e) {
        throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
      }
    }
    if (!j.is_object()) throw ConfigError(path.string() + ": scenario must be a JSON object");
    if (opts.seed) j["seed"] = *opts.seed;
    if (opts.grid_cells) j["n_cells"] = *opts.grid_cells;
    const Scenario scenario = io::scenario_from_json(j);
    const auto frames = generate(scenario);

    std::filesystem::create_directories(dir);
    auto det = open_output(dir / "detections.jsonl");
    auto gt = open_output(dir / "ground_truth.jsonl");
    auto cam = open_output(dir / "camera.json");
    write_simulation(frames, *det, *gt);
    *cam << io::camera_to_json(scenario.camera).dump(2) << '\n';

    std::size_t emitted = 0;
    for (const auto& f : frames) {
      for (const auto& b : f.boats) emitted += b.emission ? 1 : 0;
    }
    out << "simulated " << scenario.boats.size() << " boats x " << scenario.n_frames
        << " frames, " << emitted << " detections -> " << dir.string() << '\n';
    return kExitOk;
  });
}

int cmd_track(const TrackOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("track", err, [&] {
    opts.config.validate();
    const auto& det_path = required(opts.detections, "--detections");
    std::optional<CameraPose> camera;
    if (opts.camera) camera = io::read_camera_file(*opts.camera);
    auto in = open_input(det_path, "detections");

    std::unique_ptr<std::ofstream> file;
    if (opts.output) file = open_output(*opts.output);
    std::ostream& sink = file ? static_cast<std::ostream&>(*file) : out;
    TrackSummary s;
    try {
      s = track_stream(*in, camera, opts.config.pipeline(), sink);
    } catch (const SchemaError& e) {
      throw SchemaError(e.line(), det_path.string() + ": " + e.what());
    }
    err << "tracked " << s.detections << " detections over " << s.frames << " frames: "
        << s.tracks << " tracks, " << s.outputs << " records, " << s.flagged << " flagged\n";
    return kExitOk;
  });
}

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("eval", err, [&] {
    opts.config.validate();
    if (opts.fused.empty()) throw ConfigError("missing required option --fused");
    const auto& gt_path = required(opts.ground_truth, "--gt");

    std::vector<std::unique_ptr<std::ifstream>> files;
    std::vector<FusedSource> sources;
    for (const auto& spec : opts.fused) {
      std::string path = spec;
      std::optional<Method> method;
      if (const auto eq = spec.rfind('='); eq != std::string::npos) {
        path = spec.substr(0, eq);
        method = parse_method(spec.substr(eq + 1));
        if (!method) throw ConfigError("unknown method \"" + spec.substr(eq + 1) + "\" in --fused " + spec);
      }
      files.push_back(open_input(path, "fused"));
      sources.push_back({files.back().get(), method});
    }
    auto gt = open_input(gt_path, "ground truth");

    CompareOptions co;
    co.policy = opts.config.undefined_policy;
    co.threshold_deg = opts.config.acc_threshold_deg;
    if (opts.camera) co.absolute_camera_heading = io::read_camera_file(*opts.camera).heading;

    const Comparison c = evaluate_streams(sources, *gt, opts.config.eval_methods, co);
    out << format_table(c);
    if (opts.csv) {
      *open_output(*opts.csv) << format_csv(c);
    } else {
      out << '\n' << format_csv(c);
    }
    return kExitOk;
  });
}

int cmd_export_geojson(const ExportOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("export-geojson", err, [&] {
    const auto& fused_path = required(opts.fused, "--fused");
    const auto& out_path = required(opts.output, "--out");
    std::optional<CameraPose> camera;
    if (opts.camera) camera = io::read_camera_file(*opts.camera);
    auto in = open_input(fused_path, "fused");
    const io::GeoJsonExport ex = io::export_geojson(*in, camera, opts.earth_radius);
    *open_output(out_path) << ex.collection.dump(2) << '\n';
    out << "exported " << ex.features << " features, skipped " << ex.skipped
        << " records without geolocation -> " << out_path.string() << '\n';
    return kExitOk;
  });
}

int cmd_project(const ProjectOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("project", err, [&] {
    const CameraPose cam = io::read_camera_file(required(opts.camera, "--camera"));
    if (!opts.pixel && !opts.yaw_rel_deg) throw ConfigError("nothing to project: give --pixel and/or --yaw-rel");
    io::ordered_json j;
    if (opts.pixel) {
      const Pixel px{opts.pixel->first, opts.pixel->second};
      const GroundPoint ground = pixel_to_ground(cam, px);
      const GroundPoint world = camera_to_world(cam, ground);
      const GeoPoint geo = relative_to_gps(cam, world, opts.earth_radius);
      j["pixel"] = {px.u, px.v};
      j["ground_right_m"] = ground.x;
      j["ground_forward_m"] = ground.y;
      j["east_m"] = world.x;
      j["north_m"] = world.y;
      j["lat"] = geo.lat;
      j["lon"] = geo.lon;
    }
    if (opts.yaw_rel_deg) {
      j["yaw_rel_deg"] = *opts.yaw_rel_deg;
      j["heading_abs_deg"] = relative_to_absolute_heading(cam.heading, *opts.yaw_rel_deg);
    }
    out << j.dump(2) << '\n';
    return kExitOk;
  });
}

}  // namespace seayaw
