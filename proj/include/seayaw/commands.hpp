#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seayaw/evaluation.hpp"
#include "seayaw/io.hpp"
#include "seayaw/synthetic.hpp"
#include "seayaw/tracking.hpp"

namespace seayaw {

/// Process exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitUsage = 2 };

// Stream-level building blocks. The CLI subcommands below are thin wrappers
// that open files around them.

void write_simulation(const std::vector<FrameTruth>& frames, std::ostream& detections,
                      std::ostream& ground_truth);

struct TrackSummary {
  std::size_t frames = 0;
  std::size_t detections = 0;
  std::size_t outputs = 0;
  std::size_t flagged = 0;
  int tracks = 0;
};

TrackSummary track_stream(std::istream& detections, const std::optional<CameraPose>& camera,
                          const PipelineConfig& config, std::ostream& fused);

/// A fused stream and, optionally, the method its yaw_rel_deg stands for.
struct FusedSource {
  std::istream* stream = nullptr;
  std::optional<Method> method;
};

Comparison evaluate_streams(const std::vector<FusedSource>& fused, std::istream& ground_truth,
                            const std::vector<Method>& methods, const CompareOptions& options);

// Subcommands. Each reports to `out` / `err` and returns an ExitCode.

struct SimulateOptions {
  std::optional<std::filesystem::path> scenario;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid_cells;
};
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

struct TrackOptions {
  io::RunConfig config;
  std::optional<std::filesystem::path> detections;
  std::optional<std::filesystem::path> camera;
  std::optional<std::filesystem::path> output;  ///< stdout when unset
};
int cmd_track(const TrackOptions& opts, std::ostream& out, std::ostream& err);

struct EvalOptions {
  io::RunConfig config;
  /// Each entry is PATH or PATH=METHOD.
  std::vector<std::string> fused;
  std::optional<std::filesystem::path> ground_truth;
  std::optional<std::filesystem::path> csv;
  std::optional<std::filesystem::path> camera;  ///< enables absolute-heading scoring
};
int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);

struct ExportOptions {
  std::optional<std::filesystem::path> fused;
  std::optional<std::filesystem::path> camera;
  std::optional<std::filesystem::path> output;
  double earth_radius = kMeanEarthRadius;
};
int cmd_export_geojson(const ExportOptions& opts, std::ostream& out, std::ostream& err);

struct ProjectOptions {
  std::optional<std::filesystem::path> camera;
  std::optional<std::pair<double, double>> pixel;
  std::optional<double> yaw_rel_deg;
  double earth_radius = kMeanEarthRadius;
};
int cmd_project(const ProjectOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace seayaw
