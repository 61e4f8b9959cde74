#include "seayaw/io.hpp"

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

#include <rapidjson/document.h>
#include <rapidjson/error/en.h>

#include "seayaw/angles.hpp"
#include "seayaw/errors.hpp"

namespace seayaw::io {
namespace {

template <typename Json>
void reject_unknown(const Json& j, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (auto a : allowed) known = known || it.key() == a;
    if (!known) throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
  }
}

const json& require(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(where + ": missing key \"" + key + "\"");
  return *it;
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

long long integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ConfigError(what + " must be an integer");
  return v.get<long long>();
}

std::string string(const json& v, const std::string& what) {
  if (!v.is_string()) throw ConfigError(what + " must be a string");
  return v.get<std::string>();
}

double number_at(const json& j, const char* key, const std::string& where) {
  return number(require(j, key, where), where + "." + key);
}

template <typename T>
void read_opt(const json& j, const char* key, T& out, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  const std::string what = where + "." + key;
  if constexpr (std::is_same_v<T, int>) {
    out = static_cast<int>(integer(*it, what));
  } else if constexpr (std::is_same_v<T, double>) {
    out = number(*it, what);
  } else {
    static_assert(std::is_same_v<T, std::string>);
    out = string(*it, what);
  }
}

std::vector<double> number_array(const json& v, const std::string& what) {
  if (!v.is_array()) throw DomainError(what + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) throw DomainError(what + " must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

BBox bbox_from_json(const json& v) {
  if (!v.is_array() || v.size() != 4) throw DomainError("bbox must be [x, y, w, h]");
  const auto b = number_array(v, "bbox");
  if (!(b[2] > 0.0 && b[3] > 0.0)) throw DomainError("bbox width and height must be positive");
  return {b[0], b[1], b[2], b[3]};
}

ordered_json bbox_to_json(const BBox& b) { return ordered_json::array({b.x, b.y, b.w, b.h}); }

template <typename T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> opt_number(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw DomainError(std::string(key) + " must be a number or null");
  return it->get<double>();
}

int frame_of(const json& j) {
  const auto it = j.find("frame");
  if (it == j.end() || !it->is_number_integer() || it->get<long long>() < 0) {
    throw DomainError("frame must be a non-negative integer");
  }
  return static_cast<int>(it->get<long long>());
}

int id_of(const json& j) {
  const auto it = j.find("id");
  if (it == j.end() || !it->is_number_integer()) throw DomainError("id must be an integer");
  return static_cast<int>(it->get<long long>());
}

// Calls fn(json, line) per non-blank line, converting failures to SchemaError.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      if (!j.is_object()) throw DomainError("record must be a JSON object");
      fn(j);
    } catch (const json::exception& e) {
      throw SchemaError(lineno, e.what());
    } catch (const SchemaError&) {
      throw;
    } catch (const Error& e) {
      throw SchemaError(lineno, e.what());
    }
  }
}

json parse_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string("cannot open ") + what + " file: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON in ") + path.string() + ": " + e.what());
  }
}

MotionKind parse_motion_kind(const std::string& s) {
  if (s == "stationary") return MotionKind::stationary;
  if (s == "linear") return MotionKind::linear;
  if (s == "turn") return MotionKind::turn;
  throw ConfigError("unknown boat kind \"" + s + "\" (stationary|linear|turn)");
}

}  // namespace

CameraPose camera_from_json(const json& j) {
  const std::string where = "camera";
  reject_unknown(j, {"lat", "lon", "alt_m", "heading_deg", "pitch_deg", "roll_deg", "f_px", "cx", "cy",
                     "width", "height"},
                 where);
  CameraPose c;
  c.lat = number_at(j, "lat", where);
  c.lon = number_at(j, "lon", where);
  c.alt = number_at(j, "alt_m", where);
  c.heading = number_at(j, "heading_deg", where);
  c.pitch = number_at(j, "pitch_deg", where);
  c.roll = number_at(j, "roll_deg", where);
  c.focal = number_at(j, "f_px", where);
  c.cx = number_at(j, "cx", where);
  c.cy = number_at(j, "cy", where);
  c.width = static_cast<int>(integer(require(j, "width", where), "camera.width"));
  c.height = static_cast<int>(integer(require(j, "height", where), "camera.height"));
  try {
    c.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

ordered_json camera_to_json(const CameraPose& c) {
  return ordered_json{{"lat", c.lat},         {"lon", c.lon},       {"alt_m", c.alt},
                      {"heading_deg", c.heading}, {"pitch_deg", c.pitch}, {"roll_deg", c.roll},
                      {"f_px", c.focal},      {"cx", c.cx},         {"cy", c.cy},
                      {"width", c.width},     {"height", c.height}};
}

CameraPose read_camera_file(const std::filesystem::path& path) {
  return camera_from_json(parse_file(path, "camera"));
}

namespace {

// Detection streams are the bulk input, so they are parsed with RapidJSON;
// everything else goes through nlohmann::json.
using RValue = rapidjson::Value;

const RValue* member(const RValue& obj, const char* key) {
  const auto it = obj.FindMember(key);
  return it == obj.MemberEnd() ? nullptr : &it->value;
}

std::vector<double> number_array(const RValue& v, const char* what) {
  if (!v.IsArray()) throw DomainError(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(v.Size());
  for (const auto& x : v.GetArray()) {
    if (!x.IsNumber()) throw DomainError(std::string(what) + " must contain only numbers");
    out.push_back(x.GetDouble());
  }
  return out;
}

PoseDistribution distribution_from_value(const RValue& j) {
  const RValue* n = member(j, "n_cells");
  if (!n || !n->IsInt()) throw DomainError("n_cells must be an integer");
  const RValue* probs = member(j, "probs");
  const RValue* logits = member(j, "logits");
  if ((probs == nullptr) == (logits == nullptr)) {
    throw DomainError("exactly one of \"probs\" and \"logits\" is required");
  }
  const OrientationGrid grid(n->GetInt());
  if (logits) return PoseDistribution::from_logits(grid, number_array(*logits, "logits"));
  return PoseDistribution::normalize(grid, number_array(*probs, "probs"));
}

Detection detection_from_value(const RValue& j) {
  if (!j.IsObject()) throw DomainError("record must be a JSON object");
  Detection d;
  const RValue* frame = member(j, "frame");
  if (!frame || !frame->IsInt64() || frame->GetInt64() < 0 || frame->GetInt64() > INT32_MAX) {
    throw DomainError("frame must be a non-negative integer");
  }
  d.frame = static_cast<int>(frame->GetInt64());
  const RValue* bbox = member(j, "bbox");
  if (!bbox || !bbox->IsArray() || bbox->Size() != 4) throw DomainError("bbox must be [x, y, w, h]");
  const auto b = number_array(*bbox, "bbox");
  if (!(b[2] > 0.0 && b[3] > 0.0)) throw DomainError("bbox width and height must be positive");
  d.bbox = {b[0], b[1], b[2], b[3]};
  if (const RValue* s = member(j, "score"); s && !s->IsNull()) {
    if (!s->IsNumber()) throw DomainError("score must be a number or null");
    const double v = s->GetDouble();
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("score must lie in [0, 1]");
    d.score = v;
  }
  if (member(j, "n_cells") || member(j, "probs") || member(j, "logits")) {
    d.orientation = distribution_from_value(j);
  }
  return d;
}

rapidjson::Document parse_record(std::string_view text) {
  rapidjson::Document doc;
  doc.Parse<rapidjson::kParseFullPrecisionFlag>(text.data(), text.size());
  if (doc.HasParseError()) {
    throw DomainError(std::string("invalid JSON at offset ") + std::to_string(doc.GetErrorOffset()) +
                      ": " + rapidjson::GetParseError_En(doc.GetParseError()));
  }
  return doc;
}

}  // namespace

PoseDistribution distribution_from_json(const json& j) {
  const std::string text = j.dump();
  return distribution_from_value(parse_record(text));
}

std::vector<DetectionFrame> read_detections(std::istream& in) {
  std::map<int, std::vector<Detection>> by_frame;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      Detection d = detection_from_value(parse_record(line));
      by_frame[d.frame].push_back(std::move(d));
    } catch (const Error& e) {
      throw SchemaError(lineno, e.what());
    }
  }
  std::vector<DetectionFrame> out;
  out.reserve(by_frame.size());
  for (auto& [f, dets] : by_frame) out.push_back({f, std::move(dets)});
  return out;
}

void write_detection(std::ostream& out, const Detection& d, std::span<const double> logits) {
  ordered_json j{{"frame", d.frame}, {"bbox", bbox_to_json(d.bbox)}, {"score", d.score}};
  if (!logits.empty()) {
    j["n_cells"] = logits.size();
    j["logits"] = ordered_json(std::vector<double>(logits.begin(), logits.end()));
  }
  out << j.dump() << '\n';
}

ordered_json track_output_to_json(const TrackOutput& o) {
  ordered_json methods = ordered_json::object();
  for (Method m : kAllMethods) methods[std::string(method_name(m))] = opt(o.methods[m]);
  std::optional<double> lat;
  std::optional<double> lon;
  if (o.geo) {
    lat = o.geo->lat;
    lon = o.geo->lon;
  }
  return ordered_json{{"frame", o.frame},
                      {"id", o.id},
                      {"bbox", bbox_to_json(o.bbox)},
                      {"yaw_rel_deg", opt(o.yaw_rel_deg)},
                      {"heading_abs_deg", opt(o.heading_abs_deg)},
                      {"lat", opt(lat)},
                      {"lon", opt(lon)},
                      {"entropy", opt(o.entropy)},
                      {"flip_flagged", o.flip_flagged},
                      {"methods", methods}};
}

Prediction prediction_from_json(const json& j, std::optional<Method> as_method) {
  Prediction p;
  p.frame = frame_of(j);
  p.id = id_of(j);
  if (j.contains("bbox") && !j["bbox"].is_null()) p.bbox = bbox_from_json(j["bbox"]);
  if (as_method) {
    p.yaw_rel_deg[*as_method] = opt_number(j, "yaw_rel_deg");
    return p;
  }
  const auto it = j.find("methods");
  if (it == j.end() || !it->is_object()) {
    throw DomainError("record has no \"methods\" object; name the method for this file");
  }
  for (Method m : kAllMethods) p.yaw_rel_deg[m] = opt_number(*it, std::string(method_name(m)).c_str());
  return p;
}

std::vector<Prediction> read_predictions(std::istream& in, std::optional<Method> as_method) {
  std::vector<Prediction> out;
  for_each_record(in, [&](const json& j) { out.push_back(prediction_from_json(j, as_method)); });
  return out;
}

ordered_json ground_truth_to_json(int frame, const BoatTruth& b) {
  ordered_json j{{"frame", frame},
                 {"id", b.boat},
                 {"yaw_rel_deg", b.yaw_rel_deg},
                 {"heading_abs_deg", b.heading_abs_deg}};
  if (b.bbox) j["bbox"] = bbox_to_json(*b.bbox);
  j["lat"] = b.geo.lat;
  j["lon"] = b.geo.lon;
  return j;
}

GroundTruth ground_truth_from_json(const json& j) {
  GroundTruth g;
  g.frame = frame_of(j);
  g.id = id_of(j);
  const auto yaw = opt_number(j, "yaw_rel_deg");
  if (!yaw) throw DomainError("yaw_rel_deg is required");
  g.yaw_rel_deg = *yaw;
  if (j.contains("bbox") && !j["bbox"].is_null()) g.bbox = bbox_from_json(j["bbox"]);
  g.heading_abs_deg = opt_number(j, "heading_abs_deg");
  return g;
}

std::vector<GroundTruth> read_ground_truth(std::istream& in) {
  std::vector<GroundTruth> out;
  for_each_record(in, [&](const json& j) { out.push_back(ground_truth_from_json(j)); });
  return out;
}

Scenario scenario_from_json(const json& j) {
  const std::string where = "scenario";
  reject_unknown(j, {"seed", "n_frames", "n_cells", "boat_length_m", "camera", "noise", "boats", "fleet"},
                 where);
  Scenario s;
  if (j.contains("seed")) {
    const long long seed = integer(j["seed"], "scenario.seed");
    if (seed < 0) throw ConfigError("scenario.seed must be non-negative");
    s.seed = static_cast<std::uint64_t>(seed);
  }
  read_opt(j, "n_frames", s.n_frames, where);
  read_opt(j, "n_cells", s.n_cells, where);
  read_opt(j, "boat_length_m", s.boat_length_m, where);
  s.camera = j.contains("camera") ? camera_from_json(j["camera"]) : default_bench_camera();

  if (j.contains("noise")) {
    const json& n = j["noise"];
    reject_unknown(n, {"kappa", "p_flip", "p_miss", "jitter_kappa", "bbox_sigma_px"}, "scenario.noise");
    read_opt(n, "kappa", s.noise.kappa, "scenario.noise");
    read_opt(n, "p_flip", s.noise.p_flip, "scenario.noise");
    read_opt(n, "p_miss", s.noise.p_miss, "scenario.noise");
    if (n.contains("jitter_kappa")) s.noise.jitter_kappa = number(n["jitter_kappa"], "scenario.noise.jitter_kappa");
    read_opt(n, "bbox_sigma_px", s.noise.bbox_sigma_px, "scenario.noise");
  }
  if (j.contains("boats")) {
    if (!j["boats"].is_array()) throw ConfigError("scenario.boats must be an array");
    for (const auto& b : j["boats"]) {
      const std::string bw = "scenario.boats[]";
      reject_unknown(b, {"kind", "east", "north", "heading_deg", "speed", "turn_rate_deg"}, bw);
      BoatSpec spec;
      spec.kind = parse_motion_kind(string(require(b, "kind", bw), bw + ".kind"));
      spec.east = number_at(b, "east", bw);
      spec.north = number_at(b, "north", bw);
      read_opt(b, "heading_deg", spec.heading_deg, bw);
      read_opt(b, "speed", spec.speed, bw);
      read_opt(b, "turn_rate_deg", spec.turn_rate_deg, bw);
      s.boats.push_back(spec);
    }
  }
  if (j.contains("fleet")) {
    const json& f = j["fleet"];
    const std::string fw = "scenario.fleet";
    reject_unknown(f, {"count", "stationary", "linear", "turn"}, fw);
    const int count = static_cast<int>(integer(require(f, "count", fw), fw + ".count"));
    FleetMix mix;
    read_opt(f, "stationary", mix.stationary, fw);
    read_opt(f, "linear", mix.linear, fw);
    read_opt(f, "turn", mix.turn, fw);
    auto fleet = make_fleet(s.seed, count, mix, s.camera);
    s.boats.insert(s.boats.end(), fleet.begin(), fleet.end());
  }
  s.validate();
  return s;
}

FusionMode parse_fusion_mode(const std::string& s) {
  if (s == "convex") return FusionMode::convex;
  if (s == "literal") return FusionMode::literal;
  throw ConfigError("unknown fusion mode \"" + s + "\" (convex|literal)");
}

FlipPolicy parse_flip_policy(const std::string& s) {
  if (s == "correct") return FlipPolicy::correct;
  if (s == "drop") return FlipPolicy::drop;
  if (s == "off") return FlipPolicy::off;
  throw ConfigError("unknown flip policy \"" + s + "\" (correct|drop|off)");
}

UndefinedPolicy parse_undefined_policy(const std::string& s) {
  if (s == "penalty") return UndefinedPolicy::penalty;
  if (s == "skip") return UndefinedPolicy::skip;
  throw ConfigError("unknown undefined-heading policy \"" + s + "\" (penalty|skip)");
}

std::vector<Method> parse_method_list(const std::string& csv) {
  std::vector<Method> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    item = item.substr(first, item.find_last_not_of(" \t") - first + 1);
    const auto m = parse_method(item);
    if (!m) throw ConfigError("unknown method \"" + item + "\" (single|mode-mean|dist-mean|trajectory)");
    out.push_back(*m);
  }
  if (out.empty()) throw ConfigError("no evaluation method given");
  return out;
}

PipelineConfig RunConfig::pipeline() const {
  PipelineConfig p;
  p.fusion = fusion;
  p.tracker = tracker;
  p.min_speed = min_speed;
  p.mode_mean_window = mode_mean_window;
  p.earth_radius = earth_radius;
  p.output_method = method;
  p.expected_cells = grid_cells;
  return p;
}

void RunConfig::validate() const {
  try {
    if (grid_cells) (void)OrientationGrid(*grid_cells);
    pipeline().validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (!(acc_threshold_deg > 0.0 && acc_threshold_deg <= 180.0)) {
    throw ConfigError("evaluation.threshold_deg must lie in (0, 180]");
  }
}

RunConfig config_from_json(const json& j) {
  reject_unknown(j, {"grid_cells", "fusion", "tracker", "trajectory", "mode_mean_window", "evaluation",
                     "earth_radius_m", "seed", "method", "paths"},
                 "config");
  RunConfig c;
  if (j.contains("grid_cells")) c.grid_cells = static_cast<int>(integer(j["grid_cells"], "config.grid_cells"));
  if (j.contains("fusion")) {
    const json& f = j["fusion"];
    const std::string w = "config.fusion";
    reject_unknown(f, {"k", "t", "flip_gate_threshold_deg", "mode", "flip_policy", "relock_votes"}, w);
    read_opt(f, "k", c.fusion.k, w);
    read_opt(f, "t", c.fusion.t, w);
    if (f.contains("flip_gate_threshold_deg")) {
      c.fusion.flip_gate_threshold = deg_to_rad(number(f["flip_gate_threshold_deg"], w + ".flip_gate_threshold_deg"));
    }
    if (f.contains("mode")) c.fusion.mode = parse_fusion_mode(string(f["mode"], w + ".mode"));
    if (f.contains("flip_policy")) c.fusion.flip_policy = parse_flip_policy(string(f["flip_policy"], w + ".flip_policy"));
    read_opt(f, "relock_votes", c.fusion.relock_votes, w);
  }
  if (j.contains("tracker")) {
    const json& t = j["tracker"];
    reject_unknown(t, {"iou_threshold", "max_age"}, "config.tracker");
    read_opt(t, "iou_threshold", c.tracker.iou_threshold, "config.tracker");
    read_opt(t, "max_age", c.tracker.max_age, "config.tracker");
  }
  if (j.contains("trajectory")) {
    reject_unknown(j["trajectory"], {"min_speed"}, "config.trajectory");
    read_opt(j["trajectory"], "min_speed", c.min_speed, "config.trajectory");
  }
  read_opt(j, "mode_mean_window", c.mode_mean_window, "config");
  if (j.contains("evaluation")) {
    const json& e = j["evaluation"];
    const std::string w = "config.evaluation";
    reject_unknown(e, {"undefined_policy", "threshold_deg", "methods"}, w);
    if (e.contains("undefined_policy")) {
      c.undefined_policy = parse_undefined_policy(string(e["undefined_policy"], w + ".undefined_policy"));
    }
    read_opt(e, "threshold_deg", c.acc_threshold_deg, w);
    if (e.contains("methods")) {
      if (!e["methods"].is_array()) throw ConfigError(w + ".methods must be an array");
      std::string csv;
      for (const auto& m : e["methods"]) csv += string(m, w + ".methods[]") + ",";
      c.eval_methods = parse_method_list(csv);
    }
  }
  read_opt(j, "earth_radius_m", c.earth_radius, "config");
  if (j.contains("seed")) {
    const long long seed = integer(j["seed"], "config.seed");
    if (seed < 0) throw ConfigError("config.seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
  }
  if (j.contains("method")) {
    const auto m = parse_method(string(j["method"], "config.method"));
    if (!m) throw ConfigError("config.method: unknown method");
    c.method = *m;
  }
  if (j.contains("paths")) {
    const json& p = j["paths"];
    const std::string w = "config.paths";
    reject_unknown(p, {"scenario", "out_dir", "detections", "camera", "ground_truth", "fused", "output"}, w);
    const auto path_of = [&](const char* key, std::optional<std::filesystem::path>& out) {
      if (p.contains(key)) out = string(p[key], w + "." + key);
    };
    path_of("scenario", c.paths.scenario);
    path_of("out_dir", c.paths.out_dir);
    path_of("detections", c.paths.detections);
    path_of("camera", c.paths.camera);
    path_of("ground_truth", c.paths.ground_truth);
    path_of("fused", c.paths.fused);
    path_of("output", c.paths.output);
  }
  c.validate();
  return c;
}

RunConfig read_config_file(const std::filesystem::path& path) {
  return config_from_json(parse_file(path, "config"));
}

GeoJsonExport export_geojson(std::istream& fused, const std::optional<CameraPose>& camera,
                             double earth_radius) {
  GeoJsonExport out;
  ordered_json features = ordered_json::array();
  for_each_record(fused, [&](const json& j) {
    const int frame = frame_of(j);
    const int id = id_of(j);
    std::optional<double> lat = opt_number(j, "lat");
    std::optional<double> lon = opt_number(j, "lon");
    if ((!lat || !lon) && camera && j.contains("bbox") && !j["bbox"].is_null()) {
      try {
        const GeoPoint g = geolocate(*camera, bbox_from_json(j["bbox"]).bottom_center(), earth_radius);
        lat = g.lat;
        lon = g.lon;
      } catch (const NoIntersection&) {
      }
    }
    if (!lat || !lon) {
      ++out.skipped;
      return;
    }
    features.push_back(ordered_json{
        {"type", "Feature"},
        {"geometry", {{"type", "Point"}, {"coordinates", {*lon, *lat}}}},
        {"properties",
         {{"id", id}, {"frame", frame}, {"heading_deg", opt(opt_number(j, "heading_abs_deg"))},
          {"entropy", opt(opt_number(j, "entropy"))}}}});
    ++out.features;
  });
  out.collection = ordered_json{{"type", "FeatureCollection"}, {"features", std::move(features)}};
  return out;
}

}  // namespace seayaw::io
