#include "wedgetact/config_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace wedgetact {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int line_of_byte(const std::string& text, std::size_t byte) {
  return 1 + int(std::count(text.begin(), text.begin() + std::min(byte, text.size()), '\n'));
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ":" + std::to_string(line_of_byte(text, e.byte)) + ": " +
                      e.what());
  }
}

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& origin, const std::string& section) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) {
      throw ConfigError(origin + ": unknown key '" + section + it.key() + "'");
    }
  }
}

double num(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(std::string("config key '") + key +
                                               "' must be a number");
  return obj[key].get<double>();
}

Vec2 vec2(const json& obj, const char* key, Vec2 fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj[key];
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(std::string("config key '") + key + "' must be [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

OpticalConfig default_config() {
  OpticalConfig cfg = make_config(1.45, deg_to_rad(90.0), deg_to_rad(90.0), 12.0, 6.0);
  cfg.sensing_start = 1.0;
  cfg.sensing_end = 11.0;
  cfg.led_intensity = 100.0;
  cfg.ambient_intensity = 40.0;
  cfg.absorptivity = 0.95;
  cfg.noise_sigma = 0.8;
  return cfg;
}

OpticalConfig parse_config_json(const std::string& text, const std::string& origin) {
  const json root = parse_json(text, origin);
  if (!root.is_object()) throw ConfigError(origin + ": top level must be an object");
  reject_unknown(root, {"medium", "geometry", "led", "ambient", "camera", "shell", "render",
                        "fresnel"},
                 origin, "");

  const json medium = root.value("medium", json::object());
  const json geometry = root.value("geometry", json::object());
  const json led = root.value("led", json::object());
  const json ambient = root.value("ambient", json::object());
  const json camera = root.value("camera", json::object());
  const json shell = root.value("shell", json::object());
  const json render = root.value("render", json::object());
  reject_unknown(medium, {"refractive_index", "air_index"}, origin, "medium.");
  reject_unknown(geometry,
                 {"theta_tv_deg", "theta_s_deg", "touch_width_mm", "depth_mm",
                  "sensing_span_mm"},
                 origin, "geometry.");
  reject_unknown(led, {"position_mm", "axis_deg", "cone_half_angle_deg", "intensity"}, origin,
                 "led.");
  reject_unknown(ambient, {"intensity"}, origin, "ambient.");
  reject_unknown(camera, {"position_mm", "fov_deg", "pixels"}, origin, "camera.");
  reject_unknown(shell, {"absorptivity"}, origin, "shell.");
  reject_unknown(render, {"exposure_scale", "noise_sigma"}, origin, "render.");

  const OpticalConfig defaults = default_config();
  const double n_medium = num(medium, "refractive_index", defaults.media.n_medium);
  const double n_air = num(medium, "air_index", defaults.media.n_air);
  const double theta_tv = deg_to_rad(num(geometry, "theta_tv_deg", rad_to_deg(defaults.theta_tv)));
  const double theta_s = deg_to_rad(num(geometry, "theta_s_deg", rad_to_deg(defaults.theta_s)));
  const double width = num(geometry, "touch_width_mm", defaults.touch_width());
  const double depth = num(geometry, "depth_mm", defaults.depth);

  OpticalConfig cfg = make_config(n_medium, theta_tv, theta_s, width, depth);
  cfg.media.n_air = n_air;

  if (geometry.contains("sensing_span_mm")) {
    const Vec2 span = vec2(geometry, "sensing_span_mm", {cfg.sensing_start, cfg.sensing_end});
    cfg.sensing_start = span.x;
    cfg.sensing_end = span.y;
  } else if (width == defaults.touch_width()) {
    cfg.sensing_start = defaults.sensing_start;
    cfg.sensing_end = defaults.sensing_end;
  }
  cfg.led.position = vec2(led, "position_mm", defaults.led.position);
  cfg.led.axis = deg_to_rad(num(led, "axis_deg", rad_to_deg(defaults.led.axis)));
  cfg.led.half_angle =
      deg_to_rad(num(led, "cone_half_angle_deg", rad_to_deg(defaults.led.half_angle)));
  cfg.led_intensity = num(led, "intensity", defaults.led_intensity);
  cfg.ambient_intensity = num(ambient, "intensity", defaults.ambient_intensity);
  cfg.camera.position = vec2(camera, "position_mm", cfg.camera.position);
  cfg.camera.fov = deg_to_rad(num(camera, "fov_deg", rad_to_deg(defaults.camera.fov)));
  cfg.camera.pixel_count = int(num(camera, "pixels", defaults.camera.pixel_count));
  cfg.absorptivity = num(shell, "absorptivity", defaults.absorptivity);
  cfg.exposure_scale = num(render, "exposure_scale", 0.0);
  cfg.noise_sigma = num(render, "noise_sigma", defaults.noise_sigma);
  if (root.contains("fresnel")) {
    if (!root["fresnel"].is_boolean()) throw ConfigError(origin + ": 'fresnel' must be a bool");
    cfg.fresnel = root["fresnel"].get<bool>();
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

OpticalConfig load_config(const std::string& path) {
  return parse_config_json(read_file(path), path);
}

void save_config(const std::string& path, const OpticalConfig& cfg) {
  json root;
  root["medium"] = {{"refractive_index", cfg.media.n_medium}, {"air_index", cfg.media.n_air}};
  root["geometry"] = {{"theta_tv_deg", rad_to_deg(cfg.theta_tv)},
                      {"theta_s_deg", rad_to_deg(cfg.theta_s)},
                      {"touch_width_mm", cfg.touch_width()},
                      {"depth_mm", cfg.depth},
                      {"sensing_span_mm", {cfg.sensing_start, cfg.sensing_end}}};
  root["led"] = {{"position_mm", {cfg.led.position.x, cfg.led.position.y}},
                 {"axis_deg", rad_to_deg(cfg.led.axis)},
                 {"cone_half_angle_deg", rad_to_deg(cfg.led.half_angle)},
                 {"intensity", cfg.led_intensity}};
  root["ambient"] = {{"intensity", cfg.ambient_intensity}};
  root["camera"] = {{"position_mm", {cfg.camera.position.x, cfg.camera.position.y}},
                    {"fov_deg", rad_to_deg(cfg.camera.fov)},
                    {"pixels", cfg.camera.pixel_count}};
  root["shell"] = {{"absorptivity", cfg.absorptivity}};
  root["render"] = {{"exposure_scale", cfg.exposure_scale}, {"noise_sigma", cfg.noise_sigma}};
  root["fresnel"] = cfg.fresnel;

  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path);
  out << root.dump(2) << "\n";
}

ContactSpec load_contact(const std::string& path, double touch_width) {
  const std::string text = read_file(path);
  const json root = parse_json(text, path);
  if (!root.is_object() || !root.contains("intervals") || !root["intervals"].is_array()) {
    throw ConfigError(path + ": expected {\"intervals\": [...]}");
  }
  ContactSpec spec;
  for (const json& j : root["intervals"]) {
    reject_unknown(j, {"start_mm", "end_mm", "albedo", "texture"}, path, "intervals.");
    ContactInterval iv;
    if (!j.contains("start_mm") || !j.contains("end_mm")) {
      throw ConfigError(path + ": interval needs start_mm and end_mm");
    }
    iv.start = j["start_mm"].get<double>();
    iv.end = j["end_mm"].get<double>();
    if (j.contains("albedo")) {
      const json& a = j["albedo"];
      if (!a.is_array() || a.size() != 3) throw ConfigError(path + ": albedo must be [r,g,b]");
      iv.albedo = {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
    }
    if (j.contains("texture")) {
      for (const json& t : j["texture"]) {
        if (!t.is_array() || t.size() != 3) {
          throw ConfigError(path + ": texture entries must be [r,g,b]");
        }
        iv.texture.push_back({t[0].get<double>(), t[1].get<double>(), t[2].get<double>()});
      }
    }
    spec.intervals.push_back(std::move(iv));
  }
  try {
    spec.validate(touch_width);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return spec;
}

}  // namespace wedgetact
