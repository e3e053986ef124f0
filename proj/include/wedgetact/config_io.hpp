#pragma once

#include <stdexcept>
#include <string>

#include "wedgetact/optics.hpp"
#include "wedgetact/scene.hpp"

namespace wedgetact {

/// Raised for unreadable or malformed config files; the message carries
/// "path:line" when the position is known.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Paper-default sensor: n = 1.45, perpendicular touching/viewing surfaces,
/// vertical shell surface A, LED cone compliant with all three conditions.
OpticalConfig default_config();

/// JSON sensor config; angles in degrees and lengths in mm at this boundary,
/// radians/mm inside. Unknown keys are rejected. Missing keys fall back to
/// the paper defaults.
OpticalConfig load_config(const std::string& path);
void save_config(const std::string& path, const OpticalConfig& cfg);
OpticalConfig parse_config_json(const std::string& text, const std::string& origin);

/// JSON contact spec: {"intervals":[{"start_mm":a,"end_mm":b,
/// "albedo":[r,g,b], "texture":[[r,g,b],...]}]}.
ContactSpec load_contact(const std::string& path, double touch_width);

}  // namespace wedgetact
