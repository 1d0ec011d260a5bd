#pragma once

#include <string>
#include <string_view>

#include "armpose/experiment.hpp"
#include "armpose/renderer.hpp"

namespace armpose {

/// Everything a `key = value` config file can set. Defaults reproduce the
/// committed desk-scale setting.
struct CliConfig {
  TrainConfig train = TrainConfig::desk_scale();
  double design_step = 10.0;
  double design_offset = -55.0;
  double joint_lower = -55.0;
  double joint_upper = 55.0;
  CameraModel camera = default_camera();
  double marker_radius = 0.06;
  std::string robot_model;  // empty: built-in model

  /// Throws InvalidConfig / InvalidProbability / InvalidRange.
  void validate() const;
};

/// Flat UTF-8 `key = value` lines; `#` starts a comment. Unknown or repeated
/// keys and malformed values raise ParseError naming the line.
CliConfig parse_config(std::string_view text);
CliConfig load_config(const std::string& path);

/// Writes every key, so the output parses back to an equal config.
std::string config_to_text(const CliConfig& config, std::string_view header = {});

RobotModel resolve_robot(const CliConfig& config);
SceneConfig resolve_scene(const CliConfig& config, const RobotModel& model);

}  // namespace armpose
