#include "armpose/config.hpp"

#include <functional>
#include <map>
#include <set>

#include "armpose/error.hpp"
#include "armpose/io.hpp"
#include "text_util.hpp"

namespace armpose {

namespace {

using detail::format_double;
using detail::parse_number;

using Setter = std::function<void(CliConfig&, const std::string&)>;
using Getter = std::function<std::string(const CliConfig&)>;

struct Key {
  Setter set;
  Getter get;
};

template <class T>
T number(const std::string& v) {
  const auto out = parse_number<T>(v);
  if (!out) throw Error(ErrorKind::Parse, "'" + v + "' is not a valid number");
  return *out;
}

template <class T>
Key num(T CliConfig::*field) {
  return {[field](CliConfig& c, const std::string& v) { c.*field = number<T>(v); },
          [field](const CliConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return format_double(c.*field);
            else return std::to_string(c.*field);
          }};
}

template <class T>
Key train_num(T TrainConfig::*field) {
  return {[field](CliConfig& c, const std::string& v) { c.train.*field = number<T>(v); },
          [field](const CliConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return format_double(c.train.*field);
            else return std::to_string(c.train.*field);
          }};
}

template <class T>
Key camera_num(T CameraModel::*field) {
  return {[field](CliConfig& c, const std::string& v) { c.camera.*field = number<T>(v); },
          [field](const CliConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return format_double(c.camera.*field);
            else return std::to_string(c.camera.*field);
          }};
}

// Ordered as written by config_to_text.
const std::vector<std::pair<std::string, Key>>& keys() {
  static const std::vector<std::pair<std::string, Key>> table = {
      {"learning_rate", train_num(&TrainConfig::learning_rate)},
      {"batch_size", train_num(&TrainConfig::batch_size)},
      {"epochs", train_num(&TrainConfig::epochs)},
      {"dropout_p", train_num(&TrainConfig::dropout_p)},
      {"optimizer", {[](CliConfig& c, const std::string& v) { c.train.optimizer = v; },
                     [](const CliConfig& c) { return c.train.optimizer; }}},
      {"seed", train_num(&TrainConfig::seed)},
      {"stopping_loss",
       {[](CliConfig& c, const std::string& v) {
          if (v == "none") c.train.stopping_loss.reset();
          else c.train.stopping_loss = number<double>(v);
        },
        [](const CliConfig& c) {
          return c.train.stopping_loss ? format_double(*c.train.stopping_loss) : std::string("none");
        }}},
      {"conv_activation",
       {[](CliConfig& c, const std::string& v) { c.train.conv_activation = activation_from_string(v); },
        [](const CliConfig& c) { return std::string(to_string(c.train.conv_activation)); }}},
      {"target_margin", train_num(&TrainConfig::target_margin)},
      {"design_step", num(&CliConfig::design_step)},
      {"design_offset", num(&CliConfig::design_offset)},
      {"joint_lower", num(&CliConfig::joint_lower)},
      {"joint_upper", num(&CliConfig::joint_upper)},
      {"camera_width", camera_num(&CameraModel::width)},
      {"camera_height", camera_num(&CameraModel::height)},
      {"camera_fx", camera_num(&CameraModel::fx)},
      {"camera_fy", camera_num(&CameraModel::fy)},
      {"camera_cx", camera_num(&CameraModel::cx)},
      {"camera_cy", camera_num(&CameraModel::cy)},
      {"camera_near", camera_num(&CameraModel::near)},
      {"camera_far", camera_num(&CameraModel::far)},
      {"marker_radius", num(&CliConfig::marker_radius)},
      {"robot_model", {[](CliConfig& c, const std::string& v) { c.robot_model = v; },
                       [](const CliConfig& c) { return c.robot_model; }}},
  };
  return table;
}

}  // namespace

void CliConfig::validate() const {
  train.validate();
  if (!(design_step > 0.0)) throw Error(ErrorKind::InvalidConfig, "design_step must be positive");
  if (!(joint_lower < joint_upper)) throw Error(ErrorKind::InvalidRange, "joint_lower must be below joint_upper");
  camera.validate();
  if (!(marker_radius >= 0.0)) throw Error(ErrorKind::InvalidRange, "marker_radius must be >= 0");
}

CliConfig parse_config(std::string_view text) {
  std::map<std::string, const Key*> index;
  for (const auto& [name, key] : keys()) index[name] = &key;
  CliConfig config;
  std::set<std::string> seen;
  int line_no = 0;
  for (const auto& raw : detail::split_lines(text)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string name(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    const auto it = index.find(name);
    if (it == index.end()) throw ParseError(line_no, "unknown key '" + name + "'");
    if (!seen.insert(name).second) throw ParseError(line_no, "key '" + name + "' given twice");
    try {
      it->second->set(config, value);
    } catch (const Error& e) {
      throw ParseError(line_no, name + ": " + e.what());
    }
  }
  config.validate();
  return config;
}

CliConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string config_to_text(const CliConfig& config, std::string_view header) {
  std::string out;
  if (!header.empty()) out += "# " + std::string(header) + "\n";
  for (const auto& [name, key] : keys()) out += name + " = " + key.get(config) + "\n";
  return out;
}

RobotModel resolve_robot(const CliConfig& config) {
  return config.robot_model.empty() ? sawyer_like_model() : load_robot_model(config.robot_model);
}

SceneConfig resolve_scene(const CliConfig& config, const RobotModel& model) {
  auto scene = default_scene(model, config.camera);
  scene.marker_radius = config.marker_radius;
  return scene;
}

}  // namespace armpose
