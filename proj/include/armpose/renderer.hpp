#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "armpose/kinematics.hpp"

namespace armpose {

/// Pinhole camera. `pose` maps world points into the camera frame
/// (x right, y down, z forward).
struct CameraModel {
  double fx = 64.0, fy = 64.0;
  double cx = 32.0, cy = 32.0;
  int width = 64, height = 64;
  Se3 pose;
  double near = 0.5, far = 4.0;

  /// Throws InvalidRange.
  void validate() const;
  Eigen::Vector3d center_world() const;
  /// Unit world-space direction through the center of pixel (u, v).
  Eigen::Vector3d pixel_ray(int u, int v) const;
};

/// Camera-from-world transform for an eye looking at `target`.
Se3 look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
            const Eigen::Vector3d& up = Eigen::Vector3d::UnitZ());

/// 64x64 view from 2.5 m off the base, aimed at the workspace center.
CameraModel default_camera();

using Rgb = std::array<double, 3>;

struct SceneConfig {
  Rgb background_rgb{1.0, 1.0, 1.0};
  double background_depth = 4.0;
  /// One color per capsule (pedestal first), same length as link_radii.
  std::vector<Rgb> link_rgb;
  /// One distinct color per joint marker.
  std::vector<Rgb> marker_rgb;
  double marker_radius = 0.06;

  /// Throws InvalidRange.
  void validate() const;
};

/// Scene for `model`: white background at the far plane, dark links, a pale
/// pedestal, and markers at evenly spaced hues.
SceneConfig default_scene(const RobotModel& model, const CameraModel& camera);

/// H x W x 4 image, row-major from the top-left pixel, channels R,G,B,D.
struct RgbdImage {
  int width = 0;
  int height = 0;
  static constexpr int channels = 4;
  std::vector<float> data;

  RgbdImage() = default;
  RgbdImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * channels, 0.0f) {}

  float& at(int row, int col, int ch) {
    return data[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }
  float at(int row, int col, int ch) const {
    return data[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }
  bool operator==(const RgbdImage&) const = default;
};

/// Smallest t >= 0 at which origin + t * direction touches the capsule of
/// radius r around segment [a, b] (a == b gives a sphere).
std::optional<double> ray_capsule_intersect(const Eigen::Vector3d& origin,
                                            const Eigen::Vector3d& direction,
                                            const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                            double radius);

/// A renderable primitive in world coordinates.
struct Capsule {
  Eigen::Vector3d a, b;
  double radius;
  Rgb rgb;
  bool marker;
};

/// Pedestal, links, and joint markers for one pose, world frame.
std::vector<Capsule> scene_primitives(const RobotModel& model, const JointVector& joints,
                                      const SceneConfig& scene);

/// Flat-shaded z-buffer render of a primitive list; raw depth in meters.
RgbdImage render_primitives(const std::vector<Capsule>& prims, const CameraModel& camera,
                            const SceneConfig& scene);

/// Raw RGB-D capture of the arm at `joints`. Throws LimitViolation.
RgbdImage render_rgbd(const RobotModel& model, const JointVector& joints,
                      const CameraModel& camera, const SceneConfig& scene);

/// Depth channel mapped to (d - near) / (far - near), clamped to [0, 1].
RgbdImage normalize(const RgbdImage& image, const CameraModel& camera);

/// RGBD file: "RGBD", u32 width, u32 height, u32 channels (4), u32 0, then
/// float32 pixels, all little-endian.
std::string encode_rgbd(const RgbdImage& image);
RgbdImage decode_rgbd(std::string_view bytes);

}  // namespace armpose
