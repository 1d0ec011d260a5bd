#include "armpose/renderer.hpp"

#include <algorithm>
#include <cmath>

#include "armpose/error.hpp"
#include "armpose/io.hpp"

namespace armpose {

void CameraModel::validate() const {
  if (!(fx > 0 && fy > 0)) throw Error(ErrorKind::InvalidRange, "camera focal lengths must be positive");
  if (width < 1 || height < 1) throw Error(ErrorKind::InvalidRange, "camera image size must be positive");
  if (!(cx >= 0 && cx < width && cy >= 0 && cy < height))
    throw Error(ErrorKind::InvalidRange, "principal point outside the image");
  if (!(near > 0 && near < far)) throw Error(ErrorKind::InvalidRange, "camera needs 0 < near < far");
  if (!pose.is_valid()) throw Error(ErrorKind::InvalidRange, "camera pose is not a rigid motion");
}

Eigen::Vector3d CameraModel::center_world() const {
  return -(pose.rotation.transpose() * pose.translation);
}

Eigen::Vector3d CameraModel::pixel_ray(int u, int v) const {
  const Eigen::Vector3d cam((u + 0.5 - cx) / fx, (v + 0.5 - cy) / fy, 1.0);
  return (pose.rotation.transpose() * cam).normalized();
}

Se3 look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target, const Eigen::Vector3d& up) {
  const Eigen::Vector3d forward = (target - eye).normalized();
  const Eigen::Vector3d right = forward.cross(up).normalized();
  const Eigen::Vector3d down = forward.cross(right);
  Se3 world_from_camera;
  world_from_camera.rotation.col(0) = right;
  world_from_camera.rotation.col(1) = down;
  world_from_camera.rotation.col(2) = forward;
  world_from_camera.translation = eye;
  return world_from_camera.inverse();
}

CameraModel default_camera() {
  CameraModel cam;
  const Eigen::Vector3d target(0.45, 0.0, 0.35);
  const Eigen::Vector3d eye = 2.5 * Eigen::Vector3d(0.35, -0.85, 0.40).normalized();
  cam.pose = look_at(eye, target);
  return cam;
}

void SceneConfig::validate() const {
  auto check = [](const Rgb& c) {
    for (double v : c)
      if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::InvalidRange, "color component outside [0, 1]");
  };
  check(background_rgb);
  for (const auto& c : link_rgb) check(c);
  for (const auto& c : marker_rgb) check(c);
  for (std::size_t i = 0; i < marker_rgb.size(); ++i)
    for (std::size_t j = i + 1; j < marker_rgb.size(); ++j)
      if (marker_rgb[i] == marker_rgb[j]) throw Error(ErrorKind::InvalidRange, "marker colors must be distinct");
  if (!(marker_radius >= 0.0)) throw Error(ErrorKind::InvalidRange, "marker radius must be >= 0");
  if (!std::isfinite(background_depth)) throw Error(ErrorKind::InvalidRange, "background depth must be finite");
}

namespace {

Rgb hue_to_rgb(double hue) {
  // HSV with full saturation and value; hue in [0, 1).
  const double h = hue * 6.0;
  const int sector = static_cast<int>(h) % 6;
  const double f = h - std::floor(h);
  switch (sector) {
    case 0: return {1.0, f, 0.0};
    case 1: return {1.0 - f, 1.0, 0.0};
    case 2: return {0.0, 1.0, f};
    case 3: return {0.0, 1.0 - f, 1.0};
    case 4: return {f, 0.0, 1.0};
    default: return {1.0, 0.0, 1.0 - f};
  }
}

std::optional<double> ray_sphere_entry(const Eigen::Vector3d& o, const Eigen::Vector3d& d,
                                       const Eigen::Vector3d& c, double r) {
  const Eigen::Vector3d oc = o - c;
  const double b = oc.dot(d);
  const double k = oc.dot(oc) - r * r;
  const double h = b * b - k;
  if (h < 0.0) return std::nullopt;
  const double t = -b - std::sqrt(h);
  if (t < 0.0) return std::nullopt;
  return t;
}

double point_segment_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                              const Eigen::Vector3d& b) {
  const Eigen::Vector3d ab = b - a;
  const double len2 = ab.dot(ab);
  double s = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

}  // namespace

SceneConfig default_scene(const RobotModel& model, const CameraModel& camera) {
  SceneConfig scene;
  scene.background_depth = camera.far;
  scene.link_rgb.assign(model.link_radii.size(), Rgb{0.15, 0.15, 0.15});
  if (!scene.link_rgb.empty()) scene.link_rgb.front() = {0.85, 0.85, 0.85};
  for (std::size_t i = 0; i < model.joint_count(); ++i)
    scene.marker_rgb.push_back(hue_to_rgb(static_cast<double>(i) / model.joint_count()));
  return scene;
}

std::optional<double> ray_capsule_intersect(const Eigen::Vector3d& origin,
                                            const Eigen::Vector3d& direction,
                                            const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                            double radius) {
  if (point_segment_distance(origin, a, b) <= radius) return 0.0;

  std::optional<double> best;
  auto consider = [&](std::optional<double> t) {
    if (t && (!best || *t < *best)) best = t;
  };

  // Lateral surface: the first root of the infinite cylinder, kept only if it
  // projects strictly inside the segment. Caps are covered by the spheres.
  const Eigen::Vector3d ba = b - a;
  const Eigen::Vector3d oa = origin - a;
  const double baba = ba.dot(ba);
  if (baba > 0.0) {
    const double bard = ba.dot(direction);
    const double baoa = ba.dot(oa);
    const double rdoa = direction.dot(oa);
    const double oaoa = oa.dot(oa);
    const double qa = baba - bard * bard;
    if (qa > 1e-12 * baba) {
      const double qb = baba * rdoa - baoa * bard;
      const double qc = baba * oaoa - baoa * baoa - radius * radius * baba;
      const double h = qb * qb - qa * qc;
      if (h >= 0.0) {
        const double t = (-qb - std::sqrt(h)) / qa;
        const double y = baoa + t * bard;
        if (t >= 0.0 && y > 0.0 && y < baba) consider(t);
      }
    }
  }
  consider(ray_sphere_entry(origin, direction, a, radius));
  if (baba > 0.0) consider(ray_sphere_entry(origin, direction, b, radius));
  return best;
}

std::vector<Capsule> scene_primitives(const RobotModel& model, const JointVector& joints,
                                      const SceneConfig& scene) {
  if (scene.link_rgb.size() != model.link_radii.size())
    throw Error(ErrorKind::InvalidRange, "scene needs one link color per link radius");
  if (!scene.marker_rgb.empty() && scene.marker_rgb.size() != model.joint_count())
    throw Error(ErrorKind::InvalidRange, "scene needs one marker color per joint");

  const auto frames = joint_frames(model, joints);
  std::vector<Eigen::Vector3d> points;
  points.reserve(frames.size() + 1);
  points.push_back(model.base.translation);  // pedestal foot at the base origin
  for (const auto& f : frames) points.push_back(model.base.apply(f.translation));

  std::vector<Capsule> prims;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (model.link_radii[i] > 0.0)
      prims.push_back({points[i], points[i + 1], model.link_radii[i], scene.link_rgb[i], false});
  }
  if (scene.marker_radius > 0.0) {
    for (std::size_t j = 0; j < scene.marker_rgb.size(); ++j) {
      const auto& c = points[j + 1];
      prims.push_back({c, c, scene.marker_radius, scene.marker_rgb[j], true});
    }
  }
  return prims;
}

RgbdImage render_primitives(const std::vector<Capsule>& prims, const CameraModel& camera,
                            const SceneConfig& scene) {
  camera.validate();
  scene.validate();
  RgbdImage img(camera.width, camera.height);
  const Eigen::Vector3d origin = camera.center_world();
  for (int v = 0; v < camera.height; ++v) {
    for (int u = 0; u < camera.width; ++u) {
      const Eigen::Vector3d dir = camera.pixel_ray(u, v);
      const Capsule* hit = nullptr;
      double best = 0.0;
      for (const auto& p : prims) {
        const auto t = ray_capsule_intersect(origin, dir, p.a, p.b, p.radius);
        if (!t) continue;
        // Markers win ties against links.
        if (!hit || *t < best || (*t == best && p.marker && !hit->marker)) {
          hit = &p;
          best = *t;
        }
      }
      const Rgb& rgb = hit ? hit->rgb : scene.background_rgb;
      const double depth = hit ? std::clamp(best, camera.near, camera.far) : scene.background_depth;
      for (int c = 0; c < 3; ++c) img.at(v, u, c) = static_cast<float>(rgb[c]);
      img.at(v, u, 3) = static_cast<float>(depth);
    }
  }
  return img;
}

RgbdImage render_rgbd(const RobotModel& model, const JointVector& joints,
                      const CameraModel& camera, const SceneConfig& scene) {
  const auto bad = check_limits(model, joints);
  if (!bad.empty()) {
    std::string list;
    for (int j : bad) list += (list.empty() ? "" : ",") + std::to_string(j);
    throw Error(ErrorKind::LimitViolation, "joint limits violated at joint(s) " + list);
  }
  return render_primitives(scene_primitives(model, joints, scene), camera, scene);
}

RgbdImage normalize(const RgbdImage& image, const CameraModel& camera) {
  RgbdImage out = image;
  const double span = camera.far - camera.near;
  for (std::size_t i = 3; i < out.data.size(); i += RgbdImage::channels) {
    const double d = (static_cast<double>(image.data[i]) - camera.near) / span;
    out.data[i] = static_cast<float>(std::clamp(d, 0.0, 1.0));
  }
  return out;
}

std::string encode_rgbd(const RgbdImage& image) {
  ByteWriter w;
  w.bytes("RGBD");
  w.u32(static_cast<std::uint32_t>(image.width));
  w.u32(static_cast<std::uint32_t>(image.height));
  w.u32(RgbdImage::channels);
  w.u32(0);
  for (float f : image.data) w.f32(f);
  return std::move(w.str());
}

RgbdImage decode_rgbd(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.bytes(4) != "RGBD") throw ParseError(0, "not an RGBD file (bad magic)");
  const auto w = r.u32();
  const auto h = r.u32();
  const auto ch = r.u32();
  const auto reserved = r.u32();
  if (ch != RgbdImage::channels || reserved != 0) throw ParseError(0, "RGBD header: channels must be 4, reserved 0");
  if (w == 0 || h == 0 || w > 1u << 15 || h > 1u << 15) throw ParseError(0, "RGBD header: bad image size");
  const std::size_t n = static_cast<std::size_t>(w) * h * ch;
  if (r.remaining() != n * 4) throw ParseError(0, "RGBD payload size does not match header");
  RgbdImage img(static_cast<int>(w), static_cast<int>(h));
  for (auto& f : img.data) {
    f = r.f32();
    if (!std::isfinite(f)) throw ParseError(0, "RGBD payload holds a non-finite value");
  }
  return img;
}

}  // namespace armpose
