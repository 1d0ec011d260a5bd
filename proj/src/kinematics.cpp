#include "armpose/kinematics.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "armpose/error.hpp"
#include "armpose/io.hpp"

namespace armpose {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

Eigen::Matrix4d Se3::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

double Se3::orthonormality_error() const {
  return (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
}

bool Se3::is_valid(double tol) const {
  return rotation.allFinite() && translation.allFinite() && orthonormality_error() <= tol &&
         std::abs(rotation.determinant() - 1.0) <= tol;
}

double max_abs_diff(const Se3& a, const Se3& b) {
  return std::max((a.rotation - b.rotation).cwiseAbs().maxCoeff(),
                  (a.translation - b.translation).cwiseAbs().maxCoeff());
}

Eigen::Matrix3d skew(const Eigen::Vector3d& w) {
  Eigen::Matrix3d m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return m;
}

ScrewAxis ScrewAxis::revolute(const Eigen::Vector3d& omega, const Eigen::Vector3d& q) {
  return {omega, -omega.cross(q)};
}

ScrewAxis ScrewAxis::prismatic(const Eigen::Vector3d& direction) {
  return {Eigen::Vector3d::Zero(), direction};
}

void ScrewAxis::validate() const {
  if (!omega.allFinite() || !v.allFinite()) throw Error(ErrorKind::InvalidAxis, "non-finite screw axis");
  if (omega.isZero(0.0)) {
    if (std::abs(v.norm() - 1.0) > 1e-9)
      throw Error(ErrorKind::InvalidAxis, "prismatic axis needs |v| = 1");
    return;
  }
  if (std::abs(omega.norm() - 1.0) > 1e-9)
    throw Error(ErrorKind::InvalidAxis, "revolute axis needs |omega| = 1");
}

Se3 twist_exp(const ScrewAxis& axis, double theta) {
  axis.validate();
  if (!axis.is_revolute()) return {Eigen::Matrix3d::Identity(), axis.v * theta};
  const Eigen::Matrix3d w = skew(axis.omega);
  const Eigen::Matrix3d w2 = w * w;
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const Eigen::Matrix3d rot = Eigen::Matrix3d::Identity() + s * w + (1.0 - c) * w2;
  const Eigen::Matrix3d g = Eigen::Matrix3d::Identity() * theta + (1.0 - c) * w + (theta - s) * w2;
  return {rot, g * axis.v};
}

JointVector JointVector::from_degrees(std::span<const double> deg) {
  JointVector j;
  j.rad_.reserve(deg.size());
  for (double d : deg) j.rad_.push_back(d * kDegToRad);
  return j;
}

JointVector JointVector::from_radians(std::span<const double> rad) {
  JointVector j;
  j.rad_.assign(rad.begin(), rad.end());
  return j;
}

std::vector<double> JointVector::degrees() const {
  std::vector<double> out;
  out.reserve(rad_.size());
  for (double r : rad_) out.push_back(r / kDegToRad);
  return out;
}

void RobotModel::validate() const {
  const auto n = screw_axes.size();
  if (n == 0) throw Error(ErrorKind::DimensionMismatch, "robot model has no joints");
  if (joint_home_points.size() != n || joint_limits.size() != n || link_radii.size() != n + 1)
    throw Error(ErrorKind::DimensionMismatch, "robot model arrays disagree on joint count");
  for (const auto& s : screw_axes) s.validate();
  for (const auto& l : joint_limits)
    if (!(l.lo_deg < l.hi_deg)) throw Error(ErrorKind::InvalidRange, "joint limit lo must be < hi");
  for (double r : link_radii)
    if (!(r >= 0.0)) throw Error(ErrorKind::InvalidRange, "link radius must be >= 0");
  if (!home_config.is_valid() || !base.is_valid())
    throw Error(ErrorKind::InvalidRange, "home or base transform is not a rigid motion");
}

RobotModel sawyer_like_model() {
  RobotModel m;
  m.name = "sawyer-like-7dof";
  m.note = "Stand-in geometry with Sawyer-like proportions, not vendor data.";
  const Eigen::Vector3d z(0, 0, 1), y(0, 1, 0), x(1, 0, 0);
  // Alternating yaw / pitch / roll axes; lateral offsets make every roll joint
  // move something downstream.
  const std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> joints = {
      {z, {0.00, 0.00, 0.30}}, {y, {0.08, 0.00, 0.40}}, {x, {0.28, 0.06, 0.40}},
      {y, {0.48, 0.12, 0.40}}, {x, {0.68, 0.06, 0.40}}, {y, {0.88, 0.00, 0.40}},
      {x, {0.98, 0.05, 0.40}},
  };
  for (const auto& [omega, q] : joints) {
    m.screw_axes.push_back(ScrewAxis::revolute(omega, q));
    m.joint_home_points.push_back(q);
    m.joint_limits.push_back({-55.0, 55.0});
  }
  m.home_config.rotation << 0, 0, 1,
                            0, 1, 0,
                            -1, 0, 0;
  m.home_config.translation = {1.10, 0.11, 0.40};
  m.link_radii = {0.05, 0.05, 0.045, 0.045, 0.04, 0.04, 0.035, 0.03};
  return m;
}

Se3 poe_fk(const RobotModel& model, const JointVector& joints) {
  if (joints.size() != model.joint_count())
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(model.joint_count()) + " joint values, got " +
                    std::to_string(joints.size()));
  Se3 t;
  for (std::size_t i = 0; i < joints.size(); ++i) t = t * twist_exp(model.screw_axes[i], joints.radians()[i]);
  return t * model.home_config;
}

std::vector<Se3> joint_frames(const RobotModel& model, const JointVector& joints) {
  if (joints.size() != model.joint_count())
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(model.joint_count()) + " joint values, got " +
                    std::to_string(joints.size()));
  std::vector<Se3> frames;
  frames.reserve(joints.size() + 1);
  Se3 prefix;
  for (std::size_t i = 0; i < joints.size(); ++i) {
    prefix = prefix * twist_exp(model.screw_axes[i], joints.radians()[i]);
    frames.push_back(prefix * Se3{Eigen::Matrix3d::Identity(), model.joint_home_points[i]});
  }
  frames.push_back(prefix * model.home_config);
  return frames;
}

std::vector<int> check_limits(const RobotModel& model, const JointVector& joints) {
  if (joints.size() != model.joint_count())
    throw Error(ErrorKind::DimensionMismatch, "joint count does not match robot model");
  const auto deg = joints.degrees();
  std::vector<int> bad;
  for (std::size_t i = 0; i < deg.size(); ++i) {
    // Compare in degrees with a tiny slack so +-55 survives the radian round trip.
    const double slack = 1e-9;
    if (!(deg[i] >= model.joint_limits[i].lo_deg - slack && deg[i] <= model.joint_limits[i].hi_deg + slack))
      bad.push_back(static_cast<int>(i) + 1);
  }
  return bad;
}

namespace {

using nlohmann::json;

json vec_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ParseError(0, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json se3_json(const Se3& t) {
  json rot = json::array();
  for (int r = 0; r < 3; ++r) rot.push_back(json::array({t.rotation(r, 0), t.rotation(r, 1), t.rotation(r, 2)}));
  return {{"rotation", rot}, {"translation", vec_json(t.translation)}};
}

Se3 se3_from(const json& j) {
  Se3 t;
  const auto& rot = j.at("rotation");
  if (!rot.is_array() || rot.size() != 3) throw ParseError(0, "rotation must be 3x3");
  for (int r = 0; r < 3; ++r) t.rotation.row(r) = vec_from(rot[r]).transpose();
  t.translation = vec_from(j.at("translation"));
  return t;
}

}  // namespace

std::string robot_model_to_json(const RobotModel& model) {
  json j;
  j["format"] = "armpose-robot";
  j["version"] = 1;
  j["name"] = model.name;
  j["note"] = model.note;
  json joints = json::array();
  for (std::size_t i = 0; i < model.joint_count(); ++i) {
    json jj;
    jj["omega"] = vec_json(model.screw_axes[i].omega);
    jj["q"] = vec_json(model.joint_home_points[i]);
    if (!model.screw_axes[i].is_revolute()) jj["v"] = vec_json(model.screw_axes[i].v);
    jj["limits_deg"] = json::array({model.joint_limits[i].lo_deg, model.joint_limits[i].hi_deg});
    joints.push_back(jj);
  }
  j["joints"] = joints;
  j["home_config"] = se3_json(model.home_config);
  j["base"] = se3_json(model.base);
  j["link_radii"] = model.link_radii;
  return j.dump(2) + "\n";
}

RobotModel robot_model_from_json(const std::string& text) {
  RobotModel m;
  try {
    const json j = json::parse(text);
    if (j.value("version", 0) != 1) throw Error(ErrorKind::VersionMismatch, "unsupported robot model version");
    m.name = j.value("name", "");
    m.note = j.value("note", "");
    for (const auto& jj : j.at("joints")) {
      const auto omega = vec_from(jj.at("omega"));
      const auto q = vec_from(jj.at("q"));
      m.screw_axes.push_back(jj.contains("v") ? ScrewAxis{omega, vec_from(jj["v"])}
                                              : ScrewAxis::revolute(omega, q));
      m.joint_home_points.push_back(q);
      const auto& lim = jj.at("limits_deg");
      m.joint_limits.push_back({lim.at(0).get<double>(), lim.at(1).get<double>()});
    }
    m.home_config = se3_from(j.at("home_config"));
    if (j.contains("base")) m.base = se3_from(j["base"]);
    m.link_radii = j.at("link_radii").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("robot model: ") + e.what());
  }
  m.validate();
  return m;
}

RobotModel load_robot_model(const std::string& path) { return robot_model_from_json(read_file(path)); }

}  // namespace armpose
