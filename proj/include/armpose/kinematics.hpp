#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace armpose {

/// Rigid transform: x -> rotation * x + translation.
struct Se3 {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static Se3 identity() { return {}; }

  Se3 operator*(const Se3& rhs) const {
    return {rotation * rhs.rotation, rotation * rhs.translation + translation};
  }
  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + translation; }
  Se3 inverse() const {
    const Eigen::Matrix3d rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }
  Eigen::Matrix4d matrix() const;

  /// max |R^T R - I| entry.
  double orthonormality_error() const;
  /// Orthonormality and det(R) = +1 within tol.
  bool is_valid(double tol = 1e-9) const;
};

/// Max-abs difference over rotation and translation entries.
double max_abs_diff(const Se3& a, const Se3& b);

Eigen::Matrix3d skew(const Eigen::Vector3d& w);

/// Screw axis (omega, v). Revolute: |omega| = 1. Prismatic: omega = 0, |v| = 1.
struct ScrewAxis {
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();

  /// Revolute axis through point q: v = -omega x q.
  static ScrewAxis revolute(const Eigen::Vector3d& omega, const Eigen::Vector3d& q);
  static ScrewAxis prismatic(const Eigen::Vector3d& direction);

  bool is_revolute() const { return omega.squaredNorm() > 0.0; }
  /// Throws InvalidAxis.
  void validate() const;
};

/// Closed-form exponential e^{[S] theta}. Throws InvalidAxis.
Se3 twist_exp(const ScrewAxis& axis, double theta_rad);

struct JointLimit {
  double lo_deg = -55.0;
  double hi_deg = 55.0;
};

/// Joint angles; degrees at the boundary, radians inside.
class JointVector {
 public:
  JointVector() = default;
  static JointVector from_degrees(std::span<const double> deg);
  static JointVector from_radians(std::span<const double> rad);
  static JointVector zeros(std::size_t n) { return from_radians(std::vector<double>(n, 0.0)); }

  std::size_t size() const noexcept { return rad_.size(); }
  const std::vector<double>& radians() const noexcept { return rad_; }
  std::vector<double> degrees() const;

 private:
  std::vector<double> rad_;
};

/// Serial arm in product-of-exponentials form. Everything is expressed in the
/// base frame; `base` places that frame in the world for rendering.
struct RobotModel {
  std::string name;
  std::string note;
  std::vector<ScrewAxis> screw_axes;
  std::vector<Eigen::Vector3d> joint_home_points;
  Se3 home_config;  // end-effector pose at zero angles (M)
  std::vector<JointLimit> joint_limits;
  /// link_radii[0] is the pedestal (base origin to joint 1), link_radii[i]
  /// joins joint i to joint i+1, and the last one joins the last joint to M.
  std::vector<double> link_radii;
  Se3 base;

  std::size_t joint_count() const noexcept { return screw_axes.size(); }
  /// Throws InvalidAxis / InvalidRange / DimensionMismatch.
  void validate() const;
};

/// The shipped 7-DOF stand-in with Sawyer-like proportions.
RobotModel sawyer_like_model();

/// T = e^{[S1]t1} ... e^{[Sn]tn} M. Throws DimensionMismatch.
Se3 poe_fk(const RobotModel& model, const JointVector& joints);

/// n + 1 frames: joint i's home frame (identity rotation at q_i) moved by the
/// first i exponentials, then the end effector (equal to poe_fk).
std::vector<Se3> joint_frames(const RobotModel& model, const JointVector& joints);

/// 1-based indices of joints outside their closed [lo, hi] interval; empty when ok.
std::vector<int> check_limits(const RobotModel& model, const JointVector& joints);

std::string robot_model_to_json(const RobotModel& model);
RobotModel robot_model_from_json(const std::string& text);
RobotModel load_robot_model(const std::string& path);

}  // namespace armpose
