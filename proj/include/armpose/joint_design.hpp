#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "armpose/orthogonal_array.hpp"

namespace armpose {

enum class Provenance { Orthogonal, Random, Validation };

const char* to_string(Provenance p) noexcept;
Provenance provenance_from_string(std::string_view s);

/// n poses x k joints, angles in degrees, each within [lower_bound, upper_bound].
struct JointDesign {
  int poses = 0;
  int joints = 0;
  std::vector<double> angles_deg;  // row-major
  double lower_bound = -55.0;
  double upper_bound = 55.0;
  Provenance provenance = Provenance::Orthogonal;

  double at(int pose, int joint) const {
    return angles_deg[static_cast<std::size_t>(pose) * joints + joint];
  }
  std::vector<double> row(int pose) const;

  /// Throws InvalidRange if any angle leaves the bounds.
  void validate() const;
};

/// angle = step * level + offset. Bounds are offset and offset + step*(s-1).
JointDesign map_to_joint_angles(const OrthogonalArray& oa, double step_deg, double offset_deg);

/// Independent uniform draws over [lo, hi], fully determined by `seed`.
JointDesign random_design(int poses, int joints, double lo_deg, double hi_deg,
                          std::uint64_t seed, Provenance provenance = Provenance::Random);

/// Header `j1,...,jk`, one pose per line in shortest round-trip decimal.
std::string design_to_csv(const JointDesign& design);

/// Throws ParseError naming the offending line. Bounds and provenance are not
/// part of the file; angles are checked against the given bounds.
JointDesign design_from_csv(std::string_view text, double lower_bound = -55.0,
                            double upper_bound = 55.0,
                            Provenance provenance = Provenance::Orthogonal);

}  // namespace armpose
