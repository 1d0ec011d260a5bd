#include "armpose/joint_design.hpp"

#include "armpose/error.hpp"
#include "armpose/rng.hpp"
#include "text_util.hpp"

namespace armpose {

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::Orthogonal: return "orthogonal";
    case Provenance::Random: return "random";
    case Provenance::Validation: return "validation";
  }
  return "unknown";
}

Provenance provenance_from_string(std::string_view s) {
  if (s == "orthogonal") return Provenance::Orthogonal;
  if (s == "random") return Provenance::Random;
  if (s == "validation") return Provenance::Validation;
  throw ParseError(0, "unknown provenance '" + std::string(s) + "'");
}

std::vector<double> JointDesign::row(int pose) const {
  const auto first = angles_deg.begin() + static_cast<std::ptrdiff_t>(pose) * joints;
  return {first, first + joints};
}

void JointDesign::validate() const {
  if (!(lower_bound <= upper_bound)) throw Error(ErrorKind::InvalidRange, "design bounds inverted");
  if (angles_deg.size() != static_cast<std::size_t>(poses) * joints)
    throw Error(ErrorKind::InvalidRange, "design size does not match poses x joints");
  for (double a : angles_deg)
    if (!(a >= lower_bound && a <= upper_bound))
      throw Error(ErrorKind::InvalidRange, "angle " + detail::format_double(a) + " outside design bounds");
}

JointDesign map_to_joint_angles(const OrthogonalArray& oa, double step_deg, double offset_deg) {
  if (!(step_deg > 0.0)) throw Error(ErrorKind::InvalidRange, "step must be positive");
  JointDesign d;
  d.poses = oa.runs();
  d.joints = oa.factors();
  d.lower_bound = offset_deg;
  d.upper_bound = step_deg * (oa.levels() - 1) + offset_deg;
  d.provenance = Provenance::Orthogonal;
  d.angles_deg.reserve(oa.cells().size());
  for (int level : oa.cells()) d.angles_deg.push_back(step_deg * level + offset_deg);
  return d;
}

JointDesign random_design(int poses, int joints, double lo_deg, double hi_deg,
                          std::uint64_t seed, Provenance provenance) {
  if (!(lo_deg < hi_deg)) throw Error(ErrorKind::InvalidRange, "random design needs lo < hi");
  if (poses < 1 || joints < 1) throw Error(ErrorKind::InvalidRange, "random design needs n, k >= 1");
  JointDesign d;
  d.poses = poses;
  d.joints = joints;
  d.lower_bound = lo_deg;
  d.upper_bound = hi_deg;
  d.provenance = provenance;
  // Salted by provenance: a random and a validation design with one seed differ.
  RngStream rng = RngStream(seed).fork(static_cast<std::uint64_t>(provenance) + 1);
  d.angles_deg.resize(static_cast<std::size_t>(poses) * joints);
  for (auto& a : d.angles_deg) a = rng.uniform(lo_deg, hi_deg);
  return d;
}

std::string design_to_csv(const JointDesign& design) {
  std::string out;
  for (int j = 0; j < design.joints; ++j) out += (j ? ",j" : "j") + std::to_string(j + 1);
  out += '\n';
  for (int p = 0; p < design.poses; ++p) {
    for (int j = 0; j < design.joints; ++j) {
      if (j) out += ',';
      out += detail::format_double(design.at(p, j));
    }
    out += '\n';
  }
  return out;
}

JointDesign design_from_csv(std::string_view text, double lower_bound, double upper_bound,
                            Provenance provenance) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || detail::trim(lines[0]).empty()) throw ParseError(1, "empty design file");
  const auto header = detail::split(detail::trim(lines[0]), ',');
  const int k = static_cast<int>(header.size());
  for (int j = 0; j < k; ++j)
    if (header[j] != "j" + std::to_string(j + 1))
      throw ParseError(1, "expected header j1..j" + std::to_string(k));

  JointDesign d;
  d.joints = k;
  d.lower_bound = lower_bound;
  d.upper_bound = upper_bound;
  d.provenance = provenance;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line = detail::trim(lines[i]);
    if (line.empty()) continue;
    const auto fields = detail::split(line, ',');
    if (static_cast<int>(fields.size()) != k)
      throw ParseError(i + 1, "expected " + std::to_string(k) + " fields, got " +
                                  std::to_string(fields.size()));
    for (const auto f : fields) {
      const auto v = detail::parse_number<double>(f);
      if (!v) throw ParseError(i + 1, "invalid angle '" + std::string(f) + "'");
      if (!(*v >= lower_bound && *v <= upper_bound))
        throw ParseError(i + 1, "angle " + std::string(f) + " outside design bounds");
      d.angles_deg.push_back(*v);
    }
    ++d.poses;
  }
  if (d.poses == 0) throw ParseError(lines.size(), "design file has no rows");
  return d;
}

}  // namespace armpose
