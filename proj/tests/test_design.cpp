#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <doctest.h>

#include "armpose/error.hpp"
#include "armpose/galois_field.hpp"
#include "armpose/joint_design.hpp"
#include "armpose/orthogonal_array.hpp"
#include "armpose/rng.hpp"
#include "support.hpp"

using namespace armpose;
using test_support::error_kind_of;

namespace {

// Independent pair counter: every column pair must hold each ordered level
// pair exactly `lambda` times.
bool pairs_balanced(const OrthogonalArray& oa, int lambda) {
  for (int a = 0; a < oa.factors(); ++a)
    for (int b = a + 1; b < oa.factors(); ++b) {
      std::map<std::pair<int, int>, int> counts;
      for (int r = 0; r < oa.runs(); ++r) ++counts[{oa.at(r, a), oa.at(r, b)}];
      if (static_cast<int>(counts.size()) != oa.levels() * oa.levels()) return false;
      for (const auto& [pair, n] : counts)
        if (n != lambda) return false;
    }
  return true;
}

OrthogonalArray relabel(const OrthogonalArray& oa, RngStream& rng) {
  const int k = oa.factors(), s = oa.levels();
  std::vector<int> perm_cols(k);
  std::iota(perm_cols.begin(), perm_cols.end(), 0);
  for (int i = k - 1; i > 0; --i) std::swap(perm_cols[i], perm_cols[rng.below(i + 1)]);
  std::vector<std::vector<int>> maps(k, std::vector<int>(s));
  for (auto& m : maps) {
    std::iota(m.begin(), m.end(), 0);
    for (int i = s - 1; i > 0; --i) std::swap(m[i], m[rng.below(i + 1)]);
  }
  std::vector<int> cells(oa.cells().size());
  for (int r = 0; r < oa.runs(); ++r)
    for (int c = 0; c < k; ++c) cells[r * k + c] = maps[c][oa.at(r, perm_cols[c])];
  return OrthogonalArray(oa.spec(), cells);
}

}  // namespace

TEST_CASE("galois fields satisfy the field axioms") {
  for (int q : {2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 49}) {
    CAPTURE(q);
    GaloisField f(q);
    for (int a = 0; a < q; ++a) {
      CHECK(f.add(a, 0) == a);
      CHECK(f.mul(a, 1) == a);
      CHECK(f.add(a, f.neg(a)) == 0);
      if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
      for (int b = 0; b < q; ++b) {
        CHECK(f.add(a, b) == f.add(b, a));
        CHECK(f.mul(a, b) == f.mul(b, a));
        if (a != 0 && b != 0) CHECK(f.mul(a, b) != 0);
        const int c = (a + 2 * b + 1) % q;
        CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
      }
    }
  }
  CHECK(error_kind_of([] { GaloisField f(12); }) == ErrorKind::UnsupportedDesign);
  CHECK(prime_power(12) == std::nullopt);
  CHECK(prime_power(27) == std::make_pair(3, 3));
}

TEST_CASE("OA(4,3,2,2) is the XOR array") {
  const auto oa = construct_oa(DesignSpec::make(4, 3, 2, 2));
  std::set<std::vector<int>> rows;
  for (int r = 0; r < 4; ++r) rows.insert({oa.at(r, 0), oa.at(r, 1), oa.at(r, 2)});
  CHECK(rows == std::set<std::vector<int>>{{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  const auto rep = verify_strength(oa, 2);
  CHECK(rep.pass);
  CHECK(rep.index == 1.0);
}

TEST_CASE("OA(9,4,3,2) over GF(3)") {
  const auto oa = construct_oa(DesignSpec::make(9, 4, 3, 2));
  CHECK(oa.runs() == 9);
  CHECK(oa.factors() == 4);
  CHECK(pairs_balanced(oa, 1));
  CHECK(verify_strength(oa, 2).pass);
}

TEST_CASE("flagship OA(144,7,12,2)") {
  const auto spec = DesignSpec::make(144, 7, 12, 2);
  CHECK(spec.index == 1);
  const auto oa = construct_oa(spec);
  CHECK(oa.runs() == 144);
  CHECK(oa.factors() == 7);
  CHECK(oa.levels() == 12);
  for (int v : oa.cells()) CHECK((v >= 0 && v < 12));
  CHECK(pairs_balanced(oa, 1));
  const auto rep = verify_strength(oa, 2);
  CHECK(rep.pass);
  CHECK(rep.index == 1.0);
  CHECK(oa == embedded_oa12(7));

  SUBCASE("strength 3 reports the fractional index and fails") {
    const auto r3 = verify_strength(oa, 3);
    CHECK_FALSE(r3.pass);
    CHECK(r3.index == doctest::Approx(144.0 / 1728.0));
  }
  SUBCASE("five mutually orthogonal latin squares of order 12") {
    const auto mols = latin_squares_from_oa(oa);
    CHECK(mols.order == 12);
    CHECK(mols.squares.size() == 5);
    CHECK(mols.valid());
    const auto back = oa_from_latin_squares(mols);
    CHECK(verify_strength(back, 2).pass);
  }
  SUBCASE("column permutations and level relabelings keep strength 2") {
    RngStream rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
      const auto shuffled = relabel(oa, rng);
      CHECK(verify_strength(shuffled, 2).pass);
      CHECK(pairs_balanced(shuffled, 1));
    }
  }
  SUBCASE("any single-cell corruption breaks it") {
    RngStream rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      auto cells = oa.cells();
      const auto i = rng.below(cells.size());
      cells[i] = (cells[i] + 1 + static_cast<int>(rng.below(11))) % 12;
      const OrthogonalArray bad(spec, cells);
      const auto rep = verify_strength(bad, 2);
      CHECK_FALSE(rep.pass);
      CHECK(rep.columns.size() == 2);
      CHECK(rep.describe().find("columns") != std::string::npos);
    }
  }
}

TEST_CASE("every prime-power order up to 13 reaches s + 1 columns") {
  for (int s : {2, 3, 4, 5, 7, 8, 9, 11, 13}) {
    CAPTURE(s);
    const auto oa = construct_oa(DesignSpec::make(s * s, s + 1, s, 2));
    CHECK(pairs_balanced(oa, 1));
    CHECK(verify_strength(oa, 2).pass);
    const auto r3 = verify_strength(oa, 3);
    CHECK_FALSE(r3.pass);
  }
}

TEST_CASE("kronecker route for composite orders") {
  for (auto [s, k] : std::vector<std::pair<int, int>>{{6, 3}, {10, 3}, {15, 4}, {20, 5}}) {
    CAPTURE(s);
    const auto oa = construct_oa(DesignSpec::make(s * s, k, s, 2));
    CHECK(pairs_balanced(oa, 1));
  }
  CHECK(error_kind_of([] { construct_oa(DesignSpec::make(36, 4, 6, 2)); }) == ErrorKind::UnsupportedDesign);
}

TEST_CASE("unsupported and invalid specs") {
  CHECK(error_kind_of([] { construct_oa(DesignSpec::make(144, 9, 12, 2)); }) == ErrorKind::UnsupportedDesign);
  CHECK(error_kind_of([] { construct_oa(DesignSpec::make(144, 8, 12, 2)); }) == ErrorKind::UnsupportedDesign);
  CHECK(error_kind_of([] { construct_oa(DesignSpec::make(27, 4, 3, 3)); }) == ErrorKind::UnsupportedDesign);
  CHECK(error_kind_of([] { construct_oa(DesignSpec::make(18, 4, 3, 2)); }) == ErrorKind::UnsupportedDesign);
  CHECK(error_kind_of([] { DesignSpec::make(10, 3, 3, 2); }) == ErrorKind::InvalidSpec);
  CHECK(error_kind_of([] { DesignSpec::make(9, 1, 3, 2); }) == ErrorKind::InvalidSpec);
  CHECK(error_kind_of([] { DesignSpec::make(1, 1, 1, 1); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("verify_strength on a duplicated column") {
  const OrthogonalArray oa({4, 2, 2, 2, 1}, {0, 0, 0, 0, 1, 1, 1, 1});
  const auto rep = verify_strength(oa, 2);
  CHECK_FALSE(rep.pass);
  CHECK(rep.columns == std::vector<int>{0, 1});
  // (0,0) is seen twice where once is expected; (0,1) never appears.
  CHECK(rep.level_tuple == std::vector<int>{0, 0});
  CHECK(rep.observed == 2);
  CHECK(rep.expected == 1);
  CHECK(error_kind_of([&] { verify_strength(oa, 3); }) == ErrorKind::InvalidSpec);
  CHECK(error_kind_of([&] { verify_strength(oa, 0); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("OA csv round trip") {
  const auto oa = embedded_oa12();
  const auto text = oa_to_csv(oa);
  CHECK(text.rfind("f1,f2,f3,f4,f5,f6,f7\n", 0) == 0);
  CHECK(oa_from_csv(text) == oa);
  CHECK(error_kind_of([] { oa_from_csv(""); }) == ErrorKind::Parse);
  CHECK(error_kind_of([] { oa_from_csv("f1,f2\n0,1\n1\n"); }) == ErrorKind::Parse);
  CHECK(error_kind_of([] { oa_from_csv("f1,f2\n0,x\n"); }) == ErrorKind::Parse);
}

TEST_CASE("level to angle mapping") {
  CHECK(map_to_joint_angles(OrthogonalArray({1, 1, 12, 1, 1}, {0}), 10, -55).at(0, 0) == -55.0);
  CHECK(map_to_joint_angles(OrthogonalArray({1, 1, 12, 1, 1}, {11}), 10, -55).at(0, 0) == 55.0);
  CHECK(map_to_joint_angles(OrthogonalArray({1, 1, 12, 1, 1}, {5}), 10, -55).at(0, 0) == -5.0);

  const auto oa = embedded_oa12();
  const auto d = map_to_joint_angles(oa, 10, -55);
  CHECK(d.poses == 144);
  CHECK(d.joints == 7);
  CHECK(d.provenance == Provenance::Orthogonal);
  std::set<double> grid;
  for (int i = 0; i < 12; ++i) grid.insert(-55.0 + 10.0 * i);
  for (std::size_t i = 0; i < d.angles_deg.size(); ++i) {
    const double a = d.angles_deg[i];
    CHECK(grid.count(a) == 1);
    // Affine: undoing the map recovers the integer level exactly.
    CHECK((a - -55.0) / 10.0 == static_cast<double>(oa.cells()[i]));
  }
  CHECK(*std::min_element(d.angles_deg.begin(), d.angles_deg.end()) == -55.0);
  CHECK(*std::max_element(d.angles_deg.begin(), d.angles_deg.end()) == 55.0);
}

TEST_CASE("random designs") {
  const auto a = random_design(144, 7, -55, 55, 3);
  const auto b = random_design(144, 7, -55, 55, 3);
  CHECK(a.angles_deg == b.angles_deg);
  CHECK(a.angles_deg.size() == 1008);
  for (double v : a.angles_deg) CHECK((v >= -55.0 && v <= 55.0));
  CHECK(a.provenance == Provenance::Random);

  for (std::uint64_t s = 0; s < 12; ++s)
    CHECK(random_design(32, 7, -55, 55, s).angles_deg != random_design(32, 7, -55, 55, s + 100).angles_deg);
  CHECK(random_design(32, 7, -55, 55, 0, Provenance::Validation).angles_deg !=
        random_design(32, 7, -55, 55, 0, Provenance::Random).angles_deg);

  const auto big = random_design(100000, 1, -55, 55, 11);
  double sum = 0.0;
  for (double v : big.angles_deg) sum += v;
  CHECK(std::abs(sum / 1e5) < 1.0);
  CHECK(*std::min_element(big.angles_deg.begin(), big.angles_deg.end()) < -53.0);
  CHECK(*std::max_element(big.angles_deg.begin(), big.angles_deg.end()) > 53.0);

  CHECK(error_kind_of([] { random_design(4, 7, 10, 10, 0); }) == ErrorKind::InvalidRange);
  CHECK(error_kind_of([] { random_design(4, 7, 10, -10, 0); }) == ErrorKind::InvalidRange);
}

TEST_CASE("design csv") {
  const auto flagship = map_to_joint_angles(embedded_oa12(), 10, -55);
  const auto text = design_to_csv(flagship);
  CHECK(text.rfind("j1,j2,j3,j4,j5,j6,j7\n", 0) == 0);
  CHECK(design_from_csv(text).angles_deg == flagship.angles_deg);

  const auto rnd = random_design(50, 7, -55, 55, 9);
  CHECK(design_from_csv(design_to_csv(rnd)).angles_deg == rnd.angles_deg);

  CHECK(error_kind_of([] { design_from_csv(""); }) == ErrorKind::Parse);
  try {
    design_from_csv("j1,j2,j3,j4,j5,j6,j7\n1,2,3,4,5,6,7\n1,2,3,4,5,6\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK(error_kind_of([] { design_from_csv("j1\n60\n"); }) == ErrorKind::Parse);
  CHECK(error_kind_of([] { design_from_csv("j1\nabc\n"); }) == ErrorKind::Parse);
}
