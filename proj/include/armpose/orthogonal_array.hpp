#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace armpose {

/// Parameters of an OA(N, k, s, t) with index lambda = N / s^t.
struct DesignSpec {
  int runs = 0;
  int factors = 0;
  int levels = 0;
  int strength = 0;
  int index = 0;

  /// Fills in the index; throws InvalidSpec if N is not a multiple of s^t.
  static DesignSpec make(int runs, int factors, int levels, int strength);

  /// Throws Error(InvalidSpec) on any invariant violation.
  void validate() const;

  bool operator==(const DesignSpec&) const = default;
};

class OrthogonalArray {
 public:
  OrthogonalArray() = default;
  /// `cells` is row-major runs x factors; every entry must be in [0, levels).
  OrthogonalArray(DesignSpec spec, std::vector<int> cells);

  const DesignSpec& spec() const noexcept { return spec_; }
  int runs() const noexcept { return spec_.runs; }
  int factors() const noexcept { return spec_.factors; }
  int levels() const noexcept { return spec_.levels; }

  int at(int row, int col) const {
    return cells_[static_cast<std::size_t>(row) * spec_.factors + col];
  }
  const std::vector<int>& cells() const noexcept { return cells_; }

  bool operator==(const OrthogonalArray&) const = default;

 private:
  DesignSpec spec_;
  std::vector<int> cells_;
};

struct StrengthReport {
  bool pass = false;
  int strength = 0;
  /// runs / levels^t; non-integral values mean the property cannot hold.
  double index = 0.0;
  /// First violating column tuple (0-based) and level tuple, empty on pass.
  std::vector<int> columns;
  std::vector<int> level_tuple;
  int observed = 0;
  int expected = 0;

  std::string describe() const;
};

/// Checks that every t-subset of columns holds each ordered level t-tuple
/// exactly runs / levels^t times. Never throws for a well-formed array.
StrengthReport verify_strength(const OrthogonalArray& oa, int t);

/// Strength-2, index-1 constructions. Routes, in order: Rao-Hamming over
/// GF(s) for prime-power s with k <= s + 1; the embedded OA(144, k<=7, 12, 2)
/// table; Kronecker product of two coprime prime-power arrays.
/// Throws UnsupportedDesign when no route covers the request.
OrthogonalArray construct_oa(const DesignSpec& spec);

/// Rao-Hamming OA(s^2, s + 1, s, 2) truncated to `factors` columns.
OrthogonalArray rao_hamming_oa(int levels, int factors);

/// The embedded twelve-level array, first `factors` of its 7 columns.
OrthogonalArray embedded_oa12(int factors = 7);

/// Column-wise Kronecker product: levels multiply, runs multiply, and
/// factors is the minimum of the two inputs' factor counts.
OrthogonalArray kronecker_oa(const OrthogonalArray& a, const OrthogonalArray& b);

/// Order-s Latin squares; an index-1 strength-2 OA(s^2, m + 2, s, 2) and a
/// set of m mutually orthogonal squares are interchangeable.
struct LatinSquareSet {
  int order = 0;
  /// squares[i] is row-major order x order.
  std::vector<std::vector<int>> squares;

  bool is_latin(std::size_t i) const;
  bool are_orthogonal(std::size_t i, std::size_t j) const;
  /// All squares Latin and pairwise orthogonal.
  bool valid() const;
};

/// Reads squares off columns 2.. of an index-1 strength-2 array, using
/// columns 0 and 1 as row and column coordinates.
LatinSquareSet latin_squares_from_oa(const OrthogonalArray& oa);
OrthogonalArray oa_from_latin_squares(const LatinSquareSet& mols);

/// OA file: header `f1,...,fk`, then one comma-separated row of integer levels
/// per run. `levels` <= 0 infers levels as max entry + 1.
std::string oa_to_csv(const OrthogonalArray& oa);
OrthogonalArray oa_from_csv(std::string_view text, int levels = 0);

}  // namespace armpose
