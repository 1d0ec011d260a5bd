#include "armpose/orthogonal_array.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "armpose/error.hpp"
#include "armpose/galois_field.hpp"
#include "text_util.hpp"

namespace armpose {

namespace {

long long ipow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// (12,6;1) difference matrix over Z2 x Z6, element (a, b) encoded as 6a + b.
// Row 0 is zero and row 1 is the identity; rows 2..5 are orthomorphisms whose
// pairwise differences are again bijections, so for any two rows the
// column-wise differences cover the group exactly once.
constexpr std::array<std::array<int, 12>, 6> kDifferenceMatrix12 = {{
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11},
    {0, 2, 1, 6, 8, 7, 10, 9, 11, 4, 3, 5},
    {0, 3, 8, 10, 1, 9, 2, 6, 5, 7, 11, 4},
    {0, 4, 10, 9, 7, 1, 11, 5, 3, 2, 8, 6},
    {0, 8, 6, 4, 3, 10, 9, 11, 2, 5, 1, 7},
}};

constexpr int z2z6_add(int x, int y) {
  return ((x / 6 + y / 6) % 2) * 6 + (x % 6 + y % 6) % 6;
}

// Prime-power factorisation of n as a list of p^e parts.
std::vector<int> prime_power_parts(int n) {
  std::vector<int> parts;
  for (int p = 2; n > 1; ++p) {
    if (n % p != 0) continue;
    int part = 1;
    while (n % p == 0) {
      n /= p;
      part *= p;
    }
    parts.push_back(part);
  }
  return parts;
}

OrthogonalArray truncate_columns(const OrthogonalArray& oa, int factors) {
  std::vector<int> cells;
  cells.reserve(static_cast<std::size_t>(oa.runs()) * factors);
  for (int r = 0; r < oa.runs(); ++r)
    for (int c = 0; c < factors; ++c) cells.push_back(oa.at(r, c));
  auto spec = oa.spec();
  spec.factors = factors;
  return OrthogonalArray(spec, std::move(cells));
}

}  // namespace

DesignSpec DesignSpec::make(int runs, int factors, int levels, int strength) {
  DesignSpec spec{runs, factors, levels, strength, 0};
  if (levels >= 2 && strength >= 1 && strength <= 16) {
    const long long block = ipow(levels, strength);
    if (block > 0 && runs % block == 0) spec.index = static_cast<int>(runs / block);
  }
  spec.validate();
  return spec;
}

void DesignSpec::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::InvalidSpec, m); };
  if (runs < 1) fail("runs must be positive");
  if (factors < 1) fail("factors must be positive");
  if (levels < 2) fail("levels must be at least 2");
  if (strength < 1) fail("strength must be positive");
  if (factors < strength) fail("factors must be >= strength");
  if (index < 1 || static_cast<long long>(index) * ipow(levels, strength) != runs)
    fail("runs must equal index * levels^strength with a positive integer index");
}

OrthogonalArray::OrthogonalArray(DesignSpec spec, std::vector<int> cells)
    : spec_(spec), cells_(std::move(cells)) {
  if (spec_.runs < 1 || spec_.factors < 1 || spec_.levels < 2)
    throw Error(ErrorKind::InvalidSpec, "array needs positive runs/factors and >= 2 levels");
  if (cells_.size() != static_cast<std::size_t>(spec_.runs) * spec_.factors)
    throw Error(ErrorKind::InvalidSpec, "cell count does not match runs x factors");
  for (int v : cells_)
    if (v < 0 || v >= spec_.levels)
      throw Error(ErrorKind::InvalidSpec, "level " + std::to_string(v) + " outside [0, levels)");
}

std::string StrengthReport::describe() const {
  std::ostringstream os;
  if (pass) {
    os << "strength " << strength << " holds with index " << index;
    return os.str();
  }
  os << "strength " << strength << " fails";
  if (level_tuple.empty()) {
    os << ": index " << index << " is not a positive integer";
    return os.str();
  }
  os << " on columns (";
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i] + 1;
  os << "): level tuple (";
  for (std::size_t i = 0; i < level_tuple.size(); ++i) os << (i ? "," : "") << level_tuple[i];
  os << ") occurs " << observed << " times, expected " << expected;
  return os.str();
}

StrengthReport verify_strength(const OrthogonalArray& oa, int t) {
  if (t < 1 || t > oa.factors())
    throw Error(ErrorKind::InvalidSpec, "strength must be in [1, factors]");
  StrengthReport report;
  report.strength = t;
  const int s = oa.levels();
  const long long block = ipow(s, t);
  report.index = static_cast<double>(oa.runs()) / static_cast<double>(block);

  std::vector<int> cols(t);
  for (int i = 0; i < t; ++i) cols[i] = i;

  if (oa.runs() % block != 0) {
    report.columns = cols;
    return report;
  }
  const int expected = static_cast<int>(oa.runs() / block);
  report.expected = expected;

  std::vector<int> counts(static_cast<std::size_t>(block));
  while (true) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int r = 0; r < oa.runs(); ++r) {
      std::size_t key = 0;
      for (int c : cols) key = key * s + oa.at(r, c);
      ++counts[key];
    }
    for (std::size_t key = 0; key < counts.size(); ++key) {
      if (counts[key] == expected) continue;
      report.columns = cols;
      report.level_tuple.assign(t, 0);
      std::size_t rest = key;
      for (int i = t - 1; i >= 0; --i) {
        report.level_tuple[i] = static_cast<int>(rest % s);
        rest /= s;
      }
      report.observed = counts[key];
      return report;
    }
    // Next t-subset in lexicographic order.
    int i = t - 1;
    while (i >= 0 && cols[i] == oa.factors() - t + i) --i;
    if (i < 0) break;
    ++cols[i];
    for (int j = i + 1; j < t; ++j) cols[j] = cols[j - 1] + 1;
  }
  report.pass = true;
  return report;
}

OrthogonalArray rao_hamming_oa(int levels, int factors) {
  const GaloisField gf(levels);
  const int s = levels;
  if (factors < 2 || factors > s + 1)
    throw Error(ErrorKind::UnsupportedDesign, "Rao-Hamming gives at most levels + 1 factors");
  // Run (a, b): columns a, b, then a + x*b for x = 1 .. s-1.
  std::vector<int> cells;
  cells.reserve(static_cast<std::size_t>(s) * s * factors);
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) {
      cells.push_back(a);
      cells.push_back(b);
      for (int x = 1; x + 1 < factors; ++x) cells.push_back(gf.add(a, gf.mul(x, b)));
    }
  return OrthogonalArray(DesignSpec::make(s * s, factors, s, 2), std::move(cells));
}

OrthogonalArray embedded_oa12(int factors) {
  if (factors < 2 || factors > 7)
    throw Error(ErrorKind::UnsupportedDesign, "the embedded 12-level table has 7 factors");
  // Run (c, g): column 0 is the difference-matrix column c, column 1 + r is
  // row r of the matrix at c shifted by the group element g.
  std::vector<int> cells;
  cells.reserve(144 * 7);
  for (int c = 0; c < 12; ++c)
    for (int g = 0; g < 12; ++g) {
      cells.push_back(c);
      for (const auto& row : kDifferenceMatrix12) cells.push_back(z2z6_add(row[c], g));
    }
  OrthogonalArray full(DesignSpec::make(144, 7, 12, 2), std::move(cells));
  return factors == 7 ? full : truncate_columns(full, factors);
}

OrthogonalArray kronecker_oa(const OrthogonalArray& a, const OrthogonalArray& b) {
  const int k = std::min(a.factors(), b.factors());
  const int s = a.levels() * b.levels();
  const int n = a.runs() * b.runs();
  std::vector<int> cells;
  cells.reserve(static_cast<std::size_t>(n) * k);
  for (int i = 0; i < a.runs(); ++i)
    for (int j = 0; j < b.runs(); ++j)
      for (int c = 0; c < k; ++c) cells.push_back(a.at(i, c) * b.levels() + b.at(j, c));
  const int t = std::min(a.spec().strength, b.spec().strength);
  DesignSpec spec{n, k, s, t, a.spec().index * b.spec().index};
  return OrthogonalArray(spec, std::move(cells));
}

OrthogonalArray construct_oa(const DesignSpec& requested) {
  requested.validate();
  const auto& spec = requested;
  if (spec.strength != 2)
    throw Error(ErrorKind::UnsupportedDesign, "only strength-2 constructions are available");
  if (spec.index != 1)
    throw Error(ErrorKind::UnsupportedDesign, "only index-1 constructions are available");

  const int s = spec.levels;
  const int k = spec.factors;
  const auto unsupported = [&] {
    std::ostringstream os;
    os << "no construction for OA(" << spec.runs << "," << k << "," << s << ",2)";
    return Error(ErrorKind::UnsupportedDesign, os.str());
  };

  if (prime_power(s)) {
    if (k <= s + 1) return rao_hamming_oa(s, k);
    throw unsupported();
  }
  if (s == 12 && k <= 7) return embedded_oa12(k);
  const auto parts = prime_power_parts(s);
  int max_factors = s + 1;
  for (int part : parts) max_factors = std::min(max_factors, part + 1);
  if (k > max_factors) throw unsupported();
  OrthogonalArray acc = rao_hamming_oa(parts.front(), max_factors);
  for (std::size_t i = 1; i < parts.size(); ++i)
    acc = kronecker_oa(acc, rao_hamming_oa(parts[i], max_factors));
  return truncate_columns(acc, k);
}

bool LatinSquareSet::is_latin(std::size_t i) const {
  const auto& sq = squares.at(i);
  const int n = order;
  if (sq.size() != static_cast<std::size_t>(n) * n) return false;
  for (int r = 0; r < n; ++r) {
    std::vector<bool> row_seen(n), col_seen(n);
    for (int c = 0; c < n; ++c) {
      const int a = sq[r * n + c];
      const int b = sq[c * n + r];
      if (a < 0 || a >= n || b < 0 || b >= n || row_seen[a] || col_seen[b]) return false;
      row_seen[a] = col_seen[b] = true;
    }
  }
  return true;
}

bool LatinSquareSet::are_orthogonal(std::size_t i, std::size_t j) const {
  const auto& a = squares.at(i);
  const auto& b = squares.at(j);
  const int n = order;
  std::vector<bool> seen(static_cast<std::size_t>(n) * n);
  for (std::size_t cell = 0; cell < a.size(); ++cell) {
    const auto key = static_cast<std::size_t>(a[cell]) * n + b[cell];
    if (seen[key]) return false;
    seen[key] = true;
  }
  return true;
}

bool LatinSquareSet::valid() const {
  for (std::size_t i = 0; i < squares.size(); ++i) {
    if (!is_latin(i)) return false;
    for (std::size_t j = i + 1; j < squares.size(); ++j)
      if (!are_orthogonal(i, j)) return false;
  }
  return true;
}

LatinSquareSet latin_squares_from_oa(const OrthogonalArray& oa) {
  const int s = oa.levels();
  if (oa.runs() != s * s || oa.factors() < 2)
    throw Error(ErrorKind::InvalidSpec, "need an OA(s^2, k >= 2, s, 2)");
  LatinSquareSet set;
  set.order = s;
  for (int f = 2; f < oa.factors(); ++f) {
    std::vector<int> sq(static_cast<std::size_t>(s) * s, -1);
    for (int r = 0; r < oa.runs(); ++r) sq[oa.at(r, 0) * s + oa.at(r, 1)] = oa.at(r, f);
    set.squares.push_back(std::move(sq));
  }
  return set;
}

OrthogonalArray oa_from_latin_squares(const LatinSquareSet& mols) {
  const int s = mols.order;
  const int k = static_cast<int>(mols.squares.size()) + 2;
  std::vector<int> cells;
  cells.reserve(static_cast<std::size_t>(s) * s * k);
  for (int r = 0; r < s; ++r)
    for (int c = 0; c < s; ++c) {
      cells.push_back(r);
      cells.push_back(c);
      for (const auto& sq : mols.squares) cells.push_back(sq[r * s + c]);
    }
  return OrthogonalArray(DesignSpec::make(s * s, k, s, 2), std::move(cells));
}

std::string oa_to_csv(const OrthogonalArray& oa) {
  std::string out;
  for (int c = 0; c < oa.factors(); ++c) out += (c ? ",f" : "f") + std::to_string(c + 1);
  out += '\n';
  for (int r = 0; r < oa.runs(); ++r) {
    for (int c = 0; c < oa.factors(); ++c) {
      if (c) out += ',';
      out += std::to_string(oa.at(r, c));
    }
    out += '\n';
  }
  return out;
}

OrthogonalArray oa_from_csv(std::string_view text, int levels) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || detail::trim(lines[0]).empty()) throw ParseError(1, "empty OA file");
  const auto header = detail::split(detail::trim(lines[0]), ',');
  const int k = static_cast<int>(header.size());
  for (int c = 0; c < k; ++c)
    if (header[c] != "f" + std::to_string(c + 1))
      throw ParseError(1, "expected header f1..f" + std::to_string(k));

  std::vector<int> cells;
  int runs = 0;
  int max_level = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line = detail::trim(lines[i]);
    if (line.empty()) continue;
    const auto fields = detail::split(line, ',');
    if (static_cast<int>(fields.size()) != k)
      throw ParseError(i + 1, "expected " + std::to_string(k) + " fields, got " +
                                  std::to_string(fields.size()));
    for (const auto f : fields) {
      const auto v = detail::parse_number<int>(f);
      if (!v || *v < 0) throw ParseError(i + 1, "invalid level '" + std::string(f) + "'");
      max_level = std::max(max_level, *v);
      cells.push_back(*v);
    }
    ++runs;
  }
  if (runs == 0) throw ParseError(lines.size(), "OA file has no rows");
  const int s = levels > 0 ? levels : std::max(max_level + 1, 2);
  if (max_level >= s) throw ParseError(0, "level exceeds declared level count");
  DesignSpec spec{runs, k, s, std::min(2, k), 0};
  const long long block = ipow(s, spec.strength);
  if (runs % block == 0) spec.index = static_cast<int>(runs / block);
  return OrthogonalArray(spec, std::move(cells));
}

}  // namespace armpose
