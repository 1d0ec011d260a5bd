#include "armpose/galois_field.hpp"

#include <string>

#include "armpose/error.hpp"

namespace armpose {

std::optional<std::pair<int, int>> prime_power(int q) {
  if (q < 2) return std::nullopt;
  int p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (q % p != 0) p = q;  // q itself is prime
  int m = 0;
  int rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++m;
  }
  if (rest != 1) return std::nullopt;
  return std::make_pair(p, m);
}

namespace {

std::vector<int> digits(int x, int p, int m) {
  std::vector<int> d(m);
  for (int i = 0; i < m; ++i) {
    d[i] = x % p;
    x /= p;
  }
  return d;
}

int from_digits(const std::vector<int>& d, int p) {
  int x = 0;
  for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) x = x * p + d[i];
  return x;
}

// Product of a and b modulo the monic polynomial x^m + sum low[i] x^i.
int poly_mulmod(int a, int b, int p, int m, const std::vector<int>& low) {
  const auto da = digits(a, p, m);
  const auto db = digits(b, p, m);
  std::vector<int> prod(2 * m - 1, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
  for (int deg = 2 * m - 2; deg >= m; --deg) {
    const int c = prod[deg];
    if (c == 0) continue;
    prod[deg] = 0;
    // x^deg = x^(deg-m) * x^m and x^m = -sum low[i] x^i.
    for (int i = 0; i < m; ++i)
      prod[deg - m + i] = ((prod[deg - m + i] - c * low[i]) % p + p) % p;
  }
  prod.resize(m);
  return from_digits(prod, p);
}

}  // namespace

GaloisField::GaloisField(int q) : q_(q) {
  const auto pm = prime_power(q);
  if (!pm) throw Error(ErrorKind::UnsupportedDesign, "GF(" + std::to_string(q) + "): not a prime power");
  p_ = pm->first;
  m_ = pm->second;

  add_.resize(static_cast<std::size_t>(q) * q);
  neg_.resize(q);
  for (int a = 0; a < q; ++a) {
    const auto da = digits(a, p_, m_);
    std::vector<int> dn(m_);
    for (int i = 0; i < m_; ++i) dn[i] = (p_ - da[i]) % p_;
    neg_[a] = from_digits(dn, p_);
    for (int b = 0; b < q; ++b) {
      const auto db = digits(b, p_, m_);
      std::vector<int> ds(m_);
      for (int i = 0; i < m_; ++i) ds[i] = (da[i] + db[i]) % p_;
      add_[a * q + b] = from_digits(ds, p_);
    }
  }

  // The quotient ring is a field iff the modulus is irreducible iff every
  // nonzero element has an inverse.
  for (int cand = 0; cand < q; ++cand) {
    const auto low = digits(cand, p_, m_);
    if (m_ > 1 && low[0] == 0) continue;  // divisible by x
    std::vector<int> table(static_cast<std::size_t>(q) * q);
    std::vector<int> inverse(q, 0);
    bool field = true;
    for (int a = 1; a < q && field; ++a) {
      bool found = false;
      for (int b = 1; b < q; ++b) {
        const int c = poly_mulmod(a, b, p_, m_, low);
        if (c == 0) {
          field = false;
          break;
        }
        if (c == 1) {
          inverse[a] = b;
          found = true;
        }
      }
      field = field && found;
    }
    if (!field) continue;
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) table[a * q + b] = poly_mulmod(a, b, p_, m_, low);
    mul_ = std::move(table);
    inv_ = std::move(inverse);
    return;
  }
  throw Error(ErrorKind::UnsupportedDesign, "no irreducible polynomial found");
}

int GaloisField::inv(int a) const {
  if (a == 0) throw Error(ErrorKind::InvalidRange, "GF: inverse of zero");
  return inv_[a];
}

}  // namespace armpose
