#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace armpose {

/// Returns (p, m) with q = p^m for prime p, or nullopt if q is not a prime power.
std::optional<std::pair<int, int>> prime_power(int q);

/// Finite field GF(q), q = p^m. Elements are the integers [0, q): the base-p
/// digits of an element are its polynomial coefficients (lowest digit first),
/// reduced modulo the first monic irreducible polynomial of degree m found by
/// lexicographic search. 0 and 1 are the additive and multiplicative identities.
class GaloisField {
 public:
  explicit GaloisField(int q);

  int order() const noexcept { return q_; }
  int characteristic() const noexcept { return p_; }
  int degree() const noexcept { return m_; }

  int add(int a, int b) const { return add_[a * q_ + b]; }
  int mul(int a, int b) const { return mul_[a * q_ + b]; }
  int neg(int a) const { return neg_[a]; }
  int sub(int a, int b) const { return add(a, neg(b)); }
  int inv(int a) const;

 private:
  int q_, p_, m_;
  std::vector<int> add_, mul_, neg_, inv_;
};

}  // namespace armpose
