#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "tamelink/error.hpp"

namespace tamelink::arith {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Value in F_p, represented by its integer lift in [0, p).
struct ResidueIndex {
  u64 value = 0;
  friend bool operator==(const ResidueIndex&, const ResidueIndex&) = default;
};

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128(a) * b) % m); }

/// base^exp mod modulus by square-and-multiply; intermediates stay in 128 bits.
inline u64 pow_mod(u64 base, u64 exp, u64 modulus) {
  if (modulus < 2) fail(errc::precondition, "pow_mod requires modulus >= 2");
  u64 result = 1 % modulus;
  base %= modulus;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, modulus);
    base = mul_mod(base, base, modulus);
    exp >>= 1;
  }
  return result;
}

namespace detail {

inline bool miller_rabin_witness(u64 n, u64 a, u64 d, int r) {
  u64 x = pow_mod(a % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < r; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

} // namespace detail

/// Deterministic primality test. The witness set covers all 64-bit inputs.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (a % n == 0) continue;
    if (!detail::miller_rabin_witness(n, a, d, r)) return false;
  }
  return true;
}

/// Prime factors of n, ascending, without multiplicity. Trial division.
inline std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> fs;
  for (u64 f = 2; f * f <= n; f += (f == 2 ? 1 : 2)) {
    if (n % f == 0) {
      fs.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) fs.push_back(n);
  return fs;
}

/// k-th smallest generator of (Z/q)^x (k = 0 gives the smallest). The smallest
/// root is the canonical normalization for everything downstream; k = 1 exists
/// so that results can be recomputed under a different choice.
inline u64 primitive_root_at(u64 q, unsigned k) {
  if (q == 2) return 1;
  if (!is_prime(q) || q % 2 == 0) fail(errc::precondition, "primitive_root expects an odd prime");
  const auto factors = prime_factors(q - 1);
  unsigned found = 0;
  for (u64 g = 2; g < q; ++g) {
    bool generates = true;
    for (u64 f : factors) {
      if (pow_mod(g, (q - 1) / f, q) == 1) {
        generates = false;
        break;
      }
    }
    if (generates && found++ == k) return g;
  }
  fail(errc::precondition, "no primitive root found; input not prime?");
}

/// Smallest g >= 2 generating (Z/q)^x.
inline u64 primitive_root(u64 q) { return primitive_root_at(q, 0); }

/// The index e in [0, p) with x^((q-1)/p) = zeta^e mod q, where
/// zeta = g^((q-1)/p) for the given generator g. e = 0 iff x is a p-th power
/// mod q. Since only the class mod p is wanted, e is found by stepping through
/// the p-element group of p-power-quotient roots of unity.
inline ResidueIndex residue_index_with_root(u64 q, u64 x, u64 p, u64 g) {
  if (q % p != 1) fail(errc::not_admissible, "residue_index requires q = 1 mod p");
  if (x % q == 0) fail(errc::divisor_conflict, "residue_index requires q not dividing x");
  const u64 cofactor = (q - 1) / p;
  const u64 target = pow_mod(x % q, cofactor, q);
  const u64 zeta = pow_mod(g, cofactor, q);
  u64 cur = 1;
  for (u64 e = 0; e < p; ++e) {
    if (cur == target) return ResidueIndex{e};
    cur = mul_mod(cur, zeta, q);
  }
  fail(errc::precondition, "residue_index: no index found; q not prime or g not a generator");
}

/// residue_index in the canonical smallest-primitive-root normalization.
inline ResidueIndex residue_index(u64 q, u64 x, u64 p) {
  return residue_index_with_root(q, x, p, primitive_root(q));
}

/// All primes q <= bound with q = residue mod modulus, ascending.
inline std::vector<u64> primes_in_ap(u64 residue, u64 modulus, u64 bound) {
  if (modulus == 0 || std::gcd(residue % modulus, modulus) != 1)
    fail(errc::bad_residue, "primes_in_ap requires gcd(residue, modulus) = 1");
  std::vector<u64> out;
  u64 q = residue % modulus;
  if (q == 0) q = modulus;
  for (; q <= bound; q += modulus)
    if (is_prime(q)) out.push_back(q);
  return out;
}

} // namespace tamelink::arith
