#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "tamelink/arith.hpp"
#include "tamelink/error.hpp"
#include "tamelink/fields.hpp"

namespace tamelink::linking {

using u64 = std::uint64_t;
using arith::ResidueIndex;

/// Which primitive root normalizes the discrete logs. Everything certified
/// uses the smallest root; the second-smallest choice exists to check that
/// verdicts do not depend on the normalization.
enum class RootChoice { smallest, second_smallest };

inline u64 root_of(u64 q, RootChoice choice) {
  return arith::primitive_root_at(q, choice == RootChoice::smallest ? 0 : 1);
}

inline void require_admissible(u64 q, u64 p, const char* what) {
  if (!arith::is_prime(q) || q == p || q % p != 1)
    fail(errc::not_admissible, std::string(what) + " " + std::to_string(q) +
                                   " must be a prime = 1 mod p, different from p");
}

/// Linking number lk(q -> ell): the index of ell modulo q, reduced mod p.
/// Vanishes exactly when ell is a p-th power residue mod q.
inline ResidueIndex lk(u64 q, u64 ell, u64 p, RootChoice roots = RootChoice::smallest) {
  if (q == ell) fail(errc::equal_primes, "linking number needs two distinct primes");
  require_admissible(q, p, "source prime");
  require_admissible(ell, p, "target prime");
  return arith::residue_index_with_root(q, ell, p, root_of(q, roots));
}

/// Mod-p linking data of a rational prime set: the full matrix
/// e[i][j] = lk(q_i -> q_j), the Bockstein diagonal a[i] = (q_i - 1)/p mod p,
/// and the primitive roots used.
struct LinkingData {
  u64 p = 0;
  std::vector<u64> primes; // ascending
  std::vector<std::vector<u64>> e; // e[i][j] for i != j; diagonal unused (0)
  std::vector<u64> a;
  std::vector<u64> roots;

  std::size_t size() const { return primes.size(); }

  friend bool operator==(const LinkingData&, const LinkingData&) = default;
};

inline LinkingData linking_data(const std::vector<u64>& primes_in, u64 p,
                                RootChoice roots = RootChoice::smallest) {
  std::vector<u64> primes = primes_in;
  std::sort(primes.begin(), primes.end());
  if (std::adjacent_find(primes.begin(), primes.end()) != primes.end())
    fail(errc::precondition, "duplicate prime in linking set");
  for (u64 q : primes) require_admissible(q, p, "member");

  const std::size_t n = primes.size();
  LinkingData ld;
  ld.p = p;
  ld.primes = primes;
  ld.e.assign(n, std::vector<u64>(n, 0));
  ld.a.resize(n);
  ld.roots.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ld.roots[i] = root_of(primes[i], roots);
    ld.a[i] = ((primes[i] - 1) / p) % p;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      ld.e[i][j] =
          arith::residue_index_with_root(primes[i], primes[j], p, ld.roots[i]).value;
    }
  }
  return ld;
}

inline LinkingData linking_data(const fields::PrimeSet& S, u64 p,
                                RootChoice roots = RootChoice::smallest) {
  for (const auto& pl : S.places)
    if (pl.splitting != fields::Splitting::rational)
      fail(errc::not_admissible, "linking data is defined over Q only");
  return linking_data(S.residue_primes(), p, roots);
}

/// Frobenius of ell in the elementary layer of the set: the vector
/// (lk(q_i -> ell)) over the members of S.
inline std::vector<ResidueIndex> frobenius_pattern(u64 ell, const std::vector<u64>& S, u64 p,
                                                   RootChoice roots = RootChoice::smallest) {
  for (u64 q : S)
    if (q == ell) fail(errc::member_of_s, "ell must not be a member of S");
  std::vector<ResidueIndex> out;
  out.reserve(S.size());
  for (u64 q : S) out.push_back(lk(q, ell, p, roots));
  return out;
}

/// ell splits completely in the elementary layer iff every linking number
/// into it vanishes.
inline bool splits_completely_el(u64 ell, const std::vector<u64>& S, u64 p,
                                 RootChoice roots = RootChoice::smallest) {
  const auto pattern = frobenius_pattern(ell, S, p, roots);
  return std::all_of(pattern.begin(), pattern.end(),
                     [](const ResidueIndex& r) { return r.value == 0; });
}

} // namespace tamelink::linking
