#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tamelink/error.hpp"
#include "tamelink/fp.hpp"
#include "tamelink/lie.hpp"
#include "tamelink/linking.hpp"

namespace tamelink::mild {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

/// Complete table of relation-against-cup-product values r_i(chi_k u chi_l)
/// for k < l, stored densely: row i, pair columns in lex order.
struct CupData {
  u64 p = 0;
  u32 n = 0; // characters
  u32 m = 0; // relations
  std::vector<std::vector<u64>> rows;

  static std::size_t pair_count(u32 n) { return std::size_t(n) * (n - 1) / 2; }

  /// Lex index of the pair (k, l), k < l.
  std::size_t pair_index(u32 k, u32 l) const {
    return std::size_t(k) * (2 * n - k - 1) / 2 + (l - k - 1);
  }

  /// Value on an arbitrary ordered pair, with the antisymmetry sign folded in.
  u64 value(u32 i, u32 x, u32 y) const {
    if (x < y) return rows[i][pair_index(x, y)];
    return (p - rows[i][pair_index(y, x)]) % p;
  }
};

/// Builds CupData from an explicit map (i, (k, l)) -> value with k < l.
/// Every pair must be present for every relation.
inline CupData cup_from_map(u32 n, u32 m, u64 p,
                            const std::map<std::pair<u32, std::pair<u32, u32>>, u64>& values) {
  CupData cup{p, n, m, {}};
  cup.rows.assign(m, std::vector<u64>(CupData::pair_count(n), 0));
  std::size_t found = 0;
  for (u32 i = 0; i < m; ++i) {
    for (u32 k = 0; k < n; ++k) {
      for (u32 l = k + 1; l < n; ++l) {
        auto it = values.find({i, {k, l}});
        if (it == values.end())
          fail(errc::incomplete_cup_data, "missing cup value for relation " + std::to_string(i) +
                                              ", pair (" + std::to_string(k) + "," +
                                              std::to_string(l) + ")");
        cup.rows[i][cup.pair_index(k, l)] = it->second % p;
        ++found;
      }
    }
  }
  (void)found;
  return cup;
}

/// Cup data of a linking instance. A relation sees a pair only through the
/// primes it is attached to: classes unramified at q have trivial local
/// invariant there, so r_i(chi_k u chi_l) is e[k][l] when i = l, minus
/// e[l][k] when i = k, and zero otherwise.
inline CupData linking_cup(const linking::LinkingData& ld) {
  const u32 n = static_cast<u32>(ld.size());
  CupData cup{ld.p, n, n, {}};
  cup.rows.assign(n, std::vector<u64>(CupData::pair_count(n), 0));
  for (u32 k = 0; k < n; ++k) {
    for (u32 l = k + 1; l < n; ++l) {
      const auto col = cup.pair_index(k, l);
      cup.rows[l][col] = ld.e[k][l] % ld.p;
      cup.rows[k][col] = (ld.p - ld.e[l][k] % ld.p) % ld.p;
    }
  }
  return cup;
}

/// Machine-checkable core of a certificate: an ordering of the characters, a
/// split index a, and the full-rank window matrix demanded by the rank
/// criterion.
struct MildWitness {
  std::vector<u32> ordering; // permutation of 0..n-1
  u32 split_a = 0;           // 1 <= a < n
  std::vector<std::vector<u64>> matrix; // m rows, a(n-a) columns, row-major
  u32 rank = 0;

  friend bool operator==(const MildWitness&, const MildWitness&) = default;
};

/// Checks the two-part criterion for the given ordering and split: (i) all
/// cup values inside the right block vanish, (ii) the m x a(n-a) window
/// matrix over (left, right) pairs has rank m. Returns the witness or
/// nothing.
inline std::optional<MildWitness> mildkrit_check(const CupData& cup,
                                                 const std::vector<u32>& ordering, u32 a) {
  const u32 n = cup.n;
  const u32 m = cup.m;
  if (ordering.size() != n) fail(errc::precondition, "ordering must permute all characters");
  std::vector<bool> seen(n, false);
  for (u32 x : ordering) {
    if (x >= n || seen[x]) fail(errc::precondition, "ordering is not a permutation");
    seen[x] = true;
  }
  if (a < 1 || a >= n) fail(errc::precondition, "split index must satisfy 1 <= a < n");

  for (u32 kp = a; kp < n; ++kp)
    for (u32 lp = kp + 1; lp < n; ++lp)
      for (u32 i = 0; i < m; ++i)
        if (cup.value(i, ordering[kp], ordering[lp]) != 0) return std::nullopt;

  MildWitness w;
  w.ordering = ordering;
  w.split_a = a;
  w.matrix.assign(m, std::vector<u64>(std::size_t(a) * (n - a), 0));
  for (u32 i = 0; i < m; ++i) {
    std::size_t col = 0;
    for (u32 kp = 0; kp < a; ++kp)
      for (u32 lp = a; lp < n; ++lp)
        w.matrix[i][col++] = cup.value(i, ordering[kp], ordering[lp]);
  }
  w.rank = static_cast<u32>(fp::rank(w.matrix, std::size_t(a) * (n - a), cup.p));
  if (w.rank != m) return std::nullopt;
  return w;
}

struct SearchLimits {
  u64 max_bipartitions = u64(1) << 22;
  u32 exhaustive_bound = 10; // beyond this many characters the search turns greedy
};

struct WitnessSearch {
  std::optional<MildWitness> witness;
  u64 examined = 0;
  bool exhaustive = true;
};

namespace detail {

inline bool next_combination(std::vector<u32>& comb, u32 n) {
  const u32 k = static_cast<u32>(comb.size());
  for (u32 i = k; i-- > 0;) {
    if (comb[i] < n - k + i) {
      ++comb[i];
      for (u32 j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

} // namespace detail

/// Searches for a witness over splits a and orderings. The verdict of a
/// candidate depends only on the unordered bipartition (scaling columns and
/// rows by units moves between orderings of the same bipartition), so the
/// search walks bipartitions by their lexicographically least ordering:
/// a ascending, then the left block as a combination in lex order. The first
/// hit is therefore the lexicographic minimum over (a, ordering).
inline WitnessSearch find_mild_witness(const CupData& cup, const SearchLimits& limits = {}) {
  const u32 n = cup.n;
  WitnessSearch result;
  if (n < 2) return result; // no split 1 <= a < n exists

  // pair -> true iff every relation vanishes there; right blocks must be
  // independent sets of the complement pattern
  std::vector<bool> pair_zero(CupData::pair_count(n), true);
  for (u32 k = 0; k < n; ++k)
    for (u32 l = k + 1; l < n; ++l)
      for (u32 i = 0; i < cup.m; ++i)
        if (cup.rows[i][cup.pair_index(k, l)] != 0) {
          pair_zero[cup.pair_index(k, l)] = false;
          break;
        }

  auto try_bipartition = [&](const std::vector<u32>& left, const std::vector<u32>& right,
                             u32 a) -> bool {
    ++result.examined;
    if (result.examined > limits.max_bipartitions)
      fail(errc::budget_exceeded, "witness search exceeded its bipartition budget");
    for (std::size_t x = 0; x < right.size(); ++x)
      for (std::size_t y = x + 1; y < right.size(); ++y) {
        const u32 kk = std::min(right[x], right[y]);
        const u32 ll = std::max(right[x], right[y]);
        if (!pair_zero[cup.pair_index(kk, ll)]) return false;
      }
    std::vector<u32> ordering = left;
    ordering.insert(ordering.end(), right.begin(), right.end());
    auto w = mildkrit_check(cup, ordering, a);
    if (w) {
      result.witness = std::move(w);
      return true;
    }
    return false;
  };

  if (n <= limits.exhaustive_bound) {
    for (u32 a = 1; a < n; ++a) {
      std::vector<u32> left(a);
      for (u32 i = 0; i < a; ++i) left[i] = i;
      do {
        std::vector<u32> right;
        right.reserve(n - a);
        std::vector<bool> used(n, false);
        for (u32 x : left) used[x] = true;
        for (u32 x = 0; x < n; ++x)
          if (!used[x]) right.push_back(x);
        if (try_bipartition(left, right, a)) return result;
      } while (detail::next_combination(left, n));
    }
    return result;
  }

  // Greedy fallback: grow the right block as an independent set of the
  // nonzero-pattern graph, low-degree vertices first.
  result.exhaustive = false;
  std::vector<u32> degree(n, 0);
  for (u32 k = 0; k < n; ++k)
    for (u32 l = k + 1; l < n; ++l)
      if (!pair_zero[cup.pair_index(k, l)]) {
        ++degree[k];
        ++degree[l];
      }
  std::vector<u32> order(n);
  for (u32 i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](u32 x, u32 y) { return degree[x] < degree[y]; });
  std::vector<u32> right;
  for (u32 v : order) {
    bool clash = false;
    for (u32 w : right) {
      const u32 kk = std::min(v, w);
      const u32 ll = std::max(v, w);
      if (!pair_zero[cup.pair_index(kk, ll)]) {
        clash = true;
        break;
      }
    }
    if (!clash) right.push_back(v);
  }
  std::sort(right.begin(), right.end());
  if (right.size() == 0 || right.size() >= n) return result;
  std::vector<u32> left;
  std::vector<bool> used(n, false);
  for (u32 x : right) used[x] = true;
  for (u32 x = 0; x < n; ++x)
    if (!used[x]) left.push_back(x);
  try_bipartition(left, right, static_cast<u32>(left.size()));
  return result;
}

inline WitnessSearch find_mild_witness(const linking::LinkingData& ld,
                                       const SearchLimits& limits = {}) {
  return find_mild_witness(linking_cup(ld), limits);
}

/// Initial forms of the tame relations attached to a linking instance, over
/// F_p[pi]: rho_i = a[i] pi xi_i + sum_{j != i} e[j][i] [xi_i, xi_j]. The
/// bracket coefficients come from the column of the linking matrix at i; the
/// sign convention is fixed once here and recorded on certificates.
inline std::vector<lie::Element> initial_forms(const linking::LinkingData& ld,
                                               const lie::HallBasis& basis) {
  const u32 n = static_cast<u32>(ld.size());
  if (basis.generators() != n)
    fail(errc::precondition, "basis generator count must match the prime set");
  if (basis.max_degree() < 2) fail(errc::degree_overflow, "basis cutoff below degree 2");
  std::vector<lie::Element> forms;
  forms.reserve(n);
  for (u32 i = 0; i < n; ++i) {
    lie::Element rho = lie::Element::zero(basis, ld.p, lie::Ring::fp_pi);
    if (ld.a[i] % ld.p != 0) {
      rho += lie::Element::generator(basis, ld.p, lie::Ring::fp_pi, i)
                 .scaled(ld.a[i] % ld.p)
                 .times_pi();
    }
    for (u32 j = 0; j < n; ++j) {
      if (j == i) continue;
      const u64 c = ld.e[j][i] % ld.p;
      if (c == 0) continue;
      rho += lie::bracket(lie::Element::generator(basis, ld.p, lie::Ring::fp_pi, i),
                          lie::Element::generator(basis, ld.p, lie::Ring::fp_pi, j))
                 .scaled(c);
    }
    if (rho.is_zero())
      fail(errc::degenerate_relation,
           "the relation at prime " + std::to_string(ld.primes[i]) +
               " has vanishing degree-2 initial form; its initial form lies deeper");
    forms.push_back(std::move(rho));
  }
  return forms;
}

} // namespace tamelink::mild
