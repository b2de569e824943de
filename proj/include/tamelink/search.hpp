#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "tamelink/arith.hpp"
#include "tamelink/error.hpp"
#include "tamelink/linking.hpp"
#include "tamelink/mild.hpp"

namespace tamelink::search {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

/// Conditions of a single prime search step: the current basis primes, the
/// required Frobenius pattern d over them (not all zero), and the 0/1
/// ramification-linking pattern eps.
struct SearchConditions {
  std::vector<u64> primes;     // current set, construction order
  std::vector<u64> d;          // required lk(q_i -> candidate), values in [0, p)
  std::vector<int> eps;        // required (lk(candidate -> q_i) != 0), 0 or 1
  std::vector<u64> exclusions; // further primes to skip
};

/// Candidate stream: all admissible primes up to a bound, minus a skip set.
/// Stands in for a density-one set; running past the bound is an explicit
/// failure, never a silent fallback.
struct SearchDomain {
  u64 bound = 1'000'000;
  std::vector<u64> skip;
  unsigned workers = 1;
  u64 crt_class_limit = u64(1) << 20; // max residue classes to enumerate
  std::size_t transcript_cap = 1000;  // max per-candidate records kept
};

struct CandidateRecord {
  u64 candidate = 0;
  bool accepted = false;
  std::string reason;
};

struct FindPrimeResult {
  u64 prime = 0;
  std::vector<std::string> conditions; // human-readable conditions posed
  std::vector<CandidateRecord> transcript;
  u64 total_candidates = 0; // admissible primes examined (capped list above)
};

namespace detail {

inline std::string pattern_string(const std::vector<u64>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

/// Per-basis-prime data the search needs millions of times: the primitive
/// root is found once, and the d-check reduces to one pow_mod against a
/// precomputed table of the p-th roots of unity mod q.
struct BasisContext {
  u64 q = 0;
  u64 cofactor = 0; // (q - 1) / p
  u64 root = 0;
  std::vector<u64> zeta_pow; // zeta^e mod q for e in [0, p)
};

struct ConditionChecker {
  const SearchConditions& cond;
  u64 p;
  std::vector<BasisContext> ctx;

  ConditionChecker(const SearchConditions& cond_in, u64 p_in) : cond(cond_in), p(p_in) {
    for (u64 q : cond.primes) {
      BasisContext c;
      c.q = q;
      c.cofactor = (q - 1) / p;
      c.root = arith::primitive_root(q);
      const u64 zeta = arith::pow_mod(c.root, c.cofactor, q);
      c.zeta_pow.resize(p);
      u64 cur = 1;
      for (u64 e = 0; e < p; ++e) {
        c.zeta_pow[e] = cur;
        cur = arith::mul_mod(cur, zeta, q);
      }
      ctx.push_back(std::move(c));
    }
  }

  u64 index_of(std::size_t i, u64 ell) const {
    const auto& c = ctx[i];
    const u64 t = arith::pow_mod(ell % c.q, c.cofactor, c.q);
    for (u64 e = 0; e < p; ++e)
      if (c.zeta_pow[e] == t) return e;
    return p; // not a unit times a root of unity: q divides ell
  }

  /// d-conditions only, cheapest first; total cost one pow_mod per basis
  /// prime with early exit. Safe on composites.
  bool d_compatible(u64 ell) const {
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      if (ell % ctx[i].q == 0) return false;
      if (index_of(i, ell) != cond.d[i]) return false;
    }
    return true;
  }

  /// eps-conditions; needs the primitive root of ell, so callers filter by
  /// primality and d-compatibility first.
  bool eps_ok(u64 ell) const {
    const u64 g = arith::primitive_root(ell);
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      const bool linked =
          arith::residue_index_with_root(ell, ctx[i].q, p, g).value != 0;
      if (linked != (cond.eps[i] == 1)) return false;
    }
    return true;
  }

  /// Empty result means the candidate satisfies everything. Used by the
  /// transcript pass, where every ell is a prime outside the basis.
  std::string reject_reason(u64 ell) const {
    std::vector<u64> pattern;
    pattern.reserve(ctx.size());
    for (std::size_t i = 0; i < ctx.size(); ++i) pattern.push_back(index_of(i, ell));
    if (pattern != cond.d)
      return "frobenius pattern " + pattern_string(pattern) + " != required " +
             pattern_string(cond.d);
    const u64 g = arith::primitive_root(ell);
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      const bool linked =
          arith::residue_index_with_root(ell, ctx[i].q, p, g).value != 0;
      if (linked != (cond.eps[i] == 1))
        return std::string("candidate is ") + (linked ? "linked" : "unlinked") + " to " +
               std::to_string(ctx[i].q) + ", required " +
               (cond.eps[i] == 1 ? "linked" : "unlinked");
    }
    return {};
  }
};

/// CRT enumeration of all values <= bound that are 1 mod p and land in the
/// d-prescribed power coset modulo every basis prime. Returns them sorted, or
/// nothing when the class count exceeds the limit. Residues are lifted prime
/// by prime; once the combined modulus passes the bound, classes with no
/// representative below it are dropped on the spot.
inline std::optional<std::vector<u64>> crt_candidates(const SearchConditions& cond, u64 p,
                                                      const SearchDomain& dom) {
  using u128 = unsigned __int128;
  u64 classes = 1;
  for (u64 q : cond.primes) {
    const u64 coset_size = (q - 1) / p;
    if (classes > dom.crt_class_limit / coset_size) return std::nullopt;
    classes *= coset_size;
  }

  std::vector<u64> residues{1};
  u128 modulus = p;
  for (std::size_t i = 0; i < cond.primes.size(); ++i) {
    const u64 q = cond.primes[i];
    const u64 g = arith::primitive_root(q);
    const u64 gp = arith::pow_mod(g, p, q);
    std::vector<u64> coset((q - 1) / p);
    u64 t = arith::pow_mod(g, cond.d[i], q);
    for (auto& c : coset) {
      c = t;
      t = arith::mul_mod(t, gp, q);
    }
    const u64 m_mod_q = static_cast<u64>(modulus % q);
    const u64 m_inv = arith::pow_mod(m_mod_q, q - 2, q);
    const u128 new_modulus = modulus * q;
    std::vector<u64> next;
    next.reserve(residues.size() * coset.size());
    for (u64 r : residues) {
      for (u64 c : coset) {
        const u64 diff = (c + q - r % q) % q;
        const u64 shift = arith::mul_mod(diff, m_inv, q);
        const u128 x = modulus * shift + r; // unique lift below new_modulus
        if (new_modulus <= dom.bound || x <= dom.bound) next.push_back(static_cast<u64>(x));
      }
    }
    modulus = new_modulus;
    residues = std::move(next);
  }

  std::vector<u64> out;
  if (modulus <= dom.bound) {
    const u64 m = static_cast<u64>(modulus);
    for (u64 r : residues) {
      for (u64 v = r; v <= dom.bound;) {
        out.push_back(v);
        if (v > dom.bound - m) break;
        v += m;
      }
    }
  } else {
    out = std::move(residues);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// First value in the (ascending) candidate list passing filter; candidates
/// are tested block-parallel, and the block winner is its in-order minimum,
/// so the result does not depend on scheduling.
template <typename Filter>
inline std::optional<u64> first_passing(const std::vector<u64>& candidates, unsigned workers,
                                        Filter&& filter) {
  if (workers <= 1) {
    for (u64 c : candidates)
      if (filter(c)) return c;
    return std::nullopt;
  }
  const std::size_t block = std::max<std::size_t>(std::size_t(workers) * 8, 32);
  for (std::size_t begin = 0; begin < candidates.size(); begin += block) {
    const std::size_t end = std::min(begin + block, candidates.size());
    std::vector<char> pass(end - begin, 0);
    std::atomic<std::size_t> cursor{0};
    auto work = [&] {
      for (std::size_t i = cursor.fetch_add(1); i < end - begin; i = cursor.fetch_add(1))
        pass[i] = filter(candidates[begin + i]) ? 1 : 0;
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < end - begin; ++i)
      if (pass[i]) return candidates[begin + i];
  }
  return std::nullopt;
}

} // namespace detail

/// Smallest prime in the domain meeting all posed conditions. Candidates are
/// pre-sieved by CRT into the d-compatible residue classes when the class
/// count is manageable, then primality and the eps conditions are tested per
/// candidate; the transcript afterwards re-derives the verdict of every
/// admissible prime up to the winner, which re-verifies the winner
/// independently of the sieve.
inline FindPrimeResult find_prime(const SearchConditions& cond, u64 p, const SearchDomain& dom) {
  if (p < 3 || !arith::is_prime(p)) fail(errc::precondition, "p must be an odd prime");
  if (cond.primes.size() != cond.d.size() || cond.primes.size() != cond.eps.size())
    fail(errc::precondition, "conditions must cover exactly the basis primes");
  if (std::all_of(cond.d.begin(), cond.d.end(), [](u64 v) { return v == 0; }))
    fail(errc::precondition, "the d-pattern must not vanish identically");
  for (std::size_t i = 0; i < cond.primes.size(); ++i) {
    linking::require_admissible(cond.primes[i], p, "basis prime");
    if (cond.d[i] >= p) fail(errc::precondition, "d-value out of range");
    if (cond.eps[i] != 0 && cond.eps[i] != 1) fail(errc::precondition, "eps must be 0 or 1");
  }

  std::set<u64> skip(dom.skip.begin(), dom.skip.end());
  skip.insert(cond.exclusions.begin(), cond.exclusions.end());
  skip.insert(cond.primes.begin(), cond.primes.end());
  skip.insert(p);

  const detail::ConditionChecker checker(cond, p);
  // class members are cheapest first: the CRT stream already satisfies the
  // d-conditions, so only primality and eps remain there; the direct scan
  // pays one early-exit pow_mod chain before any primality test
  auto passes_from_classes = [&](u64 ell) {
    return !skip.count(ell) && arith::is_prime(ell) && checker.eps_ok(ell);
  };
  auto passes_direct = [&](u64 ell) {
    return checker.d_compatible(ell) && !skip.count(ell) && arith::is_prime(ell) &&
           checker.eps_ok(ell);
  };

  std::optional<u64> winner;
  if (auto classes = detail::crt_candidates(cond, p, dom)) {
    winner = detail::first_passing(*classes, dom.workers, passes_from_classes);
  } else {
    std::vector<u64> block;
    const u64 block_span = 1u << 16;
    for (u64 start = 1; start <= dom.bound && !winner; start += block_span * p) {
      block.clear();
      for (u64 v = start; v <= dom.bound && v < start + block_span * p; v += p)
        block.push_back(v);
      winner = detail::first_passing(block, dom.workers, passes_direct);
    }
  }

  FindPrimeResult result;
  result.conditions.push_back("candidate = 1 mod " + std::to_string(p) + ", candidate <= " +
                              std::to_string(dom.bound));
  for (std::size_t i = 0; i < cond.primes.size(); ++i)
    result.conditions.push_back(
        "lk(" + std::to_string(cond.primes[i]) + " -> candidate) = " + std::to_string(cond.d[i]) +
        "; lk(candidate -> " + std::to_string(cond.primes[i]) +
        ") " + (cond.eps[i] == 1 ? "!= 0" : "= 0"));
  result.conditions.push_back(
      "unit condition: vacuous over Q for odd p (-1 is a p-th power; no fundamental units)");

  // Transcript pass over every admissible prime below the winner (or the
  // bound). This re-derives each verdict without the sieve and must land on
  // the same first acceptable prime, which re-verifies the winner and the
  // completeness of the residue classes at once.
  const u64 transcript_bound = winner ? *winner : dom.bound;
  std::optional<u64> first_accepted;
  for (u64 ell = 1; ell <= transcript_bound; ell += p) {
    if (!arith::is_prime(ell)) continue;
    ++result.total_candidates;
    CandidateRecord rec;
    rec.candidate = ell;
    if (skip.count(ell)) {
      rec.reason = "member of the current set or excluded";
    } else {
      const std::string why = checker.reject_reason(ell);
      if (why.empty()) {
        rec.accepted = true;
        rec.reason = "all conditions re-verified";
        if (!first_accepted) first_accepted = ell;
      } else {
        rec.reason = why;
      }
    }
    if (result.transcript.size() < dom.transcript_cap)
      result.transcript.push_back(std::move(rec));
  }

  if (!winner) {
    if (first_accepted)
      fail(errc::precondition, "self-check failed: sieve missed an acceptable prime");
    fail(errc::not_found_within_bound,
         "no prime <= " + std::to_string(dom.bound) + " satisfies the posed conditions");
  }
  if (!first_accepted || *first_accepted != *winner)
    fail(errc::precondition, "self-check failed: sieve winner is not the first acceptable prime");
  result.prime = *winner;
  return result;
}

/// One step of the augmentation: the conditions posed and the prime found.
struct AugmentationStep {
  std::string label;
  FindPrimeResult outcome;
};

/// Result of the prime-augmentation run: the added primes, the per-step
/// transcripts, and the linking data plus rank witness of the final set.
struct AugmentationResult {
  std::vector<u64> t1; // added primes, construction order
  std::vector<AugmentationStep> steps;
  linking::LinkingData final_linking;
  mild::MildWitness witness;

  std::vector<u64> final_primes() const { return final_linking.primes; }
};

/// Runs the constructive augmentation: starting from a nonempty admissible
/// set over Q, adds one prime per relation so that the final set carries a
/// rank witness with split a = |basis|. Step j poses eps = 1 exactly at the
/// j-th basis prime and d = 1 exactly at the partner index i'_j (the smallest
/// index != j), extended by zeros over previously added primes.
///
/// A single-prime input cannot feed the construction (no partner index
/// exists, and no two-prime set admits a rank witness), so it first moves one
/// domain prime into the basis under the same non-splitting conditions; the
/// final certificate then covers four primes.
inline AugmentationResult augment_to_mild(const std::vector<u64>& S, u64 p,
                                          const SearchDomain& dom) {
  if (S.empty()) fail(errc::precondition, "augmentation needs a nonempty starting set");
  std::vector<u64> basis = S;
  std::sort(basis.begin(), basis.end());
  if (std::adjacent_find(basis.begin(), basis.end()) != basis.end())
    fail(errc::precondition, "duplicate prime in starting set");
  for (u64 q : basis) linking::require_admissible(q, p, "member");

  AugmentationResult result;

  if (basis.size() == 1) {
    SearchConditions cond;
    cond.primes = basis;
    cond.d = {1};
    cond.eps = {0};
    auto helper = find_prime(cond, p, dom);
    result.steps.push_back({"basis extension (single-prime input)", helper});
    result.t1.push_back(helper.prime);
    basis.push_back(helper.prime);
  }

  const std::size_t m = basis.size();
  std::vector<u64> current = basis;
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t partner = (j == 0) ? 1 : 0;
    SearchConditions cond;
    cond.primes = current;
    cond.d.assign(current.size(), 0);
    cond.eps.assign(current.size(), 0);
    cond.d[partner] = 1;
    cond.eps[j] = 1;
    auto step = find_prime(cond, p, dom);
    if (linking::splits_completely_el(step.prime, current, p))
      fail(errc::precondition, "self-check failed: chosen prime splits in the current layer");
    result.steps.push_back({"step " + std::to_string(j + 1) + " of " + std::to_string(m), step});
    result.t1.push_back(step.prime);
    current.push_back(step.prime);
  }

  std::vector<u64> final_sorted = current;
  std::sort(final_sorted.begin(), final_sorted.end());
  result.final_linking = linking::linking_data(final_sorted, p);
  const auto cup = mild::linking_cup(result.final_linking);

  // ordering: basis block first (ascending), then the constructed primes
  std::vector<u64> left = basis;
  std::sort(left.begin(), left.end());
  std::vector<u64> right;
  for (u64 q : final_sorted)
    if (!std::binary_search(left.begin(), left.end(), q)) right.push_back(q);
  std::vector<u32> ordering;
  auto position = [&](u64 q) {
    return static_cast<u32>(
        std::lower_bound(final_sorted.begin(), final_sorted.end(), q) - final_sorted.begin());
  };
  for (u64 q : left) ordering.push_back(position(q));
  for (u64 q : right) ordering.push_back(position(q));

  auto witness = mild::mildkrit_check(cup, ordering, static_cast<u32>(left.size()));
  if (!witness)
    fail(errc::not_certifiable,
         "constructed set unexpectedly failed the rank criterion; transcript retained");
  result.witness = *witness;
  return result;
}

/// Verdict for one prime added on top of an already certified set.
struct EnlargeVerdict {
  u64 prime = 0;
  bool extends = false;
  std::string reason;
};

/// For each prime of Sprime beyond S: if it does not split completely in the
/// elementary layer of S, the certified verdict transfers to the enlarged set
/// (and the inertia presentation of the relative extension comes with it);
/// if it does split there, the deeper splitting behaviour is undecidable at
/// this depth and the verdict is inconclusive.
inline std::vector<EnlargeVerdict> enlarge_check(const std::vector<u64>& S,
                                                 const std::vector<u64>& Sprime, u64 p) {
  std::set<u64> base(S.begin(), S.end());
  for (u64 q : S)
    if (!std::count(Sprime.begin(), Sprime.end(), q))
      fail(errc::precondition, "Sprime must contain the certified set");
  std::vector<EnlargeVerdict> verdicts;
  for (u64 q : Sprime) {
    if (base.count(q)) continue;
    linking::require_admissible(q, p, "added prime");
    EnlargeVerdict v;
    v.prime = q;
    const auto pattern = linking::frobenius_pattern(q, S, p);
    const bool split = std::all_of(pattern.begin(), pattern.end(),
                                   [](const arith::ResidueIndex& r) { return r.value == 0; });
    if (!split) {
      v.extends = true;
      v.reason = "does not split completely in the elementary layer; the certificate extends";
    } else {
      v.extends = false;
      v.reason = "splits completely in the elementary layer; inconclusive at this depth";
    }
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

} // namespace tamelink::search
