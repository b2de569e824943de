#pragma once

#include <cstdint>
#include <string>

#include "tamelink/error.hpp"
#include "tamelink/fields.hpp"

namespace tamelink::cohom {

using u64 = std::uint64_t;
using fields::FieldDescriptor;
using fields::Place;
using fields::PrimeSet;

/// Local cohomology of the closed point of a local ring of integers.
/// h0 and h1 vanish; the table records the two nontrivial degrees.
struct LocalTable {
  u64 h2_x = 0;
  u64 h3_x = 0;
  long long euler = 0;
};

inline LocalTable local_table(u64 residue_char, u64 p, u64 delta_p, u64 local_degree) {
  if (delta_p > 1) fail(errc::precondition, "delta_p must be 0 or 1");
  if (local_degree < 1) fail(errc::precondition, "local_degree must be >= 1");
  LocalTable t;
  t.h2_x = delta_p + (residue_char == p ? local_degree : 0);
  t.h3_x = delta_p;
  t.euler = static_cast<long long>(t.h2_x) - static_cast<long long>(t.h3_x);
  return t;
}

/// dim of the Kummer group V_S. Only the case forced to zero by the standing
/// hypotheses (mu_p not in k, class number prime to p, unit rank zero) is
/// computable; anything else would need S-unit groups we do not model.
inline u64 v_dim(const FieldDescriptor& field, u64 p, const PrimeSet& S) {
  const auto inv = fields::invariants(field, p);
  if (inv.delta != 0)
    fail(errc::unsupported_assumption, "mu_p contained in the field; V_S not computable here");
  if (!inv.p_class_trivial)
    fail(errc::unsupported_assumption, "class number divisible by p; V_S not computable here");
  // 0 -> units/p -> V_empty -> p-torsion of Cl -> 0, so
  // dim V_empty = dim Cl[p] + r - 1 + delta = unit_mod_p_dim, and V_S sits
  // inside V_empty for every S.
  const u64 v_empty = inv.unit_mod_p_dim;
  if (v_empty != 0)
    fail(errc::unsupported_assumption, "nontrivial unit rank; V_S not computable here");
  (void)S;
  return 0;
}

/// Etale cohomology dimensions of the open curve with the prime set removed.
struct DimensionTable {
  u64 h0 = 1;
  u64 h1 = 0;
  u64 h2 = 0;
  u64 h3 = 0;
  long long euler = 0;
  u64 dim_VS = 0;
  u64 dim_sha2 = 0;
  u64 theta = 0;
};

inline DimensionTable global_dimensions(const FieldDescriptor& field, u64 p, const PrimeSet& S) {
  const auto inv = fields::invariants(field, p);
  const u64 vdim = v_dim(field, p, S);
  for (const auto& pl : S.places)
    if (!fields::admissible(pl, p))
      fail(errc::not_admissible,
           "place over " + std::to_string(pl.residue_prime) + " is not admissible for p");
  // All places are tame of norm 1 mod p, so each local delta is 1 and the
  // wild local-degree sum is empty.
  const u64 sum_delta_p = S.size();
  const u64 theta = (inv.delta == 1 && S.empty()) ? 1 : 0;
  DimensionTable t;
  t.h0 = 1;
  t.h1 = 1 + sum_delta_p - inv.delta + vdim - inv.r;
  t.h2 = sum_delta_p - inv.delta + vdim + theta;
  t.h3 = theta;
  t.euler = static_cast<long long>(t.h0) - static_cast<long long>(t.h1) +
            static_cast<long long>(t.h2) - static_cast<long long>(t.h3);
  t.dim_VS = vdim;
  t.dim_sha2 = vdim;
  t.theta = theta;
  return t;
}

/// h2-defect of a tame set over Q together with the provenance of the value.
struct DefectReport {
  u64 defect = 0;
  std::string assumption;
};

/// For Q with every prime of norm 1 mod p, the minimal presentation of the
/// tame Galois group has as many relations as the curve has h2, so the defect
/// is 0. That input is external (Koch's presentation) and is recorded on
/// certificates as an assumption line rather than recomputed.
inline DefectReport h2_defect(const FieldDescriptor& field, u64 p, const PrimeSet& S) {
  if (!field.is_rational())
    fail(errc::not_computable, "h2-defect is only pinned for Q");
  global_dimensions(field, p, S); // validates p and S
  return DefectReport{0,
                      "h2-defect 0 over Q: relation rank of the tame Galois group equals h2 of "
                      "the curve (Koch's minimal presentation)"};
}

enum class DegenerateCase { none, a, b, c };

inline const char* to_string(DegenerateCase c) {
  switch (c) {
    case DegenerateCase::none: return "none";
    case DegenerateCase::a: return "a";
    case DegenerateCase::b: return "b";
    case DegenerateCase::c: return "c";
  }
  return "?";
}

struct DegenerateVerdict {
  bool degenerate = false;
  DegenerateCase case_label = DegenerateCase::none;
  std::string reason;
};

/// Classifies when a one-prime set over an imaginary quadratic field gives the
/// trivial Galois group together with a vanishing obstruction: case (a) p = 2
/// and k != Q(i) with odd class number and N != 1 mod 4, case (b) p = 2 and
/// k = Q(i) with N != 1 mod 8, case (c) p = 3 and k = Q(sqrt-3) with
/// N != 1 mod 9.
inline DegenerateVerdict classify_degenerate(const FieldDescriptor& field, u64 p,
                                             const Place& place) {
  if (field.is_rational() || (p != 2 && p != 3))
    fail(errc::out_of_scope, "degenerate classification needs an imaginary quadratic field and p in {2,3}");
  if (!fields::admissible(place, p))
    fail(errc::not_admissible, "place is not admissible for p");
  const u64 N = place.norm;
  DegenerateVerdict v;
  if (p == 2) {
    if (field.d == 1) {
      if (N % 8 != 1) {
        v = {true, DegenerateCase::b, "p=2, k=Q(i), N(p) = " + std::to_string(N % 8) + " mod 8"};
      } else {
        v.reason = "N(p) = 1 mod 8: the fourth root of unity is a local square";
      }
      return v;
    }
    const u64 h = fields::class_number_iq(field.d);
    if (h % 2 != 0 && N % 4 != 1) {
      v = {true, DegenerateCase::a, "p=2, 2 does not divide h, N(p) = 3 mod 4"};
    } else if (h % 2 == 0) {
      v.reason = "class number is even";
    } else {
      v.reason = "N(p) = 1 mod 4: -1 is a local square";
    }
    return v;
  }
  // p == 3
  if (field.d != 3) {
    v.reason = "p=3 but mu_3 is not in the field";
    return v;
  }
  if (N % 9 != 1) {
    v = {true, DegenerateCase::c, "p=3, k=Q(sqrt-3), N(p) = " + std::to_string(N % 9) + " mod 9"};
  } else {
    v.reason = "N(p) = 1 mod 9: the third root of unity is a local cube";
  }
  return v;
}

} // namespace tamelink::cohom
