#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "tamelink/arith.hpp"
#include "tamelink/error.hpp"

namespace tamelink::fields {

using u64 = std::uint64_t;

enum class FieldKind { rationals, imaginary_quadratic };

/// The base field: Q, or Q(sqrt(-d)) for squarefree d >= 1.
struct FieldDescriptor {
  FieldKind kind = FieldKind::rationals;
  u64 d = 0; // field is Q(sqrt(-d)); meaningful iff imaginary_quadratic

  static FieldDescriptor rationals() { return {}; }
  static FieldDescriptor imaginary_quadratic(u64 d) {
    return FieldDescriptor{FieldKind::imaginary_quadratic, d};
  }

  bool is_rational() const { return kind == FieldKind::rationals; }
  friend bool operator==(const FieldDescriptor&, const FieldDescriptor&) = default;
};

inline bool is_squarefree(u64 d) {
  if (d == 0) return false;
  for (u64 f = 2; f * f <= d; ++f)
    if (d % (f * f) == 0) return false;
  return true;
}

/// Parses "Q", "Q(i)" or "Q(sqrt-<d>)".
inline FieldDescriptor parse_field(const std::string& text) {
  if (text == "Q") return FieldDescriptor::rationals();
  if (text == "Q(i)") return FieldDescriptor::imaginary_quadratic(1);
  const std::string prefix = "Q(sqrt-";
  if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size() && text.back() == ')') {
    const std::string digits = text.substr(prefix.size(), text.size() - prefix.size() - 1);
    if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos) {
      u64 d = std::stoull(digits);
      if (!is_squarefree(d)) fail(errc::not_squarefree, "d must be squarefree in " + text);
      return FieldDescriptor::imaginary_quadratic(d);
    }
  }
  fail(errc::precondition, "unrecognized field descriptor: " + text);
}

inline std::string to_string(const FieldDescriptor& f) {
  if (f.is_rational()) return "Q";
  if (f.d == 1) return "Q(i)";
  return "Q(sqrt-" + std::to_string(f.d) + ")";
}

/// Discriminant of Q(sqrt(-d)), as a negative integer.
inline long long discriminant_iq(u64 d) {
  // -d = 1 mod 4 exactly when d = 3 mod 4
  return (d % 4 == 3) ? -static_cast<long long>(d) : -4 * static_cast<long long>(d);
}

/// Class number of Q(sqrt(-d)) by counting reduced binary quadratic forms
/// (a,b,c) of the field discriminant: b^2 - 4ac = D, |b| <= a <= c, with
/// b >= 0 when |b| = a or a = c.
inline u64 class_number_iq(u64 d) {
  if (!is_squarefree(d)) fail(errc::not_squarefree, "class_number_iq requires squarefree d");
  const long long D = discriminant_iq(d);
  const long long absD = -D;
  u64 count = 0;
  for (long long b = (absD % 2); 3 * b * b <= absD; b += 2) {
    // b = D mod 2; 3b^2 <= |D| is the reduced-form bound
    const long long four_ac = b * b + absD;
    if (four_ac % 4 != 0) continue;
    const long long ac = four_ac / 4;
    for (long long a = std::max(b, 1ll); a * a <= ac; ++a) {
      if (ac % a != 0) continue;
      const long long c = ac / a;
      if (std::gcd(std::gcd(a, b), c) != 1) continue;
      // (a, b, c): b > 0 counts twice unless on the boundary |b| = a or a = c
      if (b == 0 || b == a || a == c)
        count += 1;
      else
        count += 2;
    }
  }
  return count;
}

/// Arithmetic shape of the base field at p.
struct FieldInvariants {
  u64 r1 = 0;             // real places
  u64 r2 = 0;             // complex places
  u64 r = 0;              // r1 + r2
  u64 delta = 0;          // 1 iff mu_p is contained in the field
  u64 class_number = 1;
  bool p_class_trivial = true; // p does not divide the class number
  u64 unit_mod_p_dim = 0;      // dim of units mod p-th powers
};

inline FieldInvariants invariants(const FieldDescriptor& field, u64 p) {
  if (!arith::is_prime(p)) fail(errc::precondition, "p must be prime");
  FieldInvariants inv;
  if (field.is_rational()) {
    if (p == 2)
      fail(errc::unsupported_assumption,
           "p = 2 over Q is excluded (p odd or the field totally imaginary)");
    inv.r1 = 1;
    inv.r2 = 0;
    inv.r = 1;
    inv.delta = 0;
    inv.class_number = 1;
    inv.p_class_trivial = true;
    inv.unit_mod_p_dim = 0;
    return inv;
  }
  if (!is_squarefree(field.d)) fail(errc::not_squarefree, "d must be squarefree");
  inv.r1 = 0;
  inv.r2 = 1;
  inv.r = 1;
  // The unit group is the (finite, cyclic) group of roots of unity, so
  // mu_p sits inside exactly for p = 2, or p = 3 in Q(sqrt-3).
  inv.delta = (p == 2 || (p == 3 && field.d == 3)) ? 1 : 0;
  inv.class_number = class_number_iq(field.d);
  inv.p_class_trivial = (inv.class_number % p != 0);
  inv.unit_mod_p_dim = inv.r - 1 + inv.delta;
  return inv;
}

enum class Splitting { rational, split, inert, ramified };

inline const char* to_string(Splitting s) {
  switch (s) {
    case Splitting::rational: return "rational";
    case Splitting::split: return "split";
    case Splitting::inert: return "inert";
    case Splitting::ramified: return "ramified";
  }
  return "?";
}

/// A nonarchimedean place, identified by its residue prime and splitting
/// behaviour. Conjugate places over a split prime are not distinguished.
struct Place {
  u64 residue_prime = 0;
  u64 degree = 1;
  u64 norm = 0;
  Splitting splitting = Splitting::rational;

  friend bool operator==(const Place&, const Place&) = default;
  friend auto operator<=>(const Place& a, const Place& b) {
    if (auto c = a.residue_prime <=> b.residue_prime; c != 0) return c;
    return static_cast<int>(a.splitting) <=> static_cast<int>(b.splitting);
  }
};

inline Place rational_place(u64 q) { return Place{q, 1, q, Splitting::rational}; }

inline std::vector<Place> rational_places(const std::vector<u64>& primes) {
  std::vector<Place> out;
  out.reserve(primes.size());
  for (u64 q : primes) out.push_back(rational_place(q));
  return out;
}

inline bool admissible(const Place& pl, u64 p) {
  return pl.residue_prime != p && pl.norm % p == 1;
}

/// Strictly ascending, duplicate-free list of places.
struct PrimeSet {
  std::vector<Place> places;

  std::size_t size() const { return places.size(); }
  bool empty() const { return places.empty(); }

  std::vector<u64> residue_primes() const {
    std::vector<u64> out;
    out.reserve(places.size());
    for (const auto& pl : places) out.push_back(pl.residue_prime);
    return out;
  }
};

namespace detail {

inline int kronecker(long long a, u64 n_in) {
  // Kronecker symbol (a/n) for odd prime n, via Euler's criterion; for n = 2
  // the usual supplement.
  if (n_in == 2) {
    long long m = ((a % 8) + 8) % 8;
    if (m % 2 == 0) return 0;
    return (m == 1 || m == 7) ? 1 : -1;
  }
  u64 n = n_in;
  u64 am = static_cast<u64>(((a % static_cast<long long>(n)) + static_cast<long long>(n))) % n;
  if (am == 0) return 0;
  u64 e = arith::pow_mod(am, (n - 1) / 2, n);
  return e == 1 ? 1 : -1;
}

} // namespace detail

/// Splitting of the rational prime ell in Q(sqrt(-d)).
inline Splitting splitting_iq(u64 d, u64 ell) {
  const long long D = discriminant_iq(d);
  if ((D < 0 ? -D : D) % ell == 0) return Splitting::ramified;
  return detail::kronecker(D, ell) == 1 ? Splitting::split : Splitting::inert;
}

/// All places with residue prime <= bound, residue prime != p and norm = 1
/// mod p.
inline std::vector<Place> admissible_places(const FieldDescriptor& field, u64 p, u64 bound) {
  invariants(field, p); // validates the (field, p) combination
  std::vector<Place> out;
  for (u64 ell = 2; ell <= bound; ++ell) {
    if (!arith::is_prime(ell) || ell == p) continue;
    if (field.is_rational()) {
      if (ell % p == 1) out.push_back(rational_place(ell));
      continue;
    }
    const Splitting s = splitting_iq(field.d, ell);
    const u64 degree = (s == Splitting::inert) ? 2 : 1;
    const u64 norm = (degree == 2) ? ell * ell : ell;
    if (norm % p == 1) out.push_back(Place{ell, degree, norm, s});
  }
  return out;
}

struct DiscardedPlace {
  Place place;
  std::string reason;
};

struct MinimizeResult {
  PrimeSet set;
  std::vector<DiscardedPlace> discarded;
};

/// Keeps the places that can actually ramify in a p-extension (norm = 1 mod p,
/// residue characteristic != p), canonically ordered and deduplicated. The
/// Galois group of the maximal p-extension is unchanged by the discards.
inline MinimizeResult minimize(const std::vector<Place>& input, u64 p) {
  MinimizeResult result;
  std::vector<Place> kept;
  for (const auto& pl : input) {
    if (pl.residue_prime == p)
      result.discarded.push_back({pl, "residue characteristic p cannot stay tame"});
    else if (pl.norm % p != 1)
      result.discarded.push_back({pl, "norm not 1 mod p; cannot ramify in a p-extension"});
    else
      kept.push_back(pl);
  }
  std::sort(kept.begin(), kept.end());
  for (const auto& pl : kept) {
    if (!result.set.places.empty() && result.set.places.back() == pl)
      result.discarded.push_back({pl, "duplicate"});
    else
      result.set.places.push_back(pl);
  }
  return result;
}

/// PrimeSet constructor for certified paths: rejects inadmissible places
/// instead of dropping them.
inline PrimeSet certified_prime_set(const std::vector<Place>& input, u64 p) {
  auto res = minimize(input, p);
  if (!res.discarded.empty())
    fail(errc::not_admissible, "inadmissible place " +
                                   std::to_string(res.discarded.front().place.residue_prime) +
                                   " (" + res.discarded.front().reason + ")");
  return res.set;
}

} // namespace tamelink::fields
