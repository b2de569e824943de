#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tamelink/error.hpp"
#include "tamelink/fp.hpp"

namespace tamelink::lie {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

/// Sparse integer combination of Hall words, sorted by word id.
using SparseVec = std::vector<std::pair<u32, i64>>;

namespace detail {

inline void sparse_add(SparseVec& into, const SparseVec& from, i64 scale) {
  if (scale == 0 || from.empty()) return;
  SparseVec merged;
  merged.reserve(into.size() + from.size());
  auto a = into.begin();
  auto b = from.begin();
  while (a != into.end() || b != from.end()) {
    if (b == from.end() || (a != into.end() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == into.end() || b->first < a->first) {
      merged.emplace_back(b->first, b->second * scale);
      ++b;
    } else {
      i64 c = a->second + b->second * scale;
      if (c != 0) merged.emplace_back(a->first, c);
      ++a;
      ++b;
    }
  }
  into.swap(merged);
}

} // namespace detail

inline i64 mobius(u64 m) {
  i64 result = 1;
  for (u64 f = 2; f * f <= m; ++f) {
    if (m % f == 0) {
      m /= f;
      if (m % f == 0) return 0;
      result = -result;
    }
  }
  if (m > 1) result = -result;
  return result;
}

/// Number of Hall words of degree d on n generators (the necklace count
/// (1/d) sum_{m|d} mu(m) n^(d/m), computed over signed 64-bit integers).
inline u64 witt_dimension(u64 n, u64 d) {
  i64 total = 0;
  for (u64 m = 1; m <= d; ++m) {
    if (d % m != 0) continue;
    const i64 mu = mobius(m);
    if (mu == 0) continue;
    i64 power = 1;
    for (u64 k = 0; k < d / m; ++k) power *= static_cast<i64>(n);
    total += mu * power;
  }
  return static_cast<u64>(total / static_cast<i64>(d));
}

struct HallWord {
  u32 degree = 1;
  u32 left = 0;      // id of left factor; valid iff degree > 1
  u32 right = 0;     // id of right factor; valid iff degree > 1
  u32 generator = 0; // generator index; valid iff degree == 1
};

/// Canonical Hall basis of the free Lie algebra on n generators, materialized
/// through a degree cutoff. Word ids are assigned degree by degree in a
/// deterministic order, so the ids of a smaller cutoff are a prefix of a
/// larger one.
class HallBasis {
 public:
  HallBasis(u32 n, u32 max_degree) : n_(n), max_degree_(max_degree) {
    if (n < 1 || max_degree < 1) fail(errc::precondition, "hall_basis needs n >= 1 and D >= 1");
    if (n > 8 || max_degree > 10)
      fail(errc::resource_limit, "hall_basis caps at n <= 8, D <= 10");
    u64 total = 0;
    for (u32 d = 1; d <= max_degree; ++d) total += witt_dimension(n, d);
    if (total > 5'000'000) fail(errc::resource_limit, "hall_basis would be too large");

    by_degree_.assign(max_degree + 1, {});
    for (u32 i = 0; i < n; ++i) {
      by_degree_[1].push_back(static_cast<u32>(words_.size()));
      words_.push_back(HallWord{1, 0, 0, i});
    }
    for (u32 d = 2; d <= max_degree; ++d) {
      for (u32 du = 1; du <= d / 2; ++du) {
        const u32 dv = d - du;
        for (u32 u : by_degree_[du]) {
          for (u32 v : by_degree_[dv]) {
            if (v <= u) continue;
            if (!is_hall_pair(u, v)) continue;
            const u32 id = static_cast<u32>(words_.size());
            by_degree_[d].push_back(id);
            words_.push_back(HallWord{d, u, v, 0});
            pair_ids_.emplace(key(u, v), id);
          }
        }
      }
    }
  }

  u32 generators() const { return n_; }
  u32 max_degree() const { return max_degree_; }
  std::size_t size() const { return words_.size(); }
  const HallWord& word(u32 id) const { return words_[id]; }
  const std::vector<u32>& degree_words(u32 d) const { return by_degree_[d]; }
  u64 dim(u32 d) const { return by_degree_[d].size(); }
  u32 generator_id(u32 index) const { return index; }

  /// Position of a word inside its degree block.
  u32 offset_in_degree(u32 id) const { return id - by_degree_[words_[id].degree].front(); }
  u32 id_at(u32 degree, u32 offset) const { return by_degree_[degree][offset]; }

  /// [u,v] rewritten into the basis: a signed integer combination of Hall
  /// words of degree deg(u) + deg(v). Handles u = v and either order.
  SparseVec bracket_words(u32 u, u32 v) const {
    if (u == v) return {};
    if (v < u) {
      SparseVec out = normalized(u, v);
      for (auto& t : out) t.second = -t.second;
      return out;
    }
    return normalized(v, u);
  }

  std::string word_name(u32 id) const {
    const auto& w = words_[id];
    if (w.degree == 1) return "x" + std::to_string(w.generator + 1);
    return "[" + word_name(w.left) + "," + word_name(w.right) + "]";
  }

 private:
  static u64 key(u32 u, u32 v) { return (u64(u) << 32) | v; }

  bool is_hall_pair(u32 u, u32 v) const {
    // u < v assumed; the pair is a Hall word iff v is a generator or the left
    // factor of v does not exceed u.
    return words_[v].degree == 1 || words_[v].left <= u;
  }

  // normalized(v, u) with u < v computes [u, v] in basis coordinates.
  const SparseVec& normalized(u32 v, u32 u) const {
    const u64 k = key(u, v);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    if (words_[u].degree + words_[v].degree > max_degree_)
      fail(errc::degree_overflow, "bracket exceeds the basis degree cutoff");
    SparseVec result;
    if (auto it = pair_ids_.find(k); it != pair_ids_.end()) {
      result.emplace_back(it->second, 1);
    } else {
      // v = [a, b] with a > u here; Jacobi: [u,[a,b]] = [[u,a],b] + [a,[u,b]]
      const u32 a = words_[v].left;
      const u32 b = words_[v].right;
      for (const auto& [w, c] : bracket_words(u, a))
        detail::sparse_add(result, bracket_words(w, b), c);
      for (const auto& [w, c] : bracket_words(u, b))
        detail::sparse_add(result, bracket_words(a, w), c);
    }
    return memo_.emplace(k, std::move(result)).first->second;
  }

  u32 n_;
  u32 max_degree_;
  std::vector<HallWord> words_;
  std::vector<std::vector<u32>> by_degree_;
  std::unordered_map<u64, u32> pair_ids_;
  mutable std::unordered_map<u64, SparseVec> memo_;
};

inline HallBasis hall_basis(u32 n, u32 max_degree) { return HallBasis(n, max_degree); }

enum class Ring { fp, fp_pi };

/// Element of the free Lie algebra over F_p (ring fp) or over F_p[pi] with pi
/// in degree 1 (ring fp_pi). Terms are (pi power, Hall word) with nonzero
/// coefficients; the normal form is unique.
class Element {
 public:
  using Term = std::pair<u32, u32>; // (pi_power, word id)

  Element(const HallBasis* basis, u64 p, Ring ring) : basis_(basis), p_(p), ring_(ring) {}

  static Element zero(const HallBasis& basis, u64 p, Ring ring) {
    return Element(&basis, p, ring);
  }

  static Element generator(const HallBasis& basis, u64 p, Ring ring, u32 index) {
    Element e(&basis, p, ring);
    e.add_term(0, basis.generator_id(index), 1);
    return e;
  }

  const HallBasis& basis() const { return *basis_; }
  u64 p() const { return p_; }
  Ring ring() const { return ring_; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::map<Term, u64>& terms() const { return coeffs_; }

  u32 term_degree(const Term& t) const { return t.first + basis_->word(t.second).degree; }

  void add_term(u32 pi_power, u32 word, u64 coeff) {
    if (ring_ == Ring::fp && pi_power != 0)
      fail(errc::precondition, "pi term in an element over F_p");
    coeff %= p_;
    if (coeff == 0) return;
    auto [it, inserted] = coeffs_.emplace(Term{pi_power, word}, coeff);
    if (!inserted) {
      it->second = (it->second + coeff) % p_;
      if (it->second == 0) coeffs_.erase(it);
    }
  }

  Element& operator+=(const Element& other) {
    for (const auto& [t, c] : other.coeffs_) add_term(t.first, t.second, c);
    return *this;
  }

  friend Element operator+(Element a, const Element& b) { return a += b; }

  Element scaled(u64 factor) const {
    Element out(basis_, p_, ring_);
    for (const auto& [t, c] : coeffs_) out.add_term(t.first, t.second, c * (factor % p_));
    return out;
  }

  Element operator-() const { return scaled(p_ - 1); }

  Element times_pi(u32 power = 1) const {
    if (ring_ == Ring::fp) fail(errc::precondition, "pi multiplication needs the F_p[pi] ring");
    Element out(basis_, p_, ring_);
    for (const auto& [t, c] : coeffs_) out.add_term(t.first + power, t.second, c);
    return out;
  }

  bool homogeneous() const {
    if (coeffs_.empty()) return true;
    const u32 d = term_degree(coeffs_.begin()->first);
    for (const auto& [t, c] : coeffs_)
      if (term_degree(t) != d) return false;
    return true;
  }

  /// Degree of a homogeneous nonzero element.
  u32 degree() const {
    if (coeffs_.empty()) fail(errc::precondition, "degree of the zero element");
    return term_degree(coeffs_.begin()->first);
  }

  /// Dense coefficient vector of the pi-free part in a fixed word degree.
  std::vector<u64> dense_component(u32 word_degree) const {
    std::vector<u64> out(basis_->dim(word_degree), 0);
    for (const auto& [t, c] : coeffs_)
      if (t.first == 0 && basis_->word(t.second).degree == word_degree)
        out[basis_->offset_in_degree(t.second)] = c;
    return out;
  }

  friend bool operator==(const Element& a, const Element& b) {
    return a.p_ == b.p_ && a.ring_ == b.ring_ && a.coeffs_ == b.coeffs_;
  }

  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (const auto& [t, c] : coeffs_) {
      if (!out.empty()) out += " + ";
      if (c != 1) out += std::to_string(c) + "*";
      for (u32 i = 0; i < t.first; ++i) out += "pi*";
      out += basis_->word_name(t.second);
    }
    return out;
  }

 private:
  const HallBasis* basis_;
  u64 p_;
  Ring ring_;
  std::map<Term, u64> coeffs_;
};

/// Lie bracket of two elements over the same basis and ring.
inline Element bracket(const Element& x, const Element& y) {
  if (&x.basis() != &y.basis() || x.ring() != y.ring() || x.p() != y.p())
    fail(errc::precondition, "bracket of elements over different bases or rings");
  Element out(&x.basis(), x.p(), x.ring());
  const u64 p = x.p();
  for (const auto& [tx, cx] : x.terms()) {
    for (const auto& [ty, cy] : y.terms()) {
      const auto vec = x.basis().bracket_words(tx.second, ty.second);
      const u64 c = cx * cy % p;
      for (const auto& [w, sc] : vec) {
        const u64 coeff = c * fp::normalize(sc, p) % p;
        out.add_term(tx.first + ty.first, w, coeff);
      }
    }
  }
  return out;
}

/// Sets pi to zero, landing in the F_p ring.
inline Element reduce_mod_pi(const Element& x) {
  Element out(&x.basis(), x.p(), Ring::fp);
  for (const auto& [t, c] : x.terms())
    if (t.first == 0) out.add_term(0, t.second, c);
  return out;
}

namespace detail {

inline void check_relations(const std::vector<Element>& relations, u64 p) {
  for (const auto& r : relations) {
    if (r.ring() != Ring::fp) fail(errc::precondition, "relations must live over F_p");
    if (r.p() != p) fail(errc::precondition, "relation with mismatched characteristic");
    if (r.is_zero()) fail(errc::precondition, "zero relation");
    if (!r.homogeneous()) fail(errc::inhomogeneous_relation, "relation is not homogeneous");
  }
}

} // namespace detail

/// Per-degree dimensions of the quotient of the free Lie algebra by the graded
/// ideal the relations generate. The ideal is spanned degree by degree: the
/// degree-d piece is the span of the degree-d relations together with the
/// brackets of the degree-(d-1) piece with the generators.
inline std::vector<u64> quotient_dims(const HallBasis& basis, const std::vector<Element>& relations,
                                      u32 D) {
  if (D > basis.max_degree()) fail(errc::degree_overflow, "quotient cutoff exceeds the basis");
  const u64 p = relations.empty() ? 0 : relations.front().p();
  if (!relations.empty()) detail::check_relations(relations, p);
  const u32 n = basis.generators();

  std::vector<u64> dims(D + 1, 0);
  std::vector<fp::Eliminator> ideal; // index d
  ideal.reserve(D + 1);
  for (u32 d = 0; d <= D; ++d)
    ideal.emplace_back(d == 0 ? 0 : basis.dim(d), p == 0 ? 2 : p);

  for (u32 d = 1; d <= D; ++d) {
    for (const auto& r : relations)
      if (r.degree() == d) ideal[d].insert_copy(r.dense_component(d));
    if (d >= 2) {
      for (const auto& row : ideal[d - 1].rows()) {
        for (u32 g = 0; g < n; ++g) {
          std::vector<u64> out(basis.dim(d), 0);
          bool nonzero = false;
          for (std::size_t off = 0; off < row.size(); ++off) {
            if (row[off] == 0) continue;
            const u32 w = basis.id_at(d - 1, static_cast<u32>(off));
            for (const auto& [target, sc] : basis.bracket_words(w, basis.generator_id(g))) {
              const u64 c = (out[basis.offset_in_degree(target)] +
                             row[off] * fp::normalize(sc, p == 0 ? 2 : p)) %
                            (p == 0 ? 2 : p);
              out[basis.offset_in_degree(target)] = c;
              nonzero = true;
            }
          }
          if (nonzero) ideal[d].insert(out);
        }
      }
    }
    dims[d] = basis.dim(d) - ideal[d].rank();
  }
  dims.erase(dims.begin());
  return dims;
}

/// Oracle verdict: the Hilbert series the relations would have to produce,
/// against the one they actually produce, through the cutoff degree.
struct SeriesVerdict {
  bool strongly_free = false;
  u32 checked_degree = 0;
  std::vector<i64> expected; // coefficients of 1/(1 - n t + sum_i t^(h_i))
  std::vector<i64> actual;   // dimensions of the enveloping algebra of the quotient
  friend bool operator==(const SeriesVerdict&, const SeriesVerdict&) = default;
};

/// Decides strong freeness of a homogeneous relation sequence up to degree D
/// by comparing the enveloping-algebra Hilbert series of the quotient with
/// 1/(1 - n t + sum t^(h_i)). The dimensions of the enveloping algebra come
/// from the quotient dimensions through the Poincare-Birkhoff-Witt product
/// prod_d (1 - t^d)^(-dim g_d). A negative expected coefficient can never be
/// met and forces a negative verdict.
inline SeriesVerdict strongly_free_oracle(const HallBasis& basis,
                                          const std::vector<Element>& relations, u32 D) {
  if (!relations.empty()) detail::check_relations(relations, relations.front().p());
  SeriesVerdict v;
  v.checked_degree = D;

  const i64 n = basis.generators();
  std::vector<i64> den(D + 1, 0);
  den[0] = 1;
  if (D >= 1) den[1] = -n;
  for (const auto& r : relations) {
    const u32 h = r.degree();
    if (h <= D) den[h] += 1;
  }
  v.expected.assign(D + 1, 0);
  v.expected[0] = 1;
  for (u32 k = 1; k <= D; ++k) {
    i64 acc = 0;
    for (u32 j = 1; j <= k; ++j) acc -= den[j] * v.expected[k - j];
    v.expected[k] = acc;
  }

  const auto g_dims = quotient_dims(basis, relations, D);
  v.actual.assign(D + 1, 0);
  v.actual[0] = 1;
  for (u32 d = 1; d <= D; ++d) {
    for (u64 rep = 0; rep < g_dims[d - 1]; ++rep) {
      for (u32 k = d; k <= D; ++k) v.actual[k] += v.actual[k - d];
    }
  }

  v.strongly_free = (v.expected == v.actual);
  return v;
}

/// Sufficient certificate of strong freeness for degree-2 relations: with the
/// generators split into a subset S and its complement, every relation must be
/// supported away from the S x S bracket block, and the projections onto the
/// mixed block T = {[x, x'] : x outside S, x' in S} must be linearly
/// independent (coordinates with both factors outside S lie in [a,a] and are
/// quotiented away).
inline bool span_criterion(const HallBasis& basis, const std::vector<Element>& relations,
                           const std::vector<u32>& subset_S) {
  if (relations.empty()) return true;
  const u64 p = relations.front().p();
  detail::check_relations(relations, p);
  for (const auto& r : relations)
    if (r.degree() != 2) fail(errc::wrong_degree, "span criterion needs degree-2 relations");
  if (basis.max_degree() < 2) fail(errc::degree_overflow, "basis cutoff below degree 2");

  const u32 n = basis.generators();
  std::vector<bool> in_S(n, false);
  for (u32 s : subset_S) {
    if (s >= n) fail(errc::precondition, "subset index out of range");
    in_S[s] = true;
  }

  std::vector<std::size_t> mixed_cols; // offsets of [xi,xj] with exactly one factor in S
  std::vector<int> block(basis.dim(2), 0); // 2 = both in S, 1 = mixed, 0 = both outside
  for (std::size_t off = 0; off < basis.dim(2); ++off) {
    const auto& w = basis.word(basis.id_at(2, static_cast<u32>(off)));
    const int members = (in_S[basis.word(w.left).generator] ? 1 : 0) +
                        (in_S[basis.word(w.right).generator] ? 1 : 0);
    block[off] = members;
    if (members == 1) mixed_cols.push_back(off);
  }

  fp::Eliminator elim(mixed_cols.size(), p);
  for (const auto& r : relations) {
    const auto dense = r.dense_component(2);
    std::vector<u64> projected(mixed_cols.size(), 0);
    for (std::size_t off = 0; off < dense.size(); ++off) {
      if (dense[off] == 0) continue;
      if (block[off] == 2) return false; // not inside the ideal generated by the complement
    }
    for (std::size_t j = 0; j < mixed_cols.size(); ++j) projected[j] = dense[mixed_cols[j]];
    if (!elim.insert(projected)) return false; // dependent modulo [a,a]
  }
  return true;
}

/// Parses the relation grammar `2*pi*x1 + [x1,x2] - [x2,x3]` into an element
/// over F_p[pi]. Brackets nest; `pi^k` and repeated `pi*` both work.
class RelationParser {
 public:
  RelationParser(const HallBasis& basis, u64 p, std::string text)
      : basis_(basis), p_(p), text_(std::move(text)) {}

  Element parse() {
    Element acc = Element::zero(basis_, p_, Ring::fp_pi);
    skip_ws();
    bool negative = consume_sign();
    while (true) {
      acc += parse_term(negative);
      skip_ws();
      if (pos_ >= text_.size()) break;
      if (text_[pos_] == '+') {
        ++pos_;
        negative = false;
      } else if (text_[pos_] == '-') {
        ++pos_;
        negative = true;
      } else {
        fail(errc::precondition, "unexpected character in relation at position " +
                                     std::to_string(pos_) + ": " + text_);
      }
      skip_ws();
    }
    return acc;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume_sign() {
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      bool neg = text_[pos_] == '-';
      ++pos_;
      skip_ws();
      return neg;
    }
    return false;
  }

  u64 parse_uint() {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail(errc::precondition, "expected a number in relation: " + text_);
    u64 v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      v = v * 10 + (text_[pos_++] - '0');
    return v;
  }

  Element parse_lie_atom() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '[') {
      ++pos_;
      Element left = parse_lie_atom();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ',')
        fail(errc::precondition, "expected ',' in bracket: " + text_);
      ++pos_;
      Element right = parse_lie_atom();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ']')
        fail(errc::precondition, "expected ']' in bracket: " + text_);
      ++pos_;
      return bracket(left, right);
    }
    if (pos_ < text_.size() && text_[pos_] == 'x') {
      ++pos_;
      const u64 idx = parse_uint();
      if (idx < 1 || idx > basis_.generators())
        fail(errc::precondition, "generator index out of range: x" + std::to_string(idx));
      return Element::generator(basis_, p_, Ring::fp_pi, static_cast<u32>(idx - 1));
    }
    fail(errc::precondition, "expected a generator or bracket in relation: " + text_);
  }

  Element parse_term(bool negative) {
    u64 coeff = negative ? p_ - 1 : 1;
    u32 pi_power = 0;
    std::optional<Element> lie;
    while (true) {
      skip_ws();
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        coeff = coeff * (parse_uint() % p_) % p_;
      } else if (text_.compare(pos_, 2, "pi") == 0 &&
                 (pos_ + 2 >= text_.size() ||
                  !std::isalnum(static_cast<unsigned char>(text_[pos_ + 2])))) {
        pos_ += 2;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '^') {
          ++pos_;
          pi_power += static_cast<u32>(parse_uint());
        } else {
          pi_power += 1;
        }
      } else {
        if (lie) fail(errc::precondition, "a term may contain only one Lie factor: " + text_);
        lie = parse_lie_atom();
      }
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '*') {
        ++pos_;
        continue;
      }
      break;
    }
    if (!lie)
      fail(errc::precondition, "term without a generator or bracket: " + text_);
    Element out = lie->scaled(coeff);
    if (pi_power > 0) out = out.times_pi(pi_power);
    return out;
  }

  const HallBasis& basis_;
  u64 p_;
  std::string text_;
  std::size_t pos_ = 0;
};

inline Element parse_relation(const HallBasis& basis, u64 p, const std::string& text) {
  return RelationParser(basis, p, text).parse();
}

} // namespace tamelink::lie
