#include <gtest/gtest.h>

#include <map>
#include <random>

#include "tamelink/mild.hpp"

using namespace tamelink;
using linking::LinkingData;
using mild::CupData;
using mild::u32;
using mild::u64;

namespace {

LinkingData synthetic_ld(u64 p, std::vector<u64> primes, std::vector<std::vector<u64>> e,
                         std::vector<u64> a) {
  LinkingData ld;
  ld.p = p;
  ld.primes = std::move(primes);
  ld.e = std::move(e);
  ld.a = std::move(a);
  ld.roots.assign(ld.primes.size(), 0);
  return ld;
}

TEST(InitialForms, Fixture79) {
  const auto ld = linking::linking_data({7, 19}, 3);
  lie::HallBasis basis(2, 2);
  const auto forms = mild::initial_forms(ld, basis);
  ASSERT_EQ(forms.size(), 2u);
  // rho_7 = 2 pi x1; rho_19 = -2 [x1,x2] = [x1,x2] mod 3
  const auto x1 = lie::Element::generator(basis, 3, lie::Ring::fp_pi, 0);
  const auto x2 = lie::Element::generator(basis, 3, lie::Ring::fp_pi, 1);
  EXPECT_EQ(forms[0], x1.scaled(2).times_pi());
  EXPECT_EQ(forms[1], lie::bracket(x1, x2));
}

TEST(InitialForms, SinglePrimeCases) {
  // 7 is not 1 mod 9: nonzero Bockstein diagonal
  const auto ld7 = linking::linking_data({7}, 3);
  lie::HallBasis basis(1, 2);
  const auto forms = mild::initial_forms(ld7, basis);
  ASSERT_EQ(forms.size(), 1u);
  const auto x1 = lie::Element::generator(basis, 3, lie::Ring::fp_pi, 0);
  EXPECT_EQ(forms[0], x1.scaled(2).times_pi());

  // 19 = 1 mod 9: the degree-2 image vanishes entirely
  const auto ld19 = linking::linking_data({19}, 3);
  try {
    mild::initial_forms(ld19, basis);
    FAIL() << "expected DegenerateRelation";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::degenerate_relation);
  }
}

TEST(InitialForms, MatchesCupConvention) {
  // the bracket coefficient of rho_i on each sorted pair is exactly
  // -cup(i,(k,l)): initial forms and cup data stay in lockstep
  const auto ld = synthetic_ld(5, {11, 31, 41}, {{0, 2, 3}, {1, 0, 4}, {2, 1, 0}}, {1, 2, 3});
  lie::HallBasis basis(3, 2);
  const auto forms = mild::initial_forms(ld, basis);
  const auto cup = mild::linking_cup(ld);
  for (u32 i = 0; i < 3; ++i) {
    const auto dense = forms[i].dense_component(2);
    std::size_t col = 0;
    for (u32 k = 0; k < 3; ++k)
      for (u32 l = k + 1; l < 3; ++l, ++col)
        ASSERT_EQ(dense[col], (5 - cup.rows[i][cup.pair_index(k, l)]) % 5)
            << "i=" << i << " pair " << k << "," << l;
  }
}

TEST(MildkritCheck, TinyFixtures) {
  // n=2, m=1: a 1x1 window
  std::map<std::pair<u32, std::pair<u32, u32>>, u64> values{{{0, {0, 1}}, 1}};
  const auto cup = mild::cup_from_map(2, 1, 3, values);
  const auto w = mild::mildkrit_check(cup, {0, 1}, 1);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->rank, 1u);
  EXPECT_EQ(w->matrix, (std::vector<std::vector<u64>>{{1}}));

  values[{0, {0, 1}}] = 0;
  const auto cup0 = mild::cup_from_map(2, 1, 3, values);
  EXPECT_FALSE(mild::mildkrit_check(cup0, {0, 1}, 1).has_value());
}

TEST(MildkritCheck, FourByTwoFixture) {
  // rows (1,0,0,0) and (0,0,0,1) over the (k,l) window {0,1} x {2,3},
  // zeros on the (2,3) pair
  std::map<std::pair<u32, std::pair<u32, u32>>, u64> values;
  for (u32 i = 0; i < 2; ++i)
    for (u32 k = 0; k < 4; ++k)
      for (u32 l = k + 1; l < 4; ++l) values[{i, {k, l}}] = 0;
  values[{0, {0, 2}}] = 1;
  values[{1, {1, 3}}] = 1;
  const auto cup = mild::cup_from_map(4, 2, 3, values);
  const auto w = mild::mildkrit_check(cup, {0, 1, 2, 3}, 2);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->rank, 2u);
}

TEST(MildkritCheck, IncompleteCupData) {
  std::map<std::pair<u32, std::pair<u32, u32>>, u64> values{{{0, {0, 1}}, 1}};
  try {
    mild::cup_from_map(3, 1, 3, values);
    FAIL() << "expected IncompleteCupData";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::incomplete_cup_data);
  }
}

TEST(MildkritCheck, ConditionOneViolation) {
  // nonzero value inside the right block kills the split even if the rank
  // would be fine
  std::map<std::pair<u32, std::pair<u32, u32>>, u64> values;
  for (u32 i = 0; i < 3; ++i)
    for (u32 k = 0; k < 3; ++k)
      for (u32 l = k + 1; l < 3; ++l) values[{i, {k, l}}] = 0;
  values[{0, {0, 1}}] = 1;
  values[{1, {0, 2}}] = 1;
  values[{2, {1, 2}}] = 1; // right-block pair for a = 1
  const auto cup = mild::cup_from_map(3, 3, 3, values);
  EXPECT_FALSE(mild::mildkrit_check(cup, {0, 1, 2}, 1).has_value());
}

TEST(FindMildWitness, LinkedPairNotFound) {
  const auto ld = linking::linking_data({7, 19}, 3);
  const auto r = mild::find_mild_witness(ld);
  EXPECT_FALSE(r.witness.has_value());
  EXPECT_TRUE(r.exhaustive);
  // cross-check with the oracle route: rho_7 reduces to 0 mod pi, so the
  // reduced sequence cannot even be formed with nonzero entries
  lie::HallBasis basis(2, 2);
  const auto forms = mild::initial_forms(ld, basis);
  EXPECT_TRUE(lie::reduce_mod_pi(forms[0]).is_zero());
}

TEST(FindMildWitness, SingleCharacterNotFound) {
  const auto ld = linking::linking_data({7}, 3);
  EXPECT_FALSE(mild::find_mild_witness(ld).witness.has_value());
}

TEST(FindMildWitness, SyntheticFourPrimeWitness) {
  // linking-shaped data mirroring the constructed sets: basis {0,1} and new
  // primes {2,3}, with e[2][0], e[3][1], e[1][2], e[0][3] nonzero
  std::vector<std::vector<u64>> e(4, std::vector<u64>(4, 0));
  e[2][0] = 1; // lk(q2 -> q0)
  e[3][1] = 2; // lk(q3 -> q1)
  e[1][2] = 1; // lk(q1 -> q2)
  e[0][3] = 1; // lk(q0 -> q3)
  const auto ld = synthetic_ld(3, {7, 13, 31, 43}, e, {2, 1, 0, 0});
  const auto r = mild::find_mild_witness(ld);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->rank, 4u);
  EXPECT_EQ(r.witness->split_a, 2u);
  EXPECT_EQ(r.witness->ordering, (std::vector<u32>{0, 1, 2, 3}));
}

TEST(FindMildWitness, LexicographicOrderOfBipartitions) {
  // the data of the previous fixture admits the reverse bipartition too;
  // dirtying the (2,3) pair leaves {2,3} | {0,1} as the only valid split and
  // the search must report exactly that ordering
  std::vector<std::vector<u64>> e(4, std::vector<u64>(4, 0));
  e[2][0] = 1;
  e[3][1] = 2;
  e[1][2] = 1;
  e[0][3] = 1;
  e[3][2] = 1; // kills the {0,1} | {2,3} split
  const auto ld = synthetic_ld(3, {7, 13, 31, 43}, e, {0, 0, 0, 0});
  const auto r = mild::find_mild_witness(ld);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->ordering, (std::vector<u32>{2, 3, 0, 1}));
  EXPECT_EQ(r.witness->split_a, 2u);
}

TEST(FindMildWitness, BudgetExceeded) {
  std::vector<std::vector<u64>> e(6, std::vector<u64>(6, 0));
  const auto ld = synthetic_ld(3, {7, 13, 31, 43, 61, 67}, e, {1, 1, 1, 1, 1, 1});
  mild::SearchLimits limits;
  limits.max_bipartitions = 3;
  try {
    mild::find_mild_witness(ld, limits);
    FAIL() << "expected BudgetExceeded";
  } catch (const error& e2) {
    EXPECT_EQ(e2.code(), errc::budget_exceeded);
  }
}

mild::CupData permute_cup(const CupData& cup, const std::vector<u32>& perm) {
  CupData out{cup.p, cup.n, cup.m, {}};
  out.rows.assign(cup.m, std::vector<u64>(CupData::pair_count(cup.n), 0));
  for (u32 i = 0; i < cup.m; ++i)
    for (u32 k = 0; k < cup.n; ++k)
      for (u32 l = k + 1; l < cup.n; ++l) {
        const u32 nk = std::min(perm[k], perm[l]);
        const u32 nl = std::max(perm[k], perm[l]);
        const u64 v = cup.rows[i][cup.pair_index(k, l)];
        out.rows[perm[i]][out.pair_index(nk, nl)] =
            (perm[k] < perm[l]) ? v : (cup.p - v) % cup.p;
      }
  return out;
}

TEST(MildkritCheck, PermutationCovariance) {
  std::vector<std::vector<u64>> e(4, std::vector<u64>(4, 0));
  e[2][0] = 1;
  e[3][1] = 2;
  e[1][2] = 1;
  e[0][3] = 1;
  const auto ld = synthetic_ld(3, {7, 13, 31, 43}, e, {2, 1, 0, 0});
  const auto cup = mild::linking_cup(ld);
  const auto w = mild::mildkrit_check(cup, {0, 1, 2, 3}, 2);
  ASSERT_TRUE(w.has_value());

  const std::vector<u32> perm{2, 0, 3, 1}; // new label of old character i
  const auto cup2 = permute_cup(cup, perm);
  std::vector<u32> ordering2;
  for (u32 c : std::vector<u32>{0, 1, 2, 3}) ordering2.push_back(perm[c]);
  const auto w2 = mild::mildkrit_check(cup2, ordering2, 2);
  ASSERT_TRUE(w2.has_value());
  EXPECT_EQ(w2->rank, w->rank);
  for (u32 i = 0; i < 4; ++i) EXPECT_EQ(w2->matrix[perm[i]], w->matrix[i]);
}

TEST(FindMildWitness, RootScalingInvariance) {
  // simulate a primitive-root change: each row of e scales by a unit
  std::mt19937 rng(4257);
  std::uniform_int_distribution<u64> entry(0, 4);
  std::uniform_int_distribution<u64> unit(1, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const u64 p = 5;
    const u32 n = 4;
    std::vector<std::vector<u64>> e(n, std::vector<u64>(n, 0));
    for (u32 i = 0; i < n; ++i)
      for (u32 j = 0; j < n; ++j)
        if (i != j) e[i][j] = entry(rng);
    std::vector<u64> a(n, 1);
    const auto base = synthetic_ld(p, {11, 31, 41, 61}, e, a);

    auto scaled = e;
    for (u32 i = 0; i < n; ++i) {
      const u64 u = unit(rng);
      for (u32 j = 0; j < n; ++j) scaled[i][j] = scaled[i][j] * u % p;
    }
    const auto twisted = synthetic_ld(p, {11, 31, 41, 61}, scaled, a);

    const auto r1 = mild::find_mild_witness(base);
    const auto r2 = mild::find_mild_witness(twisted);
    ASSERT_EQ(r1.witness.has_value(), r2.witness.has_value()) << "trial " << trial;
    if (r1.witness) {
      EXPECT_EQ(r1.witness->split_a, r2.witness->split_a);
      EXPECT_EQ(r1.witness->ordering, r2.witness->ordering);
    }
  }
}

TEST(FindMildWitness, GreedyHeuristicBeyondExhaustiveBound) {
  // 12 characters force the greedy independent-set path; plant the bipartite
  // shape the construction produces and expect the witness to surface
  const u32 n = 12, half = 6;
  std::vector<std::vector<u64>> e(n, std::vector<u64>(n, 0));
  for (u32 j = 0; j < half; ++j) {
    const u32 partner = (j == 0) ? 1 : 0;
    e[half + j][j] = 1;       // new prime links into its old target
    e[partner][half + j] = 1; // old partner links into the new prime
  }
  std::vector<u64> primes(n);
  for (u32 i = 0; i < n; ++i) primes[i] = 100 + i;
  const auto ld = synthetic_ld(3, primes, e, std::vector<u64>(n, 1));
  const auto r = mild::find_mild_witness(ld);
  EXPECT_FALSE(r.exhaustive);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->rank, n);
}

TEST(FindMildWitness, SoundAgainstOracle) {
  // whenever the search finds a witness on linking-shaped data, the reduced
  // initial forms are strongly free through degree 6
  std::mt19937 rng(90321);
  std::uniform_int_distribution<u64> entry(0, 2);
  int witnesses = 0;
  for (int trial = 0; trial < 150 && witnesses < 12; ++trial) {
    const u64 p = 3;
    const u32 n = 4;
    std::vector<std::vector<u64>> e(n, std::vector<u64>(n, 0));
    for (u32 i = 0; i < n; ++i)
      for (u32 j = 0; j < n; ++j)
        if (i != j) e[i][j] = entry(rng);
    std::vector<u64> a{entry(rng), entry(rng), entry(rng), entry(rng)};
    const auto ld = synthetic_ld(p, {7, 13, 31, 43}, e, a);
    const auto r = mild::find_mild_witness(ld);
    if (!r.witness) continue;
    ++witnesses;
    lie::HallBasis basis(n, 6);
    const auto forms = mild::initial_forms(ld, basis);
    std::vector<lie::Element> reduced;
    for (const auto& f : forms) reduced.push_back(lie::reduce_mod_pi(f));
    const auto verdict = lie::strongly_free_oracle(basis, reduced, 6);
    ASSERT_TRUE(verdict.strongly_free) << "witness without strong freeness, trial " << trial;
  }
  EXPECT_GT(witnesses, 0);
}

} // namespace
