#include <gtest/gtest.h>

#include <set>

#include "tamelink/linking.hpp"

using namespace tamelink;
using linking::u64;

namespace {

// Oracle: is x a p-th power mod q, by full enumeration.
bool pth_power(u64 q, u64 p, u64 x) {
  for (u64 y = 1; y < q; ++y)
    if (arith::pow_mod(y, p, q) == x % q) return true;
  return false;
}

TEST(Lk, Fixtures) {
  EXPECT_EQ(linking::lk(7, 13, 3).value, 0u);
  EXPECT_EQ(linking::lk(13, 7, 3).value, 2u);
  EXPECT_EQ(linking::lk(7, 19, 3).value, 2u);
  EXPECT_EQ(linking::lk(19, 7, 3).value, 0u);
  EXPECT_EQ(linking::lk(7, 31, 3).value, 1u);
}

TEST(Lk, Errors) {
  try {
    linking::lk(7, 7, 3);
    FAIL() << "expected EqualPrimes";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::equal_primes);
  }
  try {
    linking::lk(11, 7, 3);
    FAIL() << "expected NotAdmissible";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::not_admissible);
  }
}

TEST(Lk, ZeroIffPthPowerBelow300) {
  // acceptance runs the full sweep below 1000; unit scope stays quick
  for (u64 p : {3ull, 5ull}) {
    const auto primes = arith::primes_in_ap(1, p, 300);
    for (u64 q : primes)
      for (u64 ell : primes) {
        if (q == ell) continue;
        ASSERT_EQ(linking::lk(q, ell, p).value == 0, pth_power(q, p, ell))
            << "q=" << q << " ell=" << ell;
      }
  }
}

TEST(LinkingData, Fixture79) {
  const auto ld = linking::linking_data({7, 19}, 3);
  EXPECT_EQ(ld.primes, (std::vector<u64>{7, 19}));
  EXPECT_EQ(ld.e[0][1], 2u); // 19 = 5 = 3^5 mod 7, 5 mod 3 = 2
  EXPECT_EQ(ld.e[1][0], 0u); // 7 = 2^6 mod 19
  EXPECT_EQ(ld.a, (std::vector<u64>{2, 0})); // (7-1)/3 = 2; (19-1)/3 = 6 = 0
  EXPECT_EQ(ld.roots, (std::vector<u64>{3, 2}));
}

TEST(LinkingData, SingleAndEmpty) {
  const auto single = linking::linking_data({7}, 3);
  EXPECT_EQ(single.a, (std::vector<u64>{2}));
  EXPECT_EQ(single.size(), 1u);

  const auto empty = linking::linking_data(std::vector<u64>{}, 3);
  EXPECT_EQ(empty.size(), 0u);
}

TEST(LinkingData, SortsInput) {
  const auto ld = linking::linking_data({19, 7}, 3);
  EXPECT_EQ(ld.primes, (std::vector<u64>{7, 19}));
  EXPECT_THROW(linking::linking_data({7, 7}, 3), error);
}

TEST(FrobeniusPattern, Fixtures) {
  const auto p13 = linking::frobenius_pattern(13, {7}, 3);
  ASSERT_EQ(p13.size(), 1u);
  EXPECT_EQ(p13[0].value, 0u);

  const auto p31 = linking::frobenius_pattern(31, {7}, 3);
  EXPECT_EQ(p31[0].value, 1u);

  EXPECT_TRUE(linking::frobenius_pattern(31, {}, 3).empty());

  try {
    linking::frobenius_pattern(7, {7, 13}, 3);
    FAIL() << "expected MemberOfS";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::member_of_s);
  }
}

TEST(SplitsCompletely, Fixtures) {
  EXPECT_TRUE(linking::splits_completely_el(13, {7}, 3));
  EXPECT_FALSE(linking::splits_completely_el(31, {7}, 3));
  EXPECT_TRUE(linking::splits_completely_el(13, {}, 3));
}

TEST(RootChoice, RowsScaleByUnits) {
  // switching the primitive root multiplies each row by a unit of F_p: the
  // zero pattern is identical and nonzero rows are proportional
  const auto a = linking::linking_data({7, 13, 19, 31}, 3, linking::RootChoice::smallest);
  const auto b =
      linking::linking_data({7, 13, 19, 31}, 3, linking::RootChoice::second_smallest);
  const u64 p = 3;
  for (std::size_t i = 0; i < a.size(); ++i) {
    u64 unit = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (i == j) continue;
      ASSERT_EQ(a.e[i][j] == 0, b.e[i][j] == 0) << i << "," << j;
      if (a.e[i][j] != 0) {
        const u64 ratio =
            b.e[i][j] * arith::pow_mod(a.e[i][j], p - 2, p) % p;
        if (unit == 0)
          unit = ratio;
        else
          ASSERT_EQ(unit, ratio) << "row " << i << " is not a uniform scaling";
      }
    }
  }
}

TEST(RootChoice, SecondRootReallyDiffers) {
  const auto a = linking::linking_data({7, 13, 19}, 3, linking::RootChoice::smallest);
  const auto b = linking::linking_data({7, 13, 19}, 3, linking::RootChoice::second_smallest);
  EXPECT_NE(a.roots, b.roots);
}

} // namespace
