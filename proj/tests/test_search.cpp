#include <gtest/gtest.h>

#include "tamelink/cohom.hpp"
#include "tamelink/search.hpp"

using namespace tamelink;
using search::u32;
using search::u64;

namespace {

search::SearchConditions basic_cond() {
  search::SearchConditions cond;
  cond.primes = {7};
  cond.d = {1};
  cond.eps = {1};
  return cond;
}

TEST(FindPrime, Fixture31) {
  search::SearchDomain dom;
  dom.bound = 1000;
  const auto r = search::find_prime(basic_cond(), 3, dom);
  EXPECT_EQ(r.prime, 31u);

  // hand-derived rejections: 13 has pattern [0], 19 has pattern [2]
  bool saw13 = false, saw19 = false, saw31 = false;
  for (const auto& rec : r.transcript) {
    if (rec.candidate == 13) {
      saw13 = true;
      EXPECT_FALSE(rec.accepted);
      EXPECT_NE(rec.reason.find("[0]"), std::string::npos) << rec.reason;
    }
    if (rec.candidate == 19) {
      saw19 = true;
      EXPECT_FALSE(rec.accepted);
      EXPECT_NE(rec.reason.find("[2]"), std::string::npos) << rec.reason;
    }
    if (rec.candidate == 31) {
      saw31 = true;
      EXPECT_TRUE(rec.accepted);
    }
  }
  EXPECT_TRUE(saw13);
  EXPECT_TRUE(saw19);
  EXPECT_TRUE(saw31);
  EXPECT_EQ(r.transcript.back().candidate, 31u);
}

TEST(FindPrime, ZeroPatternRejected) {
  search::SearchConditions cond = basic_cond();
  cond.d = {0};
  search::SearchDomain dom;
  dom.bound = 1000;
  try {
    search::find_prime(cond, 3, dom);
    FAIL() << "expected precondition failure (d = 0)";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::precondition);
  }
}

TEST(FindPrime, NotFoundWithinBound) {
  search::SearchDomain dom;
  dom.bound = 20; // 13 and 19 are both rejected, nothing else remains
  try {
    search::find_prime(basic_cond(), 3, dom);
    FAIL() << "expected NotFoundWithinBound";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::not_found_within_bound);
  }
}

TEST(FindPrime, CrtAndDirectPathsAgree) {
  search::SearchConditions cond;
  cond.primes = {7, 13};
  cond.d = {0, 1};
  cond.eps = {1, 0};
  search::SearchDomain crt_dom;
  crt_dom.bound = 100000;
  search::SearchDomain direct_dom = crt_dom;
  direct_dom.crt_class_limit = 0; // forces the direct scan

  const auto a = search::find_prime(cond, 3, crt_dom);
  const auto b = search::find_prime(cond, 3, direct_dom);
  EXPECT_EQ(a.prime, b.prime);
  EXPECT_EQ(a.transcript.size(), b.transcript.size());
}

TEST(FindPrime, WorkersDoNotChangeTheAnswer) {
  search::SearchConditions cond;
  cond.primes = {7, 13};
  cond.d = {1, 1};
  cond.eps = {0, 1};
  search::SearchDomain seq;
  seq.bound = 100000;
  search::SearchDomain par = seq;
  par.workers = 4;
  const auto a = search::find_prime(cond, 3, seq);
  const auto b = search::find_prime(cond, 3, par);
  EXPECT_EQ(a.prime, b.prime);
}

TEST(FindPrime, ConditionsReverifyOnChosenPrime) {
  search::SearchConditions cond;
  cond.primes = {7, 13, 19};
  cond.d = {1, 0, 2};
  cond.eps = {0, 1, 0};
  search::SearchDomain dom;
  dom.bound = 1000000;
  const auto r = search::find_prime(cond, 3, dom);
  for (std::size_t i = 0; i < cond.primes.size(); ++i) {
    EXPECT_EQ(linking::lk(cond.primes[i], r.prime, 3).value, cond.d[i]);
    EXPECT_EQ(linking::lk(r.prime, cond.primes[i], 3).value != 0, cond.eps[i] == 1);
  }
}

TEST(Augment, TwoPrimeBase) {
  search::SearchDomain dom;
  dom.bound = 1000000;
  const auto result = search::augment_to_mild({7, 13}, 3, dom);

  EXPECT_EQ(result.t1.size(), 2u);
  EXPECT_EQ(result.final_primes().size(), 4u);
  EXPECT_EQ(result.witness.rank, 4u);
  EXPECT_EQ(result.witness.split_a, 2u);

  // the added primes are distinct from and interleave with the base set
  for (u64 q : result.t1) {
    EXPECT_NE(q, 7u);
    EXPECT_NE(q, 13u);
    EXPECT_TRUE(arith::is_prime(q));
    EXPECT_EQ(q % 3, 1u);
  }

  // h2 of the enlarged curve equals the relation count of the witness
  const auto table = cohom::global_dimensions(
      fields::FieldDescriptor::rationals(), 3,
      fields::certified_prime_set(fields::rational_places(result.final_primes()), 3));
  EXPECT_EQ(table.h2, 4u);

  // construction shape: each step's prime avoids splitting completely in the
  // layer it was chosen against
  std::vector<u64> current{7, 13};
  for (const auto& step : result.steps) {
    EXPECT_FALSE(linking::splits_completely_el(step.outcome.prime, current, 3));
    current.push_back(step.outcome.prime);
  }
}

TEST(Augment, ReplaysDeterministically) {
  search::SearchDomain dom;
  dom.bound = 1000000;
  const auto a = search::augment_to_mild({7, 13}, 3, dom);
  const auto b = search::augment_to_mild({7, 13}, 3, dom);
  EXPECT_EQ(a.t1, b.t1);
  EXPECT_EQ(a.final_linking, b.final_linking);
  EXPECT_EQ(a.witness, b.witness);
  ASSERT_EQ(a.steps.size(), b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    EXPECT_EQ(a.steps[i].outcome.prime, b.steps[i].outcome.prime);
    EXPECT_EQ(a.steps[i].outcome.total_candidates, b.steps[i].outcome.total_candidates);
  }
}

TEST(Augment, SinglePrimeBaseExtendsFirst) {
  // a one-prime set admits no rank witness on two primes (the window matrix
  // is 2 x 1), so the run moves one domain prime into the basis first and
  // certifies four primes in total
  search::SearchDomain dom;
  dom.bound = 1000000;
  const auto result = search::augment_to_mild({7}, 3, dom);
  EXPECT_EQ(result.t1.size(), 3u);
  EXPECT_EQ(result.final_primes().size(), 4u);
  EXPECT_EQ(result.witness.rank, 4u);
  EXPECT_EQ(result.steps.size(), 3u);
  EXPECT_NE(result.steps.front().label.find("basis extension"), std::string::npos);
}

TEST(Augment, EmptySetRejected) {
  search::SearchDomain dom;
  dom.bound = 1000;
  EXPECT_THROW(search::augment_to_mild({}, 3, dom), error);
}

TEST(FindPrime, CrtClassesMatchBruteForce) {
  // the CRT presieve must enumerate exactly the values passing the
  // d-conditions, compared against a direct filter
  search::SearchConditions cond;
  cond.primes = {7, 13};
  cond.d = {2, 1};
  cond.eps = {0, 0};
  search::SearchDomain dom;
  dom.bound = 5000;
  const auto classes = search::detail::crt_candidates(cond, 3, dom);
  ASSERT_TRUE(classes.has_value());
  std::vector<u64> brute;
  for (u64 v = 1; v <= dom.bound; v += 3) {
    if (v % 7 == 0 || v % 13 == 0) continue;
    if (arith::residue_index(7, v, 3).value == 2 && arith::residue_index(13, v, 3).value == 1)
      brute.push_back(v);
  }
  EXPECT_EQ(*classes, brute);
}

TEST(Augment, ThreePrimeBase) {
  search::SearchDomain dom;
  dom.bound = 100000000;
  const auto result = search::augment_to_mild({7, 13, 19}, 3, dom);
  EXPECT_EQ(result.t1.size(), 3u);
  EXPECT_EQ(result.final_primes().size(), 6u);
  EXPECT_EQ(result.witness.rank, 6u);
  EXPECT_EQ(result.witness.split_a, 3u);
}

TEST(EnlargeCheck, Fixtures) {
  const auto extends = search::enlarge_check({7}, {7, 31}, 3);
  ASSERT_EQ(extends.size(), 1u);
  EXPECT_EQ(extends[0].prime, 31u);
  EXPECT_TRUE(extends[0].extends); // lk(7 -> 31) = 1 != 0

  const auto inconclusive = search::enlarge_check({7}, {7, 13}, 3);
  ASSERT_EQ(inconclusive.size(), 1u);
  EXPECT_FALSE(inconclusive[0].extends); // lk(7 -> 13) = 0

  EXPECT_TRUE(search::enlarge_check({7}, {7}, 3).empty());
}

TEST(EnlargeCheck, RequiresContainment) {
  EXPECT_THROW(search::enlarge_check({7, 13}, {7, 31}, 3), error);
}

} // namespace
