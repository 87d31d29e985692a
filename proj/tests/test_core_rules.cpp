#include <gtest/gtest.h>

#include <random>

#include "consensus/core_rules.hpp"
#include "oracles.hpp"

using namespace consensus;

namespace {

template <typename Fn>
ErrorCode error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected consensus::Error";
  return ErrorCode::InvalidParameter;
}

const Rational kTwoThirds(2, 3);

}  // namespace

TEST(MeasureProportion, Examples) {
  EXPECT_EQ(measure_proportion({8, 2}), Rational(4, 5));
  EXPECT_EQ(measure_proportion({0, 7}), Rational(0));
  EXPECT_EQ(measure_proportion({5, 5}), Rational(1, 2));
}

TEST(MeasureProportion, ZeroVotesIsUndefined) {
  EXPECT_EQ(error_of([] { measure_proportion({0, 0}); }), ErrorCode::DivisionUndefined);
}

TEST(QuestionSimple, DecisionTableExamples) {
  EXPECT_EQ(question_simple(10, 8, 2, kTwoThirds), Outcome::Accepted);
  EXPECT_EQ(question_simple(10, 2, 7, kTwoThirds), Outcome::NullResult);
  EXPECT_EQ(question_simple(10, 5, 5, kTwoThirds), Outcome::NegativeResult);
  EXPECT_EQ(question_simple(10, 2, 8, kTwoThirds), Outcome::Rejected);
}

TEST(QuestionSimple, ZeroVotesIsNullNotError) {
  EXPECT_EQ(question_simple(1, 0, 0, kTwoThirds), Outcome::NullResult);
}

TEST(QuestionSimple, RejectsOutOfRangeParameters) {
  EXPECT_EQ(error_of([] { question_simple(0, 1, 1, kTwoThirds); }), ErrorCode::InvalidParameter);
  EXPECT_EQ(error_of([] { question_simple(1, 1, 1, Rational(1, 2)); }), ErrorCode::InvalidParameter);
  EXPECT_EQ(error_of([] { question_simple(1, 1, 1, Rational(3, 2)); }), ErrorCode::InvalidParameter);
  EXPECT_EQ(error_of([] { question_simple(1, -1, 1, kTwoThirds); }), ErrorCode::InvalidParameter);
}

TEST(QuestionSimple, MatchesIntegerDecisionTable) {
  const std::pair<int, int> ts[] = {{2, 3}, {3, 5}, {3, 4}, {1, 1}, {51, 100}};
  for (auto [num, den] : ts) {
    for (int q = 1; q <= 6; ++q) {
      for (int y = 0; y <= 15; ++y) {
        for (int n = 0; n <= 15; ++n) {
          const auto expected = oracle::simple_table(q, y, n, num, den);
          const auto got = question_simple(q, y, n, Rational(num, den));
          const auto map = [](Outcome o) {
            switch (o) {
              case Outcome::Accepted: return oracle::Simple::Accepted;
              case Outcome::Rejected: return oracle::Simple::Rejected;
              case Outcome::NegativeResult: return oracle::Simple::Negative;
              default: return oracle::Simple::Null;
            }
          };
          ASSERT_EQ(map(got), expected) << q << " " << y << " " << n << " " << num << "/" << den;
        }
      }
    }
  }
}

TEST(Quorate, Examples) {
  EXPECT_TRUE(quorate(QuorumSpec::proportion_voting(Rational(1, 3)), 9, 3));
  EXPECT_FALSE(quorate(QuorumSpec::num_present(5), 7, 0));
  EXPECT_FALSE(quorate(QuorumSpec::num_voting(4), 10, 3));
}

TEST(Quorate, ProportionBoundaryIsExact) {
  // 2 of 7 present is below 1/3 (7/3 = 2.33...), 3 of 7 is above.
  EXPECT_FALSE(quorate(QuorumSpec::proportion_voting(Rational(1, 3)), 7, 2));
  EXPECT_TRUE(quorate(QuorumSpec::proportion_voting(Rational(1, 3)), 7, 3));
}

TEST(Quorate, TypeOneCountsPresenceOnly) {
  EXPECT_TRUE(quorate(QuorumSpec::num_present(5), 5, 1));
  EXPECT_FALSE(quorate(QuorumSpec::num_present(5), 4, 4));
}

TEST(Quorate, VotingAbovePresentIsInconsistent) {
  EXPECT_EQ(error_of([] { quorate(QuorumSpec::num_voting(1), 3, 4); }), ErrorCode::InconsistentCounts);
}

TEST(QuorumSpec, ConstructionInvariants) {
  EXPECT_EQ(error_of([] { QuorumSpec::num_present(0); }), ErrorCode::InvalidParameter);
  EXPECT_EQ(error_of([] { QuorumSpec::num_voting(-2); }), ErrorCode::InvalidParameter);
  EXPECT_EQ(error_of([] { QuorumSpec::proportion_voting(Rational(0)); }), ErrorCode::InvalidParameter);
  EXPECT_EQ(error_of([] { QuorumSpec::proportion_voting(Rational(5, 4)); }), ErrorCode::InvalidParameter);
  EXPECT_NO_THROW(QuorumSpec::proportion_voting(Rational(1)));
}

TEST(ThresholdSpec, ConstructionInvariants) {
  EXPECT_EQ(error_of([] { ThresholdSpec::supermajority(Rational(1, 2)); }), ErrorCode::InvalidParameter);
  EXPECT_EQ(error_of([] { ThresholdSpec::supermajority(Rational(11, 10)); }), ErrorCode::InvalidParameter);
  EXPECT_EQ(error_of([] { ThresholdSpec::near_unanimity(-1); }), ErrorCode::InvalidParameter);
  EXPECT_EQ(ThresholdSpec::supermajority(Rational(4, 6)).describe(), "supermajority:2/3");
}

TEST(MeetsThreshold, Examples) {
  EXPECT_FALSE(meets_threshold(5, 10, ThresholdSpec::majority()));
  EXPECT_TRUE(meets_threshold(6, 9, ThresholdSpec::supermajority(kTwoThirds)));
  EXPECT_TRUE(meets_threshold(9, 10, ThresholdSpec::near_unanimity(1)));
  EXPECT_FALSE(meets_threshold(8, 10, ThresholdSpec::near_unanimity(1)));
  EXPECT_EQ(error_of([] { meets_threshold(5, 10, ThresholdSpec::near_unanimity(5)); }),
            ErrorCode::ShortfallTooLarge);
}

TEST(MeetsThreshold, Errors) {
  EXPECT_EQ(error_of([] { meets_threshold(11, 10, ThresholdSpec::majority()); }),
            ErrorCode::InconsistentCounts);
  EXPECT_EQ(error_of([] { meets_threshold(0, 0, ThresholdSpec::majority()); }),
            ErrorCode::InvalidParameter);
}

TEST(MeetsThreshold, MajorityMatchesScannedMinimum) {
  for (Count p = 1; p <= 60; ++p) {
    const auto k = oracle::min_majority(p);
    for (Count v = 0; v <= p; ++v) {
      ASSERT_EQ(meets_threshold(v, p, ThresholdSpec::majority()), v >= k) << v << "/" << p;
    }
  }
}

TEST(MeetsThreshold, SupermajorityEqualsRationalComparison) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5000; ++trial) {
    const Count den = std::uniform_int_distribution<Count>(2, 50)(rng);
    const Count num = std::uniform_int_distribution<Count>(den / 2 + 1, den)(rng);
    const Count p = std::uniform_int_distribution<Count>(1, 300)(rng);
    const Count v = std::uniform_int_distribution<Count>(0, p)(rng);
    const Rational t(num, den);
    ASSERT_EQ(meets_threshold(v, p, ThresholdSpec::supermajority(t)), Rational(v, p) >= t);
  }
}

TEST(Question, Examples) {
  const auto q = QuorumSpec::num_voting(3);
  EXPECT_EQ(question(q, 10, {7, 1}, 10, ThresholdSpec::supermajority(kTwoThirds)), Outcome::Accepted);
  EXPECT_EQ(question(q, 10, {1, 1}, 10, ThresholdSpec::majority()), Outcome::NullResult);
  EXPECT_EQ(question(q, 10, {5, 4}, 10, ThresholdSpec::majority()), Outcome::NegativeResult);
  EXPECT_EQ(question(q, 10, {1, 7}, 10, ThresholdSpec::supermajority(kTwoThirds)), Outcome::Rejected);
}

TEST(Question, PresentMayExceedPopulation) {
  // Population is the 6 members that did not abstain out of 12 present.
  EXPECT_EQ(question(QuorumSpec::num_present(10), 12, {5, 1}, 6, ThresholdSpec::supermajority(kTwoThirds)),
            Outcome::Accepted);
}

TEST(Question, ValidatesCounts) {
  const auto q = QuorumSpec::num_voting(1);
  EXPECT_EQ(error_of([&] { question(q, 5, {4, 2}, 10, ThresholdSpec::majority()); }),
            ErrorCode::InconsistentCounts);
  EXPECT_EQ(error_of([&] { question(q, 20, {11, 2}, 10, ThresholdSpec::majority()); }),
            ErrorCode::InconsistentCounts);
}

TEST(Question, BothThresholdsMetIsContradictory) {
  // Each count fits the population but together they exceed it.
  EXPECT_EQ(error_of([] {
              question(QuorumSpec::num_voting(1), 10, {5, 5}, 5, ThresholdSpec::majority());
            }),
            ErrorCode::ContradictoryTally);
}

TEST(Question, AbstainingActsAsNoAtFixedPopulation) {
  // 10 members, 6 yes and 4 abstain: under 2/3 of P the abstainers block.
  const auto q = QuorumSpec::num_present(6);
  const auto t = ThresholdSpec::supermajority(Rational(7, 10));
  EXPECT_EQ(question(q, 10, {6, 0}, 10, t), Outcome::NegativeResult);
  // With P = members voting only the no-votes count against.
  EXPECT_EQ(question(q, 10, {6, 0}, 6, t), Outcome::Accepted);
}

TEST(Question, MonotoneInYesVotes) {
  std::mt19937_64 rng(11);
  const ThresholdSpec specs[] = {ThresholdSpec::majority(), ThresholdSpec::supermajority(Rational(3, 4)),
                                 ThresholdSpec::near_unanimity(2), ThresholdSpec::unanimity()};
  for (int trial = 0; trial < 3000; ++trial) {
    const Count p = std::uniform_int_distribution<Count>(5, 40)(rng);
    const Count y = std::uniform_int_distribution<Count>(0, p - 1)(rng);
    const Count n = std::uniform_int_distribution<Count>(0, p - 1 - y)(rng);
    const auto& spec = specs[trial % 4];
    const auto q = QuorumSpec::num_voting(1);
    if (question(q, p, {y, n}, p, spec) == Outcome::Accepted) {
      ASSERT_EQ(question(q, p, {y + 1, n}, p, spec), Outcome::Accepted);
    }
  }
}

TEST(OneOfM, Examples) {
  const auto q = QuorumSpec::num_voting(5);
  EXPECT_EQ(one_of_m(q, 10, {6, 3, 1}, 10, ThresholdSpec::majority()),
            (OneOfMResult{Outcome::Accepted, 0}));
  EXPECT_EQ(one_of_m(q, 10, {5, 5, 0}, 10, ThresholdSpec::majority()).outcome, Outcome::NegativeResult);
  EXPECT_EQ(one_of_m(q, 4, {2, 1, 1}, 10, ThresholdSpec::majority()).outcome, Outcome::NullResult);
}

TEST(OneOfM, Validation) {
  const auto q = QuorumSpec::num_voting(1);
  EXPECT_EQ(error_of([&] { one_of_m(q, 10, {3}, 10, ThresholdSpec::majority()); }),
            ErrorCode::InvalidParameter);
  EXPECT_EQ(error_of([&] { one_of_m(q, 3, {2, 2}, 10, ThresholdSpec::majority()); }),
            ErrorCode::InconsistentCounts);
  EXPECT_EQ(error_of([&] { one_of_m(q, 10, {4, 3}, 5, ThresholdSpec::majority()); }),
            ErrorCode::InconsistentCounts);
}

TEST(NOfM, Examples) {
  EXPECT_EQ(n_of_m(QuorumSpec::num_voting(3), 9, 9, {8, 7, 2}, 9, ThresholdSpec::supermajority(Rational(3, 4)), 2),
            (NOfMResult{Outcome::Accepted, {0, 1}}));
  EXPECT_EQ(n_of_m(QuorumSpec::num_voting(3), 9, 9, {4, 4, 4}, 9, ThresholdSpec::majority(), 2).outcome,
            Outcome::NegativeResult);
  EXPECT_EQ(n_of_m(QuorumSpec::num_voting(10), 9, 9, {8, 7, 2}, 9, ThresholdSpec::majority(), 2).outcome,
            Outcome::NullResult);
}

TEST(NOfM, Validation) {
  const auto q = QuorumSpec::num_voting(1);
  const auto maj = ThresholdSpec::majority();
  // n larger than M
  EXPECT_EQ(error_of([&] { n_of_m(q, 9, 9, {8, 7, 2}, 9, maj, 4); }), ErrorCode::InvalidParameter);
  // more votes than n x voting
  EXPECT_EQ(error_of([&] { n_of_m(q, 9, 9, {8, 7, 4}, 9, maj, 2); }), ErrorCode::InconsistentCounts);
  // voting exceeds number of votes
  EXPECT_EQ(error_of([&] { n_of_m(q, 9, 9, {3, 2, 1}, 9, maj, 2); }), ErrorCode::InconsistentCounts);
  // voting exceeds present
  EXPECT_EQ(error_of([&] { n_of_m(q, 8, 9, {8, 7, 2}, 9, maj, 2); }), ErrorCode::InconsistentCounts);
  // voting exceeds population
  EXPECT_EQ(error_of([&] { n_of_m(q, 9, 9, {8, 7, 2}, 8, maj, 2); }), ErrorCode::InconsistentCounts);
}
