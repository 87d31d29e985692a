#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "consensus/sequential.hpp"
#include "demo_profiles.hpp"

using namespace consensus;

namespace {

constexpr std::size_t X = 0, Y = 1, Z = 2;

/// Brute-force oracle: over every order, the first passing option in that
/// order. Passing is decided by integer cross-multiplication.
std::vector<Rational> first_passer_distribution(const std::vector<Count>& approvals, Count population,
                                                Count num, Count den) {
  const std::size_t m = approvals.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<Count> hits(m, 0);
  Count orders = 0;
  do {
    ++orders;
    for (auto o : order) {
      if (approvals[o] * den >= num * population) {
        ++hits[o];
        break;
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));
  std::vector<Rational> out;
  for (auto h : hits) out.emplace_back(h, orders);
  return out;
}

}  // namespace

TEST(PassingSet, SevenSixTwo) {
  const auto profile = demo::seven_six_two();
  EXPECT_EQ(approvals(profile), (MultiTally{7, 6, 2}));
  EXPECT_EQ(passing_set(profile, 9, ThresholdSpec::supermajority(Rational(2, 3))),
            (std::vector<std::size_t>{X, Y}));
}

TEST(PassingSet, EveryoneApprovesEverything) {
  ApprovalProfile p{3, {}};
  for (int k = 0; k < 5; ++k) p.voters.push_back({{Z, X, Y}, 3});
  EXPECT_EQ(passing_set(p, 5, ThresholdSpec::unanimity()), (std::vector<std::size_t>{X, Y, Z}));
}

TEST(PassingSet, UnapprovedOptionNeverPasses) {
  ApprovalProfile p{3, {}};
  for (int k = 0; k < 5; ++k) p.voters.push_back({{X, Y, Z}, 2});
  const auto s = passing_set(p, 5, ThresholdSpec::majority());
  EXPECT_EQ(std::count(s.begin(), s.end(), Z), 0);
}

TEST(PassingSet, Validation) {
  ApprovalProfile bad{3, {{{X, Y}, 1}}};
  EXPECT_THROW(approvals(bad), Error);
  ApprovalProfile cutoff{3, {{{X, Y, Z}, 0}}};
  EXPECT_THROW(approvals(cutoff), Error);
  EXPECT_THROW(passing_set(demo::seven_six_two(), 8, ThresholdSpec::majority()), Error);
}

TEST(SimulateSequence, FirstPasserInOrderWins) {
  const auto profile = demo::seven_six_two();
  const auto t = ThresholdSpec::supermajority(Rational(2, 3));
  const std::vector<std::size_t> order{Y, X, Z};
  const auto s = simulate_sequence(profile, order, 9, t);
  EXPECT_EQ(s.chosen, Y);
  ASSERT_EQ(s.steps.size(), 1u);
  EXPECT_EQ(s.steps[0], (SequenceStep{Y, Outcome::Accepted}));

  const std::vector<std::size_t> z_first{Z, X, Y};
  const auto s2 = simulate_sequence(profile, z_first, 9, t);
  EXPECT_EQ(s2.chosen, X);
  EXPECT_EQ(s2.steps[0].outcome, Outcome::Rejected);
}

TEST(SimulateSequence, DefaultWhenNothingPasses) {
  const auto profile = demo::seven_six_two();
  const std::vector<std::size_t> order{X, Y, Z};
  const auto s = simulate_sequence(profile, order, 9, ThresholdSpec::unanimity());
  EXPECT_FALSE(s.chosen);
  EXPECT_EQ(s.steps.size(), 3u);
}

TEST(SimulateSequence, SinglePasserAlwaysChosen) {
  const auto profile = demo::seven_six_two();
  std::vector<std::size_t> order{X, Y, Z};
  do {
    EXPECT_EQ(simulate_sequence(profile, order, 9, ThresholdSpec::supermajority(Rational(3, 4))).chosen, X);
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST(SimulateSequence, RejectsNonPermutation) {
  const std::vector<std::size_t> order{X, X, Z};
  EXPECT_THROW(simulate_sequence(demo::seven_six_two(), order, 9, ThresholdSpec::majority()), Error);
}

TEST(OrderAnalysis, ExhaustiveMatchesBruteForce) {
  const auto profile = demo::seven_six_two();
  const auto a = order_analysis(profile, 9, ThresholdSpec::supermajority(Rational(2, 3)), Exhaustive{});
  ASSERT_TRUE(a.exact);
  EXPECT_EQ(*a.exact, first_passer_distribution({7, 6, 2}, 9, 2, 3));
  EXPECT_EQ(*a.exact, (std::vector<Rational>{Rational(1, 2), Rational(1, 2), Rational(0)}));
  EXPECT_EQ(a.orders_evaluated, 6u);
}

TEST(OrderAnalysis, CondorcetFavoriteChosenOneThirdOfTheTime) {
  const auto profile = demo::favorite_among_three();
  const auto t = ThresholdSpec::supermajority(Rational(2, 3));
  const auto a = order_analysis(profile, 9, t, Exhaustive{});
  EXPECT_EQ(a.passing, (std::vector<std::size_t>{X, Y, Z}));
  EXPECT_EQ(a.condorcet_winner, X);
  EXPECT_EQ((*a.exact)[X], Rational(1, 3));
}

TEST(OrderAnalysis, ExhaustiveLimit) {
  ApprovalProfile p{9, {}};
  std::vector<std::size_t> r(9);
  std::iota(r.begin(), r.end(), std::size_t{0});
  p.voters.push_back({r, 1});
  EXPECT_THROW(order_analysis(p, 1, ThresholdSpec::majority(), Exhaustive{}), Error);
}

TEST(OrderAnalysis, MonteCarloIsSeededAndClose) {
  const auto profile = demo::favorite_among_three();
  const auto t = ThresholdSpec::supermajority(Rational(2, 3));
  const auto a = order_analysis(profile, 9, t, MonteCarlo{5000, 42});
  const auto b = order_analysis(profile, 9, t, MonteCarlo{5000, 42});
  EXPECT_EQ(a.probability, b.probability);
  for (double p : a.probability) EXPECT_NEAR(p, 1.0 / 3.0, 0.03);
  EXPECT_GT(a.standard_error[0], 0.0);
  const auto c = order_analysis(profile, 9, t, MonteCarlo{5000, 43});
  EXPECT_NE(a.probability, c.probability);
}
