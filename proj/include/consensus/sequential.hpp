#pragma once

// Sequential yes/no voting over exclusive options, and how the voting order
// decides which of several passing options is chosen.
//
// Voter model: each voter holds a full ranking and approves its top `cutoff`
// options. Every voter votes on every option; approval is a yes vote.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include "consensus/core_rules.hpp"
#include "consensus/preference.hpp"

namespace consensus {

struct ApprovalVoter {
  std::vector<std::size_t> ranking;  ///< full permutation of [0, m)
  std::size_t cutoff = 1;            ///< approves ranking[0 .. cutoff)
};

struct ApprovalProfile {
  std::size_t m = 0;
  std::vector<ApprovalVoter> voters;
};

struct SequenceStep {
  std::size_t option = 0;
  Outcome outcome = Outcome::NullResult;
  bool operator==(const SequenceStep&) const = default;
};

struct SequenceOutcome {
  std::optional<std::size_t> chosen;  ///< nullopt: every option failed (default)
  std::vector<SequenceStep> steps;
  std::vector<std::size_t> order;
};

struct Exhaustive {};
struct MonteCarlo {
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 0;
};
using AnalysisMode = std::variant<Exhaustive, MonteCarlo>;

struct OrderAnalysis {
  std::vector<double> probability;     ///< per option, chance of being chosen
  std::vector<double> standard_error;  ///< zero for exhaustive enumeration
  std::optional<std::vector<Rational>> exact;  ///< exhaustive mode only
  std::vector<std::size_t> passing;
  std::optional<std::size_t> condorcet_winner;
  std::uint64_t orders_evaluated = 0;
};

namespace detail {

inline void validate_profile(const ApprovalProfile& profile) {
  require_contest(profile.m);
  for (std::size_t k = 0; k < profile.voters.size(); ++k) {
    const auto& v = profile.voters[k];
    validate_indices(v.ranking, profile.m, k + 1);
    if (v.ranking.size() != profile.m) {
      fail(ErrorCode::MalformedBallot,
           "voter " + std::to_string(k + 1) + ": ranking must list all " +
               std::to_string(profile.m) + " options",
           k + 1);
    }
    if (v.cutoff < 1 || v.cutoff > profile.m) {
      fail(ErrorCode::MalformedBallot,
           "voter " + std::to_string(k + 1) + ": cutoff must be in [1, " +
               std::to_string(profile.m) + "], got " + std::to_string(v.cutoff),
           k + 1);
    }
  }
}

inline void validate_population(const ApprovalProfile& profile, Count population) {
  require(population >= 1, ErrorCode::InvalidParameter,
          "population must be >= 1, got " + std::to_string(population));
  if (population < static_cast<Count>(profile.voters.size())) {
    fail(ErrorCode::InconsistentCounts,
         "population (" + std::to_string(population) + ") is smaller than the number of voters (" +
             std::to_string(profile.voters.size()) + ")");
  }
}

inline void validate_order(std::span<const std::size_t> order, std::size_t m) {
  require(order.size() == m, ErrorCode::InvalidParameter,
          "voting order must list all " + std::to_string(m) + " options");
  std::vector<bool> seen(m, false);
  for (std::size_t o : order) {
    require(o < m && !seen[o], ErrorCode::InvalidParameter,
            "voting order is not a permutation of the options");
    seen[o] = true;
  }
}

/// Advances `state` and returns the next SplitMix64 output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Approval count per option.
inline MultiTally approvals(const ApprovalProfile& profile) {
  detail::validate_profile(profile);
  MultiTally counts(profile.m, 0);
  for (const auto& v : profile.voters) {
    for (std::size_t k = 0; k < v.cutoff; ++k) ++counts[v.ranking[k]];
  }
  return counts;
}

/// Options that would each pass a yes/no vote on their own.
inline std::vector<std::size_t> passing_set(const ApprovalProfile& profile, Count population,
                                            const ThresholdSpec& threshold) {
  const auto counts = approvals(profile);
  detail::validate_population(profile, population);
  return detail::passing_choices(counts, population, threshold);
}

/// Votes on each option in `order` and stops at the first one accepted.
/// Every member of the population votes; non-approval is a no vote.
inline SequenceOutcome simulate_sequence(const ApprovalProfile& profile,
                                         std::span<const std::size_t> order, Count population,
                                         const ThresholdSpec& threshold) {
  const auto counts = approvals(profile);
  detail::validate_population(profile, population);
  detail::validate_order(order, profile.m);

  SequenceOutcome result;
  result.order.assign(order.begin(), order.end());
  const auto quorum = QuorumSpec::num_voting(1);
  for (std::size_t option : order) {
    const YesNoTally tally{counts[option], population - counts[option]};
    const Outcome o = question(quorum, population, tally, population, threshold);
    result.steps.push_back({option, o});
    if (o == Outcome::Accepted) {
      result.chosen = option;
      break;
    }
  }
  return result;
}

/// Probability that each option is chosen when the voting order is uniformly
/// random. Exhaustive mode enumerates all m! orders (m <= 8). Monte Carlo
/// trial t draws its order from a generator seeded by (seed, t) alone.
inline OrderAnalysis order_analysis(const ApprovalProfile& profile, Count population,
                                    const ThresholdSpec& threshold, const AnalysisMode& mode) {
  OrderAnalysis out;
  out.passing = passing_set(profile, population, threshold);
  const std::size_t m = profile.m;

  std::vector<RankedBallot> rankings;
  rankings.reserve(profile.voters.size());
  for (const auto& v : profile.voters) rankings.push_back({v.ranking});
  out.condorcet_winner = condorcet_winner(pairwise_matrix(rankings, m));

  std::vector<std::uint64_t> chosen(m, 0);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});

  if (std::holds_alternative<Exhaustive>(mode)) {
    detail::require(m <= 8, ErrorCode::InvalidParameter,
                    "exhaustive order analysis supports at most 8 options, got " +
                        std::to_string(m));
    do {
      const auto s = simulate_sequence(profile, order, population, threshold);
      if (s.chosen) ++chosen[*s.chosen];
      ++out.orders_evaluated;
    } while (std::next_permutation(order.begin(), order.end()));

    std::vector<Rational> exact(m);
    for (std::size_t i = 0; i < m; ++i) {
      exact[i] = Rational(static_cast<std::int64_t>(chosen[i]),
                          static_cast<std::int64_t>(out.orders_evaluated));
      out.probability.push_back(to_double(exact[i]));
    }
    out.standard_error.assign(m, 0.0);
    out.exact = std::move(exact);
    return out;
  }

  const auto& mc = std::get<MonteCarlo>(mode);
  detail::require(mc.trials >= 1, ErrorCode::InvalidParameter, "Monte Carlo needs at least 1 trial");
  for (std::uint64_t t = 0; t < mc.trials; ++t) {
    std::uint64_t state = mc.seed ^ (t * 0xd1b54a32d192ed03ULL);
    std::mt19937_64 rng(detail::splitmix64(state));
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Fisher-Yates with rejection sampling; std::uniform_int_distribution
    // output differs between standard libraries.
    for (std::size_t i = m - 1; i > 0; --i) {
      const std::uint64_t bound = i + 1;
      const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
      std::uint64_t x;
      do x = rng(); while (x >= limit);
      std::swap(order[i], order[x % bound]);
    }
    const auto s = simulate_sequence(profile, order, population, threshold);
    if (s.chosen) ++chosen[*s.chosen];
    ++out.orders_evaluated;
  }
  const auto n = static_cast<double>(mc.trials);
  for (std::size_t i = 0; i < m; ++i) {
    const double p = static_cast<double>(chosen[i]) / n;
    out.probability.push_back(p);
    out.standard_error.push_back(std::sqrt(p * (1.0 - p) / n));
  }
  return out;
}

}  // namespace consensus
