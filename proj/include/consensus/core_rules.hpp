#pragma once

// Decision rules that reduce vote counts to a dichotomic consensus outcome.
// Every comparison is done on integers or exact rationals.

#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "consensus/error.hpp"
#include "consensus/rational.hpp"

namespace consensus {

enum class Outcome { Accepted, Rejected, NegativeResult, NullResult };

constexpr std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Accepted: return "accepted";
    case Outcome::Rejected: return "rejected";
    case Outcome::NegativeResult: return "negative_result";
    case Outcome::NullResult: return "null_result";
  }
  return "unknown";
}

/// Effective population size used as the threshold denominator.
enum class PopulationLevel {
  Nominal,  ///< P1: nominal size of the voting body
  Current,  ///< P2: current size, vacant positions excluded
  Present,  ///< P3: members present at the time of voting
  Voting,   ///< P4: members that did not abstain
};

constexpr std::string_view to_string(PopulationLevel level) {
  switch (level) {
    case PopulationLevel::Nominal: return "nominal";
    case PopulationLevel::Current: return "current";
    case PopulationLevel::Present: return "present";
    case PopulationLevel::Voting: return "voting";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// ThresholdSpec

class ThresholdSpec {
 public:
  struct Majority {
    bool operator==(const Majority&) const = default;
  };
  struct Supermajority {
    Rational t;
    bool operator==(const Supermajority&) const = default;
  };
  struct NearUnanimity {
    Count c;
    bool operator==(const NearUnanimity&) const = default;
  };
  struct Unanimity {
    bool operator==(const Unanimity&) const = default;
  };
  using Variant = std::variant<Majority, Supermajority, NearUnanimity, Unanimity>;

  static ThresholdSpec majority() { return ThresholdSpec(Majority{}); }
  static ThresholdSpec unanimity() { return ThresholdSpec(Unanimity{}); }

  /// Requires 1/2 < t <= 1.
  static ThresholdSpec supermajority(Rational t) {
    detail::require(t > Rational(1, 2) && t <= Rational(1), ErrorCode::InvalidParameter,
                    "supermajority threshold must satisfy 1/2 < T <= 1, got " + to_string(t));
    return ThresholdSpec(Supermajority{t});
  }

  /// Requires c >= 0. The c < P/2 constraint is checked when a population is known.
  static ThresholdSpec near_unanimity(Count c) {
    detail::require(c >= 0, ErrorCode::InvalidParameter,
                    "near-unanimity shortfall must be >= 0, got " + std::to_string(c));
    return ThresholdSpec(NearUnanimity{c});
  }

  const Variant& value() const { return value_; }

  std::string describe() const {
    return std::visit(
        [](const auto& v) -> std::string {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, Majority>) return "majority";
          else if constexpr (std::is_same_v<V, Supermajority>) return "supermajority:" + to_string(v.t);
          else if constexpr (std::is_same_v<V, NearUnanimity>) return "near_unanimity:" + std::to_string(v.c);
          else return "unanimity";
        },
        value_);
  }

  bool operator==(const ThresholdSpec&) const = default;

 private:
  explicit ThresholdSpec(Variant v) : value_(std::move(v)) {}
  Variant value_;
};

// ---------------------------------------------------------------------------
// QuorumSpec

class QuorumSpec {
 public:
  /// Quorum type (1): minimum number of members present.
  struct NumPresent {
    Count q;
    bool operator==(const NumPresent&) const = default;
  };
  /// Quorum type (2) as a constant: minimum number of members not abstaining.
  struct NumVoting {
    Count q;
    bool operator==(const NumVoting&) const = default;
  };
  /// Quorum type (2) as a proportion of the members present.
  struct ProportionVoting {
    Rational r;
    bool operator==(const ProportionVoting&) const = default;
  };
  using Variant = std::variant<NumPresent, NumVoting, ProportionVoting>;

  static QuorumSpec num_present(Count q) {
    detail::require(q >= 1, ErrorCode::InvalidParameter,
                    "quorum count must be >= 1, got " + std::to_string(q));
    return QuorumSpec(NumPresent{q});
  }
  static QuorumSpec num_voting(Count q) {
    detail::require(q >= 1, ErrorCode::InvalidParameter,
                    "quorum count must be >= 1, got " + std::to_string(q));
    return QuorumSpec(NumVoting{q});
  }
  static QuorumSpec proportion_voting(Rational r) {
    detail::require(r > Rational(0) && r <= Rational(1), ErrorCode::InvalidParameter,
                    "quorum proportion must satisfy 0 < r <= 1, got " + to_string(r));
    return QuorumSpec(ProportionVoting{r});
  }

  const Variant& value() const { return value_; }

  std::string describe() const {
    return std::visit(
        [](const auto& v) -> std::string {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, NumPresent>) return "num_present:" + std::to_string(v.q);
          else if constexpr (std::is_same_v<V, NumVoting>) return "num_voting:" + std::to_string(v.q);
          else return "proportion_voting:" + to_string(v.r);
        },
        value_);
  }

  bool operator==(const QuorumSpec&) const = default;

 private:
  explicit QuorumSpec(Variant v) : value_(std::move(v)) {}
  Variant value_;
};

// ---------------------------------------------------------------------------
// Tallies

struct YesNoTally {
  Count votes_y = 0;
  Count votes_n = 0;

  Count total() const { return votes_y + votes_n; }
  bool operator==(const YesNoTally&) const = default;
};

/// Per-choice vote counts; index i holds the votes for choice i.
using MultiTally = std::vector<Count>;

namespace detail {

inline void require_count(Count value, std::string_view name) {
  require(value >= 0, ErrorCode::InvalidParameter,
          std::string(name) + " must be >= 0, got " + std::to_string(value));
}

inline Count sum(const MultiTally& votes) {
  return std::accumulate(votes.begin(), votes.end(), Count{0});
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Operations

/// Proportion of votes in favor, V_Y / (V_Y + V_N).
inline Rational measure_proportion(const YesNoTally& tally) {
  detail::require_count(tally.votes_y, "votes_y");
  detail::require_count(tally.votes_n, "votes_n");
  if (tally.total() == 0) {
    detail::fail(ErrorCode::DivisionUndefined, "proportion undefined with zero votes cast");
  }
  return Rational(tally.votes_y, tally.total());
}

/// The simple model: quorum counted in votes, supermajority of votes cast.
inline Outcome question_simple(Count quorum, Count votes_y, Count votes_n, Rational t) {
  detail::require(quorum >= 1, ErrorCode::InvalidParameter,
                  "quorum must be >= 1, got " + std::to_string(quorum));
  detail::require_count(votes_y, "votes_y");
  detail::require_count(votes_n, "votes_n");
  detail::require(t > Rational(1, 2) && t <= Rational(1), ErrorCode::InvalidParameter,
                  "threshold must satisfy 1/2 < T <= 1, got " + to_string(t));

  if (votes_y + votes_n < quorum) return Outcome::NullResult;
  const Rational p = measure_proportion({votes_y, votes_n});
  if (p >= t) return Outcome::Accepted;
  if (p <= Rational(1) - t) return Outcome::Rejected;
  return Outcome::NegativeResult;
}

/// Whether quorum is met. Zero votes is never quorate.
inline bool quorate(const QuorumSpec& spec, Count present, Count voting) {
  detail::require_count(present, "present");
  detail::require_count(voting, "voting");
  if (voting > present) {
    detail::fail(ErrorCode::InconsistentCounts,
                 "number voting (" + std::to_string(voting) + ") exceeds number present (" +
                     std::to_string(present) + ")");
  }
  if (voting == 0) return false;

  return std::visit(
      [&](const auto& v) -> bool {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, QuorumSpec::NumPresent>) return present >= v.q;
        else if constexpr (std::is_same_v<V, QuorumSpec::NumVoting>) return voting >= v.q;
        else return voting * v.r.denominator() >= v.r.numerator() * present;
      },
      spec.value());
}

/// Threshold of consensus for one choice against effective population P.
inline bool meets_threshold(Count votes, Count population, const ThresholdSpec& spec) {
  detail::require_count(votes, "votes");
  detail::require(population >= 1, ErrorCode::InvalidParameter,
                  "population must be >= 1, got " + std::to_string(population));
  if (votes > population) {
    detail::fail(ErrorCode::InconsistentCounts,
                 "number of votes (" + std::to_string(votes) +
                     ") exceeds size of population (" + std::to_string(population) + ")");
  }

  return std::visit(
      [&](const auto& v) -> bool {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, ThresholdSpec::Majority>) {
          return 2 * votes > population;
        } else if constexpr (std::is_same_v<V, ThresholdSpec::Supermajority>) {
          return votes * v.t.denominator() >= v.t.numerator() * population;
        } else if constexpr (std::is_same_v<V, ThresholdSpec::NearUnanimity>) {
          if (2 * v.c >= population) {
            detail::fail(ErrorCode::ShortfallTooLarge,
                         "near-unanimity shortfall C=" + std::to_string(v.c) +
                             " must be < P/2 with P=" + std::to_string(population));
          }
          return votes >= population - v.c;
        } else {
          return votes == population;
        }
      },
      spec.value());
}

/// Elaborated yes-or-no question. `present` may exceed `population` when the
/// population is P4.
inline Outcome question(const QuorumSpec& quorum, Count present, const YesNoTally& tally,
                        Count population, const ThresholdSpec& threshold) {
  detail::require_count(tally.votes_y, "votes_y");
  detail::require_count(tally.votes_n, "votes_n");
  detail::require_count(population, "population");
  const Count voting = tally.total();
  if (voting > present) {
    detail::fail(ErrorCode::InconsistentCounts,
                 "number of votes (" + std::to_string(voting) + ") exceeds number present (" +
                     std::to_string(present) + ")");
  }
  if (tally.votes_y > population || tally.votes_n > population) {
    detail::fail(ErrorCode::InconsistentCounts,
                 "number of votes exceeds size of population (" + std::to_string(population) + ")");
  }

  if (!quorate(quorum, present, voting)) return Outcome::NullResult;

  const bool accept = meets_threshold(tally.votes_y, population, threshold);
  const bool reject = meets_threshold(tally.votes_n, population, threshold);
  if (accept && reject) {
    detail::fail(ErrorCode::ContradictoryTally,
                 "both acceptance and rejection thresholds met; votes cast exceed population");
  }
  if (accept) return Outcome::Accepted;
  if (reject) return Outcome::Rejected;
  return Outcome::NegativeResult;
}

/// Result of a 1-of-M contest. `outcome` is Accepted (with `choice`),
/// NegativeResult or NullResult; there is no rejection.
struct OneOfMResult {
  Outcome outcome = Outcome::NullResult;
  std::optional<std::size_t> choice;

  bool is_consensus() const { return outcome == Outcome::Accepted; }
  bool operator==(const OneOfMResult&) const = default;
};

/// Result of an N-of-M contest: every choice that individually passed.
struct NOfMResult {
  Outcome outcome = Outcome::NullResult;
  std::vector<std::size_t> choices;

  bool is_consensus() const { return outcome == Outcome::Accepted; }
  bool operator==(const NOfMResult&) const = default;
};

namespace detail {

inline std::vector<std::size_t> passing_choices(const MultiTally& votes, Count population,
                                                const ThresholdSpec& threshold) {
  std::vector<std::size_t> passing;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    if (meets_threshold(votes[i], population, threshold)) passing.push_back(i);
  }
  return passing;
}

inline void validate_multi(const MultiTally& votes, Count present, Count voting,
                           Count population) {
  require(votes.size() >= 2, ErrorCode::InvalidParameter,
          "a contest needs at least 2 choices, got " + std::to_string(votes.size()));
  require_count(present, "present");
  require_count(voting, "voting");
  require_count(population, "population");
  for (std::size_t i = 0; i < votes.size(); ++i) {
    require_count(votes[i], "votes[" + std::to_string(i) + "]");
    if (votes[i] > population) {
      fail(ErrorCode::InconsistentCounts,
           "votes for choice " + std::to_string(i) + " (" + std::to_string(votes[i]) +
               ") exceed size of population (" + std::to_string(population) + ")");
    }
  }
  if (voting > present) {
    fail(ErrorCode::InconsistentCounts, "number voting (" + std::to_string(voting) +
                                            ") exceeds number present (" +
                                            std::to_string(present) + ")");
  }
  if (voting > population) {
    fail(ErrorCode::InconsistentCounts, "number voting (" + std::to_string(voting) +
                                            ") exceeds size of population (" +
                                            std::to_string(population) + ")");
  }
}

}  // namespace detail

/// N-of-M contest ("vote for at most n"). Only individual choices are
/// evaluated; see tally_slates for slate-level tabulation.
inline NOfMResult n_of_m(const QuorumSpec& quorum, Count present, Count voting,
                         const MultiTally& votes, Count population,
                         const ThresholdSpec& threshold, Count n) {
  detail::validate_multi(votes, present, voting, population);
  const auto m = static_cast<Count>(votes.size());
  detail::require(n >= 1 && n <= m, ErrorCode::InvalidParameter,
                  "n must satisfy 1 <= n <= M=" + std::to_string(m) + ", got " + std::to_string(n));
  const Count total = detail::sum(votes);
  if (voting > total) {
    detail::fail(ErrorCode::InconsistentCounts, "number voting (" + std::to_string(voting) +
                                                    ") exceeds number of votes (" +
                                                    std::to_string(total) + ")");
  }
  if (total > n * voting) {
    detail::fail(ErrorCode::InconsistentCounts,
                 "number of votes (" + std::to_string(total) + ") exceeds n x voting (" +
                     std::to_string(n * voting) + ")");
  }

  if (!quorate(quorum, present, voting)) return {Outcome::NullResult, {}};
  auto passing = detail::passing_choices(votes, population, threshold);
  if (passing.empty()) return {Outcome::NegativeResult, {}};
  return {Outcome::Accepted, std::move(passing)};
}

/// 1-of-M contest; the number voting is the sum of the votes.
inline OneOfMResult one_of_m(const QuorumSpec& quorum, Count present, const MultiTally& votes,
                             Count population, const ThresholdSpec& threshold) {
  for (std::size_t i = 0; i < votes.size(); ++i) {
    detail::require_count(votes[i], "votes[" + std::to_string(i) + "]");
  }
  const Count voting = detail::sum(votes);
  detail::validate_multi(votes, present, voting, population);

  if (!quorate(quorum, present, voting)) return {Outcome::NullResult, std::nullopt};
  const auto passing = detail::passing_choices(votes, population, threshold);
  if (passing.size() > 1) {
    detail::fail(ErrorCode::ContradictoryTally,
                 std::to_string(passing.size()) + " exclusive choices met the threshold");
  }
  if (passing.empty()) return {Outcome::NegativeResult, std::nullopt};
  return {Outcome::Accepted, passing.front()};
}

}  // namespace consensus
