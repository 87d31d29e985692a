#pragma once

// Ballots to tallies: yes/no, choice, slate, first-round and instant-runoff.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "consensus/core_rules.hpp"
#include "consensus/error.hpp"

namespace consensus {

enum class Mark { Yes, No, Abstain };

struct YesNoBallot {
  Mark mark = Mark::Abstain;
  bool operator==(const YesNoBallot&) const = default;
};

/// Selections in a choice contest. Empty means abstention.
struct ChoiceBallot {
  std::vector<std::size_t> selections;
  bool operator==(const ChoiceBallot&) const = default;
};

/// Choices in order of preference; may be truncated or empty.
struct RankedBallot {
  std::vector<std::size_t> ranking;
  bool operator==(const RankedBallot&) const = default;
};

/// Counts for one contest plus the attendance breakdown.
/// present == voting + abstaining + spoiled.
template <typename Counts>
struct TallyReport {
  Counts counts{};
  Count present = 0;
  Count voting = 0;
  Count abstaining = 0;
  Count spoiled = 0;

  bool operator==(const TallyReport&) const = default;
};

using YesNoReport = TallyReport<YesNoTally>;
using ChoiceReport = TallyReport<MultiTally>;

/// Selection set (sorted indices) to number of ballots with exactly that set.
using SlateTally = std::map<std::vector<std::size_t>, Count>;

struct IrvRound {
  std::size_t round_index = 1;
  std::map<std::size_t, Count> counts;  ///< continuing choices only
  Count exhausted = 0;
  std::vector<std::size_t> eliminated;  ///< eliminated at the end of this round

  bool operator==(const IrvRound&) const = default;
};

enum class IrvStatus { Winner, UnresolvedTie };

struct IrvResult {
  std::vector<IrvRound> rounds;
  IrvStatus status = IrvStatus::UnresolvedTie;
  std::optional<std::size_t> winner;
  std::vector<std::size_t> tied;  ///< set when status is UnresolvedTie

  bool operator==(const IrvResult&) const = default;
};

/// Ranked contest result. Accepted means a first-round consensus; on
/// NegativeResult, `compromise` carries the runoff outcome, which is an
/// explainable compromise and never reported as consensus.
struct RankedResult {
  Outcome outcome = Outcome::NullResult;
  std::optional<std::size_t> choice;
  ChoiceReport first_round;
  std::optional<IrvResult> compromise;

  bool is_consensus() const { return outcome == Outcome::Accepted; }
};

/// Candidates ordered by votes (ties broken by index) and the top-n cut.
struct PluralityRanking {
  std::vector<std::size_t> order;
  std::vector<std::size_t> elected;  ///< sorted indices strictly above the cut
  std::optional<Count> lowest_elected;
  std::optional<Count> highest_unelected;
  bool tie_at_cut = false;  ///< candidates share the count at the cut line
};

namespace detail {

inline void require_contest(std::size_t m) {
  require(m >= 2, ErrorCode::InvalidParameter,
          "a contest needs at least 2 choices, got " + std::to_string(m));
}

inline void validate_indices(std::span<const std::size_t> indices, std::size_t m,
                             std::size_t ordinal) {
  std::vector<bool> seen(m, false);
  for (std::size_t idx : indices) {
    if (idx >= m) {
      fail(ErrorCode::MalformedBallot,
           "ballot " + std::to_string(ordinal) + ": choice index " + std::to_string(idx) +
               " out of range for " + std::to_string(m) + " choices",
           ordinal);
    }
    if (seen[idx]) {
      fail(ErrorCode::MalformedBallot,
           "ballot " + std::to_string(ordinal) + ": choice index " + std::to_string(idx) +
               " appears more than once",
           ordinal);
    }
    seen[idx] = true;
  }
}

inline void validate_ranked(std::span<const RankedBallot> ballots, std::size_t m) {
  for (std::size_t k = 0; k < ballots.size(); ++k) validate_indices(ballots[k].ranking, m, k + 1);
}

inline void validate_choice_contest(std::size_t m, Count n) {
  require_contest(m);
  require(n >= 1 && n <= static_cast<Count>(m), ErrorCode::InvalidParameter,
          "n must satisfy 1 <= n <= M=" + std::to_string(m) + ", got " + std::to_string(n));
}

}  // namespace detail

inline YesNoReport tally_yes_no(std::span<const YesNoBallot> ballots) {
  YesNoReport report;
  for (const auto& b : ballots) {
    switch (b.mark) {
      case Mark::Yes: ++report.counts.votes_y; break;
      case Mark::No: ++report.counts.votes_n; break;
      case Mark::Abstain: ++report.abstaining; break;
    }
  }
  report.present = static_cast<Count>(ballots.size());
  report.voting = report.counts.total();
  return report;
}

/// Overvoted ballots (more than n selections) are spoiled and contribute
/// nothing; empty ballots are abstentions.
inline ChoiceReport tally_choices(std::span<const ChoiceBallot> ballots, std::size_t m, Count n) {
  detail::validate_choice_contest(m, n);
  ChoiceReport report;
  report.counts.assign(m, 0);
  for (std::size_t k = 0; k < ballots.size(); ++k) {
    const auto& sel = ballots[k].selections;
    detail::validate_indices(sel, m, k + 1);
    if (sel.empty()) {
      ++report.abstaining;
    } else if (static_cast<Count>(sel.size()) > n) {
      ++report.spoiled;
    } else {
      for (std::size_t idx : sel) ++report.counts[idx];
      ++report.voting;
    }
  }
  report.present = static_cast<Count>(ballots.size());
  return report;
}

/// Tabulation by exact selection set. Only observed slates appear.
inline SlateTally tally_slates(std::span<const ChoiceBallot> ballots, std::size_t m, Count n) {
  detail::validate_choice_contest(m, n);
  SlateTally slates;
  for (std::size_t k = 0; k < ballots.size(); ++k) {
    const auto& sel = ballots[k].selections;
    detail::validate_indices(sel, m, k + 1);
    if (sel.empty() || static_cast<Count>(sel.size()) > n) continue;
    auto key = sel;
    std::sort(key.begin(), key.end());
    ++slates[key];
  }
  return slates;
}

/// Slates whose ballot count alone meets the threshold against `population`.
inline std::vector<std::vector<std::size_t>> consensus_slates(const SlateTally& slates,
                                                              Count population,
                                                              const ThresholdSpec& threshold) {
  std::vector<std::vector<std::size_t>> passing;
  for (const auto& [slate, count] : slates) {
    if (meets_threshold(count, population, threshold)) passing.push_back(slate);
  }
  return passing;
}

/// Orders candidates by count and draws the line below the top n.
inline PluralityRanking plurality_top_n(const MultiTally& counts, std::size_t n) {
  detail::require_contest(counts.size());
  detail::require(n >= 1 && n <= counts.size(), ErrorCode::InvalidParameter,
                  "n must satisfy 1 <= n <= M=" + std::to_string(counts.size()));
  PluralityRanking r;
  r.order.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) r.order[i] = i;
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });

  r.lowest_elected = counts[r.order[n - 1]];
  if (n < counts.size()) r.highest_unelected = counts[r.order[n]];
  r.tie_at_cut = r.highest_unelected && *r.highest_unelected == *r.lowest_elected;

  for (std::size_t k = 0; k < n; ++k) {
    if (!r.tie_at_cut || counts[r.order[k]] > *r.lowest_elected) r.elected.push_back(r.order[k]);
  }
  std::sort(r.elected.begin(), r.elected.end());
  return r;
}

/// First-preference counts; empty ballots are reported as abstentions.
inline ChoiceReport first_round_report(std::span<const RankedBallot> ballots, std::size_t m) {
  detail::require_contest(m);
  detail::validate_ranked(ballots, m);
  ChoiceReport report;
  report.counts.assign(m, 0);
  for (const auto& b : ballots) {
    if (b.ranking.empty()) {
      ++report.abstaining;
    } else {
      ++report.counts[b.ranking.front()];
      ++report.voting;
    }
  }
  report.present = static_cast<Count>(ballots.size());
  return report;
}

inline MultiTally first_round_counts(std::span<const RankedBallot> ballots, std::size_t m) {
  return first_round_report(ballots, m).counts;
}

/// Instant-runoff tabulation. Each round eliminates every choice tied for
/// fewest votes; when that would eliminate all continuing choices the
/// tabulation stops with an unresolved tie instead of drawing lots.
inline IrvResult irv_tabulate(std::span<const RankedBallot> ballots, std::size_t m) {
  detail::require_contest(m);
  detail::validate_ranked(ballots, m);
  const auto active_ballots = static_cast<Count>(std::count_if(
      ballots.begin(), ballots.end(), [](const auto& b) { return !b.ranking.empty(); }));
  detail::require(active_ballots >= 1, ErrorCode::InvalidParameter,
                  "instant-runoff tabulation needs at least one non-empty ballot");

  std::vector<bool> continuing(m, true);
  IrvResult result;
  for (std::size_t round = 1;; ++round) {
    IrvRound r;
    r.round_index = round;
    for (std::size_t i = 0; i < m; ++i) {
      if (continuing[i]) r.counts[i] = 0;
    }
    for (const auto& b : ballots) {
      if (b.ranking.empty()) continue;
      auto it = std::find_if(b.ranking.begin(), b.ranking.end(),
                             [&](std::size_t c) { return continuing[c]; });
      if (it == b.ranking.end()) ++r.exhausted;
      else ++r.counts[*it];
    }

    const Count live = active_ballots - r.exhausted;
    for (const auto& [choice, count] : r.counts) {
      if (2 * count > live) {
        result.rounds.push_back(std::move(r));
        result.status = IrvStatus::Winner;
        result.winner = choice;
        return result;
      }
    }

    Count fewest = r.counts.begin()->second;
    for (const auto& [choice, count] : r.counts) fewest = std::min(fewest, count);
    for (const auto& [choice, count] : r.counts) {
      if (count == fewest) r.eliminated.push_back(choice);
    }
    if (r.eliminated.size() == r.counts.size()) {
      result.tied = std::move(r.eliminated);
      r.eliminated.clear();
      result.rounds.push_back(std::move(r));
      result.status = IrvStatus::UnresolvedTie;
      return result;
    }
    for (std::size_t c : r.eliminated) continuing[c] = false;
    result.rounds.push_back(std::move(r));
  }
}

/// Applies the 1-of-M rules to first-preference counts. Without a
/// first-round consensus there is no consensus, and the runoff result is
/// attached as a compromise.
inline RankedResult ranked_consensus(std::span<const RankedBallot> ballots, std::size_t m,
                                     const QuorumSpec& quorum, Count present, Count population,
                                     const ThresholdSpec& threshold) {
  RankedResult result;
  result.first_round = first_round_report(ballots, m);
  const auto first = one_of_m(quorum, present, result.first_round.counts, population, threshold);
  result.outcome = first.outcome;
  result.choice = first.choice;
  if (first.outcome == Outcome::NegativeResult) result.compromise = irv_tabulate(ballots, m);
  return result;
}

}  // namespace consensus
