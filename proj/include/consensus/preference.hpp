#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "consensus/rational.hpp"
#include "consensus/tabulation.hpp"

namespace consensus {

/// prefer(i, j) = number of ballots ranking i above j.
class PairwiseMatrix {
 public:
  explicit PairwiseMatrix(std::size_t m) : m_(m), cells_(m * m, 0) {}

  std::size_t size() const { return m_; }
  Count prefer(std::size_t i, std::size_t j) const { return cells_[i * m_ + j]; }
  Count& prefer(std::size_t i, std::size_t j) { return cells_[i * m_ + j]; }

  PairwiseMatrix& operator+=(const PairwiseMatrix& other) {
    for (std::size_t k = 0; k < cells_.size(); ++k) cells_[k] += other.cells_[k];
    return *this;
  }

  bool operator==(const PairwiseMatrix&) const = default;

 private:
  std::size_t m_;
  std::vector<Count> cells_;
};

/// A ranked choice is above every unranked one; two unranked choices
/// contribute to neither cell.
inline PairwiseMatrix pairwise_matrix(std::span<const RankedBallot> ballots, std::size_t m) {
  detail::require_contest(m);
  detail::validate_ranked(ballots, m);
  constexpr auto unranked = std::numeric_limits<std::size_t>::max();

  PairwiseMatrix matrix(m);
  std::vector<std::size_t> position(m);
  for (const auto& b : ballots) {
    std::fill(position.begin(), position.end(), unranked);
    for (std::size_t k = 0; k < b.ranking.size(); ++k) position[b.ranking[k]] = k;
    for (std::size_t i = 0; i < m; ++i) {
      if (position[i] == unranked) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (i != j && position[i] < position[j]) ++matrix.prefer(i, j);
      }
    }
  }
  return matrix;
}

/// The choice that beats every other choice head to head, if one exists.
inline std::optional<std::size_t> condorcet_winner(const PairwiseMatrix& matrix) {
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    bool beats_all = true;
    for (std::size_t j = 0; j < matrix.size() && beats_all; ++j) {
      if (i != j && matrix.prefer(i, j) <= matrix.prefer(j, i)) beats_all = false;
    }
    if (beats_all) return i;
  }
  return std::nullopt;
}

}  // namespace consensus
