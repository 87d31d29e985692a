#pragma once

#include "consensus/sequential.hpp"

namespace demo {

using consensus::ApprovalProfile;

/// Nine voters over options X=0, Y=1, Z=2 with approvals X=7, Y=6, Z=2.
inline ApprovalProfile seven_six_two() {
  ApprovalProfile p{3, {}};
  for (int k = 0; k < 2; ++k) p.voters.push_back({{0, 1, 2}, 2});  // X Y
  for (int k = 0; k < 4; ++k) p.voters.push_back({{1, 0, 2}, 2});  // Y X
  p.voters.push_back({{0, 2, 1}, 1});                              // X
  p.voters.push_back({{2, 0, 1}, 1});                              // Z
  p.voters.push_back({{2, 1, 0}, 1});                              // Z
  return p;
}

/// Nine voters; X, Y, Z each pass 2/3 of P=9 (approvals 9, 7, 9) and X is
/// the strong Condorcet winner (beats Y 7-2 and Z 7-2).
inline ApprovalProfile favorite_among_three() {
  ApprovalProfile p{3, {}};
  for (int k = 0; k < 3; ++k) p.voters.push_back({{0, 1, 2}, 3});
  for (int k = 0; k < 2; ++k) p.voters.push_back({{0, 2, 1}, 3});
  for (int k = 0; k < 2; ++k) p.voters.push_back({{1, 0, 2}, 3});
  for (int k = 0; k < 2; ++k) p.voters.push_back({{2, 0, 1}, 2});
  return p;
}

}  // namespace demo
