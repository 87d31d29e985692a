#pragma once

// Advisory uncertainty reporting. Nothing here feeds back into core_rules
// outcomes.

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>

#include "consensus/core_rules.hpp"

namespace consensus {

struct ProportionInterval {
  Rational point;
  double low = 0.0;
  double high = 1.0;
  double confidence = 0.95;
};

enum class Margin { Above, Below, Marginal };

constexpr std::string_view to_string(Margin m) {
  switch (m) {
    case Margin::Above: return "clear_above";
    case Margin::Below: return "clear_below";
    case Margin::Marginal: return "marginal";
  }
  return "unknown";
}

struct TurnoutReport {
  Rational ratio;
  Rational floor;
  bool low_turnout = false;
};

/// Wilson score interval for p = V_Y / (V_Y + V_N):
///
///   center = (p + z^2 / 2n) / (1 + z^2 / n)
///   half   = z / (1 + z^2 / n) * sqrt(p (1 - p) / n + z^2 / 4n^2)
///
/// with z the two-sided standard normal quantile for `confidence`.
inline ProportionInterval proportion_interval(Count votes_y, Count votes_n, double confidence) {
  const Rational point = measure_proportion({votes_y, votes_n});
  detail::require(confidence > 0.0 && confidence < 1.0, ErrorCode::InvalidParameter,
                  "confidence must be in (0, 1)");

  const double n = static_cast<double>(votes_y + votes_n);
  const double p = to_double(point);
  const boost::math::normal standard;
  const double z = boost::math::quantile(standard, 0.5 + confidence / 2.0);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));

  ProportionInterval out;
  out.point = point;
  out.confidence = confidence;
  // The exact interval always contains p; clamp away rounding that would not.
  out.low = votes_y == 0 ? 0.0 : std::clamp(center - half, 0.0, p);
  out.high = votes_n == 0 ? 1.0 : std::clamp(center + half, p, 1.0);
  return out;
}

/// Clear only when the whole interval lies strictly on one side of t.
inline Margin classify_margin(const ProportionInterval& interval, const Rational& t) {
  detail::require(t > Rational(0) && t <= Rational(1), ErrorCode::InvalidParameter,
                  "threshold must satisfy 0 < t <= 1, got " + to_string(t));
  const double threshold = to_double(t);
  if (interval.low > threshold) return Margin::Above;
  if (interval.high < threshold) return Margin::Below;
  return Margin::Marginal;
}

/// Flags turnout below `floor` (default 1/2) as insufficient evidence of the
/// population's view.
inline TurnoutReport turnout_report(Count voting, Count population,
                                    Rational floor = Rational(1, 2)) {
  detail::require_count(voting, "voting");
  detail::require(population >= 1, ErrorCode::InvalidParameter,
                  "population must be >= 1, got " + std::to_string(population));
  if (voting > population) {
    detail::fail(ErrorCode::InconsistentCounts,
                 "number voting (" + std::to_string(voting) + ") exceeds size of population (" +
                     std::to_string(population) + ")");
  }
  const Rational ratio(voting, population);
  return {ratio, floor, ratio < floor};
}

}  // namespace consensus
