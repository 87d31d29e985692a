#pragma once

// Policy configuration: quorum, effective population and threshold, read
// from a flat JSON object or from command-line flags using the same string
// grammar.
//
//   quorum       present:N | voting:N | present:R@BASE | voting:R@BASE
//   threshold    majority | unanimity | supermajority:T | near_unanimity:C
//   population   nominal | current | present | voting | <integer>
//
// BASE is one of nominal, current, present, voting. Quorum proportions of
// nominal or current size are resolved here to member counts (rounded up).

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "consensus/core_rules.hpp"

namespace consensus::cli {

enum class QuorumType {
  Present,  ///< minimum members present
  Voting,   ///< minimum members not abstaining
};

struct QuorumSetting {
  QuorumType type = QuorumType::Voting;
  std::optional<Count> count;
  std::optional<Rational> proportion;
  std::optional<PopulationLevel> base;  ///< set iff proportion is set
  std::string text;
};

/// Either a named population level or an explicit size.
using PopulationSetting = std::variant<PopulationLevel, Count>;

struct PolicyConfig {
  std::optional<QuorumSetting> quorum_setting;
  std::optional<ThresholdSpec> threshold;
  std::optional<PopulationSetting> population;
  std::optional<Count> nominal_size;
  std::optional<Count> current_size;
  std::optional<Count> present;
  std::optional<double> confidence;
  Rational boycott_floor{1, 2};
  bool defined_membership = true;
  bool abstentions_counted = true;

  /// Filled in by validate_policy.
  std::optional<QuorumSpec> quorum;
};

namespace detail {

using consensus::detail::fail;

inline std::optional<PopulationLevel> parse_level(std::string_view text) {
  if (text == "nominal" || text == "P1") return PopulationLevel::Nominal;
  if (text == "current" || text == "P2") return PopulationLevel::Current;
  if (text == "present" || text == "P3") return PopulationLevel::Present;
  if (text == "voting" || text == "P4") return PopulationLevel::Voting;
  return std::nullopt;
}

inline Count parse_count(std::string_view text, std::string_view what) {
  std::int64_t value = 0;
  if (!consensus::detail::parse_int(text, value) || value < 0) {
    fail(ErrorCode::InvalidParameter,
         std::string(what) + ": expected a nonnegative integer, got '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace detail

inline QuorumSetting parse_quorum_setting(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    detail::fail(ErrorCode::InvalidParameter,
                 "quorum: expected TYPE:VALUE[@BASE], got '" + std::string(text) + "'");
  }
  QuorumSetting q;
  q.text = std::string(text);
  const auto type = text.substr(0, colon);
  if (type == "present") q.type = QuorumType::Present;
  else if (type == "voting") q.type = QuorumType::Voting;
  else detail::fail(ErrorCode::InvalidParameter, "quorum: unknown type '" + std::string(type) + "'");

  auto value = text.substr(colon + 1);
  const auto at = value.find('@');
  if (at == std::string_view::npos) {
    q.count = detail::parse_count(value, "quorum");
    return q;
  }
  const auto base = value.substr(at + 1);
  q.base = detail::parse_level(base);
  if (!q.base) detail::fail(ErrorCode::InvalidParameter, "quorum: unknown base '" + std::string(base) + "'");
  q.proportion = parse_rational(value.substr(0, at));
  return q;
}

inline ThresholdSpec parse_threshold(std::string_view text) {
  const auto colon = text.find(':');
  const auto family = text.substr(0, colon);
  const auto value = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (family == "majority" && value.empty()) return ThresholdSpec::majority();
  if (family == "unanimity" && value.empty()) return ThresholdSpec::unanimity();
  if (family == "supermajority" && !value.empty()) return ThresholdSpec::supermajority(parse_rational(value));
  if (family == "near_unanimity" && !value.empty()) {
    return ThresholdSpec::near_unanimity(detail::parse_count(value, "near_unanimity"));
  }
  detail::fail(ErrorCode::InvalidParameter, "threshold: cannot parse '" + std::string(text) + "'");
}

inline PopulationSetting parse_population(std::string_view text) {
  if (auto level = detail::parse_level(text)) return *level;
  return detail::parse_count(text, "population");
}

/// Checks the quorum/population pairing rules and resolves the quorum to a
/// QuorumSpec. Throws InvalidParameter naming the violated rule.
inline void validate_policy(PolicyConfig& policy) {
  using detail::fail;
  const auto needs_membership = [&](PopulationLevel level, std::string_view role) {
    if (!policy.defined_membership &&
        (level == PopulationLevel::Nominal || level == PopulationLevel::Current)) {
      fail(ErrorCode::InvalidParameter,
           std::string(role) + " uses the " + std::string(to_string(level)) +
               " size, which does not apply to a body without defined membership");
    }
    if (!policy.abstentions_counted && level == PopulationLevel::Present) {
      fail(ErrorCode::InvalidParameter,
           std::string(role) + " uses members present, which does not apply when abstentions are not counted");
    }
  };

  if (policy.population) {
    if (const auto* level = std::get_if<PopulationLevel>(&*policy.population)) {
      needs_membership(*level, "population");
    }
  }

  if (!policy.quorum_setting) return;
  const auto& q = *policy.quorum_setting;
  if (q.type == QuorumType::Present && !policy.abstentions_counted) {
    fail(ErrorCode::InvalidParameter,
         "quorum of members present does not apply when abstentions are not counted");
  }

  if (q.count) {
    policy.quorum = q.type == QuorumType::Present ? QuorumSpec::num_present(*q.count)
                                                  : QuorumSpec::num_voting(*q.count);
    return;
  }

  const PopulationLevel base = *q.base;
  if (q.type == QuorumType::Present && base == PopulationLevel::Present) {
    fail(ErrorCode::InvalidParameter,
         "invalid quorum '" + q.text + "': proportion of members present that must be present");
  }
  if (q.type == QuorumType::Present && base == PopulationLevel::Voting) {
    fail(ErrorCode::InvalidParameter,
         "invalid quorum '" + q.text +
             "': proportion of members that did not abstain that must be present");
  }
  if (q.type == QuorumType::Voting && base == PopulationLevel::Voting) {
    fail(ErrorCode::InvalidParameter,
         "invalid quorum '" + q.text +
             "': proportion of members that did not abstain that must not abstain");
  }
  needs_membership(base, "quorum");

  const Rational r = *q.proportion;
  if (!(r > Rational(0) && r <= Rational(1))) {
    fail(ErrorCode::InvalidParameter, "quorum proportion must satisfy 0 < r <= 1, got " + to_string(r));
  }
  if (base == PopulationLevel::Present) {
    policy.quorum = QuorumSpec::proportion_voting(r);
    return;
  }

  const auto& size = base == PopulationLevel::Nominal ? policy.nominal_size : policy.current_size;
  if (!size) {
    fail(ErrorCode::InvalidParameter, "quorum '" + q.text + "' needs " +
                                          std::string(to_string(base)) + "_size to be set");
  }
  const Count members = consensus::ceil(r * Rational(*size));
  policy.quorum = q.type == QuorumType::Present ? QuorumSpec::num_present(members)
                                                : QuorumSpec::num_voting(members);
}

/// Reads policy keys from a JSON object without validating cross-field rules.
/// Unknown keys and wrongly typed values are rejected.
inline void merge_policy_json(PolicyConfig& policy, const nlohmann::json& doc) {
  using detail::fail;
  if (!doc.is_object()) fail(ErrorCode::InvalidParameter, "policy config must be a JSON object");

  const auto as_string = [](const nlohmann::json& v, const std::string& key) -> std::string {
    if (!v.is_string()) fail(ErrorCode::InvalidParameter, "policy key '" + key + "' must be a string");
    return v.get<std::string>();
  };
  const auto as_count = [](const nlohmann::json& v, const std::string& key) -> Count {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      fail(ErrorCode::InvalidParameter, "policy key '" + key + "' must be a nonnegative integer");
    }
    return v.get<std::int64_t>();
  };
  const auto as_bool = [](const nlohmann::json& v, const std::string& key) -> bool {
    if (!v.is_boolean()) fail(ErrorCode::InvalidParameter, "policy key '" + key + "' must be a boolean");
    return v.get<bool>();
  };

  for (const auto& [key, value] : doc.items()) {
    if (key == "quorum") {
      policy.quorum_setting = parse_quorum_setting(as_string(value, key));
    } else if (key == "threshold") {
      policy.threshold = parse_threshold(as_string(value, key));
    } else if (key == "population") {
      policy.population = value.is_number_integer() ? PopulationSetting{as_count(value, key)}
                                                    : parse_population(as_string(value, key));
    } else if (key == "nominal_size") {
      policy.nominal_size = as_count(value, key);
    } else if (key == "current_size") {
      policy.current_size = as_count(value, key);
    } else if (key == "present") {
      policy.present = as_count(value, key);
    } else if (key == "confidence") {
      if (!value.is_number()) fail(ErrorCode::InvalidParameter, "policy key 'confidence' must be a number");
      policy.confidence = value.get<double>();
    } else if (key == "boycott_floor") {
      policy.boycott_floor = parse_rational(as_string(value, key));
    } else if (key == "defined_membership") {
      policy.defined_membership = as_bool(value, key);
    } else if (key == "abstentions_counted") {
      policy.abstentions_counted = as_bool(value, key);
    } else {
      fail(ErrorCode::InvalidParameter, "unknown policy key '" + key + "'");
    }
  }
}

inline PolicyConfig parse_policy(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    detail::fail(ErrorCode::InvalidParameter, std::string("policy config is not valid JSON: ") + e.what());
  }
  PolicyConfig policy;
  merge_policy_json(policy, doc);
  validate_policy(policy);
  return policy;
}

/// Effective population for threshold evaluation.
inline Count resolve_population(const PolicyConfig& policy, Count present, Count voting) {
  if (!policy.population) {
    detail::fail(ErrorCode::InvalidParameter, "population is not set");
  }
  if (const auto* size = std::get_if<Count>(&*policy.population)) return *size;
  switch (std::get<PopulationLevel>(*policy.population)) {
    case PopulationLevel::Nominal:
      if (!policy.nominal_size) detail::fail(ErrorCode::InvalidParameter, "population 'nominal' needs nominal_size");
      return *policy.nominal_size;
    case PopulationLevel::Current:
      if (!policy.current_size) detail::fail(ErrorCode::InvalidParameter, "population 'current' needs current_size");
      return *policy.current_size;
    case PopulationLevel::Present: return present;
    case PopulationLevel::Voting: return voting;
  }
  return voting;
}

inline std::string describe_population(const PolicyConfig& policy) {
  if (!policy.population) return "unset";
  if (const auto* size = std::get_if<Count>(&*policy.population)) return "explicit:" + std::to_string(*size);
  return std::string(to_string(std::get<PopulationLevel>(*policy.population)));
}

}  // namespace consensus::cli
