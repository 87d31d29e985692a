#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "consensus/core_rules.hpp"

namespace consensus::cli {

using Json = nlohmann::ordered_json;

struct Measure {
  std::string label;
  Rational value;
  bool operator==(const Measure&) const = default;
};

struct QuorumEvaluation {
  std::string spec;
  Count present = 0;
  Count voting = 0;
  bool met = false;
  bool operator==(const QuorumEvaluation&) const = default;
};

struct ThresholdEvaluation {
  std::string spec;
  std::string population_basis;
  Count population = 0;
  bool operator==(const ThresholdEvaluation&) const = default;
};

/// Everything a subcommand reports. Serialized with a fixed key order;
/// rationals are written as "num/den" strings.
struct ResultDocument {
  std::string command;
  Outcome outcome = Outcome::NullResult;
  Json counts = Json::object();
  std::optional<QuorumEvaluation> quorum;
  std::optional<ThresholdEvaluation> threshold;
  std::vector<Measure> measures;
  Json uncertainty;  ///< null when not requested
  Json details = Json::object();
  std::vector<std::string> warnings;

  bool operator==(const ResultDocument&) const = default;
};

/// Exit status is a function of the outcome alone.
constexpr int exit_status(Outcome o) {
  switch (o) {
    case Outcome::Accepted: return 0;
    case Outcome::Rejected: return 1;
    case Outcome::NegativeResult: return 2;
    case Outcome::NullResult: return 3;
  }
  return 3;
}

inline constexpr int kUsageError = 64;
inline constexpr int kMalformedInput = 65;

inline Outcome outcome_from_string(std::string_view s) {
  for (auto o : {Outcome::Accepted, Outcome::Rejected, Outcome::NegativeResult, Outcome::NullResult}) {
    if (to_string(o) == s) return o;
  }
  consensus::detail::fail(ErrorCode::InvalidParameter, "unknown outcome '" + std::string(s) + "'");
}

inline Json rational_json(const Rational& r) {
  return Json{{"exact", to_string(r)}, {"decimal", to_decimal(r)}};
}

inline Json to_json(const ResultDocument& doc) {
  Json j;
  j["command"] = doc.command;
  j["outcome"] = std::string(to_string(doc.outcome));
  j["exit_status"] = exit_status(doc.outcome);
  j["counts"] = doc.counts;
  if (doc.quorum) {
    j["quorum"] = Json{{"spec", doc.quorum->spec},
                       {"present", doc.quorum->present},
                       {"voting", doc.quorum->voting},
                       {"met", doc.quorum->met}};
  } else {
    j["quorum"] = nullptr;
  }
  if (doc.threshold) {
    j["threshold"] = Json{{"spec", doc.threshold->spec},
                          {"population_basis", doc.threshold->population_basis},
                          {"population", doc.threshold->population}};
  } else {
    j["threshold"] = nullptr;
  }
  Json measures = Json::array();
  for (const auto& m : doc.measures) {
    Json entry = Json{{"label", m.label}};
    entry.update(rational_json(m.value));
    measures.push_back(std::move(entry));
  }
  j["measures"] = std::move(measures);
  j["uncertainty"] = doc.uncertainty;
  j["details"] = doc.details;
  j["warnings"] = doc.warnings;
  return j;
}

inline ResultDocument from_json(const Json& j) {
  ResultDocument doc;
  doc.command = j.at("command").get<std::string>();
  doc.outcome = outcome_from_string(j.at("outcome").get<std::string>());
  doc.counts = j.at("counts");
  if (const auto& q = j.at("quorum"); !q.is_null()) {
    doc.quorum = QuorumEvaluation{q.at("spec").get<std::string>(), q.at("present").get<Count>(),
                                  q.at("voting").get<Count>(), q.at("met").get<bool>()};
  }
  if (const auto& t = j.at("threshold"); !t.is_null()) {
    doc.threshold = ThresholdEvaluation{t.at("spec").get<std::string>(),
                                        t.at("population_basis").get<std::string>(),
                                        t.at("population").get<Count>()};
  }
  for (const auto& m : j.at("measures")) {
    doc.measures.push_back({m.at("label").get<std::string>(),
                            parse_rational(m.at("exact").get<std::string>())});
  }
  doc.uncertainty = j.at("uncertainty");
  doc.details = j.at("details");
  doc.warnings = j.at("warnings").get<std::vector<std::string>>();
  return doc;
}

inline std::string render(const ResultDocument& doc) { return to_json(doc).dump(2) + "\n"; }

}  // namespace consensus::cli
