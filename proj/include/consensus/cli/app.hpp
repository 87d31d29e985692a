#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// that tests can drive it in-process.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "consensus/cli/ballot_io.hpp"
#include "consensus/cli/policy.hpp"
#include "consensus/cli/result_document.hpp"
#include "consensus/preference.hpp"
#include "consensus/sequential.hpp"
#include "consensus/tabulation.hpp"
#include "consensus/uncertainty.hpp"

namespace consensus::cli {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::string tally;
  std::string ballots_path;
  std::string quorum;
  std::string threshold;
  std::string population;
  Count present = 0;
  Count nominal_size = 0;
  Count current_size = 0;
  Count voting = 0;
  double confidence = 0.95;
  std::string boycott_floor;
  bool lenient = false;
  std::string choices;
  std::size_t m = 0;
  Count n = 1;
  std::string order;
  std::string mode = "exhaustive";
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 0;

  // Set after parsing from CLI::Option::count().
  bool has_present = false, has_nominal = false, has_current = false, has_voting = false;
  bool has_confidence = false, has_m = false, has_n = false, has_seed = false;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

inline MultiTally parse_tally(const std::string& text) {
  MultiTally counts;
  for (auto token : split(text, ',')) counts.push_back(parse_count(token, "tally"));
  return counts;
}

inline std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> names;
  if (text.empty()) return names;
  for (auto token : split(text, ',')) names.emplace_back(token);
  return names;
}

/// Threshold expressed as a fraction of the population, for margin reporting.
inline std::optional<Rational> threshold_fraction(const ThresholdSpec& spec, Count population) {
  return std::visit(
      [&](const auto& v) -> std::optional<Rational> {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, ThresholdSpec::Majority>) return Rational(1, 2);
        else if constexpr (std::is_same_v<V, ThresholdSpec::Supermajority>) return v.t;
        else if constexpr (std::is_same_v<V, ThresholdSpec::Unanimity>) return Rational(1);
        else {
          if (population < 1 || 2 * v.c >= population) return std::nullopt;
          return Rational(population - v.c, population);
        }
      },
      spec.value());
}

struct Context {
  const Options& opts;
  PolicyConfig policy;
  std::vector<std::string> warnings;

  const QuorumSpec& quorum() const {
    if (!policy.quorum) throw UsageError("a quorum is required (--quorum or config 'quorum')");
    return *policy.quorum;
  }
  const ThresholdSpec& threshold() const {
    if (!policy.threshold) throw UsageError("a threshold is required (--threshold or config 'threshold')");
    return *policy.threshold;
  }
  Count population(Count present, Count voting) const {
    if (!policy.population) throw UsageError("a population is required (--population or config 'population')");
    return resolve_population(policy, present, voting);
  }
  Count present_or(Count fallback, std::string_view source) {
    if (policy.present) return *policy.present;
    warnings.push_back("present not given; using " + std::string(source) + " (" +
                       std::to_string(fallback) + ")");
    return fallback;
  }
  ParseOptions parse_options() const {
    ParseOptions p;
    p.strict = !opts.lenient;
    p.choice_names = split_names(opts.choices);
    if (opts.has_m) p.m = opts.m;
    return p;
  }
  std::string ballots_text() const {
    if (opts.ballots_path.empty()) throw UsageError("--ballots FILE is required");
    return read_file(opts.ballots_path);
  }

  ThresholdEvaluation threshold_eval(Count population) const {
    return {threshold().describe(), describe_population(policy), population};
  }

  void note_spoiled(const std::vector<std::size_t>& lines) {
    for (auto line : lines) warnings.push_back("line " + std::to_string(line) + " spoiled (malformed)");
  }

  void add_turnout(ResultDocument& doc, Count voting, Count population) {
    if (population < 1 || voting > population) return;
    const auto t = turnout_report(voting, population, policy.boycott_floor);
    doc.details["turnout"] = Json{{"ratio", rational_json(t.ratio)},
                                  {"floor", to_string(t.floor)},
                                  {"low_turnout", t.low_turnout}};
    if (t.low_turnout) {
      warnings.push_back("turnout " + to_string(t.ratio) + " is below the floor " + to_string(t.floor) +
                         "; weak evidence of the population's view");
    }
  }

  /// Interval for `votes_for` out of `votes_for + votes_against`, classified
  /// against the threshold fraction. Null unless a confidence was requested.
  Json uncertainty(Count votes_for, Count votes_against, Count population, std::string label) const {
    if (!policy.confidence || votes_for + votes_against < 1) return nullptr;
    const auto interval = proportion_interval(votes_for, votes_against, *policy.confidence);
    Json j{{"measure", std::move(label)},
           {"method", "wilson_score"},
           {"confidence", fixed6(interval.confidence)},
           {"point", rational_json(interval.point)},
           {"low", fixed6(interval.low)},
           {"high", fixed6(interval.high)}};
    if (const auto cut = threshold_fraction(threshold(), population)) {
      j["threshold_fraction"] = to_string(*cut);
      j["margin"] = std::string(to_string(classify_margin(interval, *cut)));
    }
    return j;
  }
};

inline Json names_of(const std::vector<std::size_t>& indices, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (auto i : indices) out.push_back(names.at(i));
  return out;
}

inline std::vector<std::string> default_names(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) names.push_back(std::to_string(i));
  return names;
}

inline Json choice_counts(const MultiTally& counts, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out.push_back(Json{{"choice", names.at(i)}, {"votes", counts[i]}});
  }
  return out;
}

inline std::size_t leading(const MultiTally& counts) {
  return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

// ---------------------------------------------------------------------------
// Subcommands

inline ResultDocument cmd_question(Context& ctx) {
  YesNoReport report;
  if (!ctx.opts.tally.empty()) {
    const auto counts = parse_tally(ctx.opts.tally);
    if (counts.size() != 2) throw UsageError("--tally for a question takes exactly two counts: YES,NO");
    report.counts = {counts[0], counts[1]};
    report.voting = report.counts.total();
    report.present = ctx.present_or(report.voting, "number voting");
  } else {
    const auto parsed = parse_yes_no_ballots(ctx.ballots_text(), ctx.parse_options());
    report = tally_yes_no(parsed.ballots);
    report.spoiled = static_cast<Count>(parsed.spoiled_lines.size());
    report.present += report.spoiled;
    ctx.note_spoiled(parsed.spoiled_lines);
    if (ctx.policy.present) report.present = *ctx.policy.present;
  }

  const auto& tally = report.counts;
  const Count population = ctx.population(report.present, report.voting);
  ResultDocument doc;
  doc.command = "question";
  doc.outcome = question(ctx.quorum(), report.present, tally, population, ctx.threshold());
  const bool met = quorate(ctx.quorum(), report.present, report.voting);

  doc.counts = Json{{"yes", tally.votes_y},           {"no", tally.votes_n},
                    {"abstaining", report.abstaining}, {"spoiled", report.spoiled},
                    {"present", report.present},       {"voting", report.voting}};
  doc.quorum = QuorumEvaluation{ctx.quorum().describe(), report.present, report.voting, met};
  doc.threshold = ctx.threshold_eval(population);
  if (tally.total() >= 1) doc.measures.push_back({"yes_proportion", measure_proportion(tally)});
  if (population >= 1) {
    doc.measures.push_back({"yes_share_of_population", Rational(tally.votes_y, population)});
    doc.measures.push_back({"no_share_of_population", Rational(tally.votes_n, population)});
  }
  if (met) {
    doc.details["accept_threshold_met"] = meets_threshold(tally.votes_y, population, ctx.threshold());
    doc.details["reject_threshold_met"] = meets_threshold(tally.votes_n, population, ctx.threshold());
  }
  ctx.add_turnout(doc, report.voting, population);
  doc.uncertainty = ctx.uncertainty(tally.votes_y, tally.votes_n, population, "yes_proportion");
  return doc;
}

inline ResultDocument cmd_one_of_m(Context& ctx) {
  ChoiceReport report;
  std::vector<std::string> names = split_names(ctx.opts.choices);
  if (!ctx.opts.tally.empty()) {
    report.counts = parse_tally(ctx.opts.tally);
    report.voting = consensus::detail::sum(report.counts);
    report.present = ctx.present_or(report.voting, "number voting");
  } else {
    const auto parsed = parse_choice_ballots(ctx.ballots_text(), ctx.parse_options());
    names = parsed.choice_names;
    report = tally_choices(parsed.ballots, parsed.m, 1);
    report.spoiled += static_cast<Count>(parsed.spoiled_lines.size());
    report.present += static_cast<Count>(parsed.spoiled_lines.size());
    ctx.note_spoiled(parsed.spoiled_lines);
    if (ctx.policy.present) report.present = *ctx.policy.present;
  }
  if (names.empty()) names = default_names(report.counts.size());
  if (names.size() != report.counts.size()) throw UsageError("--choices must name every counted choice");

  const Count voting = consensus::detail::sum(report.counts);
  const Count population = ctx.population(report.present, voting);
  const auto result = one_of_m(ctx.quorum(), report.present, report.counts, population, ctx.threshold());

  ResultDocument doc;
  doc.command = "one-of-m";
  doc.outcome = result.outcome;
  doc.counts = Json{{"choices", choice_counts(report.counts, names)},
                    {"abstaining", report.abstaining},
                    {"spoiled", report.spoiled},
                    {"present", report.present},
                    {"voting", voting}};
  doc.quorum = QuorumEvaluation{ctx.quorum().describe(), report.present, voting,
                                quorate(ctx.quorum(), report.present, voting)};
  doc.threshold = ctx.threshold_eval(population);
  if (population >= 1) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      doc.measures.push_back({"share_of_population:" + names[i], Rational(report.counts[i], population)});
    }
  }
  doc.details["consensus_choice"] = result.choice ? Json(names[*result.choice]) : Json(nullptr);
  ctx.add_turnout(doc, voting, population);
  const auto top = leading(report.counts);
  doc.uncertainty =
      ctx.uncertainty(report.counts[top], voting - report.counts[top], population, "share_of_votes:" + names[top]);
  return doc;
}

inline Json plurality_json(const PluralityRanking& r, const std::vector<std::string>& names) {
  return Json{{"order", names_of(r.order, names)},
              {"elected", names_of(r.elected, names)},
              {"lowest_elected", r.lowest_elected ? Json(*r.lowest_elected) : Json(nullptr)},
              {"highest_unelected", r.highest_unelected ? Json(*r.highest_unelected) : Json(nullptr)},
              {"tie_at_cut", r.tie_at_cut}};
}

inline ResultDocument cmd_n_of_m(Context& ctx) {
  if (!ctx.opts.has_n) throw UsageError("--n is required for n-of-m");
  const Count n = ctx.opts.n;
  ChoiceReport report;
  std::vector<std::string> names = split_names(ctx.opts.choices);
  if (!ctx.opts.tally.empty()) {
    if (!ctx.opts.has_voting) throw UsageError("--voting is required with --tally for n-of-m");
    report.counts = parse_tally(ctx.opts.tally);
    report.voting = ctx.opts.voting;
    report.present = ctx.present_or(report.voting, "number voting");
  } else {
    const auto parsed = parse_choice_ballots(ctx.ballots_text(), ctx.parse_options());
    names = parsed.choice_names;
    report = tally_choices(parsed.ballots, parsed.m, n);
    report.spoiled += static_cast<Count>(parsed.spoiled_lines.size());
    report.present += static_cast<Count>(parsed.spoiled_lines.size());
    ctx.note_spoiled(parsed.spoiled_lines);
    if (ctx.policy.present) report.present = *ctx.policy.present;
  }
  if (names.empty()) names = default_names(report.counts.size());
  if (names.size() != report.counts.size()) throw UsageError("--choices must name every counted choice");

  const Count population = ctx.population(report.present, report.voting);
  const auto result =
      n_of_m(ctx.quorum(), report.present, report.voting, report.counts, population, ctx.threshold(), n);

  ResultDocument doc;
  doc.command = "n-of-m";
  doc.outcome = result.outcome;
  doc.counts = Json{{"choices", choice_counts(report.counts, names)},
                    {"abstaining", report.abstaining},
                    {"spoiled", report.spoiled},
                    {"present", report.present},
                    {"voting", report.voting},
                    {"n", n}};
  doc.quorum = QuorumEvaluation{ctx.quorum().describe(), report.present, report.voting,
                                quorate(ctx.quorum(), report.present, report.voting)};
  doc.threshold = ctx.threshold_eval(population);
  if (population >= 1) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      doc.measures.push_back({"share_of_population:" + names[i], Rational(report.counts[i], population)});
    }
  }
  doc.details["consensus_choices"] = names_of(result.choices, names);
  doc.details["plurality_top_n"] = plurality_json(plurality_top_n(report.counts, static_cast<std::size_t>(n)), names);
  doc.details["note"] = "choices are evaluated individually; see the slates command for slate-level consensus";
  ctx.add_turnout(doc, report.voting, population);
  return doc;
}

inline ResultDocument cmd_slates(Context& ctx) {
  if (!ctx.opts.has_n) throw UsageError("--n is required for slates");
  const Count n = ctx.opts.n;
  const auto parsed = parse_choice_ballots(ctx.ballots_text(), ctx.parse_options());
  const auto& names = parsed.choice_names;
  auto report = tally_choices(parsed.ballots, parsed.m, n);
  const auto slates = tally_slates(parsed.ballots, parsed.m, n);
  report.spoiled += static_cast<Count>(parsed.spoiled_lines.size());
  report.present += static_cast<Count>(parsed.spoiled_lines.size());
  ctx.note_spoiled(parsed.spoiled_lines);
  if (ctx.policy.present) report.present = *ctx.policy.present;

  const Count population = ctx.population(report.present, report.voting);
  const bool met = quorate(ctx.quorum(), report.present, report.voting);

  ResultDocument doc;
  doc.command = "slates";
  Json slate_rows = Json::array();
  for (const auto& [slate, count] : slates) {
    slate_rows.push_back(Json{{"slate", names_of(slate, names)}, {"ballots", count}});
  }
  doc.counts = Json{{"slates", std::move(slate_rows)},
                    {"abstaining", report.abstaining},
                    {"spoiled", report.spoiled},
                    {"present", report.present},
                    {"voting", report.voting},
                    {"n", n}};
  doc.quorum = QuorumEvaluation{ctx.quorum().describe(), report.present, report.voting, met};
  doc.threshold = ctx.threshold_eval(population);

  Json passing_json = Json::array();
  if (!met) {
    doc.outcome = Outcome::NullResult;
  } else {
    const auto passing = consensus_slates(slates, population, ctx.threshold());
    for (const auto& s : passing) passing_json.push_back(names_of(s, names));
    doc.outcome = passing.empty() ? Outcome::NegativeResult : Outcome::Accepted;
  }
  if (population >= 1) {
    for (const auto& [slate, count] : slates) {
      std::string label = "share_of_population:";
      for (std::size_t k = 0; k < slate.size(); ++k) label += (k ? "+" : "") + names[slate[k]];
      doc.measures.push_back({label, Rational(count, population)});
    }
  }
  doc.details["consensus_slates"] = std::move(passing_json);
  ctx.add_turnout(doc, report.voting, population);
  return doc;
}

inline Json irv_json(const IrvResult& irv, const std::vector<std::string>& names) {
  Json rounds = Json::array();
  for (const auto& r : irv.rounds) {
    Json counts = Json::object();
    for (const auto& [choice, count] : r.counts) counts[names[choice]] = count;
    rounds.push_back(Json{{"round", r.round_index},
                          {"counts", std::move(counts)},
                          {"exhausted", r.exhausted},
                          {"eliminated", names_of(r.eliminated, names)}});
  }
  return Json{{"label", "compromise, not consensus"},
              {"status", irv.status == IrvStatus::Winner ? "winner" : "unresolved_tie"},
              {"winner", irv.winner ? Json(names[*irv.winner]) : Json(nullptr)},
              {"tied", names_of(irv.tied, names)},
              {"rounds", std::move(rounds)}};
}

inline ResultDocument cmd_ranked(Context& ctx) {
  const auto parsed = parse_ranked_ballots(ctx.ballots_text(), ctx.parse_options());
  const auto& names = parsed.choice_names;
  const auto spoiled = static_cast<Count>(parsed.spoiled_lines.size());
  ctx.note_spoiled(parsed.spoiled_lines);
  const Count present =
      ctx.policy.present ? *ctx.policy.present : static_cast<Count>(parsed.ballots.size()) + spoiled;
  const auto first = first_round_report(parsed.ballots, parsed.m);
  const Count population = ctx.population(present, first.voting);
  const auto result =
      ranked_consensus(parsed.ballots, parsed.m, ctx.quorum(), present, population, ctx.threshold());

  ResultDocument doc;
  doc.command = "ranked";
  doc.outcome = result.outcome;
  doc.counts = Json{{"first_round", choice_counts(first.counts, names)},
                    {"abstaining", first.abstaining},
                    {"spoiled", spoiled},
                    {"present", present},
                    {"voting", first.voting}};
  doc.quorum = QuorumEvaluation{ctx.quorum().describe(), present, first.voting,
                                quorate(ctx.quorum(), present, first.voting)};
  doc.threshold = ctx.threshold_eval(population);
  if (population >= 1) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      doc.measures.push_back({"first_round_share_of_population:" + names[i], Rational(first.counts[i], population)});
    }
  }
  doc.details["consensus_choice"] = result.choice ? Json(names[*result.choice]) : Json(nullptr);
  doc.details["compromise"] = result.compromise ? irv_json(*result.compromise, names) : Json(nullptr);
  const auto winner = condorcet_winner(pairwise_matrix(parsed.ballots, parsed.m));
  doc.details["strong_condorcet_winner"] = winner ? Json(names[*winner]) : Json(nullptr);
  ctx.add_turnout(doc, first.voting, population);
  if (first.voting >= 1) {
    const auto top = leading(first.counts);
    doc.uncertainty = ctx.uncertainty(first.counts[top], first.voting - first.counts[top], population,
                                      "first_round_share_of_votes:" + names[top]);
  }
  return doc;
}

inline ResultDocument cmd_condorcet(Context& ctx) {
  const auto parsed = parse_ranked_ballots(ctx.ballots_text(), ctx.parse_options());
  const auto& names = parsed.choice_names;
  ctx.note_spoiled(parsed.spoiled_lines);
  const auto matrix = pairwise_matrix(parsed.ballots, parsed.m);
  const auto winner = condorcet_winner(matrix);
  const auto ranked = std::count_if(parsed.ballots.begin(), parsed.ballots.end(),
                                    [](const auto& b) { return !b.ranking.empty(); });

  ResultDocument doc;
  doc.command = "condorcet";
  doc.outcome = ranked == 0 ? Outcome::NullResult : winner ? Outcome::Accepted : Outcome::NegativeResult;
  Json rows = Json::array();
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    Json row = Json::object();
    for (std::size_t j = 0; j < matrix.size(); ++j) {
      if (i != j) row[names[j]] = matrix.prefer(i, j);
    }
    rows.push_back(Json{{"choice", names[i]}, {"preferred_over", std::move(row)}});
  }
  doc.counts = Json{{"ballots", parsed.ballots.size()},
                    {"ranked_ballots", ranked},
                    {"spoiled", parsed.spoiled_lines.size()},
                    {"pairwise", std::move(rows)}};
  doc.details["strong_condorcet_winner"] = winner ? Json(names[*winner]) : Json(nullptr);
  return doc;
}

inline ResultDocument cmd_sequence(Context& ctx) {
  const auto parsed = parse_approval_ballots(ctx.ballots_text(), ctx.parse_options());
  const auto& names = parsed.choice_names;
  ctx.note_spoiled(parsed.spoiled_lines);
  const ApprovalProfile profile{parsed.m, parsed.ballots};
  const auto voters = static_cast<Count>(profile.voters.size());
  const Count population = ctx.population(voters, voters);

  std::vector<std::size_t> order;
  if (ctx.opts.order.empty()) {
    for (std::size_t i = 0; i < profile.m; ++i) order.push_back(i);
  } else {
    const ChoiceResolver resolve{names, profile.m};
    try {
      for (auto token : split(ctx.opts.order, ',')) order.push_back(resolve(token));
    } catch (const RowError& e) {
      throw UsageError("--order: " + e.what());
    }
  }

  AnalysisMode mode;
  if (ctx.opts.mode == "exhaustive") {
    mode = Exhaustive{};
  } else if (ctx.opts.mode == "montecarlo") {
    if (!ctx.opts.has_seed) throw UsageError("--mode montecarlo requires an explicit --seed");
    mode = MonteCarlo{ctx.opts.trials, ctx.opts.seed};
  } else {
    throw UsageError("--mode must be exhaustive or montecarlo");
  }

  const auto seq = simulate_sequence(profile, order, population, ctx.threshold());
  const auto analysis = order_analysis(profile, population, ctx.threshold(), mode);

  ResultDocument doc;
  doc.command = "sequence";
  doc.outcome = seq.chosen ? Outcome::Accepted : Outcome::NegativeResult;
  doc.counts = Json{{"approvals", choice_counts(approvals(profile), names)}, {"voters", voters}};
  doc.threshold = ctx.threshold_eval(population);

  Json steps = Json::array();
  for (const auto& s : seq.steps) {
    steps.push_back(Json{{"option", names[s.option]}, {"outcome", std::string(to_string(s.outcome))}});
  }
  Json probs = Json::array();
  for (std::size_t i = 0; i < profile.m; ++i) {
    Json p{{"option", names[i]}};
    if (analysis.exact) p["probability"] = rational_json((*analysis.exact)[i]);
    else p["probability"] = Json{{"estimate", fixed6(analysis.probability[i])},
                                 {"standard_error", fixed6(analysis.standard_error[i])}};
    probs.push_back(std::move(p));
  }
  const auto& cw = analysis.condorcet_winner;
  const bool favorite_passes =
      cw && std::find(analysis.passing.begin(), analysis.passing.end(), *cw) != analysis.passing.end();
  const bool favorite_disadvantaged = favorite_passes && analysis.probability[*cw] < 0.5;

  doc.details["passing_set"] = names_of(analysis.passing, names);
  doc.details["order"] = names_of(seq.order, names);
  doc.details["steps"] = std::move(steps);
  doc.details["chosen"] = seq.chosen ? Json(names[*seq.chosen]) : Json(nullptr);
  doc.details["pathologies"] = Json{{"conflicting_choices", analysis.passing.size() >= 2},
                                    {"default", analysis.passing.empty()},
                                    {"favorite_disadvantaged", favorite_disadvantaged}};
  Json mode_json = std::holds_alternative<Exhaustive>(mode)
                       ? Json("exhaustive")
                       : Json{{"montecarlo", Json{{"trials", ctx.opts.trials}, {"seed", ctx.opts.seed}}}};
  doc.details["order_analysis"] = Json{{"mode", std::move(mode_json)},
                                       {"orders_evaluated", analysis.orders_evaluated},
                                       {"selection_probability", std::move(probs)},
                                       {"strong_condorcet_winner", cw ? Json(names[*cw]) : Json(nullptr)}};
  if (seq.chosen && analysis.passing.size() >= 2) {
    doc.warnings.push_back("several exclusive options pass on their own; the voting order picked " +
                           names[*seq.chosen]);
  }
  if (!seq.chosen) doc.warnings.push_back("every option failed; the sequence defaults without a decision");
  return doc;
}

inline void load_policy(Context& ctx, const Options& o) {
  auto& p = ctx.policy;
  if (!o.config_path.empty()) {
    const auto text = read_file(o.config_path);
    try {
      merge_policy_json(p, nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(std::string("config is not valid JSON: ") + e.what());
    }
  }
  if (!o.quorum.empty()) p.quorum_setting = parse_quorum_setting(o.quorum);
  if (!o.threshold.empty()) p.threshold = parse_threshold(o.threshold);
  if (!o.population.empty()) p.population = parse_population(o.population);
  if (o.has_present) p.present = o.present;
  if (o.has_nominal) p.nominal_size = o.nominal_size;
  if (o.has_current) p.current_size = o.current_size;
  if (o.has_confidence) p.confidence = o.confidence;
  if (!o.boycott_floor.empty()) p.boycott_floor = parse_rational(o.boycott_floor);
  validate_policy(p);
}

}  // namespace detail

/// Runs the CLI with argv-style arguments (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Measure consensus from votes and ballots.", "consensus"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    ResultDocument (*fn)(detail::Context&);
  };
  const Sub subs[] = {
      {"question", "yes-or-no question", detail::cmd_question},
      {"one-of-m", "exclusive choice among M options", detail::cmd_one_of_m},
      {"n-of-m", "vote for at most N of M options", detail::cmd_n_of_m},
      {"ranked", "ranked ballots: first-round consensus, runoff as compromise", detail::cmd_ranked},
      {"condorcet", "pairwise preference matrix and strong Condorcet winner", detail::cmd_condorcet},
      {"slates", "tabulation by exact selection set", detail::cmd_slates},
      {"sequence", "sequential yes/no votes over exclusive options", detail::cmd_sequence},
  };

  struct Flags {
    CLI::Option *present, *nominal, *current, *voting, *confidence, *m, *n, *seed;
  };
  std::vector<std::pair<CLI::App*, Flags>> registered;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", o.config_path, "policy config file (JSON)");
    sub->add_option("--tally", o.tally, "inline counts, comma separated");
    sub->add_option("--ballots", o.ballots_path, "ballot file, one ballot per line");
    sub->add_option("--quorum", o.quorum, "present:N | voting:N | TYPE:R@BASE");
    sub->add_option("--threshold", o.threshold, "majority | supermajority:T | near_unanimity:C | unanimity");
    sub->add_option("--population", o.population, "nominal | current | present | voting | N");
    sub->add_option("--boycott-floor", o.boycott_floor, "turnout floor as p/q (default 1/2)");
    sub->add_flag("--lenient", o.lenient, "spoil malformed ballot lines instead of failing");
    sub->add_option("--choices", o.choices, "choice names, comma separated");
    sub->add_option("--order", o.order, "voting order for sequence, comma separated");
    sub->add_option("--mode", o.mode, "exhaustive | montecarlo");
    sub->add_option("--trials", o.trials, "Monte Carlo trials");
    Flags f{};
    f.present = sub->add_option("--present", o.present, "members present");
    f.nominal = sub->add_option("--nominal-size", o.nominal_size, "nominal size of the body (P1)");
    f.current = sub->add_option("--current-size", o.current_size, "current size of the body (P2)");
    f.voting = sub->add_option("--voting", o.voting, "members voting (n-of-m with --tally)");
    f.confidence = sub->add_option("--confidence", o.confidence, "confidence for uncertainty intervals");
    f.m = sub->add_option("--m", o.m, "number of choices when no names are given");
    f.n = sub->add_option("--n", o.n, "maximum selections per ballot");
    f.seed = sub->add_option("--seed", o.seed, "Monte Carlo seed");
    registered.emplace_back(sub, f);
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsageError;
  }

  for (std::size_t k = 0; k < registered.size(); ++k) {
    auto* sub = registered[k].first;
    if (!sub->parsed()) continue;
    const auto& f = registered[k].second;
    o.has_present = f.present->count() > 0;
    o.has_nominal = f.nominal->count() > 0;
    o.has_current = f.current->count() > 0;
    o.has_voting = f.voting->count() > 0;
    o.has_confidence = f.confidence->count() > 0;
    o.has_m = f.m->count() > 0;
    o.has_n = f.n->count() > 0;
    o.has_seed = f.seed->count() > 0;
    if (!o.tally.empty() && !o.ballots_path.empty()) {
      err << "error: --tally and --ballots are mutually exclusive\n";
      return kUsageError;
    }

    detail::Context ctx{o, {}, {}};
    try {
      detail::load_policy(ctx, o);
      auto doc = subs[k].fn(ctx);
      doc.warnings.insert(doc.warnings.begin(), ctx.warnings.begin(), ctx.warnings.end());
      out << render(doc);
      return exit_status(doc.outcome);
    } catch (const UsageError& e) {
      err << "usage error: " << e.what() << "\n";
      return kUsageError;
    } catch (const InputError& e) {
      err << "error: " << e.what() << "\n";
      return kMalformedInput;
    } catch (const Error& e) {
      err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
      return kMalformedInput;
    }
  }
  return kUsageError;
}

}  // namespace consensus::cli
