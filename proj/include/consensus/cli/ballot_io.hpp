#pragma once

// Ballot files: UTF-8 text, one ballot per line.
//
//   yes/no    y | n | abstain
//   choice    selections separated by ';'       e.g.  0;2   or  Alice;Bob
//   ranked    preferences separated by '>'      e.g.  B>C>A
//   approval  full ranking, '|', cutoff         e.g.  A>B>C | 2
//
// A single '-' is an empty (abstaining) choice or ranked ballot. Blank lines
// and lines starting with '#' are ignored. An optional first record
// "choices: A,B,C" names the choices; tokens are then resolved by name, and
// plain integers are always accepted as 0-based indices.

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "consensus/sequential.hpp"
#include "consensus/tabulation.hpp"

namespace consensus::cli {

enum class BallotKind { YesNo, Choice, Ranked, Approval };

struct ParseOptions {
  bool strict = true;
  std::vector<std::string> choice_names;  ///< overrides a file header when set
  std::optional<std::size_t> m;
};

template <typename Ballot>
struct ParsedBallots {
  std::vector<Ballot> ballots;
  std::vector<std::size_t> spoiled_lines;  ///< lenient mode only
  std::vector<std::string> choice_names;
  std::size_t m = 0;
};

using BallotSet = std::variant<ParsedBallots<YesNoBallot>, ParsedBallots<ChoiceBallot>,
                               ParsedBallots<RankedBallot>, ParsedBallots<ApprovalVoter>>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

struct Record {
  std::size_t line = 0;
  std::string_view text;
};

/// Splits content into meaningful records and extracts the "choices:" header.
inline std::vector<Record> records(std::string_view content, std::vector<std::string>& header) {
  std::vector<Record> out;
  std::size_t line = 0;
  std::size_t start = 0;
  while (start <= content.size()) {
    const auto nl = content.find('\n', start);
    const auto raw = content.substr(start, nl == std::string_view::npos ? nl : nl - start);
    ++line;
    const auto text = trim(raw);
    if (!text.empty() && text.front() != '#') {
      if (out.empty() && header.empty() && text.starts_with("choices:")) {
        for (auto name : split(text.substr(8), ',')) header.emplace_back(name);
      } else {
        out.push_back({line, text});
      }
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return out;
}

class RowError {
 public:
  explicit RowError(std::string what) : what_(std::move(what)) {}
  const std::string& what() const { return what_; }

 private:
  std::string what_;
};

struct ChoiceResolver {
  const std::vector<std::string>& names;
  std::size_t m;

  std::size_t operator()(std::string_view token) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == token) return i;
    }
    std::int64_t idx = 0;
    if (consensus::detail::parse_int(token, idx) && idx >= 0) {
      if (static_cast<std::size_t>(idx) >= m) {
        throw RowError("choice index " + std::string(token) + " out of range for " +
                       std::to_string(m) + " choices");
      }
      return static_cast<std::size_t>(idx);
    }
    throw RowError("unknown choice '" + std::string(token) + "'");
  }
};

inline std::vector<std::size_t> parse_sequence(std::string_view text, char sep,
                                               const ChoiceResolver& resolve) {
  std::vector<std::size_t> out;
  if (text == "-") return out;
  std::vector<bool> seen(resolve.m, false);
  for (auto token : split(text, sep)) {
    if (token.empty()) throw RowError("empty selection");
    const auto idx = resolve(token);
    if (seen[idx]) throw RowError("choice '" + std::string(token) + "' listed more than once");
    seen[idx] = true;
    out.push_back(idx);
  }
  return out;
}

template <typename Ballot, typename RowParser>
ParsedBallots<Ballot> parse_rows(std::string_view content, const ParseOptions& opts,
                                 bool needs_choices, RowParser&& row) {
  ParsedBallots<Ballot> out;
  std::vector<std::string> header;
  const auto recs = records(content, header);
  out.choice_names = opts.choice_names.empty() ? header : opts.choice_names;
  if (needs_choices) {
    if (!out.choice_names.empty()) out.m = out.choice_names.size();
    else if (opts.m) out.m = *opts.m;
    else consensus::detail::fail(ErrorCode::InvalidParameter,
                                 "number of choices unknown: add a 'choices:' header or set m");
    if (opts.m && *opts.m != out.m) {
      consensus::detail::fail(ErrorCode::InvalidParameter,
                              "choice names and m disagree on the number of choices");
    }
    if (out.choice_names.empty()) {
      for (std::size_t i = 0; i < out.m; ++i) out.choice_names.push_back(std::to_string(i));
    }
  }
  const ChoiceResolver resolve{out.choice_names, out.m};
  for (const auto& rec : recs) {
    try {
      out.ballots.push_back(row(rec.text, resolve));
    } catch (const RowError& e) {
      if (opts.strict) {
        consensus::detail::fail(ErrorCode::MalformedBallot,
                                "line " + std::to_string(rec.line) + ": " + e.what(), rec.line);
      }
      out.spoiled_lines.push_back(rec.line);
    }
  }
  return out;
}

}  // namespace detail

inline ParsedBallots<YesNoBallot> parse_yes_no_ballots(std::string_view content,
                                                       const ParseOptions& opts = {}) {
  return detail::parse_rows<YesNoBallot>(
      content, opts, false, [](std::string_view text, const detail::ChoiceResolver&) {
        std::string token(text);
        std::transform(token.begin(), token.end(), token.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (token == "y") return YesNoBallot{Mark::Yes};
        if (token == "n") return YesNoBallot{Mark::No};
        if (token == "abstain") return YesNoBallot{Mark::Abstain};
        throw detail::RowError("expected y, n or abstain, got '" + std::string(text) + "'");
      });
}

inline ParsedBallots<ChoiceBallot> parse_choice_ballots(std::string_view content,
                                                        const ParseOptions& opts = {}) {
  return detail::parse_rows<ChoiceBallot>(
      content, opts, true, [](std::string_view text, const detail::ChoiceResolver& resolve) {
        return ChoiceBallot{detail::parse_sequence(text, ';', resolve)};
      });
}

inline ParsedBallots<RankedBallot> parse_ranked_ballots(std::string_view content,
                                                        const ParseOptions& opts = {}) {
  return detail::parse_rows<RankedBallot>(
      content, opts, true, [](std::string_view text, const detail::ChoiceResolver& resolve) {
        return RankedBallot{detail::parse_sequence(text, '>', resolve)};
      });
}

inline ParsedBallots<ApprovalVoter> parse_approval_ballots(std::string_view content,
                                                           const ParseOptions& opts = {}) {
  return detail::parse_rows<ApprovalVoter>(
      content, opts, true, [](std::string_view text, const detail::ChoiceResolver& resolve) {
        const auto bar = text.find('|');
        if (bar == std::string_view::npos) throw detail::RowError("expected RANKING | CUTOFF");
        ApprovalVoter v;
        v.ranking = detail::parse_sequence(detail::trim(text.substr(0, bar)), '>', resolve);
        if (v.ranking.size() != resolve.m) {
          throw detail::RowError("ranking must list all " + std::to_string(resolve.m) + " choices");
        }
        std::int64_t cutoff = 0;
        if (!consensus::detail::parse_int(detail::trim(text.substr(bar + 1)), cutoff) || cutoff < 1 ||
            static_cast<std::size_t>(cutoff) > resolve.m) {
          throw detail::RowError("cutoff must be an integer in [1, " + std::to_string(resolve.m) + "]");
        }
        v.cutoff = static_cast<std::size_t>(cutoff);
        return v;
      });
}

inline BallotSet parse_ballots(std::string_view content, BallotKind kind,
                               const ParseOptions& opts = {}) {
  switch (kind) {
    case BallotKind::YesNo: return parse_yes_no_ballots(content, opts);
    case BallotKind::Choice: return parse_choice_ballots(content, opts);
    case BallotKind::Ranked: return parse_ranked_ballots(content, opts);
    case BallotKind::Approval: return parse_approval_ballots(content, opts);
  }
  consensus::detail::fail(ErrorCode::InvalidParameter, "unknown ballot kind");
}

}  // namespace consensus::cli
