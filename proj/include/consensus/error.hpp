#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace consensus {

enum class ErrorCode {
  DivisionUndefined,
  InvalidParameter,
  InconsistentCounts,
  ShortfallTooLarge,
  ContradictoryTally,
  MalformedBallot,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionUndefined: return "DivisionUndefined";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InconsistentCounts: return "InconsistentCounts";
    case ErrorCode::ShortfallTooLarge: return "ShortfallTooLarge";
    case ErrorCode::ContradictoryTally: return "ContradictoryTally";
    case ErrorCode::MalformedBallot: return "MalformedBallot";
  }
  return "Unknown";
}

/// Raised by every library operation on a contract violation. `ordinal` is
/// the 1-based position of the offending ballot (or input line) when known.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> ordinal = std::nullopt)
      : std::runtime_error(what), code_(code), ordinal_(ordinal) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> ordinal() const noexcept { return ordinal_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> ordinal_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorCode code, const std::string& what,
                              std::optional<std::size_t> ordinal = std::nullopt) {
  throw Error(code, what, ordinal);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace detail

}  // namespace consensus
