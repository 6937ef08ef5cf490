#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kep {

// Dense node index, 0..n-1 within one graph.
using NodeId = std::int32_t;
// Countries are numbered 1..N.
using CountryId = std::int32_t;

inline constexpr NodeId kNoNode = -1;

/// Invalid user-supplied configuration (policy, instance spec, CLI flags).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. The message carries the offending line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A model or plan broke one of its structural invariants.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Upper limit that may be infinite ("inf" on the command line).
class Cap {
 public:
  constexpr Cap() = default;  // unbounded
  constexpr explicit Cap(int value) : value_(value) {}

  static constexpr Cap unbounded() { return Cap(); }

  constexpr bool finite() const { return value_ != kInfinite; }
  constexpr int value() const { return value_; }
  constexpr bool allows(long long amount) const { return !finite() || amount <= value_; }
  // Finite value, or `fallback` when unbounded.
  constexpr int value_or(int fallback) const { return finite() ? value_ : fallback; }

  friend constexpr bool operator==(Cap, Cap) = default;
  friend constexpr std::strong_ordering operator<=>(Cap a, Cap b) { return a.value_ <=> b.value_; }

  std::string to_string() const { return finite() ? std::to_string(value_) : "inf"; }
  /// Accepts a non-negative integer, "inf" or "∞".
  static Cap parse(std::string_view text);

 private:
  static constexpr int kInfinite = std::numeric_limits<int>::max();
  int value_ = kInfinite;
};

}  // namespace kep
