#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "codedxbar/traffic.hpp"

namespace codedxbar {

struct PatternSpec {
  TrafficPattern pattern;
  std::optional<RateVector> rates;  ///< present when every flow carries a rate
};

/// Reads {"inputs": M, "outputs": N, "flows": [{"input": i, "fanout": [j...],
/// "rate": "p/q"}...]} with 0-based ports. Rates may be strings ("2/3",
/// "0.01") or JSON numbers; a number is read from its literal text, so 0.01
/// is exactly 1/100. Flows either all carry a rate or none do. Errors are
/// ParseError with the line and column of the offending text.
PatternSpec parse_pattern(std::string_view text);

/// Reads a file; errors name the path.
PatternSpec load_pattern(const std::string& path);

/// Rate list given inline ("2/3,1/3,0.25") or as a JSON array in text.
RateVector parse_rate_list(std::string_view text);

}  // namespace codedxbar
