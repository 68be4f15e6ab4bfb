#pragma once

#include <ostream>
#include <string>

#include "codedxbar/pattern_io.hpp"
#include "codedxbar/rational.hpp"

namespace codedxbar::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParse = 2,
  kSizeCap = 3,
  kOutOfRegion = 4,
  kDecodeFailure = 5,
};

/// Builtin name (fig1, 2xN, 2xN:<N>, sim4x3) or pattern file path. Builtin
/// 2xN uses the vertex rates r0 = 1 - 1/N, rj = 1/N; N defaults to 3.
PatternSpec resolve_pattern(const std::string& source);

/// "a:b:step" -> a, a+step, ... up to b inclusive, all exact.
std::vector<Rational> parse_alpha_range(const std::string& text);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace codedxbar::cli
