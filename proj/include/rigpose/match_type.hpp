#pragma once

#include <string>
#include <vector>

namespace rigpose {

/// Classification of a six-correspondence configuration by the multiset of
/// camera-pair multiplicities:
///   AllSame    6+phi   all six share one camera pair
///   MaxFive    5+x     largest repetition is 5
///   MaxFour    4+x     largest repetition is 4
///   TwoTriples 3+3     two camera pairs repeated three times each
///   OneTriple  3+x     exactly one camera pair repeated three times
///   NoTriple   U xi    every repetition at most 2 (the generic case)
enum class MatchType { AllSame, MaxFive, MaxFour, TwoTriples, OneTriple, NoTriple };

MatchType match_type_from_multiplicities(const std::vector<int>& mult);

std::string to_string(MatchType t);

} // namespace rigpose
