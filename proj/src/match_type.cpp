#include "rigpose/match_type.hpp"

#include <algorithm>

namespace rigpose {

MatchType match_type_from_multiplicities(const std::vector<int>& mult) {
    int max_rep = 0;
    int triples = 0;
    for (int m : mult) {
        max_rep = std::max(max_rep, m);
        if (m >= 3) ++triples;
    }
    if (max_rep >= 6) return MatchType::AllSame;
    if (max_rep == 5) return MatchType::MaxFive;
    if (max_rep == 4) return MatchType::MaxFour;
    if (max_rep == 3) return triples >= 2 ? MatchType::TwoTriples : MatchType::OneTriple;
    return MatchType::NoTriple;
}

std::string to_string(MatchType t) {
    switch (t) {
    case MatchType::AllSame: return "6+phi";
    case MatchType::MaxFive: return "5+x";
    case MatchType::MaxFour: return "4+x";
    case MatchType::TwoTriples: return "3+3";
    case MatchType::OneTriple: return "3+x";
    case MatchType::NoTriple: return "xi";
    }
    return "?";
}

} // namespace rigpose
