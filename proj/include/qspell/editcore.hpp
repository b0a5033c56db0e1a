#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qspell/corpus.hpp"

namespace qspell {

struct Candidate {
    std::string word;
    int distance = 0;
    uint64_t frequency = 0;
};

/// Plain Levenshtein distance (insert/delete/substitute, no transpositions).
int levenshtein(std::string_view a, std::string_view b);

/// Banded variant: returns the exact distance when it is <= max_dist,
/// otherwise any value > max_dist.
int levenshtein_bounded(std::string_view a, std::string_view b, int max_dist);

/// Candidate ordering shared by the brute-force scan and the delete index:
/// distance ascending, frequency descending, word ascending.
bool candidate_less(const Candidate& a, const Candidate& b);

/// Linear scan over the vocabulary with length pruning. Returns every word
/// within max_dist of token, ordered by candidate_less. token itself is
/// excluded unless include_self is set.
std::vector<Candidate> closest_candidates(const std::string& token, const Vocabulary& vocab,
                                          int max_dist, bool include_self = false);

}  // namespace qspell
