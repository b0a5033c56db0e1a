#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qspell/corpus.hpp"

namespace qspell {

enum class ErrorType {
    Substitution,
    Insertion,
    Deletion,
    DoubleDeletion,
    OtherDistance2,  // confirmed at distance 2 with a non-double-deletion shape
    Unmatched        // OOV flag with no paraphrase word within distance 2
};

std::string error_type_name(ErrorType t);

struct ErrorLabel {
    std::string query_id;
    std::string token;
    std::optional<std::string> closest_paraphrase_word;
    std::optional<int> distance;
    ErrorType error_type = ErrorType::Unmatched;

    bool confirmed() const { return error_type != ErrorType::Unmatched; }
};

struct ErrorCensus {
    long total_queries = 0;
    long queries_with_errors = 0;
    double query_error_rate = 0.0;
    double token_error_rate = 0.0;
    double avg_errors_per_query = 0.0;
    double avg_errors_per_affected_query = 0.0;

    long total_tokens = 0;
    long confirmed_errors = 0;
    long oov_flags = 0;       // confirmed + unmatched
    long unmatched_flags = 0;
    double unmatched_share = 0.0;  // unmatched / oov_flags
    double yield_ratio = 0.0;      // confirmed / oov_flags
    std::map<ErrorType, long> type_breakdown;
};

struct CalibrationEstimate {
    double oov_rate = 0.0;
    double yield_ratio = 0.0;
    double estimated_error_rate = 0.0;  // oov_rate * yield_ratio
};

/// Paraphrase-grounded detection for one query. A token is flagged iff it is
/// absent from the paraphrase token set, absent from the (min-freq filtered)
/// vocabulary, and not numeric. Flagged tokens with a paraphrase word within
/// Levenshtein distance 2 become confirmed labels; the rest are unmatched.
/// Throws ValidationError when the query has no paraphrase.
std::vector<ErrorLabel> detect_errors(const QueryRecord& query, const Vocabulary& vocab);

/// distance 1: equal lengths -> substitution, token longer -> insertion,
/// token shorter -> deletion. distance 2 with a two-char shortfall ->
/// double_deletion; other distance-2 shapes -> other_distance2.
ErrorType classify_error_type(const std::string& token, const std::string& matched_word,
                              int distance);

/// Census over a paired query set (all queries must carry paraphrases).
/// Rates count confirmed labels only; unmatched flags are reported alongside.
ErrorCensus run_census(const std::vector<QueryRecord>& queries, const Vocabulary& vocab);

/// OOV proxy for unpaired query sets: fraction of non-numeric tokens absent
/// from the vocabulary. Throws ValidationError on zero-token input.
double oov_rate(const std::vector<QueryRecord>& queries, const Vocabulary& vocab);

CalibrationEstimate calibrate(double oov, double yield_ratio);

}  // namespace qspell
