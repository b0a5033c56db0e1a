#include "qspell/census.hpp"

#include <algorithm>
#include <set>

#include "qspell/editcore.hpp"
#include "qspell/errors.hpp"

namespace qspell {

std::string error_type_name(ErrorType t) {
    switch (t) {
        case ErrorType::Substitution: return "substitution";
        case ErrorType::Insertion: return "insertion";
        case ErrorType::Deletion: return "deletion";
        case ErrorType::DoubleDeletion: return "double_deletion";
        case ErrorType::OtherDistance2: return "other_distance2";
        case ErrorType::Unmatched: return "unmatched";
    }
    return "unknown";
}

ErrorType classify_error_type(const std::string& token, const std::string& matched_word,
                              int distance) {
    const long gap = static_cast<long>(token.size()) - static_cast<long>(matched_word.size());
    if (distance == 1) {
        if (gap == 0) return ErrorType::Substitution;
        if (gap == 1) return ErrorType::Insertion;
        return ErrorType::Deletion;
    }
    if (gap == -2) return ErrorType::DoubleDeletion;
    return ErrorType::OtherDistance2;
}

std::vector<ErrorLabel> detect_errors(const QueryRecord& query, const Vocabulary& vocab) {
    if (!query.paraphrase_text)
        throw ValidationError("query '" + query.id + "' has no paraphrase; cannot detect errors");

    auto para_tokens = tokenize_words(*query.paraphrase_text);
    std::set<std::string> para_set(para_tokens.begin(), para_tokens.end());

    std::vector<ErrorLabel> labels;
    for (const auto& tok : tokenize(query.original_text)) {
        if (tok.numeric) continue;
        if (para_set.count(tok.text)) continue;
        if (vocab.contains(tok.text)) continue;

        // Closest paraphrase word, ties by (distance, lexicographic).
        const std::string* best = nullptr;
        int best_dist = 3;
        for (const auto& w : para_set) {
            int d = levenshtein_bounded(tok.text, w, 2);
            if (d < best_dist || (d == best_dist && best && w < *best)) {
                best_dist = d;
                best = &w;
            }
        }

        ErrorLabel label;
        label.query_id = query.id;
        label.token = tok.text;
        if (best && best_dist <= 2) {
            label.closest_paraphrase_word = *best;
            label.distance = best_dist;
            label.error_type = classify_error_type(tok.text, *best, best_dist);
        }
        labels.push_back(std::move(label));
    }
    return labels;
}

ErrorCensus run_census(const std::vector<QueryRecord>& queries, const Vocabulary& vocab) {
    ErrorCensus c;
    c.total_queries = static_cast<long>(queries.size());
    for (const auto& q : queries) {
        long confirmed_here = 0;
        for (const auto& label : detect_errors(q, vocab)) {
            ++c.oov_flags;
            ++c.type_breakdown[label.error_type];
            if (label.confirmed()) {
                ++c.confirmed_errors;
                ++confirmed_here;
            } else {
                ++c.unmatched_flags;
            }
        }
        if (confirmed_here > 0) ++c.queries_with_errors;
        c.total_tokens += static_cast<long>(tokenize(q.original_text).size());
    }
    if (c.total_queries > 0) {
        c.query_error_rate = static_cast<double>(c.queries_with_errors) / c.total_queries;
        c.avg_errors_per_query = static_cast<double>(c.confirmed_errors) / c.total_queries;
    }
    if (c.queries_with_errors > 0)
        c.avg_errors_per_affected_query =
            static_cast<double>(c.confirmed_errors) / c.queries_with_errors;
    if (c.total_tokens > 0)
        c.token_error_rate = static_cast<double>(c.confirmed_errors) / c.total_tokens;
    if (c.oov_flags > 0) {
        c.unmatched_share = static_cast<double>(c.unmatched_flags) / c.oov_flags;
        c.yield_ratio = static_cast<double>(c.confirmed_errors) / c.oov_flags;
    }
    return c;
}

double oov_rate(const std::vector<QueryRecord>& queries, const Vocabulary& vocab) {
    long total = 0;
    long oov = 0;
    for (const auto& q : queries) {
        for (const auto& tok : tokenize(q.original_text)) {
            if (tok.numeric) continue;
            ++total;
            if (!vocab.contains(tok.text)) ++oov;
        }
    }
    if (total == 0) throw ValidationError("oov_rate: query set has no tokens");
    return static_cast<double>(oov) / total;
}

CalibrationEstimate calibrate(double oov, double yield_ratio) {
    if (yield_ratio <= 0.0 || yield_ratio > 1.0)
        throw ValidationError("calibrate: yield_ratio must be in (0, 1]");
    return {oov, yield_ratio, oov * yield_ratio};
}

}  // namespace qspell
