#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "qspell/corpus.hpp"

namespace qspell {

struct RankedEntry {
    std::string passage_id;
    double score = 0.0;
};

/// Top-k passages for one query, scores non-increasing, ties broken by
/// passage id ascending, zero-score passages excluded.
struct RankedList {
    std::string query_id;
    std::vector<RankedEntry> entries;
};

class Bm25Index {
public:
    Bm25Index() = default;
    static Bm25Index build(const std::vector<Passage>& passages, double k1 = 1.5, double b = 0.75);

    /// score(q,d) = sum over unique query terms of
    ///   idf(t) * tf * (k1+1) / (tf + k1 * (1 - b + b * |d| / avgdl))
    /// with idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5)).
    RankedList rank(const std::string& query_id, const std::string& query_text, int k) const;

    double k1() const { return k1_; }
    double b() const { return b_; }
    size_t doc_count() const { return doc_ids_.size(); }

private:
    struct Posting {
        int doc = 0;
        int tf = 0;
    };
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::vector<std::string> doc_ids_;
    std::vector<int> doc_lengths_;
    double avg_doc_length_ = 0.0;
    double k1_ = 1.5;
    double b_ = 0.75;
};

class TfidfIndex {
public:
    TfidfIndex() = default;
    static TfidfIndex build(const std::vector<Passage>& passages);

    /// weight(t, d) = tf * idf with idf = ln((1+N)/(1+df)) + 1; the query
    /// vector uses query term counts with the same idf; score is the cosine
    /// of the two vectors. Query terms absent from the index are dropped.
    RankedList rank(const std::string& query_id, const std::string& query_text, int k) const;

    size_t doc_count() const { return doc_ids_.size(); }

private:
    struct Posting {
        int doc = 0;
        double weight = 0.0;
    };
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::unordered_map<std::string, int> df_;
    std::vector<std::string> doc_ids_;
    std::vector<double> norms_;
    int n_docs_ = 0;
};

/// TREC-style run file: "query_id passage_id rank score tag", one per line.
void write_run_file(std::ostream& out, const std::vector<RankedList>& lists,
                    const std::string& tag);

}  // namespace qspell
