#include "qspell/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace qspell {

namespace {

std::map<std::string, int> term_counts(const std::string& text) {
    std::map<std::string, int> counts;
    for (const auto& w : tokenize_words(text)) ++counts[w];
    return counts;
}

RankedList top_k(const std::string& query_id, const std::vector<std::string>& doc_ids,
                 const std::unordered_map<int, double>& scores, int k) {
    std::vector<RankedEntry> entries;
    entries.reserve(scores.size());
    for (const auto& [doc, score] : scores)
        if (score > 0.0) entries.push_back({doc_ids[doc], score});
    std::sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.passage_id < b.passage_id;
    });
    if (static_cast<int>(entries.size()) > k) entries.resize(k);
    return {query_id, std::move(entries)};
}

}  // namespace

Bm25Index Bm25Index::build(const std::vector<Passage>& passages, double k1, double b) {
    Bm25Index idx;
    idx.k1_ = k1;
    idx.b_ = b;
    long total_len = 0;
    for (const auto& p : passages) {
        int doc = static_cast<int>(idx.doc_ids_.size());
        idx.doc_ids_.push_back(p.id);
        auto counts = term_counts(p.text);
        int len = 0;
        for (const auto& [term, tf] : counts) {
            idx.postings_[term].push_back({doc, tf});
            len += tf;
        }
        idx.doc_lengths_.push_back(len);
        total_len += len;
    }
    idx.avg_doc_length_ = passages.empty() ? 0.0 : static_cast<double>(total_len) / passages.size();
    return idx;
}

RankedList Bm25Index::rank(const std::string& query_id, const std::string& query_text,
                           int k) const {
    std::unordered_map<int, double> scores;
    const double n = static_cast<double>(doc_ids_.size());
    auto counts = term_counts(query_text);  // unique terms; multiplicity ignored
    for (const auto& [term, qtf] : counts) {
        (void)qtf;
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;  // absent term contributes exactly zero
        const double df = static_cast<double>(it->second.size());
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        for (const auto& post : it->second) {
            const double tf = post.tf;
            const double norm =
                k1_ * (1.0 - b_ + b_ * doc_lengths_[post.doc] / avg_doc_length_);
            scores[post.doc] += idf * tf * (k1_ + 1.0) / (tf + norm);
        }
    }
    return top_k(query_id, doc_ids_, scores, k);
}

TfidfIndex TfidfIndex::build(const std::vector<Passage>& passages) {
    TfidfIndex idx;
    idx.n_docs_ = static_cast<int>(passages.size());
    std::vector<std::map<std::string, int>> per_doc;
    per_doc.reserve(passages.size());
    for (const auto& p : passages) {
        idx.doc_ids_.push_back(p.id);
        per_doc.push_back(term_counts(p.text));
        for (const auto& [term, tf] : per_doc.back()) {
            (void)tf;
            ++idx.df_[term];
        }
    }
    idx.norms_.assign(passages.size(), 0.0);
    for (int doc = 0; doc < idx.n_docs_; ++doc) {
        for (const auto& [term, tf] : per_doc[doc]) {
            const double idf = std::log((1.0 + idx.n_docs_) / (1.0 + idx.df_[term])) + 1.0;
            const double w = tf * idf;
            idx.postings_[term].push_back({doc, w});
            idx.norms_[doc] += w * w;
        }
        idx.norms_[doc] = std::sqrt(idx.norms_[doc]);
    }
    return idx;
}

RankedList TfidfIndex::rank(const std::string& query_id, const std::string& query_text,
                            int k) const {
    auto counts = term_counts(query_text);
    double query_norm_sq = 0.0;
    std::unordered_map<int, double> dots;
    for (const auto& [term, qtf] : counts) {
        auto dfit = df_.find(term);
        if (dfit == df_.end()) continue;
        const double idf = std::log((1.0 + n_docs_) / (1.0 + dfit->second)) + 1.0;
        const double qw = qtf * idf;
        query_norm_sq += qw * qw;
        for (const auto& post : postings_.at(term)) dots[post.doc] += qw * post.weight;
    }
    if (query_norm_sq == 0.0) return {query_id, {}};
    const double query_norm = std::sqrt(query_norm_sq);
    std::unordered_map<int, double> scores;
    for (const auto& [doc, dot] : dots)
        if (norms_[doc] > 0.0) scores[doc] = dot / (query_norm * norms_[doc]);
    return top_k(query_id, doc_ids_, scores, k);
}

void write_run_file(std::ostream& out, const std::vector<RankedList>& lists,
                    const std::string& tag) {
    char buf[64];
    for (const auto& list : lists) {
        int rank = 1;
        for (const auto& e : list.entries) {
            std::snprintf(buf, sizeof(buf), "%.6f", e.score);
            out << list.query_id << " " << e.passage_id << " " << rank << " " << buf << " " << tag
                << "\n";
            ++rank;
        }
    }
}

}  // namespace qspell
