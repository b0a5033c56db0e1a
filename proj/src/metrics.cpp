#include "qspell/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qspell/errors.hpp"

namespace qspell {

std::unordered_map<std::string, QueryJudgments> group_judgments(
    const std::vector<Judgment>& judgments) {
    std::unordered_map<std::string, QueryJudgments> grouped;
    for (const auto& j : judgments) grouped[j.query_id][j.passage_id] = j.grade;
    return grouped;
}

namespace {

int grade_of(const QueryJudgments& judgments, const std::string& passage_id) {
    auto it = judgments.find(passage_id);
    return it == judgments.end() ? 1 : it->second;  // unjudged counts as grade 1
}

}  // namespace

double recall_at_k(const RankedList& ranked, const QueryJudgments& judgments, int k,
                   const GradePolicy& policy) {
    int total_relevant = 0;
    for (const auto& [pid, grade] : judgments)
        if (grade >= policy.relevant_threshold) ++total_relevant;
    if (total_relevant == 0) return 0.0;
    int hits = 0;
    const int limit = std::min<int>(k, static_cast<int>(ranked.entries.size()));
    for (int i = 0; i < limit; ++i)
        if (grade_of(judgments, ranked.entries[i].passage_id) >= policy.relevant_threshold) ++hits;
    return static_cast<double>(hits) / total_relevant;
}

double mrr(const RankedList& ranked, const QueryJudgments& judgments, const GradePolicy& policy) {
    for (size_t i = 0; i < ranked.entries.size(); ++i)
        if (grade_of(judgments, ranked.entries[i].passage_id) >= policy.relevant_threshold)
            return 1.0 / static_cast<double>(i + 1);
    return 0.0;
}

double ndcg_at_10(const RankedList& ranked, const QueryJudgments& judgments,
                  const GradePolicy& policy) {
    double dcg = 0.0;
    const int limit = std::min<size_t>(10, ranked.entries.size());
    for (int i = 0; i < limit; ++i)
        dcg += policy.gain(grade_of(judgments, ranked.entries[i].passage_id)) /
               std::log2(i + 2.0);

    std::vector<int> grades;
    grades.reserve(judgments.size());
    for (const auto& [pid, grade] : judgments) grades.push_back(grade);
    std::sort(grades.rbegin(), grades.rend());
    double idcg = 0.0;
    for (size_t i = 0; i < grades.size() && i < 10; ++i)
        idcg += policy.gain(grades[i]) / std::log2(i + 2.0);
    return idcg > 0.0 ? dcg / idcg : 0.0;
}

MetricsRow aggregate_metrics(const std::vector<RankedList>& lists,
                             const std::unordered_map<std::string, QueryJudgments>& judgments,
                             const GradePolicy& policy) {
    static const QueryJudgments kEmpty;
    MetricsRow row;
    double mrr_sum = 0.0, ndcg_sum = 0.0;
    double r1_sum = 0.0, r5_sum = 0.0, r10_sum = 0.0, mrr_subset_sum = 0.0;
    for (const auto& list : lists) {
        auto it = judgments.find(list.query_id);
        const QueryJudgments& qj = it == judgments.end() ? kEmpty : it->second;
        double q_mrr = mrr(list, qj, policy);
        mrr_sum += q_mrr;
        ndcg_sum += ndcg_at_10(list, qj, policy);
        ++row.n_queries;
        bool has_relevant = std::any_of(qj.begin(), qj.end(), [&](const auto& kv) {
            return kv.second >= policy.relevant_threshold;
        });
        if (has_relevant) {
            r1_sum += recall_at_k(list, qj, 1, policy);
            r5_sum += recall_at_k(list, qj, 5, policy);
            r10_sum += recall_at_k(list, qj, 10, policy);
            mrr_subset_sum += q_mrr;
            ++row.n_recall_queries;
        }
    }
    if (row.n_queries > 0) {
        row.mrr = mrr_sum / row.n_queries;
        row.ndcg_at_10 = ndcg_sum / row.n_queries;
    }
    if (row.n_recall_queries > 0) {
        row.recall_at_1 = r1_sum / row.n_recall_queries;
        row.recall_at_5 = r5_sum / row.n_recall_queries;
        row.recall_at_10 = r10_sum / row.n_recall_queries;
        row.mrr_recall_subset = mrr_subset_sum / row.n_recall_queries;
    }
    return row;
}

Interval bootstrap_ci(std::span<const double> per_query_values, int resamples, double level,
                      uint64_t seed) {
    const size_t n = per_query_values.size();
    if (n < 2) throw ValidationError("bootstrap_ci: need at least 2 per-query values");
    if (resamples < 1000) throw ValidationError("bootstrap_ci: need at least 1000 resamples");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, n - 1);
    std::vector<double> means;
    means.reserve(resamples);
    for (int r = 0; r < resamples; ++r) {
        double sum = 0.0;
        for (size_t i = 0; i < n; ++i) sum += per_query_values[pick(rng)];
        means.push_back(sum / n);
    }
    std::sort(means.begin(), means.end());
    const double alpha = (1.0 - level) / 2.0;
    auto quantile = [&](double q) {
        double idx = q * (means.size() - 1);
        size_t lo = static_cast<size_t>(idx);
        size_t hi = std::min(lo + 1, means.size() - 1);
        double frac = idx - lo;
        return means[lo] * (1.0 - frac) + means[hi] * frac;
    };
    return {quantile(alpha), quantile(1.0 - alpha)};
}

}  // namespace qspell
