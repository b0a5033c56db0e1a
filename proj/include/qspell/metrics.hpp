#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qspell/corpus.hpp"
#include "qspell/retrieval.hpp"

namespace qspell {

/// Relevance policy: grades >= relevant_threshold count as relevant for
/// Recall/MRR; NDCG uses the full graded scale with gain(g) = g - 1 (or
/// 2^(g-1) - 1 when exponential_gain is set). Unjudged passages are grade 1.
struct GradePolicy {
    int relevant_threshold = 2;
    bool exponential_gain = false;

    double gain(int grade) const {
        if (exponential_gain) return std::exp2(grade - 1) - 1.0;
        return grade - 1;
    }
};

/// passage_id -> grade for one query.
using QueryJudgments = std::unordered_map<std::string, int>;

/// query_id -> QueryJudgments.
std::unordered_map<std::string, QueryJudgments> group_judgments(
    const std::vector<Judgment>& judgments);

/// |relevant passages in top-k| / |all relevant judged passages|. The caller
/// must exclude queries with no relevant passage from the macro-average.
double recall_at_k(const RankedList& ranked, const QueryJudgments& judgments, int k,
                   const GradePolicy& policy = {});

/// 1/rank of the first relevant passage in the ranked list; 0 if none. The
/// horizon is the list length (retrieval depth).
double mrr(const RankedList& ranked, const QueryJudgments& judgments,
           const GradePolicy& policy = {});

double ndcg_at_10(const RankedList& ranked, const QueryJudgments& judgments,
                  const GradePolicy& policy = {});

/// One experiment cell. MRR and NDCG are averaged over all queries; recall
/// over the queries with at least one relevant judged passage.
struct MetricsRow {
    double mrr = 0.0;
    double recall_at_1 = 0.0;
    double recall_at_5 = 0.0;
    double recall_at_10 = 0.0;
    double ndcg_at_10 = 0.0;
    int n_queries = 0;
    int n_recall_queries = 0;
    double mrr_recall_subset = 0.0;  // MRR over the recall query subset
};

MetricsRow aggregate_metrics(const std::vector<RankedList>& lists,
                             const std::unordered_map<std::string, QueryJudgments>& judgments,
                             const GradePolicy& policy = {});

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Percentile bootstrap over query-level values with a fixed seed.
/// Requires >= 2 values and >= 1000 resamples.
Interval bootstrap_ci(std::span<const double> per_query_values, int resamples = 1000,
                      double level = 0.95, uint64_t seed = 42);

}  // namespace qspell
