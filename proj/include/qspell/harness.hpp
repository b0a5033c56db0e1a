#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "qspell/correctors.hpp"
#include "qspell/corpus.hpp"
#include "qspell/metrics.hpp"
#include "qspell/retrieval.hpp"

namespace qspell {

enum class ConditionId { Exp2, Exp3a, Exp3b, Exp4 };

struct Condition {
    ConditionId id = ConditionId::Exp2;
    bool query_corrected = false;
    bool corpus_corrected = false;

    static Condition from(ConditionId id);
    static std::optional<Condition> parse(const std::string& name);  // "exp2".."exp4"
};

std::string condition_name(ConditionId id);

enum class Retriever { Bm25, Tfidf };

std::string retriever_name(Retriever r);
std::optional<Retriever> parse_retriever(const std::string& name);

enum class CorrectionCategory { CorrectFix, PartialImprovement, UnnecessaryChange, HarmlessSynonym };

std::string category_name(CorrectionCategory c);

/// Classifies one applied correction against the paraphrase token set.
/// Requires tc.changed; throws ValidationError otherwise.
CorrectionCategory categorize_correction(const TokenCorrection& tc,
                                         const std::set<std::string>& paraphrase_tokens);

struct Datasets {
    std::vector<QueryRecord> queries;
    std::vector<Passage> passages;
    std::vector<Judgment> judgments;
};

struct CellResult {
    ConditionId condition = ConditionId::Exp2;
    std::optional<Method> method;
    Retriever retriever = Retriever::Bm25;
    MetricsRow metrics;
    int queries_modified = 0;
    long tokens_changed = 0;
    std::string run_file_path;
    std::string correction_log_path;
    uint64_t corrected_query_hash = 0;   // over the query strings fed to retrieval
    uint64_t corrected_corpus_hash = 0;  // over the passage texts behind the index
};

struct AnalysisRow {
    Method method = Method::Conservative;
    long total_corrections = 0;  // changed tokens across all queries with paraphrases
    long sampled = 0;
    std::map<CorrectionCategory, long> counts;
    std::map<CorrectionCategory, double> percentages;  // over the sample
};

/// Runs the condition grid over one dataset triple. Vocabulary, co-occurrence
/// statistics, the delete index, correction caches, and corrected-corpus
/// artifacts are built once and shared across cells. Retrieval experiments
/// run over the queries that have judgments.
class Experiment {
public:
    Experiment(Datasets datasets, std::string out_dir, int k = 20, uint64_t seed = 42,
               const ConfusablePairList* blacklist = nullptr, uint64_t vocab_min_freq = 2);

    CellResult run_cell(Retriever retriever, Condition condition, std::optional<Method> method);

    /// Exp2 per retriever plus exp3a/exp3b/exp4 for every method.
    std::vector<CellResult> run_grid();

    /// Seeded sample of <= cap changed-token records, categorized against the
    /// NIST paraphrases (queries without a paraphrase are excluded).
    AnalysisRow analyze(Method method, int cap = 100);

    /// Markdown + CSV report under out_dir; byte-deterministic.
    void emit_report(const std::vector<CellResult>& cells, const std::vector<AnalysisRow>& analyses);

    const Vocabulary& vocab() const { return vocab_; }
    const std::vector<QueryRecord>& eval_queries() const { return eval_queries_; }
    const Corrector& corrector(Method m);
    const std::vector<Passage>& corrected_corpus(Method m);
    int queries_modified(Method m);

private:
    struct QueryCorrection {
        std::string corrected_text;
        std::vector<TokenCorrection> records;
    };

    const std::vector<QueryCorrection>& corrected_queries(Method m);
    std::string cell_stem(Retriever r, Condition c, std::optional<Method> m) const;

    Datasets data_;
    std::string out_dir_;
    int k_;
    uint64_t seed_;
    const ConfusablePairList* blacklist_;
    std::vector<QueryRecord> eval_queries_;
    std::unordered_map<std::string, QueryJudgments> judgments_;
    Vocabulary vocab_;
    CooccurrenceIndex cooccur_;
    std::unique_ptr<DeleteIndex> delete_index_;
    std::map<Method, std::unique_ptr<Corrector>> correctors_;
    std::map<Method, std::vector<QueryCorrection>> query_corrections_;
    std::map<Method, std::vector<Passage>> corrected_corpora_;
    uint64_t original_corpus_hash_ = 0;
};

uint64_t content_hash(std::span<const std::string> items);

Datasets load_datasets(const std::string& queries_path, const std::string& passages_path,
                       const std::string& judgments_path);

}  // namespace qspell
