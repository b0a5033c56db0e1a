#include "qspell/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "qspell/errors.hpp"
#include "qspell/symspell.hpp"

namespace fs = std::filesystem;

namespace qspell {

Condition Condition::from(ConditionId id) {
    switch (id) {
        case ConditionId::Exp2: return {id, false, false};
        case ConditionId::Exp3a: return {id, false, true};
        case ConditionId::Exp3b: return {id, true, false};
        case ConditionId::Exp4: return {id, true, true};
    }
    return {};
}

std::optional<Condition> Condition::parse(const std::string& name) {
    if (name == "exp2") return Condition::from(ConditionId::Exp2);
    if (name == "exp3a") return Condition::from(ConditionId::Exp3a);
    if (name == "exp3b") return Condition::from(ConditionId::Exp3b);
    if (name == "exp4") return Condition::from(ConditionId::Exp4);
    return std::nullopt;
}

std::string condition_name(ConditionId id) {
    switch (id) {
        case ConditionId::Exp2: return "exp2";
        case ConditionId::Exp3a: return "exp3a";
        case ConditionId::Exp3b: return "exp3b";
        case ConditionId::Exp4: return "exp4";
    }
    return "unknown";
}

std::string retriever_name(Retriever r) { return r == Retriever::Bm25 ? "bm25" : "tfidf"; }

std::optional<Retriever> parse_retriever(const std::string& name) {
    if (name == "bm25") return Retriever::Bm25;
    if (name == "tfidf") return Retriever::Tfidf;
    return std::nullopt;
}

std::string category_name(CorrectionCategory c) {
    switch (c) {
        case CorrectionCategory::CorrectFix: return "correct_fix";
        case CorrectionCategory::PartialImprovement: return "partial_improvement";
        case CorrectionCategory::UnnecessaryChange: return "unnecessary_change";
        case CorrectionCategory::HarmlessSynonym: return "harmless_synonym";
    }
    return "unknown";
}

CorrectionCategory categorize_correction(const TokenCorrection& tc,
                                         const std::set<std::string>& paraphrase_tokens) {
    if (!tc.changed)
        throw ValidationError("categorize_correction requires a changed TokenCorrection");
    const bool orig_in = paraphrase_tokens.count(tc.original) > 0;
    const bool corr_in = paraphrase_tokens.count(tc.corrected) > 0;
    if (corr_in && !orig_in) return CorrectionCategory::CorrectFix;
    if (orig_in && !corr_in) return CorrectionCategory::UnnecessaryChange;
    if (orig_in && corr_in) return CorrectionCategory::HarmlessSynonym;
    return CorrectionCategory::PartialImprovement;
}

uint64_t content_hash(std::span<const std::string> items) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& s : items) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0x1f;  // item separator
        h *= 0x100000001b3ULL;
    }
    return h;
}

Datasets load_datasets(const std::string& queries_path, const std::string& passages_path,
                       const std::string& judgments_path) {
    Datasets ds;
    ds.queries = load_queries(queries_path);
    ds.passages = load_passages(passages_path);
    ds.judgments = load_judgments(judgments_path);
    return ds;
}

Experiment::Experiment(Datasets datasets, std::string out_dir, int k, uint64_t seed,
                       const ConfusablePairList* blacklist, uint64_t vocab_min_freq)
    : data_(std::move(datasets)), out_dir_(std::move(out_dir)), k_(k), seed_(seed),
      blacklist_(blacklist) {
    if (data_.judgments.empty()) throw ValidationError("experiment requires judgments");
    if (k_ < 10) throw ValidationError("retrieval depth k must be at least 10");
    fs::create_directories(out_dir_);
    judgments_ = group_judgments(data_.judgments);

    // Retrieval runs over the queries that actually have judgments.
    for (const auto& q : data_.queries)
        if (judgments_.count(q.id)) eval_queries_.push_back(q);
    std::sort(eval_queries_.begin(), eval_queries_.end(),
              [](const QueryRecord& a, const QueryRecord& b) { return a.id < b.id; });

    vocab_ = build_vocabulary(data_.passages, vocab_min_freq);
    cooccur_ = CooccurrenceIndex(data_.passages);

    std::vector<std::string> texts;
    texts.reserve(data_.passages.size());
    for (const auto& p : data_.passages) texts.push_back(p.text);
    original_corpus_hash_ = content_hash(texts);
}

const Corrector& Experiment::corrector(Method m) {
    auto it = correctors_.find(m);
    if (it != correctors_.end()) return *it->second;
    if (m == Method::SymSpell && !delete_index_)
        delete_index_ = std::make_unique<DeleteIndex>(DeleteIndex::build(vocab_, 2));
    auto corr = std::make_unique<Corrector>(vocab_, CorrectorConfig::for_method(m), &cooccur_,
                                            delete_index_.get(), blacklist_);
    return *correctors_.emplace(m, std::move(corr)).first->second;
}

const std::vector<Experiment::QueryCorrection>& Experiment::corrected_queries(Method m) {
    auto it = query_corrections_.find(m);
    if (it != query_corrections_.end()) return it->second;
    const Corrector& corr = corrector(m);
    std::vector<QueryCorrection> out;
    out.reserve(eval_queries_.size());
    for (const auto& q : eval_queries_) {
        auto [text, records] = corr.correct_text(q.original_text);
        out.push_back({std::move(text), std::move(records)});
    }
    return query_corrections_.emplace(m, std::move(out)).first->second;
}

int Experiment::queries_modified(Method m) {
    const auto& qc = corrected_queries(m);
    int modified = 0;
    for (const auto& c : qc)
        if (std::any_of(c.records.begin(), c.records.end(),
                        [](const TokenCorrection& tc) { return tc.changed; }))
            ++modified;
    return modified;
}

const std::vector<Passage>& Experiment::corrected_corpus(Method m) {
    auto it = corrected_corpora_.find(m);
    if (it != corrected_corpora_.end()) return it->second;

    // Batch corpus correction dominates runtime; cache the artifact on disk
    // keyed by (method, original corpus hash).
    std::ostringstream key;
    key << "corpus_" << method_name(m) << "_" << std::hex << original_corpus_hash_ << ".jsonl";
    fs::path cache_dir = fs::path(out_dir_) / "cache";
    fs::create_directories(cache_dir);
    fs::path cache_path = cache_dir / key.str();
    if (fs::exists(cache_path)) {
        auto cached = load_passages(cache_path.string());
        if (cached.size() == data_.passages.size())
            return corrected_corpora_.emplace(m, std::move(cached)).first->second;
    }

    const Corrector& corr = corrector(m);
    std::vector<Passage> corrected;
    corrected.reserve(data_.passages.size());
    for (const auto& p : data_.passages) {
        auto [text, records] = corr.correct_text(p.text);
        corrected.push_back({p.id, std::move(text), p.source});
    }
    save_passages(cache_path.string(), corrected);
    return corrected_corpora_.emplace(m, std::move(corrected)).first->second;
}

std::string Experiment::cell_stem(Retriever r, Condition c, std::optional<Method> m) const {
    return condition_name(c.id) + "_" + (m ? method_name(*m) : "none") + "_" + retriever_name(r);
}

CellResult Experiment::run_cell(Retriever retriever, Condition condition,
                                std::optional<Method> method) {
    if ((condition.query_corrected || condition.corpus_corrected) && !method)
        throw ValidationError("condition " + condition_name(condition.id) +
                              " requires a correction method");
    if (judgments_.empty()) throw ValidationError("no judgments loaded");

    CellResult cell;
    cell.condition = condition.id;
    cell.method = method;
    cell.retriever = retriever;

    const std::vector<Passage>* corpus = &data_.passages;
    if (condition.corpus_corrected) corpus = &corrected_corpus(*method);
    {
        std::vector<std::string> texts;
        texts.reserve(corpus->size());
        for (const auto& p : *corpus) texts.push_back(p.text);
        cell.corrected_corpus_hash = content_hash(texts);
    }

    std::vector<std::pair<std::string, std::string>> query_texts;  // (id, text)
    const std::vector<QueryCorrection>* qc = nullptr;
    if (condition.query_corrected) {
        qc = &corrected_queries(*method);
        for (size_t i = 0; i < eval_queries_.size(); ++i)
            query_texts.emplace_back(eval_queries_[i].id, (*qc)[i].corrected_text);
    } else {
        for (const auto& q : eval_queries_) query_texts.emplace_back(q.id, q.original_text);
    }
    {
        std::vector<std::string> texts;
        texts.reserve(query_texts.size());
        for (const auto& [id, t] : query_texts) texts.push_back(t);
        cell.corrected_query_hash = content_hash(texts);
    }

    std::vector<RankedList> lists;
    lists.reserve(query_texts.size());
    if (retriever == Retriever::Bm25) {
        auto index = Bm25Index::build(*corpus);
        for (const auto& [id, text] : query_texts) lists.push_back(index.rank(id, text, k_));
    } else {
        auto index = TfidfIndex::build(*corpus);
        for (const auto& [id, text] : query_texts) lists.push_back(index.rank(id, text, k_));
    }
    cell.metrics = aggregate_metrics(lists, judgments_);

    const std::string stem = cell_stem(retriever, condition, method);
    cell.run_file_path = (fs::path(out_dir_) / ("run_" + stem + ".txt")).string();
    {
        std::ofstream out(cell.run_file_path);
        if (!out) throw RuntimeFailure("cannot write run file: " + cell.run_file_path);
        write_run_file(out, lists, stem);
    }

    cell.correction_log_path = (fs::path(out_dir_) / ("corrections_" + stem + ".jsonl")).string();
    {
        std::ofstream out(cell.correction_log_path);
        if (!out) throw RuntimeFailure("cannot write correction log: " + cell.correction_log_path);
        if (qc) {
            for (size_t i = 0; i < eval_queries_.size(); ++i) {
                for (const auto& tc : (*qc)[i].records) {
                    nlohmann::json j{{"query_id", eval_queries_[i].id},
                                     {"original", tc.original},
                                     {"corrected", tc.corrected},
                                     {"changed", tc.changed},
                                     {"distance", tc.distance},
                                     {"candidate_freq", tc.candidate_freq},
                                     {"reason", reason_name(tc.reason)}};
                    out << j.dump() << "\n";
                    if (tc.changed) ++cell.tokens_changed;
                }
            }
        }
    }
    if (condition.query_corrected) cell.queries_modified = queries_modified(*method);
    return cell;
}

std::vector<CellResult> Experiment::run_grid() {
    static const Method kMethods[] = {Method::Conservative, Method::EditDistance,
                                      Method::ContextAware, Method::SymSpell};
    static const ConditionId kCorrected[] = {ConditionId::Exp3a, ConditionId::Exp3b,
                                             ConditionId::Exp4};
    std::vector<CellResult> cells;
    for (Retriever r : {Retriever::Bm25, Retriever::Tfidf}) {
        cells.push_back(run_cell(r, Condition::from(ConditionId::Exp2), std::nullopt));
        for (ConditionId cid : kCorrected)
            for (Method m : kMethods) cells.push_back(run_cell(r, Condition::from(cid), m));
    }
    return cells;
}

AnalysisRow Experiment::analyze(Method method, int cap) {
    const auto& qc = corrected_queries(method);
    std::vector<std::pair<TokenCorrection, std::set<std::string>>> changed;
    for (size_t i = 0; i < eval_queries_.size(); ++i) {
        if (!eval_queries_[i].paraphrase_text) continue;
        auto para = tokenize_words(*eval_queries_[i].paraphrase_text);
        std::set<std::string> para_set(para.begin(), para.end());
        for (const auto& tc : qc[i].records)
            if (tc.changed) changed.emplace_back(tc, para_set);
    }

    AnalysisRow row;
    row.method = method;
    row.total_corrections = static_cast<long>(changed.size());

    std::vector<size_t> picked(changed.size());
    for (size_t i = 0; i < picked.size(); ++i) picked[i] = i;
    if (static_cast<long>(changed.size()) > cap) {
        std::mt19937_64 rng(seed_);
        std::shuffle(picked.begin(), picked.end(), rng);
        picked.resize(cap);
        std::sort(picked.begin(), picked.end());
    }
    row.sampled = static_cast<long>(picked.size());
    for (size_t idx : picked) ++row.counts[categorize_correction(changed[idx].first, changed[idx].second)];
    for (auto cat : {CorrectionCategory::CorrectFix, CorrectionCategory::PartialImprovement,
                     CorrectionCategory::UnnecessaryChange, CorrectionCategory::HarmlessSynonym}) {
        long n = row.counts.count(cat) ? row.counts[cat] : 0;
        row.counts[cat] = n;
        row.percentages[cat] = row.sampled > 0 ? 100.0 * n / row.sampled : 0.0;
    }
    return row;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

void Experiment::emit_report(const std::vector<CellResult>& cells,
                             const std::vector<AnalysisRow>& analyses) {
    if (cells.empty()) throw ValidationError("emit_report requires at least one completed cell");
    fs::path csv_path = fs::path(out_dir_) / "metrics.csv";
    {
        std::ofstream csv(csv_path);
        csv << "condition,method,retriever,mrr,recall_at_1,recall_at_5,recall_at_10,ndcg_at_10,"
               "n_queries,queries_modified,tokens_changed\n";
        for (const auto& c : cells) {
            csv << condition_name(c.condition) << ","
                << (c.method ? method_name(*c.method) : "none") << ","
                << retriever_name(c.retriever) << "," << fmt(c.metrics.mrr) << ","
                << fmt(c.metrics.recall_at_1) << "," << fmt(c.metrics.recall_at_5) << ","
                << fmt(c.metrics.recall_at_10) << "," << fmt(c.metrics.ndcg_at_10) << ","
                << c.metrics.n_queries << "," << c.queries_modified << "," << c.tokens_changed
                << "\n";
        }
    }

    fs::path md_path = fs::path(out_dir_) / "report.md";
    std::ofstream md(md_path);
    md << "# Retrieval results\n\n";
    for (Retriever r : {Retriever::Bm25, Retriever::Tfidf}) {
        md << "## " << (r == Retriever::Bm25 ? "BM25" : "TF-IDF cosine") << "\n\n";
        md << "| Condition | Method | MRR | R@1 | R@5 | R@10 | NDCG@10 |\n";
        md << "|---|---|---|---|---|---|---|\n";
        for (const auto& c : cells) {
            if (c.retriever != r) continue;
            md << "| " << condition_name(c.condition) << " | "
               << (c.method ? method_name(*c.method) : "---") << " | " << fmt(c.metrics.mrr)
               << " | " << fmt(c.metrics.recall_at_1) << " | " << fmt(c.metrics.recall_at_5)
               << " | " << fmt(c.metrics.recall_at_10) << " | " << fmt(c.metrics.ndcg_at_10)
               << " |\n";
        }
        md << "\n";
    }
    if (!analyses.empty()) {
        fs::path acsv_path = fs::path(out_dir_) / "analysis.csv";
        std::ofstream acsv(acsv_path);
        acsv << "method,total_corrections,sampled,correct_fix_pct,partial_improvement_pct,"
                "unnecessary_change_pct,harmless_synonym_pct\n";
        md << "# Correction outcome analysis\n\n";
        md << "| Method | Total | Sampled | correct_fix % | partial_improvement % | "
              "unnecessary_change % | harmless_synonym % |\n";
        md << "|---|---|---|---|---|---|---|\n";
        for (const auto& a : analyses) {
            auto pct = [&](CorrectionCategory cat) { return fmt(a.percentages.at(cat)); };
            acsv << method_name(a.method) << "," << a.total_corrections << "," << a.sampled << ","
                 << pct(CorrectionCategory::CorrectFix) << ","
                 << pct(CorrectionCategory::PartialImprovement) << ","
                 << pct(CorrectionCategory::UnnecessaryChange) << ","
                 << pct(CorrectionCategory::HarmlessSynonym) << "\n";
            md << "| " << method_name(a.method) << " | " << a.total_corrections << " | "
               << a.sampled << " | " << pct(CorrectionCategory::CorrectFix) << " | "
               << pct(CorrectionCategory::PartialImprovement) << " | "
               << pct(CorrectionCategory::UnnecessaryChange) << " | "
               << pct(CorrectionCategory::HarmlessSynonym) << " |\n";
        }
    }
}

}  // namespace qspell
