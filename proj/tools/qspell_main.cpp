// qspell: measure and repair spelling noise in user queries against an
// answer corpus, then evaluate the retrieval impact.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qspell/census.hpp"
#include "qspell/correctors.hpp"
#include "qspell/corpus.hpp"
#include "qspell/errors.hpp"
#include "qspell/harness.hpp"
#include "qspell/symspell.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qspell;

namespace {

struct CommonOpts {
    std::string queries, passages, judgments;
    std::string method = "edit_distance";
    std::string retriever = "bm25";
    std::string condition = "exp2";
    std::string blacklist;
    std::string out = "out";
    int k = 20;
    uint64_t seed = 42;
    uint64_t min_freq = 2;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool need_queries, bool need_passages,
                bool need_judgments) {
    auto* q = cmd->add_option("--queries", o.queries, "queries.jsonl path")->envname("QSPELL_QUERIES");
    auto* p = cmd->add_option("--passages", o.passages, "passages.jsonl path")->envname("QSPELL_PASSAGES");
    auto* j = cmd->add_option("--judgments", o.judgments, "judgments.jsonl path")->envname("QSPELL_JUDGMENTS");
    if (need_queries) q->required();
    if (need_passages) p->required();
    if (need_judgments) j->required();
    cmd->add_option("--out", o.out, "output directory")->envname("QSPELL_OUT");
    cmd->add_option("--seed", o.seed, "random seed")->envname("QSPELL_SEED");
    cmd->add_option("--blacklist", o.blacklist, "confusable-pair blacklist file")
        ->envname("QSPELL_BLACKLIST");
    cmd->add_option("--min-freq", o.min_freq, "vocabulary minimum frequency")
        ->envname("QSPELL_MIN_FREQ");
}

Method require_method(const std::string& name) {
    auto m = parse_method(name);
    if (!m) throw ValidationError("unknown method: " + name);
    return *m;
}

std::optional<ConfusablePairList> maybe_blacklist(const CommonOpts& o) {
    if (o.blacklist.empty()) return std::nullopt;
    return ConfusablePairList::load(o.blacklist);
}

json census_to_json(const ErrorCensus& c) {
    json breakdown = json::object();
    for (const auto& [type, count] : c.type_breakdown) {
        breakdown[error_type_name(type)] = {
            {"count", count},
            {"pct_of_flags", c.oov_flags > 0 ? 100.0 * count / c.oov_flags : 0.0}};
    }
    return {{"total_queries", c.total_queries},
            {"queries_with_errors", c.queries_with_errors},
            {"query_error_rate", c.query_error_rate},
            {"token_error_rate", c.token_error_rate},
            {"avg_errors_per_query", c.avg_errors_per_query},
            {"avg_errors_per_affected_query", c.avg_errors_per_affected_query},
            {"total_tokens", c.total_tokens},
            {"confirmed_errors", c.confirmed_errors},
            {"oov_flags", c.oov_flags},
            {"unmatched_flags", c.unmatched_flags},
            {"unmatched_share", c.unmatched_share},
            {"yield_ratio", c.yield_ratio},
            {"error_type_breakdown", breakdown}};
}

int cmd_census(const CommonOpts& o, const std::string& unpaired_path) {
    auto queries = load_queries(o.queries);
    auto passages = load_passages(o.passages);
    auto vocab = build_vocabulary(passages, o.min_freq);

    std::vector<QueryRecord> paired;
    for (const auto& q : queries)
        if (q.paraphrase_text) paired.push_back(q);
    if (paired.empty()) throw ValidationError("census: no queries with paraphrases");

    fs::create_directories(o.out);
    {
        std::ofstream labels_out(fs::path(o.out) / "error_labels.jsonl");
        for (const auto& q : paired) {
            for (const auto& l : detect_errors(q, vocab)) {
                json j{{"query_id", l.query_id},
                       {"token", l.token},
                       {"closest_paraphrase_word",
                        l.closest_paraphrase_word ? json(*l.closest_paraphrase_word) : json(nullptr)},
                       {"distance", l.distance ? json(*l.distance) : json(nullptr)},
                       {"error_type", error_type_name(l.error_type)}};
                labels_out << j.dump() << "\n";
            }
        }
    }

    auto c = run_census(paired, vocab);
    json report = census_to_json(c);
    report["vocabulary_types"] = vocab.total_types();

    if (!unpaired_path.empty()) {
        auto unpaired = load_queries(unpaired_path);
        double rate = oov_rate(unpaired, vocab);
        auto est = calibrate(rate, c.yield_ratio);
        report["unpaired"] = {{"total_queries", unpaired.size()},
                              {"oov_rate", est.oov_rate},
                              {"yield_ratio", est.yield_ratio},
                              {"estimated_error_rate", est.estimated_error_rate}};
    }

    std::ofstream out(fs::path(o.out) / "census.json");
    out << report.dump(2) << "\n";
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_build_vocab(const CommonOpts& o) {
    auto passages = load_passages(o.passages);
    auto vocab = build_vocabulary(passages, o.min_freq);
    fs::create_directories(o.out);
    std::ofstream out(fs::path(o.out) / "vocabulary.json");
    json j;
    j["min_freq"] = vocab.min_freq();
    j["total_types"] = vocab.total_types();
    j["fingerprint"] = vocabulary_fingerprint(vocab);
    json entries = json::object();
    for (const auto& [w, f] : vocab.sorted_entries()) entries[w] = f;
    j["entries"] = entries;
    out << j.dump() << "\n";
    std::cout << "vocabulary: " << vocab.total_types() << " types (min_freq " << vocab.min_freq()
              << ")\n";
    return 0;
}

int cmd_index(const CommonOpts& o) {
    auto passages = load_passages(o.passages);
    auto vocab = build_vocabulary(passages, o.min_freq);
    auto index = DeleteIndex::build(vocab, 2);
    fs::create_directories(o.out);
    auto path = (fs::path(o.out) / "delete_index.json").string();
    index.save(path);
    std::cout << "delete index: " << index.variant_count() << " variants -> " << path << "\n";
    return 0;
}

int cmd_correct(const CommonOpts& o) {
    auto queries = load_queries(o.queries);
    auto passages = load_passages(o.passages);
    auto vocab = build_vocabulary(passages, o.min_freq);
    Method method = require_method(o.method);
    auto blacklist = maybe_blacklist(o);

    CooccurrenceIndex cooccur(passages);
    std::unique_ptr<DeleteIndex> index;
    if (method == Method::SymSpell)
        index = std::make_unique<DeleteIndex>(DeleteIndex::build(vocab, 2));
    Corrector corrector(vocab, CorrectorConfig::for_method(method), &cooccur, index.get(),
                        blacklist ? &*blacklist : nullptr);

    fs::create_directories(o.out);
    std::ofstream corrected_out(fs::path(o.out) / "corrected_queries.jsonl");
    std::ofstream log_out(fs::path(o.out) / "correction_log.jsonl");
    int modified = 0;
    for (const auto& q : queries) {
        auto [text, records] = corrector.correct_text(q.original_text);
        bool any = false;
        for (const auto& tc : records) {
            json j{{"query_id", q.id},        {"original", tc.original},
                   {"corrected", tc.corrected}, {"changed", tc.changed},
                   {"distance", tc.distance},   {"candidate_freq", tc.candidate_freq},
                   {"reason", reason_name(tc.reason)}};
            log_out << j.dump() << "\n";
            any |= tc.changed;
        }
        if (any) ++modified;
        json j{{"id", q.id},
               {"original", q.original_text},
               {"corrected", text},
               {"modified", any}};
        corrected_out << j.dump() << "\n";
    }
    std::cout << method_name(method) << ": modified " << modified << "/" << queries.size()
              << " queries\n";
    return 0;
}

int cmd_run(const CommonOpts& o) {
    auto cond = Condition::parse(o.condition);
    if (!cond) throw ValidationError("unknown condition: " + o.condition);
    auto retr = parse_retriever(o.retriever);
    if (!retr) throw ValidationError("unknown retriever: " + o.retriever);
    std::optional<Method> method;
    if (cond->query_corrected || cond->corpus_corrected) method = require_method(o.method);

    auto blacklist = maybe_blacklist(o);
    Experiment exp(load_datasets(o.queries, o.passages, o.judgments), o.out, o.k, o.seed,
                   blacklist ? &*blacklist : nullptr, o.min_freq);
    auto cell = exp.run_cell(*retr, *cond, method);
    exp.emit_report({cell}, {});
    std::cout << condition_name(cell.condition) << " " << (method ? method_name(*method) : "none")
              << " " << retriever_name(*retr) << ": MRR " << cell.metrics.mrr << " NDCG@10 "
              << cell.metrics.ndcg_at_10 << "\n";
    return 0;
}

int cmd_grid(const CommonOpts& o) {
    auto blacklist = maybe_blacklist(o);
    Experiment exp(load_datasets(o.queries, o.passages, o.judgments), o.out, o.k, o.seed,
                   blacklist ? &*blacklist : nullptr, o.min_freq);
    auto cells = exp.run_grid();
    std::vector<AnalysisRow> analyses;
    for (Method m : {Method::Conservative, Method::EditDistance, Method::ContextAware,
                     Method::SymSpell})
        analyses.push_back(exp.analyze(m));
    exp.emit_report(cells, analyses);
    std::cout << "grid complete: " << cells.size() << " cells -> " << o.out << "\n";
    return 0;
}

int cmd_analyze(const CommonOpts& o) {
    auto blacklist = maybe_blacklist(o);
    Experiment exp(load_datasets(o.queries, o.passages, o.judgments), o.out, o.k, o.seed,
                   blacklist ? &*blacklist : nullptr, o.min_freq);
    auto row = exp.analyze(require_method(o.method));
    json j{{"method", method_name(row.method)},
           {"total_corrections", row.total_corrections},
           {"sampled", row.sampled}};
    for (const auto& [cat, pct] : row.percentages) j[category_name(cat) + "_pct"] = pct;
    std::cout << j.dump(2) << "\n";
    return 0;
}

// Re-renders report.md from a previously written metrics.csv/analysis.csv.
int cmd_report(const std::string& dir) {
    fs::path csv_path = fs::path(dir) / "metrics.csv";
    std::ifstream csv(csv_path);
    if (!csv) throw ValidationError("no metrics.csv under " + dir + "; run 'grid' or 'run' first");
    std::string line;
    std::getline(csv, line);  // header
    std::ofstream md(fs::path(dir) / "report.md");
    md << "# Retrieval results\n\n";
    md << "| Condition | Method | Retriever | MRR | R@1 | R@5 | R@10 | NDCG@10 |\n";
    md << "|---|---|---|---|---|---|---|---|\n";
    while (std::getline(csv, line)) {
        std::stringstream ss(line);
        std::vector<std::string> f;
        std::string field;
        while (std::getline(ss, field, ',')) f.push_back(field);
        if (f.size() < 8) continue;
        md << "| " << f[0] << " | " << f[1] << " | " << f[2] << " | " << f[3] << " | " << f[4]
           << " | " << f[5] << " | " << f[6] << " | " << f[7] << " |\n";
    }
    std::cout << "wrote " << (fs::path(dir) / "report.md").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spelling-noise census, correction, and retrieval evaluation"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string unpaired;
    std::string report_dir = "out";

    auto* census_cmd = app.add_subcommand("census", "paraphrase-grounded error census");
    add_common(census_cmd, o, true, true, false);
    census_cmd->add_option("--unpaired-queries", unpaired,
                           "queries without paraphrases for OOV calibration");

    auto* vocab_cmd = app.add_subcommand("build-vocab", "build the domain vocabulary");
    add_common(vocab_cmd, o, false, true, false);

    auto* index_cmd = app.add_subcommand("index", "build and save the delete-variant index");
    add_common(index_cmd, o, false, true, false);

    auto* correct_cmd = app.add_subcommand("correct", "correct query texts with one method");
    add_common(correct_cmd, o, true, true, false);
    correct_cmd->add_option("--method", o.method, "correction method")->envname("QSPELL_METHOD");

    auto* run_cmd = app.add_subcommand("run", "run one experiment cell");
    add_common(run_cmd, o, true, true, true);
    run_cmd->add_option("--method", o.method, "correction method")->envname("QSPELL_METHOD");
    run_cmd->add_option("--retriever", o.retriever, "bm25 | tfidf")->envname("QSPELL_RETRIEVER");
    run_cmd->add_option("--condition", o.condition, "exp2 | exp3a | exp3b | exp4")
        ->envname("QSPELL_CONDITION");
    run_cmd->add_option("--k", o.k, "retrieval depth")->envname("QSPELL_K");

    auto* grid_cmd = app.add_subcommand("grid", "run the full condition/method/retriever grid");
    add_common(grid_cmd, o, true, true, true);
    grid_cmd->add_option("--k", o.k, "retrieval depth")->envname("QSPELL_K");

    auto* analyze_cmd = app.add_subcommand("analyze", "categorize a method's corrections");
    add_common(analyze_cmd, o, true, true, true);
    analyze_cmd->add_option("--method", o.method, "correction method")->envname("QSPELL_METHOD");

    auto* report_cmd = app.add_subcommand("report", "re-render report.md from metrics.csv");
    report_cmd->add_option("--out", report_dir, "directory holding metrics.csv")
        ->envname("QSPELL_OUT");

    CLI11_PARSE(app, argc, argv);

    try {
        if (census_cmd->parsed()) return cmd_census(o, unpaired);
        if (vocab_cmd->parsed()) return cmd_build_vocab(o);
        if (index_cmd->parsed()) return cmd_index(o);
        if (correct_cmd->parsed()) return cmd_correct(o);
        if (run_cmd->parsed()) return cmd_run(o);
        if (grid_cmd->parsed()) return cmd_grid(o);
        if (analyze_cmd->parsed()) return cmd_analyze(o);
        if (report_cmd->parsed()) return cmd_report(report_dir);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
