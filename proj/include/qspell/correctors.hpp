#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qspell/corpus.hpp"
#include "qspell/symspell.hpp"

namespace qspell {

enum class Method { Conservative, EditDistance, ContextAware, SymSpell };

std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

struct CorrectorConfig {
    Method method = Method::Conservative;
    int max_dist = 1;
    uint64_t freq_threshold = 5;
    int context_window = 0;
    int min_token_len = 0;  // 0 disables the length gate

    /// The per-method parameterization used throughout the experiments:
    /// conservative = (dist 1, freq >= 5); edit_distance / symspell =
    /// (dist 2, no threshold); context_aware adds a +-2 token window.
    static CorrectorConfig for_method(Method m);
};

enum class Reason { InVocab, Numeric, TooShort, NoCandidate, BlacklistBlocked, Corrected };

std::string reason_name(Reason r);

struct TokenCorrection {
    std::string original;
    std::string corrected;
    bool changed = false;
    int distance = 0;
    uint64_t candidate_freq = 0;
    Reason reason = Reason::NoCandidate;
};

/// Symmetric set of word pairs that corrections must never cross
/// (hypertension/hypotension and friends). File format: two lowercase
/// words per line, tab separated.
class ConfusablePairList {
public:
    void add(const std::string& a, const std::string& b);
    bool blocks(const std::string& from, const std::string& to) const;
    size_t size() const { return pairs_.size(); }
    static ConfusablePairList load(const std::string& path);

private:
    std::set<std::pair<std::string, std::string>> pairs_;
};

/// Passage-level co-occurrence: postings of passage indices per word,
/// queried as "in how many passages do these two words both appear".
class CooccurrenceIndex {
public:
    CooccurrenceIndex() = default;
    explicit CooccurrenceIndex(const std::vector<Passage>& passages);
    int pair_count(const std::string& a, const std::string& b) const;

private:
    std::unordered_map<std::string, std::vector<int>> postings_;
};

/// Sum over context tokens of the number of passages where candidate and the
/// context token co-occur.
long context_score(const std::string& candidate, std::span<const std::string> context,
                   const CooccurrenceIndex& cooccur);

/// Memoized correction decisions, keyed by word type (one cache per method).
class CorrectionCache {
public:
    std::optional<TokenCorrection> get(const std::string& word) const;
    void put(const std::string& word, const TokenCorrection& tc);
    size_t type_count() const;
    /// Deterministic snapshot, sorted by word.
    std::vector<std::pair<std::string, TokenCorrection>> snapshot() const;

private:
    mutable std::shared_mutex mu_;
    std::map<std::string, TokenCorrection> entries_;
};

/// One correction policy bound to its vocabulary, co-occurrence source,
/// delete index (SymSpell only) and blacklist.
class Corrector {
public:
    Corrector(const Vocabulary& vocab, CorrectorConfig config,
              const CooccurrenceIndex* cooccur = nullptr, const DeleteIndex* index = nullptr,
              const ConfusablePairList* blacklist = nullptr);

    /// Uncached decision for one lowercase token with its +-window context.
    TokenCorrection correct_token(const std::string& token,
                                  std::span<const std::string> context = {}) const;

    /// Cached variant; the first-seen context wins for a given word type.
    TokenCorrection correct_token_cached(const std::string& token,
                                         std::span<const std::string> context = {}) const;

    /// Corrects each token independently using context from the original
    /// token sequence, then splices changed tokens back into their source
    /// byte spans. Unchanged bytes are preserved verbatim.
    std::pair<std::string, std::vector<TokenCorrection>> correct_text(const std::string& text) const;

    /// Warm the cache over a set of word types (no context).
    void build_cache(const std::set<std::string>& word_types) const;

    const CorrectionCache& cache() const { return cache_; }
    const CorrectorConfig& config() const { return config_; }

private:
    std::vector<Candidate> candidates_for(const std::string& token) const;

    const Vocabulary& vocab_;
    CorrectorConfig config_;
    const CooccurrenceIndex* cooccur_ = nullptr;
    const DeleteIndex* index_ = nullptr;
    const ConfusablePairList* blacklist_ = nullptr;
    mutable CorrectionCache cache_;
};

/// All unique word types across a query and passage collection (the
/// correction-cache universe).
std::set<std::string> collect_word_types(const std::vector<QueryRecord>& queries,
                                         const std::vector<Passage>& passages);

}  // namespace qspell
