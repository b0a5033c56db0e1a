#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "qspell/corpus.hpp"
#include "qspell/editcore.hpp"

namespace qspell {

/// Order-independent hash of a Vocabulary, embedded in serialized indexes so
/// a stale index cannot be loaded against a different vocabulary.
uint64_t vocabulary_fingerprint(const Vocabulary& vocab);

/// All strings reachable from word by deleting at most depth characters,
/// including word itself.
std::set<std::string> delete_variants(const std::string& word, int depth);

/// Inverted index of deletion variants to the vocabulary words that produce
/// them. Full-word deletes, no prefix truncation.
class DeleteIndex {
public:
    DeleteIndex() = default;

    static DeleteIndex build(const Vocabulary& vocab, int max_index_dist = 2);

    /// Words within true Levenshtein distance max_dist of token that are
    /// reachable through the delete-variant meet, verified by distance and
    /// ordered by candidate_less. Requires max_dist <= max_index_dist.
    std::vector<Candidate> lookup(const std::string& token, const Vocabulary& vocab,
                                  int max_dist, bool include_self = false) const;

    /// Diagnostic: vocabulary words within true distance max_dist that the
    /// delete-meet fails to reach (the lookup's blind spots).
    std::vector<std::string> delete_meet_misses(const std::string& token, const Vocabulary& vocab,
                                                int max_dist) const;

    int max_index_dist() const { return max_index_dist_; }
    uint64_t source_fingerprint() const { return fingerprint_; }
    size_t variant_count() const { return table_.size(); }

    void save(const std::string& path) const;
    /// Throws ValidationError if the stored fingerprint does not match vocab.
    static DeleteIndex load(const std::string& path, const Vocabulary& vocab);

private:
    std::unordered_map<std::string, std::vector<std::string>> table_;
    int max_index_dist_ = 2;
    uint64_t fingerprint_ = 0;
};

}  // namespace qspell
