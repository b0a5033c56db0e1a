#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qspell {

struct QueryRecord {
    std::string id;
    std::string original_text;
    std::optional<std::string> paraphrase_text;
    std::optional<std::string> summary;
};

struct Passage {
    std::string id;
    std::string text;
    std::optional<std::string> source;
};

struct Judgment {
    std::string query_id;
    std::string passage_id;
    int grade = 1;  // 1 Incorrect, 2 Related, 3 Incomplete, 4 Excellent
};

/// One token from the shared tokenizer. `begin`/`end` are byte offsets into
/// the source string so corrected tokens can be spliced back in place.
struct Token {
    std::string text;  // lowercased
    size_t begin = 0;
    size_t end = 0;
    bool numeric = false;  // contains an ASCII digit; correctors never touch these
};

/// Lowercase, split on anything that is not a letter or digit. Hyphens and
/// apostrophes split. Non-ASCII letters are kept as letters (input assumed NFC).
std::vector<Token> tokenize(std::string_view text);

/// Token texts only, in order.
std::vector<std::string> tokenize_words(std::string_view text);

/// Word -> corpus frequency, floored at min_freq.
class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::unordered_map<std::string, uint64_t> entries, uint64_t min_freq);

    bool contains(const std::string& word) const { return entries_.count(word) > 0; }
    uint64_t frequency(const std::string& word) const {
        auto it = entries_.find(word);
        return it == entries_.end() ? 0 : it->second;
    }
    size_t total_types() const { return entries_.size(); }
    uint64_t min_freq() const { return min_freq_; }
    const std::unordered_map<std::string, uint64_t>& entries() const { return entries_; }

    /// Entries sorted by word, for deterministic serialization and hashing.
    std::vector<std::pair<std::string, uint64_t>> sorted_entries() const;

private:
    std::unordered_map<std::string, uint64_t> entries_;
    uint64_t min_freq_ = 1;
};

Vocabulary build_vocabulary(const std::vector<Passage>& passages, uint64_t min_freq);

// Canonical JSONL datasets. Throws ValidationError naming the line and field
// on malformed input, and the offending id on duplicates.
std::vector<QueryRecord> load_queries(const std::string& path);
std::vector<Passage> load_passages(const std::string& path);
std::vector<Judgment> load_judgments(const std::string& path);

void save_queries(const std::string& path, const std::vector<QueryRecord>& queries);
void save_passages(const std::string& path, const std::vector<Passage>& passages);
void save_judgments(const std::string& path, const std::vector<Judgment>& judgments);

}  // namespace qspell
