#include "qspell/symspell.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "json.hpp"
#include "qspell/errors.hpp"

namespace qspell {

namespace {

uint64_t fnv1a(std::string_view s, uint64_t h) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void collect_deletes(const std::string& word, int depth, std::set<std::string>& out) {
    out.insert(word);
    if (depth == 0 || word.empty()) return;
    std::string shorter;
    shorter.reserve(word.size() - 1);
    for (size_t i = 0; i < word.size(); ++i) {
        shorter.assign(word);
        shorter.erase(i, 1);
        collect_deletes(shorter, depth - 1, out);
    }
}

}  // namespace

uint64_t vocabulary_fingerprint(const Vocabulary& vocab) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& [word, freq] : vocab.sorted_entries()) {
        h = fnv1a(word, h);
        h ^= freq;
        h *= 0x100000001b3ULL;
    }
    h ^= vocab.min_freq();
    return h;
}

std::set<std::string> delete_variants(const std::string& word, int depth) {
    std::set<std::string> out;
    collect_deletes(word, depth, out);
    return out;
}

DeleteIndex DeleteIndex::build(const Vocabulary& vocab, int max_index_dist) {
    DeleteIndex idx;
    idx.max_index_dist_ = max_index_dist;
    idx.fingerprint_ = vocabulary_fingerprint(vocab);
    for (const auto& [word, freq] : vocab.entries()) {
        (void)freq;
        for (const auto& v : delete_variants(word, max_index_dist)) idx.table_[v].push_back(word);
    }
    for (auto& [v, words] : idx.table_) {
        std::sort(words.begin(), words.end());
        words.erase(std::unique(words.begin(), words.end()), words.end());
    }
    return idx;
}

std::vector<Candidate> DeleteIndex::lookup(const std::string& token, const Vocabulary& vocab,
                                           int max_dist, bool include_self) const {
    std::unordered_set<std::string> seen;
    std::vector<Candidate> out;
    // Token deletes only to depth max_dist, not index depth.
    for (const auto& v : delete_variants(token, max_dist)) {
        auto it = table_.find(v);
        if (it == table_.end()) continue;
        for (const auto& word : it->second) {
            if (!seen.insert(word).second) continue;
            if (!include_self && word == token) continue;
            int d = levenshtein_bounded(token, word, max_dist);
            if (d <= max_dist) out.push_back({word, d, vocab.frequency(word)});
        }
    }
    std::sort(out.begin(), out.end(), candidate_less);
    return out;
}

std::vector<std::string> DeleteIndex::delete_meet_misses(const std::string& token,
                                                         const Vocabulary& vocab,
                                                         int max_dist) const {
    auto reached = lookup(token, vocab, max_dist, /*include_self=*/true);
    std::unordered_set<std::string> reached_set;
    for (const auto& c : reached) reached_set.insert(c.word);
    std::vector<std::string> misses;
    for (const auto& c : closest_candidates(token, vocab, max_dist, /*include_self=*/true))
        if (reached_set.count(c.word) == 0) misses.push_back(c.word);
    std::sort(misses.begin(), misses.end());
    return misses;
}

void DeleteIndex::save(const std::string& path) const {
    nlohmann::json j;
    j["max_index_dist"] = max_index_dist_;
    j["fingerprint"] = fingerprint_;
    auto& table = j["table"] = nlohmann::json::object();
    for (const auto& [v, words] : table_) table[v] = words;
    std::ofstream out(path);
    if (!out) throw RuntimeFailure("cannot write index file: " + path);
    out << j.dump();
}

DeleteIndex DeleteIndex::load(const std::string& path, const Vocabulary& vocab) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open index file: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ValidationError("malformed index file: " + path);
    DeleteIndex idx;
    idx.max_index_dist_ = j.at("max_index_dist").get<int>();
    idx.fingerprint_ = j.at("fingerprint").get<uint64_t>();
    if (idx.fingerprint_ != vocabulary_fingerprint(vocab))
        throw ValidationError("index file " + path + " was built from a different vocabulary");
    for (const auto& [v, words] : j.at("table").items())
        idx.table_[v] = words.get<std::vector<std::string>>();
    return idx;
}

}  // namespace qspell
