#include "qspell/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "json.hpp"
#include "qspell/errors.hpp"

namespace qspell {

namespace {

// Minimal UTF-8 decode: returns codepoint and advances i. Invalid bytes are
// treated as single-byte separators.
uint32_t decode_utf8(std::string_view s, size_t& i) {
    unsigned char c = s[i];
    if (c < 0x80) {
        ++i;
        return c;
    }
    size_t len = (c >= 0xF0) ? 4 : (c >= 0xE0) ? 3 : (c >= 0xC0) ? 2 : 1;
    if (len == 1 || i + len > s.size()) {
        ++i;
        return 0xFFFD;
    }
    uint32_t cp = c & (0x7F >> len);
    for (size_t k = 1; k < len; ++k) {
        unsigned char cc = s[i + k];
        if ((cc & 0xC0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (cc & 0x3F);
    }
    i += len;
    return cp;
}

bool is_token_char(uint32_t cp, bool& is_digit) {
    if (cp < 0x80) {
        if (cp >= '0' && cp <= '9') {
            is_digit = true;
            return true;
        }
        return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    }
    // Non-ASCII: letters only. General punctuation and the Latin-1 symbol
    // ranges split; everything else above 0xBF is treated as a letter.
    if (cp >= 0x2000 && cp <= 0x206F) return false;
    if (cp >= 0xA0 && cp <= 0xBF) return false;
    if (cp == 0xD7 || cp == 0xF7) return false;
    return cp >= 0xC0;
}

void append_lower(std::string& out, uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp >= 'A' && cp <= 'Z' ? cp + 32 : cp));
        return;
    }
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) cp += 0x20;  // Latin-1 fold
    // Re-encode UTF-8.
    if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    Token cur;
    bool in_token = false;
    size_t i = 0;
    while (i < text.size()) {
        size_t start = i;
        uint32_t cp = decode_utf8(text, i);
        bool digit = false;
        if (is_token_char(cp, digit)) {
            if (!in_token) {
                cur = Token{};
                cur.begin = start;
                in_token = true;
            }
            append_lower(cur.text, cp);
            cur.numeric |= digit;
            cur.end = i;
        } else if (in_token) {
            out.push_back(std::move(cur));
            in_token = false;
        }
    }
    if (in_token) out.push_back(std::move(cur));
    return out;
}

std::vector<std::string> tokenize_words(std::string_view text) {
    std::vector<std::string> out;
    for (auto& t : tokenize(text)) out.push_back(std::move(t.text));
    return out;
}

Vocabulary::Vocabulary(std::unordered_map<std::string, uint64_t> entries, uint64_t min_freq)
    : entries_(std::move(entries)), min_freq_(min_freq) {}

std::vector<std::pair<std::string, uint64_t>> Vocabulary::sorted_entries() const {
    std::vector<std::pair<std::string, uint64_t>> v(entries_.begin(), entries_.end());
    std::sort(v.begin(), v.end());
    return v;
}

Vocabulary build_vocabulary(const std::vector<Passage>& passages, uint64_t min_freq) {
    std::unordered_map<std::string, uint64_t> counts;
    for (const auto& p : passages)
        for (const auto& t : tokenize(p.text)) ++counts[t.text];
    std::unordered_map<std::string, uint64_t> kept;
    for (auto& [w, c] : counts)
        if (c >= min_freq) kept.emplace(w, c);
    return Vocabulary(std::move(kept), min_freq);
}

namespace {

using nlohmann::json;

json parse_line(const std::string& line, const std::string& path, size_t lineno) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw ValidationError(path + ":" + std::to_string(lineno) + ": malformed JSON record");
    return j;
}

std::string require_string(const json& j, const char* field, const std::string& path, size_t lineno) {
    auto it = j.find(field);
    if (it == j.end() || !it->is_string() || it->get<std::string>().empty())
        throw ValidationError(path + ":" + std::to_string(lineno) + ": field '" + field +
                              "' missing, not a string, or empty");
    return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* field, const std::string& path,
                                           size_t lineno) {
    auto it = j.find(field);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string())
        throw ValidationError(path + ":" + std::to_string(lineno) + ": field '" + field +
                              "' must be a string or null");
    return it->get<std::string>();
}

template <typename Fn>
void for_each_line(const std::string& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        fn(line, lineno);
    }
}

}  // namespace

std::vector<QueryRecord> load_queries(const std::string& path) {
    std::vector<QueryRecord> out;
    std::unordered_set<std::string> ids;
    for_each_line(path, [&](const std::string& line, size_t lineno) {
        json j = parse_line(line, path, lineno);
        QueryRecord q;
        q.id = require_string(j, "id", path, lineno);
        q.original_text = require_string(j, "original", path, lineno);
        q.paraphrase_text = optional_string(j, "paraphrase", path, lineno);
        q.summary = optional_string(j, "summary", path, lineno);
        if (!ids.insert(q.id).second)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": duplicate query id '" + q.id + "'");
        out.push_back(std::move(q));
    });
    return out;
}

std::vector<Passage> load_passages(const std::string& path) {
    std::vector<Passage> out;
    std::unordered_set<std::string> ids;
    for_each_line(path, [&](const std::string& line, size_t lineno) {
        json j = parse_line(line, path, lineno);
        Passage p;
        p.id = require_string(j, "id", path, lineno);
        p.text = require_string(j, "text", path, lineno);
        p.source = optional_string(j, "source", path, lineno);
        if (!ids.insert(p.id).second)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": duplicate passage id '" + p.id + "'");
        out.push_back(std::move(p));
    });
    return out;
}

std::vector<Judgment> load_judgments(const std::string& path) {
    std::vector<Judgment> out;
    std::unordered_set<std::string> keys;
    for_each_line(path, [&](const std::string& line, size_t lineno) {
        json j = parse_line(line, path, lineno);
        Judgment g;
        g.query_id = require_string(j, "query_id", path, lineno);
        g.passage_id = require_string(j, "passage_id", path, lineno);
        auto it = j.find("grade");
        if (it == j.end() || !it->is_number_integer())
            throw ValidationError(path + ":" + std::to_string(lineno) + ": field 'grade' missing or not an integer");
        g.grade = it->get<int>();
        if (g.grade < 1 || g.grade > 4)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": field 'grade' must be in 1..4, got " +
                                  std::to_string(g.grade));
        if (!keys.insert(g.query_id + "\t" + g.passage_id).second)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": duplicate judgment for (" + g.query_id +
                                  ", " + g.passage_id + ")");
        out.push_back(std::move(g));
    });
    return out;
}

namespace {

void write_lines(const std::string& path, const std::vector<json>& records) {
    std::ofstream out(path);
    if (!out) throw RuntimeFailure("cannot write file: " + path);
    for (const auto& j : records) out << j.dump() << "\n";
}

json opt_json(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

}  // namespace

void save_queries(const std::string& path, const std::vector<QueryRecord>& queries) {
    std::vector<json> records;
    for (const auto& q : queries)
        records.push_back({{"id", q.id},
                           {"original", q.original_text},
                           {"paraphrase", opt_json(q.paraphrase_text)},
                           {"summary", opt_json(q.summary)}});
    write_lines(path, records);
}

void save_passages(const std::string& path, const std::vector<Passage>& passages) {
    std::vector<json> records;
    for (const auto& p : passages)
        records.push_back({{"id", p.id}, {"text", p.text}, {"source", opt_json(p.source)}});
    write_lines(path, records);
}

void save_judgments(const std::string& path, const std::vector<Judgment>& judgments) {
    std::vector<json> records;
    for (const auto& g : judgments)
        records.push_back({{"query_id", g.query_id}, {"passage_id", g.passage_id}, {"grade", g.grade}});
    write_lines(path, records);
}

}  // namespace qspell
