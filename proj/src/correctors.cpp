#include "qspell/correctors.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>

#include "qspell/editcore.hpp"
#include "qspell/errors.hpp"

namespace qspell {

std::string method_name(Method m) {
    switch (m) {
        case Method::Conservative: return "conservative";
        case Method::EditDistance: return "edit_distance";
        case Method::ContextAware: return "context_aware";
        case Method::SymSpell: return "symspell";
    }
    return "unknown";
}

std::optional<Method> parse_method(const std::string& name) {
    if (name == "conservative") return Method::Conservative;
    if (name == "edit_distance") return Method::EditDistance;
    if (name == "context_aware") return Method::ContextAware;
    if (name == "symspell") return Method::SymSpell;
    return std::nullopt;
}

std::string reason_name(Reason r) {
    switch (r) {
        case Reason::InVocab: return "in_vocab";
        case Reason::Numeric: return "numeric";
        case Reason::TooShort: return "too_short";
        case Reason::NoCandidate: return "no_candidate";
        case Reason::BlacklistBlocked: return "blacklist_blocked";
        case Reason::Corrected: return "corrected";
    }
    return "unknown";
}

CorrectorConfig CorrectorConfig::for_method(Method m) {
    CorrectorConfig c;
    c.method = m;
    switch (m) {
        case Method::Conservative:
            c.max_dist = 1;
            c.freq_threshold = 5;
            break;
        case Method::EditDistance:
        case Method::SymSpell:
            c.max_dist = 2;
            c.freq_threshold = 0;
            break;
        case Method::ContextAware:
            c.max_dist = 2;
            c.freq_threshold = 0;
            c.context_window = 2;
            break;
    }
    return c;
}

void ConfusablePairList::add(const std::string& a, const std::string& b) {
    pairs_.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
}

bool ConfusablePairList::blocks(const std::string& from, const std::string& to) const {
    return pairs_.count(from < to ? std::make_pair(from, to) : std::make_pair(to, from)) > 0;
}

ConfusablePairList ConfusablePairList::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open blacklist file: " + path);
    ConfusablePairList list;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": expected two tab-separated words");
        list.add(line.substr(0, tab), line.substr(tab + 1));
    }
    return list;
}

CooccurrenceIndex::CooccurrenceIndex(const std::vector<Passage>& passages) {
    for (int doc = 0; doc < static_cast<int>(passages.size()); ++doc) {
        std::set<std::string> seen;
        for (const auto& t : tokenize(passages[doc].text)) seen.insert(t.text);
        for (const auto& w : seen) postings_[w].push_back(doc);
    }
}

int CooccurrenceIndex::pair_count(const std::string& a, const std::string& b) const {
    auto ia = postings_.find(a);
    auto ib = postings_.find(b);
    if (ia == postings_.end() || ib == postings_.end()) return 0;
    const auto& pa = ia->second;
    const auto& pb = ib->second;
    int count = 0;
    size_t i = 0, j = 0;
    while (i < pa.size() && j < pb.size()) {
        if (pa[i] == pb[j]) {
            ++count;
            ++i;
            ++j;
        } else if (pa[i] < pb[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return count;
}

long context_score(const std::string& candidate, std::span<const std::string> context,
                   const CooccurrenceIndex& cooccur) {
    long score = 0;
    for (const auto& c : context) score += cooccur.pair_count(candidate, c);
    return score;
}

std::optional<TokenCorrection> CorrectionCache::get(const std::string& word) const {
    std::shared_lock lock(mu_);
    auto it = entries_.find(word);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void CorrectionCache::put(const std::string& word, const TokenCorrection& tc) {
    std::unique_lock lock(mu_);
    entries_.emplace(word, tc);  // first writer wins
}

size_t CorrectionCache::type_count() const {
    std::shared_lock lock(mu_);
    return entries_.size();
}

std::vector<std::pair<std::string, TokenCorrection>> CorrectionCache::snapshot() const {
    std::shared_lock lock(mu_);
    return {entries_.begin(), entries_.end()};
}

Corrector::Corrector(const Vocabulary& vocab, CorrectorConfig config,
                     const CooccurrenceIndex* cooccur, const DeleteIndex* index,
                     const ConfusablePairList* blacklist)
    : vocab_(vocab), config_(config), cooccur_(cooccur), index_(index), blacklist_(blacklist) {
    if (config_.method == Method::SymSpell && index_ == nullptr)
        throw ValidationError("symspell corrector requires a delete index");
    if (config_.method == Method::ContextAware && cooccur_ == nullptr)
        throw ValidationError("context_aware corrector requires a co-occurrence index");
}

std::vector<Candidate> Corrector::candidates_for(const std::string& token) const {
    if (config_.method == Method::SymSpell) return index_->lookup(token, vocab_, config_.max_dist);
    return closest_candidates(token, vocab_, config_.max_dist);
}

TokenCorrection Corrector::correct_token(const std::string& token,
                                         std::span<const std::string> context) const {
    TokenCorrection tc;
    tc.original = token;
    tc.corrected = token;
    if (vocab_.contains(token)) {
        tc.reason = Reason::InVocab;
        return tc;
    }
    if (token.find_first_of("0123456789") != std::string::npos) {
        tc.reason = Reason::Numeric;
        return tc;
    }
    if (config_.min_token_len > 0 && static_cast<int>(token.size()) < config_.min_token_len) {
        tc.reason = Reason::TooShort;
        return tc;
    }

    auto candidates = candidates_for(token);
    if (config_.freq_threshold > 0) {
        std::erase_if(candidates,
                      [&](const Candidate& c) { return c.frequency < config_.freq_threshold; });
    }
    if (candidates.empty()) {
        tc.reason = Reason::NoCandidate;
        return tc;
    }

    const Candidate* winner = &candidates.front();
    if (config_.method == Method::ContextAware && !context.empty()) {
        // Context only re-ranks the minimal-distance ties; never promotes a
        // farther candidate.
        int min_dist = candidates.front().distance;
        long best_score = -1;
        for (const auto& c : candidates) {
            if (c.distance != min_dist) break;
            long s = context_score(c.word, context, *cooccur_);
            if (s > best_score) {
                best_score = s;
                winner = &c;
            }
        }
    }

    if (blacklist_ && blacklist_->blocks(token, winner->word)) {
        tc.reason = Reason::BlacklistBlocked;
        return tc;
    }
    tc.corrected = winner->word;
    tc.changed = true;
    tc.distance = winner->distance;
    tc.candidate_freq = winner->frequency;
    tc.reason = Reason::Corrected;
    return tc;
}

TokenCorrection Corrector::correct_token_cached(const std::string& token,
                                                std::span<const std::string> context) const {
    if (auto hit = cache_.get(token)) return *hit;
    TokenCorrection tc = correct_token(token, context);
    cache_.put(token, tc);
    return tc;
}

std::pair<std::string, std::vector<TokenCorrection>> Corrector::correct_text(
    const std::string& text) const {
    auto tokens = tokenize(text);
    std::vector<std::string> words;
    words.reserve(tokens.size());
    for (const auto& t : tokens) words.push_back(t.text);

    std::vector<TokenCorrection> records;
    records.reserve(tokens.size());
    const int w = config_.context_window;
    for (size_t i = 0; i < tokens.size(); ++i) {
        std::span<const std::string> ctx;
        if (w > 0) {
            size_t lo = i >= static_cast<size_t>(w) ? i - w : 0;
            size_t hi = std::min(tokens.size(), i + w + 1);
            ctx = std::span<const std::string>(words).subspan(lo, hi - lo);
            // Context is the neighbours, not the token itself; correct_token
            // ignores self-matches implicitly since the token is OOV.
        }
        records.push_back(correct_token_cached(tokens[i].text, ctx));
    }

    std::string out;
    out.reserve(text.size());
    size_t pos = 0;
    for (size_t i = 0; i < tokens.size(); ++i) {
        out.append(text, pos, tokens[i].begin - pos);
        if (records[i].changed)
            out.append(records[i].corrected);
        else
            out.append(text, tokens[i].begin, tokens[i].end - tokens[i].begin);
        pos = tokens[i].end;
    }
    out.append(text, pos, text.size() - pos);
    return {std::move(out), std::move(records)};
}

void Corrector::build_cache(const std::set<std::string>& word_types) const {
    for (const auto& w : word_types) correct_token_cached(w);
}

std::set<std::string> collect_word_types(const std::vector<QueryRecord>& queries,
                                         const std::vector<Passage>& passages) {
    std::set<std::string> types;
    for (const auto& q : queries)
        for (const auto& t : tokenize(q.original_text)) types.insert(t.text);
    for (const auto& p : passages)
        for (const auto& t : tokenize(p.text)) types.insert(t.text);
    return types;
}

}  // namespace qspell
