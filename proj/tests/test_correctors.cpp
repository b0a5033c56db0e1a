#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "qspell/correctors.hpp"
#include "qspell/editcore.hpp"
#include "qspell/errors.hpp"

using namespace qspell;

namespace {

std::string random_word(std::mt19937& rng, int min_len, int max_len) {
    std::uniform_int_distribution<int> len(min_len, max_len);
    std::uniform_int_distribution<int> letter('a', 'f');
    std::string w;
    int n = len(rng);
    for (int i = 0; i < n; ++i) w.push_back(static_cast<char>(letter(rng)));
    return w;
}

}  // namespace

TEST_CASE("config invariants per method") {
    auto c = CorrectorConfig::for_method(Method::Conservative);
    CHECK(c.max_dist == 1);
    CHECK(c.freq_threshold == 5);

    auto e = CorrectorConfig::for_method(Method::EditDistance);
    CHECK(e.max_dist == 2);
    CHECK(e.freq_threshold == 0);

    auto x = CorrectorConfig::for_method(Method::ContextAware);
    CHECK(x.max_dist == 2);
    CHECK(x.freq_threshold == 0);
    CHECK(x.context_window == 2);
}

TEST_CASE("conservative accepts a frequent distance-1 candidate") {
    Vocabulary vocab({{"hydralazine", 12}, {"pressure", 30}}, 2);
    Corrector corr(vocab, CorrectorConfig::for_method(Method::Conservative));
    auto tc = corr.correct_token("hydrslazine");
    CHECK(tc.changed);
    CHECK(tc.corrected == "hydralazine");
    CHECK(tc.distance == 1);
    CHECK(tc.reason == Reason::Corrected);
}

TEST_CASE("conservative rejects low-frequency and distance-2 candidates") {
    Vocabulary vocab({{"hydralazine", 4}}, 2);
    Corrector corr(vocab, CorrectorConfig::for_method(Method::Conservative));
    auto tc = corr.correct_token("hydrslazine");
    CHECK_FALSE(tc.changed);
    CHECK(tc.reason == Reason::NoCandidate);
}

TEST_CASE("in-vocab, numeric and short tokens are left alone") {
    Vocabulary vocab({{"tablets", 20}, {"skin", 50}}, 2);
    Corrector corr(vocab, CorrectorConfig::for_method(Method::EditDistance));
    CHECK(corr.correct_token("tablets").reason == Reason::InVocab);
    CHECK(corr.correct_token("5mg").reason == Reason::Numeric);

    auto cfg = CorrectorConfig::for_method(Method::EditDistance);
    cfg.min_token_len = 5;
    Corrector gated(vocab, cfg);
    CHECK(gated.correct_token("son").reason == Reason::TooShort);
}

TEST_CASE("edit_distance over-corrects where conservative holds back") {
    // "son" has no distance-1 neighbour here but "skin" sits at distance 2.
    Vocabulary vocab({{"skin", 50}, {"tablets", 20}}, 2);
    REQUIRE(levenshtein("son", "skin") == 2);

    Corrector aggressive(vocab, CorrectorConfig::for_method(Method::EditDistance));
    auto tc = aggressive.correct_token("son");
    CHECK(tc.changed);
    CHECK(tc.corrected == "skin");
    CHECK(tc.distance == 2);

    Corrector careful(vocab, CorrectorConfig::for_method(Method::Conservative));
    CHECK_FALSE(careful.correct_token("son").changed);
}

TEST_CASE("blacklist guard suppresses confusable-pair corrections") {
    // hypertension -> hypotension is distance 2: only edit_distance reaches it.
    Vocabulary vocab({{"hypotension", 40}, {"ilium", 30}}, 2);
    ConfusablePairList blacklist;
    blacklist.add("hypertension", "hypotension");
    blacklist.add("ileum", "ilium");

    Corrector aggressive(vocab, CorrectorConfig::for_method(Method::EditDistance), nullptr,
                         nullptr, &blacklist);
    auto tc = aggressive.correct_token("hypertension");
    CHECK_FALSE(tc.changed);
    CHECK(tc.reason == Reason::BlacklistBlocked);

    // ileum -> ilium is distance 1, within reach of every method.
    for (Method m : {Method::Conservative, Method::EditDistance}) {
        Corrector corr(vocab, CorrectorConfig::for_method(m), nullptr, nullptr, &blacklist);
        auto blocked = corr.correct_token("ileum");
        CHECK_FALSE(blocked.changed);
        CHECK(blocked.reason == Reason::BlacklistBlocked);
    }
}

TEST_CASE("context_score equals a brute-force passage scan") {
    std::vector<Passage> passages{{"p1", "test unit runs", {}},
                                  {"p2", "test unit again test", {}},
                                  {"p3", "unit alone", {}},
                                  {"p4", "test without the other word", {}}};
    CooccurrenceIndex cooccur(passages);
    std::vector<std::string> ctx{"unit"};
    CHECK(context_score("test", ctx, cooccur) == 2);

    CHECK(context_score("test", {}, cooccur) == 0);

    std::mt19937 rng(41);
    std::vector<Passage> random_passages;
    for (int p = 0; p < 20; ++p) {
        std::string text;
        for (int i = 0; i < 8; ++i) text += random_word(rng, 1, 3) + " ";
        random_passages.push_back({"r" + std::to_string(p), text, {}});
    }
    CooccurrenceIndex rindex(random_passages);
    for (int t = 0; t < 30; ++t) {
        std::string cand = random_word(rng, 1, 3);
        std::vector<std::string> context{random_word(rng, 1, 3), random_word(rng, 1, 3)};
        long expected = 0;
        for (const auto& p : random_passages) {
            std::set<std::string> words;
            for (const auto& w : tokenize_words(p.text)) words.insert(w);
            for (const auto& c : context)
                if (words.count(cand) && words.count(c)) ++expected;
        }
        CHECK(context_score(cand, context, rindex) == expected);
    }
}

TEST_CASE("context-aware re-ranks minimal-distance ties by context") {
    std::vector<Passage> passages{{"p1", "unit test unit test", {}},
                                  {"p2", "unit test coverage", {}},
                                  {"p3", "tesh tesh tesh alone here", {}}};
    Vocabulary vocab({{"test", 5}, {"tesh", 9}, {"unit", 3}}, 2);
    CooccurrenceIndex cooccur(passages);

    Corrector plain(vocab, CorrectorConfig::for_method(Method::EditDistance), &cooccur);
    CHECK(plain.correct_token("tesz").corrected == "tesh");  // frequency wins

    Corrector aware(vocab, CorrectorConfig::for_method(Method::ContextAware), &cooccur);
    std::vector<std::string> ctx{"unit"};
    CHECK(aware.correct_token("tesz", ctx).corrected == "test");  // context wins the tie
    // Without context the frequency order stands.
    CHECK(aware.correct_token("tesz").corrected == "tesh");
}

TEST_CASE("context never promotes a farther candidate") {
    std::vector<Passage> passages{{"p1", "unit far far unit far", {}}, {"p2", "unit far", {}}};
    // "fa" sits at distance 1 from token "faz"; "far" at distance 1 too; "fast" at 2.
    Vocabulary vocab({{"far", 2}, {"fast", 100}, {"unit", 2}}, 1);
    CooccurrenceIndex cooccur(passages);
    Corrector aware(vocab, CorrectorConfig::for_method(Method::ContextAware), &cooccur);
    std::vector<std::string> ctx{"unit"};
    auto tc = aware.correct_token("fax", ctx);
    CHECK(tc.corrected == "far");
    CHECK(tc.distance == 1);
}

TEST_CASE("correct_text splices corrections into source spans") {
    Vocabulary vocab({{"zolmitriptan", 6}, {"tablets", 20}}, 2);
    Corrector corr(vocab, CorrectorConfig::for_method(Method::EditDistance));
    auto [text, records] = corr.correct_text("zolmitriptan tabkets 5mg");
    CHECK(text == "zolmitriptan tablets 5mg");
    int changed = 0;
    for (const auto& r : records) changed += r.changed;
    CHECK(changed == 1);

    // Unchanged spans keep their original casing and punctuation.
    auto [text2, records2] = corr.correct_text("Zolmitriptan, tabkets!");
    CHECK(text2 == "Zolmitriptan, tablets!");

    auto [text3, records3] = corr.correct_text("zolmitriptan tablets");
    CHECK(text3 == "zolmitriptan tablets");
    for (const auto& r : records3) CHECK_FALSE(r.changed);
}

TEST_CASE("cache returns identical records and counts types") {
    Vocabulary vocab({{"tablets", 20}}, 2);
    Corrector corr(vocab, CorrectorConfig::for_method(Method::EditDistance));
    corr.build_cache({"tabkets", "tablets"});
    CHECK(corr.cache().type_count() == 2);

    auto uncached = corr.correct_token("tabkets");
    auto cached = corr.correct_token_cached("tabkets");
    CHECK(uncached.corrected == cached.corrected);
    CHECK(uncached.changed == cached.changed);
    CHECK(uncached.reason == cached.reason);

    // Rebuilding is idempotent.
    corr.build_cache({"tabkets", "tablets"});
    CHECK(corr.cache().type_count() == 2);
}

TEST_CASE("conservative changes are a subset of edit_distance changes") {
    std::mt19937 rng(47);
    for (int iter = 0; iter < 30; ++iter) {
        std::unordered_map<std::string, uint64_t> entries;
        std::uniform_int_distribution<uint64_t> freq(1, 20);
        while (entries.size() < 60) entries.emplace(random_word(rng, 3, 8), freq(rng));
        Vocabulary vocab(std::move(entries), 1);
        auto index = DeleteIndex::build(vocab, 2);

        Corrector conservative(vocab, CorrectorConfig::for_method(Method::Conservative));
        Corrector standard(vocab, CorrectorConfig::for_method(Method::EditDistance));
        Corrector sym(vocab, CorrectorConfig::for_method(Method::SymSpell), nullptr, &index);

        for (int t = 0; t < 40; ++t) {
            auto token = random_word(rng, 3, 8);
            bool cons_changed = conservative.correct_token(token).changed;
            bool std_changed = standard.correct_token(token).changed;
            bool sym_changed = sym.correct_token(token).changed;
            if (cons_changed) CHECK(std_changed);
            if (sym_changed) CHECK(std_changed);
        }
    }
}
