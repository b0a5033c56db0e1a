#include "qspell/editcore.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace qspell {

int levenshtein(std::string_view a, std::string_view b) {
    const size_t n = b.size();
    std::vector<int> row(n + 1);
    std::iota(row.begin(), row.end(), 0);
    for (size_t i = 1; i <= a.size(); ++i) {
        int diag = row[0];
        row[0] = static_cast<int>(i);
        for (size_t j = 1; j <= n; ++j) {
            int sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            diag = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
        }
    }
    return row[n];
}

int levenshtein_bounded(std::string_view a, std::string_view b, int max_dist) {
    int len_gap = static_cast<int>(a.size()) - static_cast<int>(b.size());
    if (std::abs(len_gap) > max_dist) return max_dist + 1;
    const size_t n = b.size();
    std::vector<int> row(n + 1);
    std::iota(row.begin(), row.end(), 0);
    for (size_t i = 1; i <= a.size(); ++i) {
        int diag = row[0];
        row[0] = static_cast<int>(i);
        int row_min = row[0];
        for (size_t j = 1; j <= n; ++j) {
            int sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            diag = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
            row_min = std::min(row_min, row[j]);
        }
        if (row_min > max_dist) return max_dist + 1;
    }
    return row[n];
}

bool candidate_less(const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.word < b.word;
}

std::vector<Candidate> closest_candidates(const std::string& token, const Vocabulary& vocab,
                                          int max_dist, bool include_self) {
    std::vector<Candidate> out;
    const int tok_len = static_cast<int>(token.size());
    for (const auto& [word, freq] : vocab.entries()) {
        if (std::abs(static_cast<int>(word.size()) - tok_len) > max_dist) continue;
        if (!include_self && word == token) continue;
        int d = levenshtein_bounded(token, word, max_dist);
        if (d <= max_dist) out.push_back({word, d, freq});
    }
    std::sort(out.begin(), out.end(), candidate_less);
    return out;
}

}  // namespace qspell
