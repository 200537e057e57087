#pragma once
// Automatic metrics and evaluation plumbing: greedy token-matching
// similarity, language-model expectedness, annotator agreement statistics,
// an embedding-retrieval baseline, and the human-evaluation CSV export.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypogen/candidate_generator.hpp"
#include "hypogen/errors.hpp"
#include "hypogen/jsonl.hpp"
#include "hypogen/prompt_parser.hpp"
#include "hypogen/rng.hpp"
#include "hypogen/text.hpp"

namespace hypogen {

// ---------------------------------------------------------------------------
// Adapters.

struct TokenEmbedder {
    virtual ~TokenEmbedder() = default;
    virtual std::vector<double> embed(const std::string& token) = 0;
};

// Fixed token → vector table; unknown tokens get the fallback vector.
class TableEmbedder : public TokenEmbedder {
  public:
    TableEmbedder() = default;
    TableEmbedder(std::unordered_map<std::string, std::vector<double>> table,
                  std::vector<double> fallback = {})
        : table_(std::move(table)), fallback_(std::move(fallback)) {}

    void set(const std::string& token, std::vector<double> v) { table_[to_lower(token)] = std::move(v); }

    std::vector<double> embed(const std::string& token) override {
        auto it = table_.find(to_lower(token));
        if (it != table_.end()) return it->second;
        return fallback_;
    }

  private:
    std::unordered_map<std::string, std::vector<double>> table_;
    std::vector<double> fallback_;
};

// Deterministic pseudo-embeddings: each token hashes to a fixed dense
// vector. No semantics, but stable — useful as a stand-in adapter.
class HashEmbedder : public TokenEmbedder {
  public:
    explicit HashEmbedder(size_t dim = 16, uint64_t seed = 0) : dim_(dim), seed_(seed) {}

    std::vector<double> embed(const std::string& token) override {
        std::vector<double> v(dim_);
        uint64_t h = fnv1a(to_lower(token), seed_ ^ 0x517cc1b727220a95ULL);
        double norm = 0.0;
        for (size_t i = 0; i < dim_; ++i) {
            h = fnv1a_mix(h, i + 1);
            v[i] = static_cast<double>(h >> 11) / static_cast<double>(1ULL << 53) - 0.5;
            norm += v[i] * v[i];
        }
        norm = std::sqrt(norm);
        if (norm > 0.0) {
            for (double& x : v) x /= norm;
        }
        return v;
    }

  private:
    size_t dim_;
    uint64_t seed_;
};

struct LmAdapter {
    virtual ~LmAdapter() = default;
    virtual std::vector<double> token_probs(const std::vector<std::string>& tokens) = 0;
};

// Every token equally likely: p = 1 / vocabulary_size.
class UniformLm : public LmAdapter {
  public:
    explicit UniformLm(size_t vocab_size) : p_(1.0 / static_cast<double>(vocab_size)) {
        if (vocab_size == 0) throw_error(ErrorKind::Argument, "vocabulary must be non-empty");
    }
    std::vector<double> token_probs(const std::vector<std::string>& tokens) override {
        return std::vector<double>(tokens.size(), p_);
    }

  private:
    double p_;
};

class TableLm : public LmAdapter {
  public:
    TableLm(std::unordered_map<std::string, double> probs, double fallback)
        : probs_(std::move(probs)), fallback_(fallback) {}

    std::vector<double> token_probs(const std::vector<std::string>& tokens) override {
        std::vector<double> out;
        out.reserve(tokens.size());
        for (const auto& t : tokens) {
            auto it = probs_.find(to_lower(t));
            out.push_back(it == probs_.end() ? fallback_ : it->second);
        }
        return out;
    }

  private:
    std::unordered_map<std::string, double> probs_;
    double fallback_;
};

// ---------------------------------------------------------------------------
// Report.

struct MetricReport {
    double bertscore_p = std::numeric_limits<double>::quiet_NaN();
    double bertscore_r = std::numeric_limits<double>::quiet_NaN();
    double bertscore_f1 = std::numeric_limits<double>::quiet_NaN();
    double expectedness = std::numeric_limits<double>::quiet_NaN();
    size_t n_items = 0;

    json to_json() const {
        auto opt = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
        return json{{"bertscore_p", opt(bertscore_p)},
                    {"bertscore_r", opt(bertscore_r)},
                    {"bertscore_f1", opt(bertscore_f1)},
                    {"expectedness", opt(expectedness)},
                    {"n_items", n_items}};
    }
};

// ---------------------------------------------------------------------------
// Semantic similarity (greedy token matching).

namespace detail {

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty() || a.size() != b.size()) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// max_j sim(x_i, y_j) for each token of x, averaged. Identical surface
// tokens count as a perfect match without consulting the embedder, which
// keeps self-similarity at exactly 1 under any adapter.
inline double greedy_match_mean(const std::vector<std::string>& xs, const std::vector<std::string>& ys,
                                const std::vector<std::vector<double>>& ex,
                                const std::vector<std::vector<double>>& ey) {
    double total = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double best = -1.0;
        for (size_t j = 0; j < ys.size(); ++j) {
            double sim = xs[i] == ys[j] ? 1.0 : cosine(ex[i], ey[j]);
            if (sim > best) best = sim;
            if (best >= 1.0) break;
        }
        total += std::max(best, 0.0);
    }
    return total / static_cast<double>(xs.size());
}

}  // namespace detail

inline MetricReport semantic_similarity(const std::vector<std::string>& candidates,
                                        const std::vector<std::string>& references,
                                        TokenEmbedder& embedder) {
    if (candidates.size() != references.size()) {
        throw_error(ErrorKind::Argument, "candidates and references must pair up");
    }
    if (candidates.empty()) throw_error(ErrorKind::Argument, "nothing to compare");

    double sum_p = 0.0, sum_r = 0.0;
    for (size_t k = 0; k < candidates.size(); ++k) {
        auto ct = tokenize_lower(candidates[k]);
        auto rt = tokenize_lower(references[k]);
        if (ct.empty() || rt.empty()) {
            throw_error(ErrorKind::Argument, "empty sentence at pair " + std::to_string(k));
        }
        std::vector<std::vector<double>> ce, re;
        ce.reserve(ct.size());
        re.reserve(rt.size());
        for (const auto& t : ct) ce.push_back(embedder.embed(t));
        for (const auto& t : rt) re.push_back(embedder.embed(t));
        sum_p += detail::greedy_match_mean(ct, rt, ce, re);
        sum_r += detail::greedy_match_mean(rt, ct, re, ce);
    }

    MetricReport report;
    report.n_items = candidates.size();
    report.bertscore_p = sum_p / static_cast<double>(report.n_items);
    report.bertscore_r = sum_r / static_cast<double>(report.n_items);
    double pr = report.bertscore_p + report.bertscore_r;
    report.bertscore_f1 = pr > 0.0 ? 2.0 * report.bertscore_p * report.bertscore_r / pr : 0.0;
    return report;
}

// ---------------------------------------------------------------------------
// Expectedness: mean token probability under the scoring LM.

inline double expectedness(const std::string& sentence, LmAdapter& lm) {
    auto tokens = tokenize_lower(sentence);
    if (tokens.empty()) throw_error(ErrorKind::Argument, "expectedness of empty sentence");
    auto probs = lm.token_probs(tokens);
    if (probs.size() != tokens.size()) {
        throw_error(ErrorKind::Backend, "language model returned wrong number of probabilities");
    }
    double sum = 0.0;
    for (double p : probs) {
        if (!(p > 0.0) || p > 1.0) throw_error(ErrorKind::Backend, "token probability outside (0,1]");
        sum += p;
    }
    return sum / static_cast<double>(tokens.size());
}

inline double mean_expectedness(const std::vector<std::string>& sentences, LmAdapter& lm) {
    if (sentences.empty()) throw_error(ErrorKind::Argument, "no sentences");
    double sum = 0.0;
    for (const auto& s : sentences) sum += expectedness(s, lm);
    return sum / static_cast<double>(sentences.size());
}

// ---------------------------------------------------------------------------
// Annotator agreement.

// Share of (item, rater) pairs whose label matches the item's majority
// label. Even-split ties resolve to the positive class.
inline double wawa_agreement(const std::vector<std::vector<int>>& labels) {
    if (labels.empty()) throw_error(ErrorKind::Argument, "no items");
    size_t pairs = 0, agree = 0;
    for (const auto& row : labels) {
        if (row.size() < 2) throw_error(ErrorKind::Argument, "need at least 2 raters per item");
        size_t pos = 0;
        for (int v : row) {
            if (v != 0 && v != 1) throw_error(ErrorKind::Argument, "labels must be binary");
            pos += static_cast<size_t>(v);
        }
        int majority = 2 * pos >= row.size() ? 1 : 0;
        for (int v : row) {
            ++pairs;
            if (v == majority) ++agree;
        }
    }
    return static_cast<double>(agree) / static_cast<double>(pairs);
}

namespace detail {

// Fractional ranks with ties averaged.
inline std::vector<double> rank_values(const std::vector<double>& xs) {
    std::vector<size_t> idx(xs.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(xs.size());
    size_t i = 0;
    while (i < idx.size()) {
        size_t j = i;
        while (j + 1 < idx.size() && xs[idx[j + 1]] == xs[idx[i]]) ++j;
        double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[idx[k]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    double ma = 0.0, mb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(a.size());
    mb /= static_cast<double>(a.size());
    double num = 0.0, va = 0.0, vb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va <= 0.0 || vb <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return num / std::sqrt(va * vb);
}

}  // namespace detail

// Mean pairwise Spearman correlation between rater columns. Pairs where
// either rater is constant carry no rank information and are skipped
// (reported via `skipped`).
inline double spearman_iaa(const std::vector<std::vector<double>>& items_by_raters,
                           size_t* skipped = nullptr) {
    if (items_by_raters.empty()) throw_error(ErrorKind::Argument, "no items");
    size_t n_raters = items_by_raters[0].size();
    if (n_raters < 2) throw_error(ErrorKind::Argument, "need at least 2 raters");
    for (const auto& row : items_by_raters) {
        if (row.size() != n_raters) throw_error(ErrorKind::Argument, "ragged rating matrix");
    }

    std::vector<std::vector<double>> cols(n_raters, std::vector<double>(items_by_raters.size()));
    for (size_t i = 0; i < items_by_raters.size(); ++i) {
        for (size_t r = 0; r < n_raters; ++r) cols[r][i] = items_by_raters[i][r];
    }

    double sum = 0.0;
    size_t used = 0, skip = 0;
    for (size_t a = 0; a < n_raters; ++a) {
        for (size_t b = a + 1; b < n_raters; ++b) {
            double rho = detail::pearson(detail::rank_values(cols[a]), detail::rank_values(cols[b]));
            if (std::isnan(rho)) {
                ++skip;
                continue;
            }
            sum += rho;
            ++used;
        }
    }
    if (skipped) *skipped = skip;
    if (used == 0) throw_error(ErrorKind::Argument, "all rater pairs were constant");
    return sum / static_cast<double>(used);
}

// ---------------------------------------------------------------------------
// Retrieval baseline: corpus sentence with the highest mean-token-embedding
// cosine similarity to the prompt. Ties keep the earliest entry.

inline std::string sim_retrieval(const Prompt& prompt, const std::vector<std::string>& corpus,
                                 TokenEmbedder& embedder) {
    if (corpus.empty()) throw_error(ErrorKind::Argument, "retrieval corpus is empty");

    auto sentence_vec = [&](const std::string& text) {
        std::vector<double> acc;
        auto tokens = tokenize_lower(text);
        size_t n = 0;
        for (const auto& t : tokens) {
            auto v = embedder.embed(t);
            if (v.empty()) continue;
            if (acc.empty()) acc.assign(v.size(), 0.0);
            if (v.size() != acc.size()) throw_error(ErrorKind::Backend, "embedder dimension drift");
            for (size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
            ++n;
        }
        if (n > 0) {
            for (double& x : acc) x /= static_cast<double>(n);
        }
        return acc;
    };

    auto pv = sentence_vec(prompt.text);
    double best = -2.0;
    size_t best_i = 0;
    for (size_t i = 0; i < corpus.size(); ++i) {
        double sim = detail::cosine(pv, sentence_vec(corpus[i]));
        if (sim > best) {
            best = sim;
            best_i = i;
        }
    }
    return corpus[best_i];
}

// ---------------------------------------------------------------------------
// Human evaluation export: shuffled, system-blind CSV forms.

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace detail

inline void export_human_eval(const std::vector<ScoredHyperbole>& batch, const std::string& path,
                              uint64_t seed) {
    if (batch.empty()) throw_error(ErrorKind::Argument, "nothing to export");
    std::vector<std::string> sentences;
    sentences.reserve(batch.size());
    for (const auto& h : batch) sentences.push_back(h.sentence);
    Rng rng(seed);
    rng.shuffle(sentences);

    auto out = open_output(path);
    out << "id,sentence,is_hyperbole,intensity,coherency,funniness,creativity,grammaticality\n";
    for (size_t i = 0; i < sentences.size(); ++i) {
        out << (i + 1) << "," << detail::csv_escape(sentences[i]) << ",,,,,,\n";
    }
    if (!out) throw_error(ErrorKind::Io, "failed writing human-eval forms to " + path);
}

}  // namespace hypogen
