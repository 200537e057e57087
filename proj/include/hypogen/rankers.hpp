#pragma once
// The two hyperbole classifiers and candidate ranking.
//
// The generic classifier scores any sentence for hyperbole-ness over a
// pluggable text encoder; the specific classifier consumes the four
// pattern-aware features (p_g, l_ab, l_ac, l_bc). Both persist to a
// versioned model directory.

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "hypogen/candidate_generator.hpp"
#include "hypogen/errors.hpp"
#include "hypogen/jsonl.hpp"
#include "hypogen/kb_data.hpp"
#include "hypogen/knowledge_engine.hpp"
#include "hypogen/mlp.hpp"
#include "hypogen/prompt_parser.hpp"
#include "hypogen/text.hpp"

namespace hypogen {

// ---------------------------------------------------------------------------
// Text encoders.

struct TextEncoder {
    virtual ~TextEncoder() = default;
    virtual std::vector<double> encode(const std::string& text) = 0;
    virtual size_t dim() const = 0;
    virtual json fingerprint() const = 0;  // enough to reconstruct or refuse
};

// Feature-hashed unigrams + bigrams, L2-normalized. Deterministic and
// dependency-free; the seam where a contextual encoder plugs in.
class HashingEncoder : public TextEncoder {
  public:
    explicit HashingEncoder(size_t dim = 4096, bool bigrams = true) : dim_(dim), bigrams_(bigrams) {
        if (dim_ == 0) throw_error(ErrorKind::Config, "encoder dimension must be positive");
    }

    std::vector<double> encode(const std::string& text) override {
        std::vector<double> v(dim_, 0.0);
        auto tokens = tokenize_lower(text);
        for (const auto& t : tokens) v[fnv1a(t, 0x75ULL) % dim_] += 1.0;
        if (bigrams_) {
            for (size_t i = 0; i + 1 < tokens.size(); ++i) {
                v[fnv1a(tokens[i] + " " + tokens[i + 1], 0x62ULL) % dim_] += 1.0;
            }
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        if (norm > 0.0) {
            norm = std::sqrt(norm);
            for (double& x : v) x /= norm;
        }
        return v;
    }

    size_t dim() const override { return dim_; }

    json fingerprint() const override {
        return json{{"type", "hashing"}, {"dim", dim_}, {"bigrams", bigrams_}};
    }

  private:
    size_t dim_;
    bool bigrams_;
};

inline std::shared_ptr<TextEncoder> encoder_from_fingerprint(const json& fp) {
    std::string type = fp.at("type").get<std::string>();
    if (type == "hashing") {
        return std::make_shared<HashingEncoder>(fp.at("dim").get<size_t>(),
                                                fp.value("bigrams", true));
    }
    throw_error(ErrorKind::Config, "cannot reconstruct encoder of type '" + type +
                                       "'; supply one when loading the model");
}

// ---------------------------------------------------------------------------
// Shared metrics.

struct ClassifierMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    size_t n = 0;
};

inline ClassifierMetrics compute_metrics(const std::vector<std::pair<bool, bool>>& pred_gold) {
    if (pred_gold.empty()) throw_error(ErrorKind::Argument, "no predictions to evaluate");
    size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (auto [pred, gold] : pred_gold) {
        if (pred && gold) ++tp;
        else if (pred && !gold) ++fp;
        else if (!pred && !gold) ++tn;
        else ++fn;
    }
    ClassifierMetrics m;
    m.n = pred_gold.size();
    m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(m.n);
    m.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    return m;
}

inline std::string fingerprint_hex(const json& j) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(j.dump());
    return os.str();
}

// ---------------------------------------------------------------------------
// Generic classifier.

struct GenericTrainConfig {
    size_t encoder_dim = 4096;
    bool bigrams = true;
    size_t epochs = 120;
    double learning_rate = 0.05;
    double l2 = 1e-4;
    double threshold = 0.5;
    std::vector<std::string> keywords = default_trigger_keywords();

    json to_json() const {
        return json{{"encoder_dim", encoder_dim}, {"bigrams", bigrams},       {"epochs", epochs},
                    {"learning_rate", learning_rate}, {"l2", l2},             {"threshold", threshold},
                    {"keywords", keywords}};
    }
};

class GenericClassifier {
  public:
    GenericClassifier() = default;
    GenericClassifier(std::shared_ptr<TextEncoder> encoder, Mlp head, double threshold,
                      std::vector<std::string> keywords, std::string fingerprint = "")
        : encoder_(std::move(encoder)),
          head_(std::move(head)),
          threshold_(threshold),
          keywords_(std::move(keywords)),
          fingerprint_(std::move(fingerprint)) {}

    // p_g for a sentence. Trigger keywords are stripped first, mirroring
    // training; a sentence that was nothing but keywords still scores.
    double score(const std::string& sentence) const {
        if (normalize_ws(sentence).empty()) throw_error(ErrorKind::Argument, "cannot score empty text");
        std::string residual = strip_keywords(sentence, keywords_);
        return head_.predict(encoder_->encode(residual));
    }

    bool classify(const std::string& sentence) const { return score(sentence) >= threshold_; }
    double threshold() const { return threshold_; }
    const std::vector<std::string>& keywords() const { return keywords_; }

    ClassifierMetrics evaluate(const std::vector<LabeledSentence>& data) const {
        std::vector<std::pair<bool, bool>> pg;
        pg.reserve(data.size());
        for (const auto& s : data) pg.emplace_back(classify(s.text), s.label == Label::Hyperbole);
        return compute_metrics(pg);
    }

    json to_json() const {
        return json{{"version", 1},
                    {"kind", "generic"},
                    {"encoder", encoder_->fingerprint()},
                    {"head", head_.to_json()},
                    {"threshold", threshold_},
                    {"keywords", keywords_},
                    {"config_fingerprint", fingerprint_}};
    }

    static GenericClassifier from_json(const json& j, std::shared_ptr<TextEncoder> encoder = nullptr) {
        if (j.value("kind", "") != "generic") throw_error(ErrorKind::Config, "not a generic model file");
        if (j.value("version", 0) != 1) throw_error(ErrorKind::Config, "unsupported generic model version");
        if (!encoder) encoder = encoder_from_fingerprint(j.at("encoder"));
        return GenericClassifier(std::move(encoder), Mlp::from_json(j.at("head")),
                                 j.at("threshold").get<double>(),
                                 j.at("keywords").get<std::vector<std::string>>(),
                                 j.value("config_fingerprint", ""));
    }

  private:
    std::shared_ptr<TextEncoder> encoder_;
    Mlp head_;
    double threshold_ = 0.5;
    std::vector<std::string> keywords_;
    std::string fingerprint_;
};

// Trains the generic classifier on a balanced train split. Keyword
// stripping happens here, before encoding, so surface triggers cannot
// leak into the decision.
inline GenericClassifier train_generic(const std::vector<LabeledSentence>& train,
                                       const GenericTrainConfig& config = {},
                                       std::shared_ptr<TextEncoder> encoder = nullptr) {
    size_t pos = 0, neg = 0;
    for (const auto& s : train) (s.label == Label::Hyperbole ? pos : neg) += 1;
    if (pos == 0 || neg == 0 || pos != neg) {
        throw_error(ErrorKind::Config, "generic training needs a balanced split (got " +
                                           std::to_string(pos) + " hyperbole / " + std::to_string(neg) +
                                           " literal)");
    }
    if (!encoder) encoder = std::make_shared<HashingEncoder>(config.encoder_dim, config.bigrams);

    std::vector<std::vector<double>> xs;
    std::vector<int> ys;
    xs.reserve(train.size());
    ys.reserve(train.size());
    for (const auto& s : train) {
        xs.push_back(encoder->encode(strip_keywords(s.text, config.keywords)));
        ys.push_back(s.label == Label::Hyperbole ? 1 : 0);
    }

    // Zero-initialized logistic head: convex objective, seed-free determinism.
    Mlp head = Mlp::zeros({encoder->dim(), 1});
    TrainOptions opts;
    opts.epochs = config.epochs;
    opts.learning_rate = config.learning_rate;
    opts.l2 = config.l2;
    head.train(xs, ys, opts);

    return GenericClassifier(std::move(encoder), std::move(head), config.threshold, config.keywords,
                             fingerprint_hex(config.to_json()));
}

// ---------------------------------------------------------------------------
// Specific classifier: MLP over (p_g, l_ab, l_ac, l_bc).

struct SpecificExample {
    std::array<double, 4> features;  // p_g, l_ab, l_ac, l_bc
    bool label;
};

struct SpecificTrainConfig {
    size_t epochs = 600;
    double learning_rate = 0.01;
    double l2 = 1e-4;
    double threshold = 0.5;
    uint64_t seed = 7;

    json to_json() const {
        return json{{"epochs", epochs},
                    {"learning_rate", learning_rate},
                    {"l2", l2},
                    {"threshold", threshold},
                    {"seed", seed}};
    }
};

class SpecificClassifier {
  public:
    SpecificClassifier() : mlp_(Mlp::zeros({4, 8, 4, 1})) {}
    SpecificClassifier(Mlp mlp, FeatureScaler scaler, double threshold, std::string fingerprint = "")
        : mlp_(std::move(mlp)),
          scaler_(std::move(scaler)),
          threshold_(threshold),
          fingerprint_(std::move(fingerprint)) {}

    // Untrained network with all-zero weights: p_s = 0.5 everywhere.
    static SpecificClassifier untrained() {
        FeatureScaler s;
        s.mean.assign(4, 0.0);
        s.stdev.assign(4, 1.0);
        return SpecificClassifier(Mlp::zeros({4, 8, 4, 1}), std::move(s), 0.5);
    }

    double score(const std::vector<double>& features) const {
        if (features.size() != 4) {
            throw_error(ErrorKind::Argument, "specific classifier takes exactly 4 features");
        }
        for (double f : features) {
            if (!std::isfinite(f)) throw_error(ErrorKind::Argument, "non-finite feature");
        }
        return mlp_.predict(scaler_.apply(features));
    }

    double score(const std::array<double, 4>& f) const {
        return score(std::vector<double>(f.begin(), f.end()));
    }

    bool classify(const std::vector<double>& features) const { return score(features) >= threshold_; }
    double threshold() const { return threshold_; }

    ClassifierMetrics evaluate(const std::vector<SpecificExample>& data) const {
        std::vector<std::pair<bool, bool>> pg;
        pg.reserve(data.size());
        for (const auto& e : data) {
            pg.emplace_back(score(e.features) >= threshold_, e.label);
        }
        return compute_metrics(pg);
    }

    json to_json() const {
        return json{{"version", 1},          {"kind", "specific"},      {"mlp", mlp_.to_json()},
                    {"scaler", scaler_.to_json()}, {"threshold", threshold_},
                    {"config_fingerprint", fingerprint_}};
    }

    static SpecificClassifier from_json(const json& j) {
        if (j.value("kind", "") != "specific") throw_error(ErrorKind::Config, "not a specific model file");
        if (j.value("version", 0) != 1) throw_error(ErrorKind::Config, "unsupported specific model version");
        return SpecificClassifier(Mlp::from_json(j.at("mlp")), FeatureScaler::from_json(j.at("scaler")),
                                  j.at("threshold").get<double>(), j.value("config_fingerprint", ""));
    }

  private:
    Mlp mlp_;
    FeatureScaler scaler_;
    double threshold_ = 0.5;
    std::string fingerprint_;
};

inline SpecificClassifier train_specific(const std::vector<SpecificExample>& rows,
                                         const SpecificTrainConfig& config = {}) {
    size_t pos = 0, neg = 0;
    for (const auto& r : rows) (r.label ? pos : neg) += 1;
    if (pos < 2 || neg < 2) {
        throw_error(ErrorKind::Config, "specific training needs at least 2 examples per class");
    }
    std::vector<std::vector<double>> xs;
    std::vector<int> ys;
    xs.reserve(rows.size());
    ys.reserve(rows.size());
    for (const auto& r : rows) {
        for (double f : r.features) {
            if (!std::isfinite(f)) throw_error(ErrorKind::Argument, "non-finite training feature");
        }
        xs.emplace_back(r.features.begin(), r.features.end());
        ys.push_back(r.label ? 1 : 0);
    }
    FeatureScaler scaler = FeatureScaler::fit(xs);
    for (auto& x : xs) x = scaler.apply(x);

    Mlp mlp({4, 8, 4, 1}, config.seed);
    TrainOptions opts;
    opts.epochs = config.epochs;
    opts.learning_rate = config.learning_rate;
    opts.l2 = config.l2;
    mlp.train(xs, ys, opts);
    return SpecificClassifier(std::move(mlp), std::move(scaler), config.threshold,
                              fingerprint_hex(config.to_json()));
}

// ---------------------------------------------------------------------------
// Pattern-aware feature extraction for training/scoring the specific
// classifier on real sentences: likelihoods use one canonical relation per
// edge (RelatedTo for A–B, Causes for A–C, CapableOf for B–C).

inline SpecificExample sentence_features(const LabeledSentence& s, const GenericClassifier& clf_g,
                                         KnowledgeEngine& engine) {
    PatternPartition p = partition_so_that(s.text);
    SpecificExample e;
    e.features[0] = clf_g.score(s.text);
    e.features[1] = engine.likelihood(p.prompt.subject, Relation::RelatedTo, p.clause_subject,
                                      Direction::Reverse);
    e.features[2] =
        engine.likelihood(p.prompt.text, Relation::Causes, p.clause_predicate, Direction::Forward);
    e.features[3] = engine.likelihood(p.clause_subject, Relation::CapableOf, p.clause_predicate,
                                      Direction::Forward);
    e.label = s.label == Label::Hyperbole;
    return e;
}

inline std::vector<SpecificExample> build_specific_features(const std::vector<LabeledSentence>& sentences,
                                                            const GenericClassifier& clf_g,
                                                            KnowledgeEngine& engine) {
    std::vector<SpecificExample> out;
    out.reserve(sentences.size());
    for (const auto& s : sentences) out.push_back(sentence_features(s, clf_g, engine));
    return out;
}

// ---------------------------------------------------------------------------
// Model directory persistence.

inline void save_model(const std::string& dir, const json& model) {
    write_json_file(dir + "/model.json", model);
}

inline json load_model(const std::string& dir) { return read_json_file(dir + "/model.json"); }

// ---------------------------------------------------------------------------
// Candidate scoring and ranking.

inline void score_hyperboles(std::vector<ScoredHyperbole>& batch, const GenericClassifier* clf_g,
                             const SpecificClassifier* clf_s) {
    if (clf_s && !clf_g) {
        throw_error(ErrorKind::Config, "specific scoring needs the generic classifier for p_g");
    }
    for (auto& h : batch) {
        if (clf_g) h.p_g = clf_g->score(h.sentence);
        if (clf_s) {
            h.p_s = clf_s->score(
                std::vector<double>{h.p_g, h.candidate.l_ab, h.candidate.l_ac, h.candidate.l_bc});
        }
    }
}

enum class RankBy { PG, PS, PGAndLAC, PGAndLAB };

inline std::string_view rank_by_name(RankBy r) {
    switch (r) {
        case RankBy::PG: return "p_g";
        case RankBy::PS: return "p_s";
        case RankBy::PGAndLAC: return "p_g_and_l_ac";
        case RankBy::PGAndLAB: return "p_g_and_l_ab";
    }
    return "?";
}

inline RankBy parse_rank_by(std::string_view s) {
    if (s == "p_g") return RankBy::PG;
    if (s == "p_s") return RankBy::PS;
    if (s == "p_g_and_l_ac") return RankBy::PGAndLAC;
    if (s == "p_g_and_l_ab") return RankBy::PGAndLAB;
    throw_error(ErrorKind::Config, "unknown ranking mode: " + std::string(s));
}

// Descending by the selected score; combined modes use p_g first and break
// ties with the lower likelihood. Stable on full ties; ranks are 1..N.
inline std::vector<ScoredHyperbole> rank_candidates(std::vector<ScoredHyperbole> scored, RankBy by) {
    auto need = [&](bool ok, const char* what) {
        if (!ok) {
            throw_error(ErrorKind::Config,
                        std::string("ranking mode ") + std::string(rank_by_name(by)) + " needs " + what);
        }
    };
    for (const auto& h : scored) {
        if (by == RankBy::PS) need(std::isfinite(h.p_s), "p_s on every candidate");
        else need(std::isfinite(h.p_g), "p_g on every candidate");
    }
    auto key_secondary = [&](const ScoredHyperbole& h) {
        switch (by) {
            case RankBy::PGAndLAC: return h.candidate.l_ac;
            case RankBy::PGAndLAB: return h.candidate.l_ab;
            default: return 0.0;
        }
    };
    std::stable_sort(scored.begin(), scored.end(), [&](const ScoredHyperbole& a, const ScoredHyperbole& b) {
        double pa = by == RankBy::PS ? a.p_s : a.p_g;
        double pb = by == RankBy::PS ? b.p_s : b.p_g;
        if (pa != pb) return pa > pb;
        return key_secondary(a) < key_secondary(b);
    });
    for (size_t i = 0; i < scored.size(); ++i) scored[i].rank = static_cast<int>(i + 1);
    return scored;
}

}  // namespace hypogen
