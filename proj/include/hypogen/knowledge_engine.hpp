#pragma once
// Commonsense inference plumbing: pluggable forward/reverse backends,
// unigram-based beam rescoring and token-level likelihood scoring.

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypogen/errors.hpp"
#include "hypogen/jsonl.hpp"
#include "hypogen/kb_data.hpp"
#include "hypogen/relations.hpp"
#include "hypogen/text.hpp"

namespace hypogen {

struct InferenceBeam {
    std::vector<std::string> tokens;
    std::vector<double> token_probs;
    double beam_logprob = 0.0;  // sum of log token_probs

    size_t length() const { return tokens.size(); }
    std::string text() const { return join(tokens); }
};

// Builds a beam from tokens and per-token probabilities, validating the
// invariants (non-empty, sizes match, probs in (0,1]).
inline InferenceBeam make_beam(std::vector<std::string> tokens, std::vector<double> probs) {
    if (tokens.empty()) throw_error(ErrorKind::Argument, "beam must have at least one token");
    if (tokens.size() != probs.size()) {
        throw_error(ErrorKind::Argument, "beam token/probability length mismatch");
    }
    InferenceBeam beam;
    beam.beam_logprob = 0.0;
    for (double p : probs) {
        if (!(p > 0.0) || p > 1.0) {
            throw_error(ErrorKind::Argument, "token probability outside (0,1]: " + std::to_string(p));
        }
        beam.beam_logprob += std::log(p);
    }
    beam.tokens = std::move(tokens);
    beam.token_probs = std::move(probs);
    return beam;
}

// ---------------------------------------------------------------------------
// Unigram model: token → probability, with a floor for unseen tokens.

struct UnigramModel {
    std::unordered_map<std::string, double> vocabulary;
    double oov_prob = 1e-7;

    double prob(const std::string& token) const {
        auto it = vocabulary.find(to_lower(token));
        return it == vocabulary.end() ? oov_prob : it->second;
    }

    void validate() const {
        if (!(oov_prob > 0.0)) throw_error(ErrorKind::Config, "unigram oov_prob must be positive");
        for (const auto& [tok, p] : vocabulary) {
            if (!(p > 0.0) || p > 1.0) {
                throw_error(ErrorKind::Config, "unigram probability outside (0,1] for '" + tok + "'");
            }
        }
    }
};

inline UnigramModel load_unigrams_tsv(const std::string& path, double oov_prob = 1e-7) {
    auto in = open_input(path);
    UnigramModel model;
    model.oov_prob = oov_prob;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (normalize_ws(line).empty()) continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw_error(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": expected token<TAB>prob");
        }
        std::string token = to_lower(normalize_ws(line.substr(0, tab)));
        double p = 0.0;
        try {
            p = std::stod(line.substr(tab + 1));
        } catch (const std::exception&) {
            throw_error(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": bad probability");
        }
        model.vocabulary[token] = p;
    }
    model.validate();
    return model;
}

inline void write_unigrams_tsv(const std::string& path, const UnigramModel& model) {
    // Sorted for byte-stable output.
    std::vector<std::pair<std::string, double>> rows(model.vocabulary.begin(), model.vocabulary.end());
    std::sort(rows.begin(), rows.end());
    auto out = open_output(path);
    out.precision(17);
    for (const auto& [tok, p] : rows) out << tok << "\t" << p << "\n";
    if (!out) throw_error(ErrorKind::Io, "failed writing unigrams to " + path);
}

// ---------------------------------------------------------------------------
// Backend contract.

struct InferenceBackend {
    virtual ~InferenceBackend() = default;

    // Top-k phrase completions for (head, relation) in the given direction.
    virtual std::vector<InferenceBeam> generate(const std::string& head, Relation relation,
                                                Direction direction, size_t beam_width) = 0;

    // P(x_t | head, relation, x_<t) for each tail token, in order.
    virtual std::vector<double> score_tail(const std::string& head, Relation relation,
                                           const std::vector<std::string>& tail_tokens) = 0;
};

// ---------------------------------------------------------------------------
// infer: contract-checked front door over a backend.

inline std::vector<InferenceBeam> infer(const std::string& head, Relation relation, Direction direction,
                                        size_t beam_width, InferenceBackend& backend) {
    if (beam_width < 1) throw_error(ErrorKind::Argument, "beam_width must be >= 1");
    std::vector<InferenceBeam> beams;
    try {
        beams = backend.generate(head, relation, direction, beam_width);
    } catch (const Error& e) {
        throw Error(ErrorKind::Backend,
                    std::string("inference failed (relation=") + std::string(relation_name(relation)) +
                        ", direction=" + std::string(direction_name(direction)) + "): " + e.what());
    }
    beams.erase(std::remove_if(beams.begin(), beams.end(),
                               [](const InferenceBeam& b) { return b.tokens.empty(); }),
                beams.end());
    std::sort(beams.begin(), beams.end(), [](const InferenceBeam& a, const InferenceBeam& b) {
        if (a.beam_logprob != b.beam_logprob) return a.beam_logprob > b.beam_logprob;
        return a.tokens < b.tokens;
    });
    if (beams.size() > beam_width) beams.resize(beam_width);
    return beams;
}

// ---------------------------------------------------------------------------
// Beam rescoring: R_k = exp(beam_logprob / T) / (mean unigram probability).
// The numerator is the per-token geometric mean of the beam's probabilities;
// the denominator penalizes beams made of frequent words, so rarer phrasing
// floats up.

struct RescoredBeam {
    InferenceBeam beam;
    double score = 0.0;
};

inline double rescore_one(const InferenceBeam& beam, const UnigramModel& unigrams) {
    double t = static_cast<double>(beam.length());
    if (t < 1.0) throw_error(ErrorKind::Argument, "cannot rescore an empty beam");
    double denom = 0.0;
    for (const auto& tok : beam.tokens) denom += unigrams.prob(tok);
    denom /= t;
    return std::exp(beam.beam_logprob / t) / denom;
}

inline std::vector<RescoredBeam> rescore_beams(const std::vector<InferenceBeam>& beams,
                                               const UnigramModel& unigrams) {
    if (beams.empty()) throw_error(ErrorKind::Argument, "rescore_beams needs at least one beam");
    std::vector<RescoredBeam> out;
    out.reserve(beams.size());
    for (const auto& b : beams) out.push_back({b, rescore_one(b, unigrams)});
    std::sort(out.begin(), out.end(), [](const RescoredBeam& a, const RescoredBeam& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.beam.beam_logprob != b.beam.beam_logprob) return a.beam.beam_logprob > b.beam.beam_logprob;
        return a.beam.tokens < b.beam.tokens;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Token likelihood (negative conditional log-likelihood of the tail).

inline double token_likelihood(const std::string& head, Relation relation, const std::string& tail,
                               InferenceBackend& backend) {
    auto tail_tokens = tokenize_lower(tail);
    if (tail_tokens.empty()) throw_error(ErrorKind::Argument, "token_likelihood: empty tail");
    std::vector<double> probs;
    try {
        probs = backend.score_tail(head, relation, tail_tokens);
    } catch (const Error& e) {
        throw Error(ErrorKind::Backend, std::string("tail scoring failed (relation=") +
                                            std::string(relation_name(relation)) + "): " + e.what());
    }
    if (probs.size() != tail_tokens.size()) {
        throw_error(ErrorKind::Backend, "backend returned wrong number of token probabilities");
    }
    double loss = 0.0;
    for (double p : probs) {
        if (!(p > 0.0) || p > 1.0) {
            throw_error(ErrorKind::Backend, "backend token probability outside (0,1]");
        }
        loss -= std::log(p);
    }
    return loss;
}

// ---------------------------------------------------------------------------
// Table-driven backend: deterministic beams and scores from a JSON fixture.
//
// Config shape:
//   {"generations": [{"head":..., "relation":..., "direction":...,
//                     "beams": [{"tokens": [...], "token_probs": [...]}]}],
//    "scores": [{"head":..., "relation":..., "tail_probs": {"token": p}}]}
//
// Token scoring falls back from the explicit score table, to probabilities
// found in this head/relation's generation beams, to a seeded hash in
// [0.05, 0.95] — always deterministic, position-independent per token.

class TableBackend : public InferenceBackend {
  public:
    TableBackend() = default;
    explicit TableBackend(uint64_t seed) : seed_(seed) {}

    static TableBackend from_json(const json& config, uint64_t seed = 0) {
        TableBackend backend(seed);
        if (config.contains("generations")) {
            for (const auto& entry : config["generations"]) {
                std::string key = gen_key(entry.at("head").get<std::string>(),
                                          parse_relation(entry.at("relation").get<std::string>()),
                                          parse_direction(entry.at("direction").get<std::string>()));
                std::vector<InferenceBeam>& beams = backend.generations_[key];
                for (const auto& b : entry.at("beams")) {
                    beams.push_back(make_beam(b.at("tokens").get<std::vector<std::string>>(),
                                              b.at("token_probs").get<std::vector<double>>()));
                }
            }
        }
        if (config.contains("scores")) {
            for (const auto& entry : config["scores"]) {
                std::string key = score_key(entry.at("head").get<std::string>(),
                                            parse_relation(entry.at("relation").get<std::string>()));
                auto& table = backend.scores_[key];
                for (const auto& [tok, p] : entry.at("tail_probs").items()) {
                    table[to_lower(tok)] = p.get<double>();
                }
            }
        }
        return backend;
    }

    static TableBackend from_file(const std::string& path, uint64_t seed = 0) {
        return from_json(read_json_file(path), seed);
    }

    void add_generation(const std::string& head, Relation relation, Direction direction,
                        InferenceBeam beam) {
        generations_[gen_key(head, relation, direction)].push_back(std::move(beam));
    }

    void add_score(const std::string& head, Relation relation, const std::string& token, double p) {
        scores_[score_key(head, relation)][to_lower(token)] = p;
    }

    std::vector<InferenceBeam> generate(const std::string& head, Relation relation, Direction direction,
                                        size_t beam_width) override {
        auto it = generations_.find(gen_key(head, relation, direction));
        if (it == generations_.end()) return {};
        std::vector<InferenceBeam> beams = it->second;
        if (beams.size() > beam_width) beams.resize(beam_width);
        return beams;
    }

    std::vector<double> score_tail(const std::string& head, Relation relation,
                                   const std::vector<std::string>& tail_tokens) override {
        std::vector<double> probs;
        probs.reserve(tail_tokens.size());
        for (const auto& tok : tail_tokens) probs.push_back(score_token(head, relation, tok));
        return probs;
    }

  private:
    static std::string gen_key(const std::string& head, Relation relation, Direction direction) {
        return normalize_phrase(head) + "|" + std::string(relation_name(relation)) + "|" +
               std::string(direction_name(direction));
    }
    static std::string score_key(const std::string& head, Relation relation) {
        return normalize_phrase(head) + "|" + std::string(relation_name(relation));
    }

    double score_token(const std::string& head, Relation relation, const std::string& token) const {
        std::string lower = to_lower(token);
        if (auto it = scores_.find(score_key(head, relation)); it != scores_.end()) {
            if (auto jt = it->second.find(lower); jt != it->second.end()) return jt->second;
        }
        // Probabilities attached to this head/relation's own beams, any direction.
        for (Direction d : {Direction::Forward, Direction::Reverse}) {
            auto it = generations_.find(gen_key(head, relation, d));
            if (it == generations_.end()) continue;
            for (const auto& beam : it->second) {
                for (size_t i = 0; i < beam.tokens.size(); ++i) {
                    if (to_lower(beam.tokens[i]) == lower) return beam.token_probs[i];
                }
            }
        }
        uint64_t h = fnv1a(lower, fnv1a(relation_name(relation), fnv1a(normalize_phrase(head), seed_ ^ 0xa5a5a5a5a5a5a5a5ULL)));
        return 0.05 + 0.9 * (static_cast<double>(h >> 11) / static_cast<double>(1ULL << 53));
    }

    uint64_t seed_ = 0;
    std::unordered_map<std::string, std::vector<InferenceBeam>> generations_;
    std::unordered_map<std::string, std::unordered_map<std::string, double>> scores_;
};

// ---------------------------------------------------------------------------
// Engine: pairs the two directed backends with the unigram rescorer.
// Rescoring defaults to the reverse direction only, where frequent-word
// beams crowd out the interesting ones.

struct EngineConfig {
    bool rescore_reverse = true;
    bool rescore_forward = false;
};

class KnowledgeEngine {
  public:
    KnowledgeEngine(std::shared_ptr<InferenceBackend> forward, std::shared_ptr<InferenceBackend> reverse,
                    UnigramModel unigrams, EngineConfig config = {})
        : forward_(std::move(forward)),
          reverse_(std::move(reverse)),
          unigrams_(std::move(unigrams)),
          config_(config) {
        if (!forward_ || !reverse_) throw_error(ErrorKind::Config, "engine needs both backends");
        unigrams_.validate();
    }

    InferenceBackend& backend(Direction d) { return d == Direction::Forward ? *forward_ : *reverse_; }
    const UnigramModel& unigrams() const { return unigrams_; }
    const EngineConfig& config() const { return config_; }

    // Beams for (head, relation, direction), rescored when configured.
    std::vector<InferenceBeam> infer_ranked(const std::string& head, Relation relation, Direction direction,
                                            size_t beam_width) {
        auto beams = infer(head, relation, direction, beam_width, backend(direction));
        bool rescore = direction == Direction::Reverse ? config_.rescore_reverse : config_.rescore_forward;
        if (!rescore || beams.empty()) return beams;
        auto rescored = rescore_beams(beams, unigrams_);
        std::vector<InferenceBeam> out;
        out.reserve(rescored.size());
        for (auto& r : rescored) out.push_back(std::move(r.beam));
        return out;
    }

    double likelihood(const std::string& head, Relation relation, const std::string& tail,
                      Direction direction = Direction::Forward) {
        return token_likelihood(head, relation, tail, backend(direction));
    }

  private:
    std::shared_ptr<InferenceBackend> forward_;
    std::shared_ptr<InferenceBackend> reverse_;
    UnigramModel unigrams_;
    EngineConfig config_;
};

// Unigram model from triple tails: counts normalized to probabilities.
inline UnigramModel build_unigram_model(const std::vector<KnowledgeTriple>& triples,
                                        double oov_prob = 1e-7) {
    UnigramModel model;
    model.oov_prob = oov_prob;
    std::unordered_map<std::string, size_t> counts;
    size_t total = 0;
    for (const auto& t : triples) {
        for (const auto& tok : tokenize_lower(t.tail)) {
            ++counts[tok];
            ++total;
        }
    }
    for (const auto& [tok, n] : counts) {
        model.vocabulary[tok] = static_cast<double>(n) / static_cast<double>(total);
    }
    model.validate();
    return model;
}

}  // namespace hypogen
