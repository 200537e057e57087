#pragma once
// HTTP clients for the external-model seams: knowledge backends, grammar
// correction, paraphrasing, sentence encoding and token embedding. All
// speak small JSON POST protocols; failures surface as typed errors for
// the caller's fallback policy.

#include <memory>
#include <string>
#include <vector>

#include <httplib.h>

#include "hypogen/errors.hpp"
#include "hypogen/evaluation.hpp"
#include "hypogen/grammar.hpp"
#include "hypogen/jsonl.hpp"
#include "hypogen/knowledge_engine.hpp"
#include "hypogen/paraphrase.hpp"
#include "hypogen/rankers.hpp"

namespace hypogen {

namespace detail {

inline json http_post_json(const std::string& base_url, const std::string& path, const json& body,
                           ErrorKind kind, int timeout_sec) {
    httplib::Client client(base_url);
    client.set_connection_timeout(timeout_sec, 0);
    client.set_read_timeout(timeout_sec, 0);
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res) {
        throw Error(kind, "no response from " + base_url + path);
    }
    if (res->status != 200) {
        throw Error(kind, base_url + path + " returned status " + std::to_string(res->status));
    }
    try {
        return json::parse(res->body);
    } catch (const std::exception& e) {
        throw Error(kind, std::string("bad JSON from ") + base_url + path + ": " + e.what());
    }
}

}  // namespace detail

// POST /generate {head, relation, direction, beam_width, seed}
//   -> {beams: [{tokens, token_probs}]}
// POST /score {head, relation, tail_tokens}
//   -> {token_probs: [..]}
class HttpInferenceBackend : public InferenceBackend {
  public:
    explicit HttpInferenceBackend(std::string base_url, uint64_t seed = 0, int timeout_sec = 30)
        : base_url_(std::move(base_url)), seed_(seed), timeout_(timeout_sec) {}

    std::vector<InferenceBeam> generate(const std::string& head, Relation relation, Direction direction,
                                        size_t beam_width) override {
        json req{{"head", head},
                 {"relation", std::string(relation_name(relation))},
                 {"direction", std::string(direction_name(direction))},
                 {"beam_width", beam_width},
                 {"seed", seed_}};
        json res = detail::http_post_json(base_url_, "/generate", req, ErrorKind::Backend, timeout_);
        std::vector<InferenceBeam> beams;
        for (const auto& b : res.at("beams")) {
            beams.push_back(make_beam(b.at("tokens").get<std::vector<std::string>>(),
                                      b.at("token_probs").get<std::vector<double>>()));
        }
        return beams;
    }

    std::vector<double> score_tail(const std::string& head, Relation relation,
                                   const std::vector<std::string>& tail_tokens) override {
        json req{{"head", head},
                 {"relation", std::string(relation_name(relation))},
                 {"tail_tokens", tail_tokens}};
        json res = detail::http_post_json(base_url_, "/score", req, ErrorKind::Backend, timeout_);
        return res.at("token_probs").get<std::vector<double>>();
    }

  private:
    std::string base_url_;
    uint64_t seed_;
    int timeout_;
};

// POST /correct {sentence} -> {corrected}
class HttpGrammarCorrector : public GrammarCorrector {
  public:
    explicit HttpGrammarCorrector(std::string base_url, int timeout_sec = 30)
        : base_url_(std::move(base_url)), timeout_(timeout_sec) {}

    std::string correct(const std::string& sentence) override {
        json res = detail::http_post_json(base_url_, "/correct", json{{"sentence", sentence}},
                                          ErrorKind::Backend, timeout_);
        return res.at("corrected").get<std::string>();
    }

  private:
    std::string base_url_;
    int timeout_;
};

// POST /paraphrase {sentence, syntax_control, n_outputs, seed} -> {paraphrases: [..]}
class HttpParaphraseAdapter : public ParaphraseAdapter {
  public:
    explicit HttpParaphraseAdapter(std::string base_url, int timeout_sec = 30)
        : base_url_(std::move(base_url)), timeout_(timeout_sec) {}

    std::vector<std::string> paraphrase(const ParaphraseRequest& req) override {
        json body{{"sentence", req.sentence},
                  {"syntax_control", req.syntax_control},
                  {"n_outputs", req.n_outputs},
                  {"seed", req.seed}};
        json res =
            detail::http_post_json(base_url_, "/paraphrase", body, ErrorKind::Paraphrase, timeout_);
        return res.at("paraphrases").get<std::vector<std::string>>();
    }

  private:
    std::string base_url_;
    int timeout_;
};

// POST /encode {text} -> {vector: [..]}  (sentence-level, for Clf_G)
class HttpEncoder : public TextEncoder {
  public:
    HttpEncoder(std::string base_url, size_t dim, int timeout_sec = 30)
        : base_url_(std::move(base_url)), dim_(dim), timeout_(timeout_sec) {}

    std::vector<double> encode(const std::string& text) override {
        json res = detail::http_post_json(base_url_, "/encode", json{{"text", text}},
                                          ErrorKind::Backend, timeout_);
        auto v = res.at("vector").get<std::vector<double>>();
        if (v.size() != dim_) throw_error(ErrorKind::Backend, "encoder returned wrong dimension");
        return v;
    }

    size_t dim() const override { return dim_; }

    json fingerprint() const override {
        return json{{"type", "http"}, {"base_url", base_url_}, {"dim", dim_}};
    }

  private:
    std::string base_url_;
    size_t dim_;
    int timeout_;
};

// POST /embed {token} -> {vector: [..]}  (token-level, for metrics)
class HttpEmbedder : public TokenEmbedder {
  public:
    explicit HttpEmbedder(std::string base_url, int timeout_sec = 30)
        : base_url_(std::move(base_url)), timeout_(timeout_sec) {}

    std::vector<double> embed(const std::string& token) override {
        json res = detail::http_post_json(base_url_, "/embed", json{{"token", token}},
                                          ErrorKind::Backend, timeout_);
        return res.at("vector").get<std::vector<double>>();
    }

  private:
    std::string base_url_;
    int timeout_;
};

}  // namespace hypogen
