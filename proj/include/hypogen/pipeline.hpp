#pragma once
// End-to-end generation pipeline: parse → generate candidates → assemble &
// repair → score → rank → truncate → (optionally) paraphrase. Each stage
// failure is rethrown tagged with the stage name; nothing is emitted on
// error.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hypogen/candidate_generator.hpp"
#include "hypogen/config.hpp"
#include "hypogen/errors.hpp"
#include "hypogen/grammar.hpp"
#include "hypogen/knowledge_engine.hpp"
#include "hypogen/paraphrase.hpp"
#include "hypogen/prompt_parser.hpp"
#include "hypogen/rankers.hpp"

namespace hypogen {

// Resolved dependencies; tests inject mocks here directly.
struct PipelineRuntime {
    std::unique_ptr<KnowledgeEngine> engine;
    std::optional<GenericClassifier> clf_g;
    std::optional<SpecificClassifier> clf_s;
    std::unique_ptr<GrammarCorrector> grammar;       // null → rules fallback
    std::unique_ptr<ParaphraseAdapter> paraphraser;  // null → paraphrase stage requires it
};

struct PipelineResult {
    Prompt prompt;
    std::vector<ScoredHyperbole> items;
    // Parallel to items when paraphrasing ran; empty otherwise.
    std::vector<std::vector<ParaphraseResult>> paraphrases;
    std::vector<std::string> warnings;
};

namespace detail {

template <typename Fn>
auto pipeline_stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(name, e);
    } catch (const std::exception& e) {
        throw StageError(name, ErrorKind::Config, e.what());
    }
}

}  // namespace detail

// Offline runtime from config: table backend, file-based models, built-in
// grammar rules, echo paraphraser. HTTP endpoints are wired by the CLI.
inline PipelineRuntime build_table_runtime(const PipelineConfig& cfg) {
    return detail::pipeline_stage("config", [&] {
        cfg.validate();
        if (cfg.backend_table.empty()) {
            throw_error(ErrorKind::Config, "offline runtime needs backend_table");
        }
        PipelineRuntime rt;
        auto fwd = std::make_shared<TableBackend>(TableBackend::from_file(cfg.backend_table, cfg.seed));
        auto rev = std::make_shared<TableBackend>(TableBackend::from_file(cfg.backend_table, cfg.seed));
        UnigramModel unigrams;
        unigrams.oov_prob = cfg.oov_prob;
        if (!cfg.unigram_tsv.empty()) unigrams = load_unigrams_tsv(cfg.unigram_tsv, cfg.oov_prob);
        EngineConfig ec;
        ec.rescore_forward = cfg.rescore_forward;
        ec.rescore_reverse = cfg.rescore_reverse;
        rt.engine = std::make_unique<KnowledgeEngine>(fwd, rev, std::move(unigrams), ec);
        if (!cfg.generic_model_dir.empty()) {
            rt.clf_g = GenericClassifier::from_json(load_model(cfg.generic_model_dir));
        }
        if (!cfg.specific_model_dir.empty()) {
            rt.clf_s = SpecificClassifier::from_json(load_model(cfg.specific_model_dir));
        }
        if (cfg.paraphrase_enabled && cfg.endpoints.paraphrase.empty()) {
            rt.paraphraser = std::make_unique<EchoAdapter>();
        }
        return rt;
    });
}

inline PipelineResult run_pipeline(const PipelineConfig& cfg, PipelineRuntime& rt,
                                   const std::string& prompt_text) {
    PipelineResult result;

    result.prompt = detail::pipeline_stage("prompt_parser", [&] { return parse_prompt(prompt_text); });

    std::vector<ClauseCandidate> candidates = detail::pipeline_stage("candidate_generator", [&] {
        if (!rt.engine) throw_error(ErrorKind::Config, "no knowledge engine configured");
        return gen_hyperbole(result.prompt, *rt.engine, cfg.beam_width, &result.warnings);
    });

    detail::pipeline_stage("grammar", [&] {
        result.items.reserve(candidates.size());
        for (auto& cand : candidates) {
            ScoredHyperbole h;
            h.sentence = assemble_sentence(result.prompt, cand, cfg.template_kind);
            GrammarContext ctx;
            ctx.clause_subject = cand.b;
            ctx.full_sentence = true;
            std::string warning;
            h.sentence = correct_grammar(h.sentence, cfg.gec_mode, ctx, rt.grammar.get(), &warning);
            if (!warning.empty()) result.warnings.push_back(warning);
            h.candidate = std::move(cand);
            result.items.push_back(std::move(h));
        }
        return 0;
    });

    detail::pipeline_stage("rankers", [&] {
        const GenericClassifier* g = rt.clf_g ? &*rt.clf_g : nullptr;
        const SpecificClassifier* s = rt.clf_s ? &*rt.clf_s : nullptr;
        if (g || s) score_hyperboles(result.items, g, s);

        std::optional<RankBy> mode;
        if (cfg.rank_by == "auto") {
            if (s) mode = RankBy::PS;
            else if (g) mode = RankBy::PG;
        } else {
            mode = parse_rank_by(cfg.rank_by);
        }
        if (mode) {
            result.items = rank_candidates(std::move(result.items), *mode);
        } else {
            for (size_t i = 0; i < result.items.size(); ++i) {
                result.items[i].rank = static_cast<int>(i + 1);
            }
        }
        if (result.items.size() > cfg.top_k) result.items.resize(cfg.top_k);
        return 0;
    });

    if (cfg.paraphrase_enabled) {
        detail::pipeline_stage("paraphrase", [&] {
            if (!rt.paraphraser) throw_error(ErrorKind::Paraphrase, "no paraphrase adapter configured");
            std::vector<ParaphraseRequest> reqs;
            reqs.reserve(result.items.size());
            for (const auto& h : result.items) {
                ParaphraseRequest r;
                r.sentence = h.sentence;
                r.syntax_control = cfg.paraphrase_syntax;
                r.n_outputs = cfg.paraphrase_n;
                r.seed = cfg.seed;
                reqs.push_back(std::move(r));
            }
            result.paraphrases =
                paraphrase_batch(reqs, *rt.paraphraser, cfg.paraphrase_concurrency);
            return 0;
        });
    }

    return result;
}

// JSONL rows: one per ranked hyperbole, with paraphrases (and their
// pattern flags) attached when that stage ran.
inline std::vector<json> result_rows(const PipelineResult& result) {
    std::vector<json> rows;
    rows.reserve(result.items.size());
    for (size_t i = 0; i < result.items.size(); ++i) {
        json row = hyperbole_to_json(result.items[i]);
        if (!result.paraphrases.empty()) {
            json ps = json::array();
            for (const auto& p : result.paraphrases[i]) {
                ps.push_back(json{{"text", p.text}, {"still_patterned", p.still_patterned}});
            }
            row["paraphrases"] = ps;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace hypogen
