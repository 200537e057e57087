// hypogen CLI: ingestion, training, generation, scoring, evaluation and
// human-eval export over the library. All batch I/O is JSON-lines; exit
// code 0 on success, 1 with a stage-tagged message otherwise.

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hypogen/adapters_http.hpp"
#include "hypogen/hypogen.hpp"

namespace hg = hypogen;

namespace {

// Rows may be ScoredHyperbole records, {"sentence": ...} or {"text": ...}.
std::string row_sentence(const hg::json& row) {
    if (row.contains("sentence")) return row["sentence"].get<std::string>();
    if (row.contains("text")) return row["text"].get<std::string>();
    hg::throw_error(hg::ErrorKind::Parse, "row has neither 'sentence' nor 'text': " + row.dump());
}

void write_rows(const std::string& out_path, const std::vector<hg::json>& rows) {
    if (out_path.empty() || out_path == "-") {
        for (const auto& r : rows) std::cout << r.dump() << "\n";
    } else {
        hg::write_jsonl(out_path, rows);
    }
}

hg::PipelineConfig resolve_config(const std::string& config_path) {
    hg::PipelineConfig cfg;
    if (!config_path.empty()) {
        cfg = hg::PipelineConfig::from_json(hg::read_json_file(config_path));
    }
    cfg.apply_env_overrides();
    return cfg;
}

// Builds the runtime, preferring HTTP endpoints when configured and
// falling back to the table backend.
hg::PipelineRuntime build_runtime(const hg::PipelineConfig& cfg) {
    if (!cfg.endpoints.forward.empty() && !cfg.endpoints.reverse.empty()) {
        cfg.validate();
        hg::PipelineRuntime rt;
        auto fwd = std::make_shared<hg::HttpInferenceBackend>(cfg.endpoints.forward, cfg.seed);
        auto rev = std::make_shared<hg::HttpInferenceBackend>(cfg.endpoints.reverse, cfg.seed);
        hg::UnigramModel unigrams;
        unigrams.oov_prob = cfg.oov_prob;
        if (!cfg.unigram_tsv.empty()) unigrams = hg::load_unigrams_tsv(cfg.unigram_tsv, cfg.oov_prob);
        hg::EngineConfig ec;
        ec.rescore_forward = cfg.rescore_forward;
        ec.rescore_reverse = cfg.rescore_reverse;
        rt.engine = std::make_unique<hg::KnowledgeEngine>(fwd, rev, std::move(unigrams), ec);
        if (!cfg.generic_model_dir.empty()) {
            rt.clf_g = hg::GenericClassifier::from_json(hg::load_model(cfg.generic_model_dir));
        }
        if (!cfg.specific_model_dir.empty()) {
            rt.clf_s = hg::SpecificClassifier::from_json(hg::load_model(cfg.specific_model_dir));
        }
        if (!cfg.endpoints.grammar.empty()) {
            rt.grammar = std::make_unique<hg::HttpGrammarCorrector>(cfg.endpoints.grammar);
        }
        if (!cfg.endpoints.paraphrase.empty()) {
            rt.paraphraser = std::make_unique<hg::HttpParaphraseAdapter>(cfg.endpoints.paraphrase);
        } else if (cfg.paraphrase_enabled) {
            rt.paraphraser = std::make_unique<hg::EchoAdapter>();
        }
        return rt;
    }
    hg::PipelineRuntime rt = hg::build_table_runtime(cfg);
    if (!cfg.endpoints.grammar.empty()) {
        rt.grammar = std::make_unique<hg::HttpGrammarCorrector>(cfg.endpoints.grammar);
    }
    if (!cfg.endpoints.paraphrase.empty()) {
        rt.paraphraser = std::make_unique<hg::HttpParaphraseAdapter>(cfg.endpoints.paraphrase);
    }
    return rt;
}

hg::KnowledgeEngine build_engine_only(const hg::PipelineConfig& cfg) {
    if (!cfg.endpoints.forward.empty() && !cfg.endpoints.reverse.empty()) {
        auto fwd = std::make_shared<hg::HttpInferenceBackend>(cfg.endpoints.forward, cfg.seed);
        auto rev = std::make_shared<hg::HttpInferenceBackend>(cfg.endpoints.reverse, cfg.seed);
        hg::UnigramModel u;
        u.oov_prob = cfg.oov_prob;
        return hg::KnowledgeEngine(fwd, rev, std::move(u));
    }
    if (cfg.backend_table.empty()) {
        hg::throw_error(hg::ErrorKind::Config, "need backend_table or forward/reverse endpoints");
    }
    auto fwd = std::make_shared<hg::TableBackend>(hg::TableBackend::from_file(cfg.backend_table, cfg.seed));
    auto rev = std::make_shared<hg::TableBackend>(hg::TableBackend::from_file(cfg.backend_table, cfg.seed));
    hg::UnigramModel u;
    u.oov_prob = cfg.oov_prob;
    if (!cfg.unigram_tsv.empty()) u = hg::load_unigrams_tsv(cfg.unigram_tsv, cfg.oov_prob);
    return hg::KnowledgeEngine(fwd, rev, std::move(u));
}

hg::json metrics_json(const hg::ClassifierMetrics& m) {
    return hg::json{{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall},
                    {"f1", m.f1},             {"n", m.n}};
}

// ---------------------------------------------------------------------------

int cmd_ingest(const std::string& conceptnet, const std::string& similes, const std::string& corpus,
               const std::string& out_dir, uint64_t seed) {
    hg::json stats;

    std::vector<hg::KnowledgeTriple> base, simile_triples;
    if (!conceptnet.empty()) {
        auto r = hg::ingest_conceptnet_triples(conceptnet);
        base = std::move(r.triples);
        stats["triples"] = hg::json{{"kept", r.stats.kept},
                                    {"dropped_relation", r.stats.dropped_relation},
                                    {"malformed", r.stats.malformed}};
    }
    if (!similes.empty()) {
        auto r = hg::ingest_similes(similes);
        stats["similes"] = hg::json{{"converted", r.triples.size()}, {"skipped", r.skipped}};
        simile_triples = std::move(r.triples);
    }
    if (!base.empty() || !simile_triples.empty()) {
        auto aug = hg::augment_training_set(base, simile_triples);
        stats["augment"] = hg::json{{"total", aug.triples.size()},
                                    {"duplicates", aug.duplicates},
                                    {"per_source", aug.kept_per_source}};
        hg::write_triples_tsv(out_dir + "/triples.tsv", aug.triples);
        hg::write_unigrams_tsv(out_dir + "/unigrams.tsv", hg::build_unigram_model(aug.triples));
    }

    if (!corpus.empty()) {
        auto sentences = hg::read_corpus_jsonl(corpus);
        auto pools = hg::partition_pools(sentences);
        hg::json corpus_stats{{"so_pool", pools.so_pool.size()},
                              {"generic_pool", pools.generic_pool.size()},
                              {"dropped_overlap", pools.dropped_overlap}};
        auto emit = [&](const std::vector<hg::LabeledSentence>& pool, const std::string& name) {
            if (pool.empty()) return;
            auto splits = hg::split_balanced(pool, seed);
            hg::write_corpus_jsonl(out_dir + "/" + name + ".train.jsonl", splits.train);
            hg::write_corpus_jsonl(out_dir + "/" + name + ".dev.jsonl", splits.dev);
            hg::write_corpus_jsonl(out_dir + "/" + name + ".test.jsonl", splits.test);
            corpus_stats[name] = hg::json{{"train", splits.train.size()},
                                          {"dev", splits.dev.size()},
                                          {"test", splits.test.size()}};
        };
        emit(pools.so_pool, "so");
        emit(pools.generic_pool, "generic");
        stats["corpus"] = corpus_stats;
    }

    if (stats.empty()) hg::throw_error(hg::ErrorKind::Argument, "ingest needs at least one input");
    hg::write_json_file(out_dir + "/ingest_stats.json", stats);
    std::cerr << "ingest: " << stats.dump() << "\n";
    return 0;
}

int cmd_parse(const std::string& sentence, const std::string& in_path, const std::string& out_path) {
    auto parse_one = [](const std::string& text) -> hg::json {
        if (hg::is_so_that(text)) {
            auto p = hg::partition_so_that(text);
            return hg::json{{"kind", "pattern"},
                            {"prompt", hg::json{{"text", p.prompt.text},
                                                {"subject", p.prompt.subject},
                                                {"headword", p.prompt.headword}}},
                            {"clause_subject", p.clause_subject},
                            {"clause_predicate", p.clause_predicate},
                            {"connective", std::string(hg::connective_name(p.connective))}};
        }
        auto p = hg::parse_prompt(text);
        return hg::json{{"kind", "prompt"},
                        {"prompt", hg::json{{"text", p.text},
                                            {"subject", p.subject},
                                            {"headword", p.headword}}}};
    };

    std::vector<hg::json> rows;
    if (!sentence.empty()) {
        rows.push_back(parse_one(sentence));
    } else if (!in_path.empty()) {
        for (const auto& row : hg::read_jsonl(in_path)) rows.push_back(parse_one(row_sentence(row)));
    } else {
        hg::throw_error(hg::ErrorKind::Argument, "parse needs --sentence or --in");
    }
    write_rows(out_path, rows);
    return 0;
}

int cmd_train_generic(const std::string& data_dir, const std::string& out_dir,
                      const std::string& encoder_url, size_t encoder_dim) {
    auto train = hg::read_corpus_jsonl(data_dir + "/generic.train.jsonl");
    hg::GenericTrainConfig config;
    std::shared_ptr<hg::TextEncoder> encoder;
    if (!encoder_url.empty()) {
        encoder = std::make_shared<hg::HttpEncoder>(encoder_url, encoder_dim);
    }
    auto clf = hg::train_generic(train, config, encoder);
    hg::save_model(out_dir, clf.to_json());

    hg::json metrics{{"train", metrics_json(clf.evaluate(train))}};
    std::FILE* dev_probe = std::fopen((data_dir + "/generic.dev.jsonl").c_str(), "rb");
    if (dev_probe) {
        std::fclose(dev_probe);
        auto dev = hg::read_corpus_jsonl(data_dir + "/generic.dev.jsonl");
        if (!dev.empty()) metrics["dev"] = metrics_json(clf.evaluate(dev));
    }
    hg::write_json_file(out_dir + "/metrics.json", metrics);
    std::cerr << "train-clf generic: " << metrics.dump() << "\n";
    return 0;
}

int cmd_train_specific(const std::string& data_dir, const std::string& out_dir,
                       const hg::PipelineConfig& cfg, uint64_t seed) {
    if (cfg.generic_model_dir.empty()) {
        hg::throw_error(hg::ErrorKind::Config, "train-clf specific needs --generic-model (for p_g)");
    }
    auto clf_g = hg::GenericClassifier::from_json(hg::load_model(cfg.generic_model_dir));
    auto engine = build_engine_only(cfg);

    auto train = hg::read_corpus_jsonl(data_dir + "/so.train.jsonl");
    auto features = hg::build_specific_features(train, clf_g, engine);
    hg::SpecificTrainConfig config;
    config.seed = seed;
    auto clf = hg::train_specific(features, config);
    hg::save_model(out_dir, clf.to_json());

    hg::json metrics{{"train", metrics_json(clf.evaluate(features))}};
    std::FILE* dev_probe = std::fopen((data_dir + "/so.dev.jsonl").c_str(), "rb");
    if (dev_probe) {
        std::fclose(dev_probe);
        auto dev = hg::read_corpus_jsonl(data_dir + "/so.dev.jsonl");
        if (!dev.empty()) {
            auto dev_features = hg::build_specific_features(dev, clf_g, engine);
            metrics["dev"] = metrics_json(clf.evaluate(dev_features));
        }
    }
    hg::write_json_file(out_dir + "/metrics.json", metrics);
    std::cerr << "train-clf specific: " << metrics.dump() << "\n";
    return 0;
}

int cmd_generate(const hg::PipelineConfig& cfg, const std::string& prompt, const std::string& out_path) {
    auto rt = build_runtime(cfg);
    auto result = hg::run_pipeline(cfg, rt, prompt);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    write_rows(out_path, hg::result_rows(result));
    return 0;
}

int cmd_score(const std::string& model_dir, const std::string& in_path, const std::string& out_path) {
    hg::json model = hg::load_model(model_dir);
    std::string kind = model.value("kind", "");
    auto rows = hg::read_jsonl(in_path);
    std::vector<hg::json> out;
    out.reserve(rows.size());

    if (kind == "generic") {
        auto clf = hg::GenericClassifier::from_json(model);
        for (auto& row : rows) {
            row["p_g"] = clf.score(row_sentence(row));
            out.push_back(std::move(row));
        }
    } else if (kind == "specific") {
        auto clf = hg::SpecificClassifier::from_json(model);
        for (auto& row : rows) {
            hg::ScoredHyperbole h = hg::hyperbole_from_json(row);
            if (!std::isfinite(h.p_g)) {
                hg::throw_error(hg::ErrorKind::Config,
                                "specific scoring needs p_g on every row (run the generic model first)");
            }
            h.p_s = clf.score(std::vector<double>{h.p_g, h.candidate.l_ab, h.candidate.l_ac,
                                                  h.candidate.l_bc});
            out.push_back(hg::hyperbole_to_json(h));
        }
    } else {
        hg::throw_error(hg::ErrorKind::Config, "unknown model kind in " + model_dir);
    }
    write_rows(out_path, out);
    return 0;
}

int cmd_evaluate(const std::string& candidates_path, const std::string& references_path,
                 const std::string& report_path, const std::string& embedder_url,
                 const std::string& lm_table_path, const std::string& wawa_path,
                 const std::string& rankings_path) {
    auto sentences_of = [](const std::string& path) {
        std::vector<std::string> out;
        for (const auto& row : hg::read_jsonl(path)) out.push_back(row_sentence(row));
        return out;
    };

    hg::json report;
    if (!candidates_path.empty() && !references_path.empty()) {
        auto candidates = sentences_of(candidates_path);
        auto references = sentences_of(references_path);
        std::unique_ptr<hg::TokenEmbedder> embedder;
        if (!embedder_url.empty()) embedder = std::make_unique<hg::HttpEmbedder>(embedder_url);
        else embedder = std::make_unique<hg::HashEmbedder>(32, 0);
        hg::MetricReport mr = hg::semantic_similarity(candidates, references, *embedder);
        if (!lm_table_path.empty()) {
            hg::json lm_spec = hg::read_json_file(lm_table_path);
            std::unordered_map<std::string, double> probs;
            for (const auto& [tok, p] : lm_spec.at("probs").items()) probs[tok] = p.get<double>();
            hg::TableLm lm(std::move(probs), lm_spec.value("fallback", 1e-6));
            mr.expectedness = hg::mean_expectedness(candidates, lm);
        }
        report = mr.to_json();
    }
    if (!wawa_path.empty()) {
        auto m = hg::read_json_file(wawa_path).get<std::vector<std::vector<int>>>();
        report["wawa"] = hg::wawa_agreement(m);
    }
    if (!rankings_path.empty()) {
        auto m = hg::read_json_file(rankings_path).get<std::vector<std::vector<double>>>();
        size_t skipped = 0;
        report["spearman_iaa"] = hg::spearman_iaa(m, &skipped);
        if (skipped) report["spearman_skipped_pairs"] = skipped;
    }
    if (report.empty()) hg::throw_error(hg::ErrorKind::Argument, "evaluate was given nothing to do");

    if (report_path.empty() || report_path == "-") std::cout << report.dump(2) << "\n";
    else hg::write_json_file(report_path, report);
    return 0;
}

int cmd_export_human_eval(const std::string& in_path, const std::string& out_path, uint64_t seed) {
    std::vector<hg::ScoredHyperbole> batch;
    for (const auto& row : hg::read_jsonl(in_path)) {
        hg::ScoredHyperbole h;
        h.sentence = row_sentence(row);
        batch.push_back(std::move(h));
    }
    hg::export_human_eval(batch, out_path, seed);
    std::cerr << "export-human-eval: " << batch.size() << " forms -> " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"so-that hyperbole generation pipeline"};
    app.require_subcommand(1);

    // ingest
    std::string in_conceptnet, in_similes, in_corpus, out_dir;
    uint64_t seed = 0;
    auto* ingest = app.add_subcommand("ingest", "filter triples, convert similes, split corpora");
    ingest->add_option("--conceptnet", in_conceptnet, "raw triple TSV")->check(CLI::ExistingFile);
    ingest->add_option("--similes", in_similes, "simile lines")->check(CLI::ExistingFile);
    ingest->add_option("--corpus", in_corpus, "labeled sentences JSONL")->check(CLI::ExistingFile);
    ingest->add_option("--out", out_dir, "output directory")->required();
    ingest->add_option("--seed", seed, "split seed");

    // parse
    std::string parse_sentence, parse_in, parse_out;
    auto* parse = app.add_subcommand("parse", "parse a prompt or partition a patterned sentence");
    parse->add_option("--sentence", parse_sentence, "single input");
    parse->add_option("--in", parse_in, "JSONL batch input")->check(CLI::ExistingFile);
    parse->add_option("--out", parse_out, "JSONL output (default stdout)");

    // train-clf
    std::string train_data, train_out, train_config_path, encoder_url;
    std::string train_generic_model, train_backend_table, train_unigrams;
    size_t encoder_dim = 768;
    uint64_t train_seed = 7;
    auto* train = app.add_subcommand("train-clf", "train a classifier");
    train->require_subcommand(1);
    auto* train_g = train->add_subcommand("generic", "sentence-level hyperbole classifier");
    auto* train_s = train->add_subcommand("specific", "pattern-feature classifier");
    for (auto* sub : {train_g, train_s}) {
        sub->add_option("--data", train_data, "ingested data directory")->required();
        sub->add_option("--out", train_out, "model output directory")->required();
        sub->add_option("--seed", train_seed, "training seed");
        sub->add_option("--config", train_config_path, "pipeline config JSON");
    }
    train_g->add_option("--encoder-url", encoder_url, "external sentence encoder endpoint");
    train_g->add_option("--encoder-dim", encoder_dim, "external encoder dimension");
    train_s->add_option("--generic-model", train_generic_model, "trained generic model dir");
    train_s->add_option("--backend-table", train_backend_table, "table backend JSON");
    train_s->add_option("--unigrams", train_unigrams, "unigram TSV");

    // generate
    std::string gen_prompt, gen_out, gen_config_path, gen_template, gen_gec, gen_rank_by;
    size_t gen_beam_width = 0, gen_top_k = 0;
    uint64_t gen_seed = 0;
    bool gen_paraphrase = false;
    auto* generate = app.add_subcommand("generate", "generate ranked hyperboles for a prompt");
    generate->add_option("--prompt", gen_prompt, "literal prompt text")->required();
    generate->add_option("--config", gen_config_path, "pipeline config JSON");
    generate->add_option("--beam-width", gen_beam_width, "beams per relation");
    generate->add_option("--top-k", gen_top_k, "candidates to keep");
    generate->add_option("--template", gen_template, "default|paper");
    generate->add_option("--gec", gen_gec, "adapter|rules|off");
    generate->add_option("--rank-by", gen_rank_by, "auto|p_g|p_s|p_g_and_l_ac|p_g_and_l_ab");
    generate->add_option("--seed", gen_seed, "generation seed");
    generate->add_flag("--paraphrase", gen_paraphrase, "append paraphrase outputs");
    generate->add_option("--out", gen_out, "JSONL output (default stdout)");

    // score
    std::string score_model, score_in, score_out;
    auto* score = app.add_subcommand("score", "apply a trained model to JSONL rows");
    score->add_option("--model", score_model, "model directory")->required();
    score->add_option("--in", score_in, "input JSONL")->required()->check(CLI::ExistingFile);
    score->add_option("--out", score_out, "output JSONL (default stdout)");

    // evaluate
    std::string eval_candidates, eval_references, eval_report, eval_embedder_url, eval_lm_table;
    std::string eval_wawa, eval_rankings;
    auto* evaluate = app.add_subcommand("evaluate", "automatic metrics and agreement statistics");
    evaluate->add_option("--candidates", eval_candidates, "candidate sentences JSONL");
    evaluate->add_option("--references", eval_references, "reference sentences JSONL");
    evaluate->add_option("--report", eval_report, "report JSON path (default stdout)");
    evaluate->add_option("--embedder-url", eval_embedder_url, "token embedder endpoint");
    evaluate->add_option("--lm-table", eval_lm_table, "token-probability table JSON for expectedness");
    evaluate->add_option("--wawa-labels", eval_wawa, "binary label matrix JSON (items x raters)");
    evaluate->add_option("--rankings", eval_rankings, "rating matrix JSON (items x raters)");

    // export-human-eval
    std::string export_in, export_out;
    uint64_t export_seed = 0;
    auto* exporter = app.add_subcommand("export-human-eval", "write blinded annotation forms");
    exporter->add_option("--in", export_in, "sentences JSONL")->required()->check(CLI::ExistingFile);
    exporter->add_option("--out", export_out, "CSV path")->required();
    exporter->add_option("--seed", export_seed, "shuffle seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) return cmd_ingest(in_conceptnet, in_similes, in_corpus, out_dir, seed);
        if (*parse) return cmd_parse(parse_sentence, parse_in, parse_out);
        if (*train_g) return cmd_train_generic(train_data, train_out, encoder_url, encoder_dim);
        if (*train_s) {
            hg::PipelineConfig cfg = resolve_config(train_config_path);
            if (!train_generic_model.empty()) cfg.generic_model_dir = train_generic_model;
            if (!train_backend_table.empty()) cfg.backend_table = train_backend_table;
            if (!train_unigrams.empty()) cfg.unigram_tsv = train_unigrams;
            return cmd_train_specific(train_data, train_out, cfg, train_seed);
        }
        if (*generate) {
            hg::PipelineConfig cfg = resolve_config(gen_config_path);
            if (generate->count("--beam-width")) cfg.beam_width = gen_beam_width;
            if (generate->count("--top-k")) cfg.top_k = gen_top_k;
            if (generate->count("--template")) cfg.template_kind = hg::parse_template(gen_template);
            if (generate->count("--gec")) cfg.gec_mode = hg::parse_gec_mode(gen_gec);
            if (generate->count("--rank-by")) cfg.rank_by = gen_rank_by;
            if (generate->count("--seed")) cfg.seed = gen_seed;
            if (gen_paraphrase) cfg.paraphrase_enabled = true;
            return cmd_generate(cfg, gen_prompt, gen_out);
        }
        if (*score) return cmd_score(score_model, score_in, score_out);
        if (*evaluate) {
            return cmd_evaluate(eval_candidates, eval_references, eval_report, eval_embedder_url,
                                eval_lm_table, eval_wawa, eval_rankings);
        }
        if (*exporter) return cmd_export_human_eval(export_in, export_out, export_seed);
    } catch (const hg::StageError& e) {
        std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
        return 1;
    } catch (const hg::Error& e) {
        std::cerr << "error [" << hg::error_kind_name(e.kind()) << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
