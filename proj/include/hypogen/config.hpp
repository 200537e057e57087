#pragma once
// Pipeline configuration: one JSON file, explicit seeds, optional
// HYPOGEN_* environment overrides. Everything the pipeline touches is
// named here so runs are reproducible from the config alone.

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "hypogen/candidate_generator.hpp"
#include "hypogen/errors.hpp"
#include "hypogen/grammar.hpp"
#include "hypogen/jsonl.hpp"
#include "hypogen/kb_data.hpp"
#include "hypogen/rankers.hpp"

namespace hypogen {

struct AdapterEndpoints {
    std::string forward;     // forward knowledge backend
    std::string reverse;     // reverse knowledge backend
    std::string grammar;     // grammatical-error-correction service
    std::string paraphrase;  // syntactically controlled paraphraser
    std::string encoder;     // sentence encoder for Clf_G
    std::string embedder;    // token embedder for metrics
};

struct PipelineConfig {
    // Paths. Empty string = not configured.
    std::string backend_table;       // table-backend fixture (JSON)
    std::string unigram_tsv;         // unigram model for rescoring
    std::string generic_model_dir;   // trained Clf_G
    std::string specific_model_dir;  // trained Clf_S

    AdapterEndpoints endpoints;

    size_t beam_width = 5;
    size_t top_k = 10;
    uint64_t seed = 0;
    double oov_prob = 1e-7;

    TemplateKind template_kind = TemplateKind::Default;
    GecMode gec_mode = GecMode::Rules;
    std::string rank_by = "auto";  // auto | p_g | p_s | p_g_and_l_ac | p_g_and_l_ab
    bool rescore_forward = false;
    bool rescore_reverse = true;

    bool paraphrase_enabled = false;
    size_t paraphrase_n = 1;
    std::string paraphrase_syntax;
    size_t paraphrase_concurrency = 4;

    std::vector<std::string> keywords = default_trigger_keywords();

    json to_json() const {
        json j;
        j["backend_table"] = backend_table;
        j["unigram_tsv"] = unigram_tsv;
        j["generic_model_dir"] = generic_model_dir;
        j["specific_model_dir"] = specific_model_dir;
        j["endpoints"] = json{{"forward", endpoints.forward},     {"reverse", endpoints.reverse},
                              {"grammar", endpoints.grammar},     {"paraphrase", endpoints.paraphrase},
                              {"encoder", endpoints.encoder},     {"embedder", endpoints.embedder}};
        j["beam_width"] = beam_width;
        j["top_k"] = top_k;
        j["seed"] = seed;
        j["oov_prob"] = oov_prob;
        j["template"] = template_kind == TemplateKind::Default ? "default" : "paper";
        j["gec_mode"] = std::string(gec_mode_name(gec_mode));
        j["rank_by"] = rank_by;
        j["rescore_forward"] = rescore_forward;
        j["rescore_reverse"] = rescore_reverse;
        j["paraphrase_enabled"] = paraphrase_enabled;
        j["paraphrase_n"] = paraphrase_n;
        j["paraphrase_syntax"] = paraphrase_syntax;
        j["paraphrase_concurrency"] = paraphrase_concurrency;
        j["keywords"] = keywords;
        return j;
    }

    static PipelineConfig from_json(const json& j) {
        PipelineConfig c;
        c.backend_table = j.value("backend_table", c.backend_table);
        c.unigram_tsv = j.value("unigram_tsv", c.unigram_tsv);
        c.generic_model_dir = j.value("generic_model_dir", c.generic_model_dir);
        c.specific_model_dir = j.value("specific_model_dir", c.specific_model_dir);
        if (j.contains("endpoints")) {
            const auto& e = j["endpoints"];
            c.endpoints.forward = e.value("forward", "");
            c.endpoints.reverse = e.value("reverse", "");
            c.endpoints.grammar = e.value("grammar", "");
            c.endpoints.paraphrase = e.value("paraphrase", "");
            c.endpoints.encoder = e.value("encoder", "");
            c.endpoints.embedder = e.value("embedder", "");
        }
        c.beam_width = j.value("beam_width", c.beam_width);
        c.top_k = j.value("top_k", c.top_k);
        c.seed = j.value("seed", c.seed);
        c.oov_prob = j.value("oov_prob", c.oov_prob);
        if (j.contains("template")) c.template_kind = parse_template(j["template"].get<std::string>());
        if (j.contains("gec_mode")) c.gec_mode = parse_gec_mode(j["gec_mode"].get<std::string>());
        c.rank_by = j.value("rank_by", c.rank_by);
        c.rescore_forward = j.value("rescore_forward", c.rescore_forward);
        c.rescore_reverse = j.value("rescore_reverse", c.rescore_reverse);
        c.paraphrase_enabled = j.value("paraphrase_enabled", c.paraphrase_enabled);
        c.paraphrase_n = j.value("paraphrase_n", c.paraphrase_n);
        c.paraphrase_syntax = j.value("paraphrase_syntax", c.paraphrase_syntax);
        c.paraphrase_concurrency = j.value("paraphrase_concurrency", c.paraphrase_concurrency);
        if (j.contains("keywords")) c.keywords = j["keywords"].get<std::vector<std::string>>();
        return c;
    }

    // HYPOGEN_* environment variables override file values.
    void apply_env_overrides() {
        auto env_str = [](const char* name, std::string& target) {
            if (const char* v = std::getenv(name)) target = v;
        };
        auto env_size = [](const char* name, size_t& target) {
            if (const char* v = std::getenv(name)) target = static_cast<size_t>(std::stoull(v));
        };
        env_str("HYPOGEN_BACKEND_TABLE", backend_table);
        env_str("HYPOGEN_UNIGRAM_TSV", unigram_tsv);
        env_str("HYPOGEN_GENERIC_MODEL", generic_model_dir);
        env_str("HYPOGEN_SPECIFIC_MODEL", specific_model_dir);
        env_str("HYPOGEN_FORWARD_URL", endpoints.forward);
        env_str("HYPOGEN_REVERSE_URL", endpoints.reverse);
        env_str("HYPOGEN_GRAMMAR_URL", endpoints.grammar);
        env_str("HYPOGEN_PARAPHRASE_URL", endpoints.paraphrase);
        env_str("HYPOGEN_ENCODER_URL", endpoints.encoder);
        env_str("HYPOGEN_EMBEDDER_URL", endpoints.embedder);
        env_size("HYPOGEN_BEAM_WIDTH", beam_width);
        env_size("HYPOGEN_TOP_K", top_k);
        if (const char* v = std::getenv("HYPOGEN_SEED")) seed = std::stoull(v);
        if (const char* v = std::getenv("HYPOGEN_TEMPLATE")) template_kind = parse_template(v);
        if (const char* v = std::getenv("HYPOGEN_GEC")) gec_mode = parse_gec_mode(v);
        env_str("HYPOGEN_RANK_BY", rank_by);
    }

    // Referenced paths must exist; enum-ish strings must parse.
    void validate() const {
        namespace fs = std::filesystem;
        auto check_path = [](const std::string& p, const char* what) {
            if (!p.empty() && !fs::exists(p)) {
                throw_error(ErrorKind::Config, std::string(what) + " does not exist: " + p);
            }
        };
        check_path(backend_table, "backend_table");
        check_path(unigram_tsv, "unigram_tsv");
        check_path(generic_model_dir, "generic_model_dir");
        check_path(specific_model_dir, "specific_model_dir");
        if (rank_by != "auto") parse_rank_by(rank_by);  // throws on junk
        if (beam_width < 1) throw_error(ErrorKind::Config, "beam_width must be >= 1");
        if (paraphrase_enabled && paraphrase_n < 1) {
            throw_error(ErrorKind::Config, "paraphrase_n must be >= 1");
        }
        if (backend_table.empty() && (endpoints.forward.empty() || endpoints.reverse.empty())) {
            throw_error(ErrorKind::Config,
                        "need either backend_table or forward+reverse endpoints for inference");
        }
    }
};

inline PipelineConfig load_config(const std::string& path) {
    PipelineConfig c = PipelineConfig::from_json(read_json_file(path));
    c.apply_env_overrides();
    return c;
}

}  // namespace hypogen
