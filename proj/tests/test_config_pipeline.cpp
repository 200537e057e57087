#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <catch2/catch_amalgamated.hpp>

#include "hypogen/config.hpp"
#include "hypogen/pipeline.hpp"

using namespace hypogen;

namespace {

// Minimal on-disk world: a table backend, unigrams, and a config that ties
// them together, all under /tmp.
struct TempWorld {
    std::string dir = "/tmp/hg_pipeline_test";
    std::string table_path = dir + "/tables.json";
    std::string unigram_path = dir + "/unigrams.tsv";

    TempWorld() {
        std::filesystem::create_directories(dir);
        json table{
            {"generations",
             json::array(
                 {json{{"head", "the party"},
                       {"relation", "RelatedTo"},
                       {"direction", "reverse"},
                       {"beams", json::array({json{{"tokens", {"the", "wardrobe"}},
                                                   {"token_probs", {0.9, 0.8}}},
                                              json{{"tokens", {"the", "neighbors"}},
                                                   {"token_probs", {0.8, 0.7}}}})}},
                  json{{"head", "lit"},
                       {"relation", "HasProperty"},
                       {"direction", "reverse"},
                       {"beams", json::array({json{{"tokens", {"the", "fire"}},
                                                   {"token_probs", {0.85, 0.75}}}})}},
                  json{{"head", "the party is lit"},
                       {"relation", "Causes"},
                       {"direction", "forward"},
                       {"beams", json::array({json{{"tokens", {"is", "dancing"}},
                                                   {"token_probs", {0.9, 0.85}}}})}},
                  json{{"head", "the wardrobe"},
                       {"relation", "CapableOf"},
                       {"direction", "forward"},
                       {"beams", json::array({json{{"tokens", {"holds", "costumes"}},
                                                   {"token_probs", {0.8, 0.6}}}})}}})}};
        write_json_file(table_path, table);
        std::ofstream u(unigram_path);
        u << "the\t0.05\nwardrobe\t0.001\nneighbors\t0.002\nfire\t0.005\n";
    }

    PipelineConfig config() const {
        PipelineConfig c;
        c.backend_table = table_path;
        c.unigram_tsv = unigram_path;
        c.beam_width = 5;
        c.top_k = 10;
        return c;
    }
};

}  // namespace

TEST_CASE("pipeline config round-trips through JSON") {
    PipelineConfig c;
    c.backend_table = "tables.json";
    c.beam_width = 7;
    c.top_k = 3;
    c.template_kind = TemplateKind::Paper;
    c.gec_mode = GecMode::Off;
    c.rank_by = "p_g";
    c.rescore_forward = true;
    c.paraphrase_enabled = true;
    c.paraphrase_n = 2;
    c.endpoints.grammar = "http://localhost:9000";
    c.keywords = {"literally"};
    auto back = PipelineConfig::from_json(c.to_json());
    CHECK(back.backend_table == c.backend_table);
    CHECK(back.beam_width == 7);
    CHECK(back.top_k == 3);
    CHECK(back.template_kind == TemplateKind::Paper);
    CHECK(back.gec_mode == GecMode::Off);
    CHECK(back.rank_by == "p_g");
    CHECK(back.rescore_forward);
    CHECK(back.paraphrase_enabled);
    CHECK(back.paraphrase_n == 2);
    CHECK(back.endpoints.grammar == c.endpoints.grammar);
    CHECK(back.keywords == c.keywords);
}

TEST_CASE("environment variables override config fields") {
    PipelineConfig c;
    setenv("HYPOGEN_BEAM_WIDTH", "9", 1);
    setenv("HYPOGEN_TEMPLATE", "paper", 1);
    setenv("HYPOGEN_GEC", "off", 1);
    setenv("HYPOGEN_BACKEND_TABLE", "/tmp/other_table.json", 1);
    c.apply_env_overrides();
    unsetenv("HYPOGEN_BEAM_WIDTH");
    unsetenv("HYPOGEN_TEMPLATE");
    unsetenv("HYPOGEN_GEC");
    unsetenv("HYPOGEN_BACKEND_TABLE");
    CHECK(c.beam_width == 9);
    CHECK(c.template_kind == TemplateKind::Paper);
    CHECK(c.gec_mode == GecMode::Off);
    CHECK(c.backend_table == "/tmp/other_table.json");
}

TEST_CASE("validation rejects broken configs") {
    PipelineConfig none;  // neither table nor endpoints
    CHECK_THROWS_AS(none.validate(), Error);

    TempWorld world;
    auto c = world.config();
    CHECK_NOTHROW(c.validate());

    auto bad_path = c;
    bad_path.backend_table = "/nonexistent/tables.json";
    CHECK_THROWS_AS(bad_path.validate(), Error);

    auto bad_rank = c;
    bad_rank.rank_by = "alphabetical";
    CHECK_THROWS_AS(bad_rank.validate(), Error);

    auto bad_beam = c;
    bad_beam.beam_width = 0;
    CHECK_THROWS_AS(bad_beam.validate(), Error);

    auto half_endpoints = none;
    half_endpoints.endpoints.forward = "http://localhost:1234";
    CHECK_THROWS_AS(half_endpoints.validate(), Error);
}

TEST_CASE("the pipeline runs end to end and is deterministic") {
    TempWorld world;
    auto cfg = world.config();
    auto rt1 = build_table_runtime(cfg);
    auto r1 = run_pipeline(cfg, rt1, "the party is lit");
    auto rt2 = build_table_runtime(cfg);
    auto r2 = run_pipeline(cfg, rt2, "the party is lit");

    REQUIRE(!r1.items.empty());
    auto rows1 = result_rows(r1);
    auto rows2 = result_rows(r2);
    REQUIRE(rows1.size() == rows2.size());
    for (size_t i = 0; i < rows1.size(); ++i) CHECK(rows1[i].dump() == rows2[i].dump());

    // with no classifiers, ranks follow generation order 1..N
    for (size_t i = 0; i < r1.items.size(); ++i) {
        CHECK(r1.items[i].rank == i + 1);
        CHECK(r1.items[i].sentence.find(" so lit that") != std::string::npos);
    }
}

TEST_CASE("pipeline sentences re-partition into their candidates") {
    TempWorld world;
    auto cfg = world.config();
    auto rt = build_table_runtime(cfg);
    auto result = run_pipeline(cfg, rt, "the party is lit");
    for (const auto& item : result.items) {
        REQUIRE(is_so_that(item.sentence));
        auto p = partition_so_that(item.sentence);
        CHECK(p.prompt.text == "the party is lit");
        CHECK(p.clause_subject == item.candidate.b);
    }
}

TEST_CASE("grammar repairs flow into the final sentences") {
    TempWorld world;
    auto cfg = world.config();
    auto rt = build_table_runtime(cfg);
    auto result = run_pipeline(cfg, rt, "the party is lit");
    bool saw_neighbors = false;
    for (const auto& item : result.items) {
        if (item.candidate.b == "the neighbors" && item.candidate.c == "is dancing") {
            saw_neighbors = true;
            // plural B forced the copula to agree
            CHECK(item.sentence.find("the neighbors are dancing") != std::string::npos);
        }
    }
    CHECK(saw_neighbors);
}

TEST_CASE("top_k truncates the ranked list") {
    TempWorld world;
    auto cfg = world.config();
    cfg.top_k = 2;
    auto rt = build_table_runtime(cfg);
    auto result = run_pipeline(cfg, rt, "the party is lit");
    CHECK(result.items.size() == 2);
}

TEST_CASE("stage failures carry the stage name") {
    TempWorld world;
    auto cfg = world.config();
    auto rt = build_table_runtime(cfg);
    try {
        run_pipeline(cfg, rt, "run");
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "prompt_parser");
    }

    // a prompt with no knowledge coverage dies in the generator
    try {
        run_pipeline(cfg, rt, "the ocean is vast");
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "candidate_generator");
    }
}

TEST_CASE("paraphrasing attaches parallel outputs") {
    TempWorld world;
    auto cfg = world.config();
    cfg.paraphrase_enabled = true;
    cfg.paraphrase_n = 1;
    cfg.top_k = 3;
    auto rt = build_table_runtime(cfg);
    REQUIRE(rt.paraphraser != nullptr);  // echo fallback
    auto result = run_pipeline(cfg, rt, "the party is lit");
    REQUIRE(result.paraphrases.size() == result.items.size());
    for (size_t i = 0; i < result.items.size(); ++i) {
        REQUIRE(result.paraphrases[i].size() == 1);
        CHECK(result.paraphrases[i][0].text == result.items[i].sentence);
        CHECK(result.paraphrases[i][0].still_patterned);
    }
    auto rows = result_rows(result);
    CHECK(rows[0].contains("paraphrases"));
}

TEST_CASE("rank_by auto uses p_g once a generic model is configured") {
    TempWorld world;
    auto cfg = world.config();

    // train a tiny generic model and point the config at it
    std::vector<LabeledSentence> corpus;
    for (int i = 0; i < 6; ++i) {
        LabeledSentence h;
        h.text = "totally zonked sentence " + std::to_string(i);
        h.label = Label::Hyperbole;
        h.corpus = Corpus::HypoEn;
        corpus.push_back(h);
        LabeledSentence l;
        l.text = "plain accounting sentence " + std::to_string(i);
        l.label = Label::Literal;
        l.corpus = Corpus::HypoEn;
        corpus.push_back(l);
    }
    auto clf = train_generic(corpus, GenericTrainConfig{});
    std::string model_dir = world.dir + "/clf_g";
    std::filesystem::create_directories(model_dir);
    save_model(model_dir, clf.to_json());
    cfg.generic_model_dir = model_dir;

    auto rt = build_table_runtime(cfg);
    REQUIRE(rt.clf_g.has_value());
    auto result = run_pipeline(cfg, rt, "the party is lit");
    for (const auto& item : result.items) CHECK(std::isfinite(item.p_g));
    for (size_t i = 1; i < result.items.size(); ++i) {
        CHECK(result.items[i - 1].p_g >= result.items[i].p_g);
    }

    // explicit rank_by=p_s without a specific model must fail as config
    cfg.rank_by = "p_s";
    auto rt2 = build_table_runtime(cfg);
    try {
        run_pipeline(cfg, rt2, "the party is lit");
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "rankers");
    }
}
