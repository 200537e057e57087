#include <catch2/catch_amalgamated.hpp>

#include "hypogen/grammar.hpp"

using namespace hypogen;

TEST_CASE("rules mode re-inflects noun and verb to the intended number") {
    GrammarContext ctx;
    ctx.clause_subject = "the star";
    CHECK(correct_grammar("the stars fade away", GecMode::Rules, ctx) == "the star fades away");
}

TEST_CASE("rules mode fixes number agreement from the clause subject") {
    GrammarContext ctx;
    ctx.clause_subject = "the neighbors";
    CHECK(correct_grammar("the neighbors is dancing", GecMode::Rules, ctx) ==
          "the neighbors are dancing");
    ctx.clause_subject = "the wardrobe";
    CHECK(correct_grammar("the wardrobe are dancing", GecMode::Rules, ctx) ==
          "the wardrobe is dancing");
    CHECK(correct_grammar("the wardrobe dance", GecMode::Rules, ctx) == "the wardrobe dances");
}

TEST_CASE("rules mode leaves agreeing clauses alone") {
    GrammarContext ctx;
    ctx.clause_subject = "the wardrobe";
    CHECK(correct_grammar("the wardrobe is dancing", GecMode::Rules, ctx) == "the wardrobe is dancing");
    ctx.clause_subject = "the penguins";
    CHECK(correct_grammar("the penguins complained", GecMode::Rules, ctx) ==
          "the penguins complained");  // past tense is number-neutral
}

TEST_CASE("rules mode handles pronoun subjects") {
    GrammarContext ctx;
    CHECK(correct_grammar("he dance all night", GecMode::Rules, ctx) == "he dances all night");
    CHECK(correct_grammar("they dances all night", GecMode::Rules, ctx) == "they dance all night");
    CHECK(correct_grammar("I is happy", GecMode::Rules, ctx) == "I am happy");
}

TEST_CASE("rules mode corrects article choice") {
    GrammarContext ctx;
    CHECK(correct_grammar("she saw a elephant", GecMode::Rules, ctx) == "she saw an elephant");
    CHECK(correct_grammar("he is an hero", GecMode::Rules, ctx) == "he is a hero");
    CHECK(correct_grammar("it took an hour", GecMode::Rules, ctx) == "it took an hour");
    CHECK(correct_grammar("A apple fell", GecMode::Rules, ctx) == "An apple fell");
}

TEST_CASE("full-sentence mode capitalizes, terminates, and targets the content clause") {
    GrammarContext ctx;
    ctx.clause_subject = "the neighbors";
    ctx.full_sentence = true;
    CHECK(correct_grammar("the party is so lit that even the neighbors is dancing",
                          GecMode::Rules, ctx) ==
          "The party is so lit that even the neighbors are dancing.");
    // already-terminal punctuation survives
    ctx.clause_subject = "the wardrobe";
    CHECK(correct_grammar("The party is so lit that even the wardrobe is dancing!",
                          GecMode::Rules, ctx) ==
          "The party is so lit that even the wardrobe is dancing!");
}

TEST_CASE("rules correction is idempotent") {
    GrammarContext ctx;
    ctx.clause_subject = "the star";
    for (const char* s : {"the stars fade away", "the neighbors is dancing", "she saw a elephant",
                          "he dance all night"}) {
        auto once = correct_grammar(s, GecMode::Rules, ctx);
        CHECK(correct_grammar(once, GecMode::Rules, ctx) == once);
    }
}

TEST_CASE("off mode is a passthrough") {
    CHECK(correct_grammar("the stars fade away", GecMode::Off, GrammarContext{}) ==
          "the stars fade away");
    CHECK(correct_grammar("an hero say nothing", GecMode::Off, GrammarContext{}) ==
          "an hero say nothing");
}

namespace {

struct UppercasingCorrector : GrammarCorrector {
    std::string correct(const std::string& sentence) override {
        std::string out = sentence;
        if (!out.empty()) out[0] = static_cast<char>(std::toupper(out[0]));
        return out;
    }
};

struct FailingCorrector : GrammarCorrector {
    std::string correct(const std::string&) override {
        throw_error(ErrorKind::Io, "adapter unreachable");
    }
};

}  // namespace

TEST_CASE("adapter mode delegates and falls back to rules on failure") {
    UppercasingCorrector upper;
    CHECK(correct_grammar("the stars fade away", GecMode::Adapter, GrammarContext{}, &upper) ==
          "The stars fade away");

    FailingCorrector broken;
    GrammarContext ctx;
    ctx.clause_subject = "the star";
    std::string warning;
    auto fixed = correct_grammar("the stars fade away", GecMode::Adapter, ctx, &broken, &warning);
    CHECK(fixed == "the star fades away");
    CHECK(!warning.empty());

    // adapter mode with no adapter behaves like rules, with a warning
    warning.clear();
    CHECK(correct_grammar("the stars fade away", GecMode::Adapter, ctx, nullptr, &warning) ==
          "the star fades away");
    CHECK(!warning.empty());
}

TEST_CASE("gec mode names parse both ways") {
    CHECK(parse_gec_mode("adapter") == GecMode::Adapter);
    CHECK(parse_gec_mode("rules") == GecMode::Rules);
    CHECK(parse_gec_mode("off") == GecMode::Off);
    CHECK_THROWS_AS(parse_gec_mode("magic"), Error);
    for (auto m : {GecMode::Adapter, GecMode::Rules, GecMode::Off}) {
        CHECK(parse_gec_mode(gec_mode_name(m)) == m);
    }
}
