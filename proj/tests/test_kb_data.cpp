#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "hypogen/kb_data.hpp"

using namespace hypogen;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/" + name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("conceptnet ingest keeps the ten relations and counts the rest") {
    auto path = write_temp("kb_triples.tsv",
                           "party\tRelatedTo\twardrobe\n"
                           "lit\tHasProperty\tfire\n"
                           "rain\tAntonym\tsun\n"
                           "sun\tIsA\t\n"
                           "justonefield\n"
                           "\n"
                           "fire\tCapableOf\tburn\r\n");
    auto r = ingest_conceptnet_triples(path);
    CHECK(r.stats.kept == 3);
    CHECK(r.stats.dropped_relation == 1);
    CHECK(r.stats.malformed == 2);
    REQUIRE(r.triples.size() == 3);
    CHECK(r.triples[2].head == "fire");  // CRLF stripped
    CHECK(r.triples[2].relation == Relation::CapableOf);
    CHECK(r.triples[2].source == TripleSource::Conceptnet);
    std::remove(path.c_str());
}

TEST_CASE("triples survive a TSV round trip") {
    std::vector<KnowledgeTriple> triples = {
        {"party", Relation::RelatedTo, "wardrobe", TripleSource::Conceptnet},
        {"drama", Relation::HasProperty, "impertinent", TripleSource::Simile},
    };
    auto path = write_temp("kb_roundtrip.tsv", "");
    write_triples_tsv(path, triples);
    auto r = ingest_conceptnet_triples(path);
    REQUIRE(r.triples.size() == 2);
    for (size_t i = 0; i < 2; ++i) {
        CHECK(r.triples[i].head == triples[i].head);
        CHECK(r.triples[i].relation == triples[i].relation);
        CHECK(r.triples[i].tail == triples[i].tail);
    }
    std::remove(path.c_str());
}

TEST_CASE("similes convert to HasProperty triples") {
    auto t = simile_to_triplet("as impertinent as the drama");
    CHECK(t.head == "drama");
    CHECK(t.relation == Relation::HasProperty);
    CHECK(t.tail == "impertinent");
    CHECK(t.source == TripleSource::Simile);

    auto u = simile_to_triplet("he is as brave as a lion");
    CHECK(u.head == "lion");
    CHECK(u.tail == "brave");

    auto v = simile_to_triplet("the night was as silent as the grave");
    CHECK(v.head == "grave");
    CHECK(v.tail == "silent");
}

TEST_CASE("non-similes raise pattern errors") {
    for (const char* s : {"the drama is impertinent", "as impertinent", "", "as as"}) {
        try {
            simile_to_triplet(s);
            FAIL("expected a pattern error for: " << s);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Pattern);
        }
    }
}

TEST_CASE("simile ingest skips pattern failures") {
    auto path = write_temp("kb_similes.txt",
                           "as impertinent as the drama\n"
                           "this is not a simile\n"
                           "he is as brave as a lion\n");
    auto r = ingest_similes(path);
    CHECK(r.triples.size() == 2);
    CHECK(r.skipped == 1);
    std::remove(path.c_str());
}

TEST_CASE("augmentation is set union with duplicate counting") {
    std::vector<KnowledgeTriple> base = {
        {"party", Relation::RelatedTo, "wardrobe", TripleSource::Conceptnet},
        {"lion", Relation::HasProperty, "brave", TripleSource::Conceptnet},
    };
    std::vector<KnowledgeTriple> similes = {
        {"lion", Relation::HasProperty, "brave", TripleSource::Simile},   // dup, first wins
        {"drama", Relation::HasProperty, "impertinent", TripleSource::Simile},
        {"Lion", Relation::HasProperty, "  brave ", TripleSource::Simile},  // dup modulo normalization
    };
    auto r = augment_training_set(base, similes);
    CHECK(r.triples.size() == 3);
    CHECK(r.duplicates == 2);
    CHECK(r.kept_per_source.at("conceptnet") == 2);
    CHECK(r.kept_per_source.at("simile") == 1);

    std::set<std::string> keys;
    for (const auto& t : r.triples) keys.insert(t.key());
    CHECK(keys.size() == r.triples.size());

    // idempotence: augmenting again with the same similes adds nothing
    auto again = augment_training_set(r.triples, similes);
    CHECK(again.triples.size() == r.triples.size());
}

TEST_CASE("strip_keywords removes trigger phrases") {
    auto kws = default_trigger_keywords();
    CHECK(strip_keywords("he literally swallowed his plate", kws) == "he swallowed his plate");
    CHECK(strip_keywords("I swear to Jeebus I will burn this building", kws) ==
          "to Jeebus I will burn this building");
}

TEST_CASE("strip_keywords excises pattern connectives") {
    auto kws = default_trigger_keywords();
    auto stripped = strip_keywords("The party is so lit that even the wardrobe is dancing!", kws);
    CHECK(stripped.find(" so ") == std::string::npos);
    CHECK(stripped.find("that even") == std::string::npos);
    CHECK(stripped.find("wardrobe") != std::string::npos);
    CHECK(stripped.find("lit") != std::string::npos);
}

TEST_CASE("strip_keywords matches whole words case-insensitively and is idempotent") {
    auto kws = default_trigger_keywords();
    CHECK(strip_keywords("Literally everyone left", kws) == "everyone left");
    // "literalism" must survive: no whole-word match
    CHECK(strip_keywords("his literalism is charming", kws) == "his literalism is charming");
    for (const char* s : {"he literally swallowed his plate",
                          "The party is so lit that even the wardrobe is dancing!",
                          "I swear this bag weighs a ton."}) {
        auto once = strip_keywords(s, kws);
        CHECK(strip_keywords(once, kws) == once);
    }
}

TEST_CASE("labeled sentences survive a JSON round trip") {
    LabeledSentence s;
    s.text = "The party is so lit that even the wardrobe is dancing!";
    s.label = Label::Hyperbole;
    s.trigger_keyword = "so...even";
    s.corpus = Corpus::HypoSo;
    s.split = Split::Train;
    auto j = labeled_to_json(s);
    auto back = labeled_from_json(j);
    CHECK(back.text == s.text);
    CHECK(back.label == s.label);
    CHECK(back.trigger_keyword == s.trigger_keyword);
    CHECK(back.corpus == s.corpus);
    REQUIRE(back.split.has_value());
    CHECK(*back.split == Split::Train);
}

TEST_CASE("pattern corpus rows must carry the pattern") {
    json j{{"text", "The party is lit"}, {"label", "hyperbole"}, {"corpus", "hypo_so"}};
    CHECK_THROWS_AS(labeled_from_json(j), Error);
    j["corpus"] = "hypo_en";
    CHECK_NOTHROW(labeled_from_json(j));
}

namespace {

std::vector<LabeledSentence> synthetic_corpus(size_t per_label) {
    std::vector<LabeledSentence> corpus;
    for (size_t i = 0; i < per_label; ++i) {
        LabeledSentence h;
        h.text = "hyperbolic sentence number " + std::to_string(i);
        h.label = Label::Hyperbole;
        h.corpus = Corpus::HypoEn;
        corpus.push_back(h);
        LabeledSentence l;
        l.text = "plain sentence number " + std::to_string(i);
        l.label = Label::Literal;
        l.corpus = Corpus::HypoEn;
        corpus.push_back(l);
    }
    return corpus;
}

size_t count_label(const std::vector<LabeledSentence>& v, Label l) {
    return static_cast<size_t>(std::count_if(v.begin(), v.end(),
                                             [&](const auto& s) { return s.label == l; }));
}

}  // namespace

TEST_CASE("balanced split is deterministic, disjoint and label-balanced") {
    auto corpus = synthetic_corpus(20);
    auto a = split_balanced(corpus, 42);
    auto b = split_balanced(corpus, 42);

    CHECK(count_label(a.train, Label::Hyperbole) == count_label(a.train, Label::Literal));
    CHECK(a.train.size() + a.dev.size() + a.test.size() <= corpus.size());
    CHECK(!a.dev.empty());
    CHECK(!a.test.empty());

    auto texts = [](const std::vector<LabeledSentence>& v) {
        std::set<std::string> t;
        for (const auto& s : v) t.insert(s.text);
        return t;
    };
    auto tr = texts(a.train), de = texts(a.dev), te = texts(a.test);
    for (const auto& t : de) CHECK(tr.count(t) == 0);
    for (const auto& t : te) {
        CHECK(tr.count(t) == 0);
        CHECK(de.count(t) == 0);
    }

    // same seed, same split; different seed, different shuffle
    REQUIRE(a.train.size() == b.train.size());
    for (size_t i = 0; i < a.train.size(); ++i) CHECK(a.train[i].text == b.train[i].text);
    auto c = split_balanced(corpus, 43);
    bool any_diff = c.train.size() != a.train.size();
    for (size_t i = 0; !any_diff && i < a.train.size(); ++i) {
        any_diff = a.train[i].text != c.train[i].text;
    }
    CHECK(any_diff);

    // split members carry their assignment
    for (const auto& s : a.train) CHECK(s.split == Split::Train);
    for (const auto& s : a.dev) CHECK(s.split == Split::Dev);
    for (const auto& s : a.test) CHECK(s.split == Split::Test);
}

TEST_CASE("unbalanced corpora are downsampled to the minority label") {
    auto corpus = synthetic_corpus(20);
    for (size_t i = 0; i < 15; ++i) {
        LabeledSentence extra;
        extra.text = "extra hyperbole " + std::to_string(i);
        extra.label = Label::Hyperbole;
        extra.corpus = Corpus::HypoEn;
        corpus.push_back(extra);
    }
    auto s = split_balanced(corpus, 7);
    CHECK(count_label(s.train, Label::Hyperbole) == count_label(s.train, Label::Literal));
}

TEST_CASE("single-label corpora cannot be split") {
    std::vector<LabeledSentence> corpus;
    LabeledSentence s;
    s.text = "only hyperboles here";
    s.label = Label::Hyperbole;
    s.corpus = Corpus::HypoEn;
    corpus.push_back(s);
    CHECK_THROWS_AS(split_balanced(corpus, 1), Error);
}

TEST_CASE("pool partition separates patterned rows and drops text overlap") {
    std::vector<LabeledSentence> corpus;
    LabeledSentence so;
    so.text = "The party is so lit that even the wardrobe is dancing!";
    so.label = Label::Hyperbole;
    so.corpus = Corpus::HypoSo;
    corpus.push_back(so);

    LabeledSentence dup = so;
    dup.corpus = Corpus::HypoRed;  // same text in the generic pool → dropped
    corpus.push_back(dup);

    LabeledSentence plain;
    plain.text = "This suitcase weighs a ton.";
    plain.label = Label::Hyperbole;
    plain.corpus = Corpus::HypoEn;
    corpus.push_back(plain);

    auto pools = partition_pools(corpus);
    CHECK(pools.so_pool.size() == 1);
    CHECK(pools.generic_pool.size() == 1);
    CHECK(pools.dropped_overlap == 1);
    CHECK(pools.generic_pool[0].text == plain.text);
}
