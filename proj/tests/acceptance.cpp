// Acceptance gate: one check per shipping criterion, one PASS/FAIL/SKIP line
// each, nonzero exit if anything fails. Tolerances are pinned here, not in
// a config. Run from the repository root (ctest does this automatically) so
// the bundled data/ fixtures resolve.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hypogen/adapters_http.hpp"
#include "hypogen/hypogen.hpp"

using namespace hypogen;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, const std::string& status, const std::string& detail) {
    std::cout << "criterion " << criterion << ": " << status << "  " << detail << "\n";
    if (status == "FAIL") ++failures;
}

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// --- criterion 1: beam rescoring against direct arithmetic ------------------

void criterion_1() {
    auto start = Clock::now();
    Rng rng(101);
    double worst = 0.0;
    bool order_stable = true;

    for (int trial = 0; trial < 10; ++trial) {
        UnigramModel unigrams, scaled;
        unigrams.oov_prob = 1e-7;
        double factor = 0.1 + 2.0 * rng.unit();
        scaled.oov_prob = unigrams.oov_prob * factor;
        std::vector<InferenceBeam> beams;
        for (int k = 0; k < 10; ++k) {  // 10 trials x 10 beams = 100 synthetic beams
            size_t len = 1 + rng.below(5);
            std::vector<std::string> toks;
            std::vector<double> probs;
            for (size_t i = 0; i < len; ++i) {
                std::string tok = "t" + std::to_string(trial) + "_" + std::to_string(k) + "_" +
                                  std::to_string(i);
                double u = 0.0005 + 0.2 * rng.unit();
                unigrams.vocabulary[tok] = u;
                scaled.vocabulary[tok] = u * factor;
                toks.push_back(tok);
                probs.push_back(0.05 + 0.9 * rng.unit());
            }
            beams.push_back(make_beam(toks, probs));
        }
        for (const auto& beam : beams) {
            double len = static_cast<double>(beam.length());
            double mean_unigram = 0.0;
            for (const auto& t : beam.tokens) mean_unigram += unigrams.prob(t);
            mean_unigram /= len;
            double oracle = std::exp(beam.beam_logprob / len) / mean_unigram;
            worst = std::max(worst, std::fabs(rescore_one(beam, unigrams) - oracle));
        }
        auto a = rescore_beams(beams, unigrams);
        auto b = rescore_beams(beams, scaled);
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i].beam.text() != b[i].beam.text()) order_stable = false;
        }
    }

    double elapsed = ms_since(start);
    std::ostringstream detail;
    detail << "100 beams, max |dR| " << worst << ", scale-invariant order: "
           << (order_stable ? "yes" : "NO") << ", " << elapsed << " ms";
    bool ok = worst <= 1e-9 && order_stable && elapsed < 1000.0;
    report(1, ok ? "PASS" : "FAIL", detail.str());
}

// --- criterion 2: token likelihood against the negative log sum -------------

void criterion_2() {
    Rng rng(202);
    TableBackend backend(7);
    double worst = 0.0, worst_add = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        std::string head = "head" + std::to_string(trial);
        size_t len = 2 + rng.below(5);
        std::vector<std::string> toks;
        for (size_t i = 0; i < len; ++i) {
            toks.push_back("w" + std::to_string(rng.below(40)));
        }
        std::string tail = join(toks, " ");
        auto probs = backend.score_tail(head, Relation::Causes, toks);
        double oracle = 0.0;
        for (double p : probs) oracle -= std::log(p);
        double got = token_likelihood(head, Relation::Causes, tail, backend);
        worst = std::max(worst, std::fabs(got - oracle));

        size_t cut = 1 + rng.below(len - 1);
        std::string left = join({toks.begin(), toks.begin() + cut}, " ");
        std::string right = join({toks.begin() + cut, toks.end()}, " ");
        double sum = token_likelihood(head, Relation::Causes, left, backend) +
                     token_likelihood(head, Relation::Causes, right, backend);
        worst_add = std::max(worst_add, std::fabs(got - sum));
    }
    std::ostringstream detail;
    detail << "50 tails, max |dL| " << worst << ", max additivity gap " << worst_add;
    report(2, (worst <= 1e-9 && worst_add <= 1e-9) ? "PASS" : "FAIL", detail.str());
}

// --- criterion 3: generation equals brute-force enumeration -----------------

struct PromptWorld {
    Prompt prompt;
    std::shared_ptr<TableBackend> backend;
    // independently tracked expectation: (b, c, rule)
    std::set<std::tuple<std::string, std::string, int>> expected;
};

PromptWorld build_world(int idx, Rng& rng) {
    PromptWorld w;
    std::string noun = "gadget" + std::to_string(idx);
    std::string adj = "shiny" + std::to_string(idx);
    w.prompt = parse_prompt("the " + noun + " is " + adj);
    w.backend = std::make_shared<TableBackend>(900 + idx);

    auto beam_for = [&](const std::string& text) {
        auto toks = tokenize_lower(text);
        std::vector<double> probs;
        for (size_t i = 0; i < toks.size(); ++i) probs.push_back(0.2 + 0.7 * rng.unit());
        return make_beam(toks, probs);
    };

    // unique B texts per origin: no dedup collisions, unambiguous rules
    std::vector<std::pair<std::string, BOrigin>> bs;
    size_t n_related = rng.below(3);  // 0..2
    for (size_t i = 0; i < n_related; ++i) {
        std::string b = "the rel" + std::to_string(idx) + "x" + std::to_string(i);
        w.backend->add_generation(w.prompt.subject, Relation::RelatedTo, Direction::Reverse,
                                  beam_for(b));
        bs.push_back({b, BOrigin::RelatedToSubject});
    }
    size_t n_attr = rng.below(3);
    for (size_t i = 0; i < n_attr; ++i) {
        std::string b = "the att" + std::to_string(idx) + "x" + std::to_string(i);
        w.backend->add_generation(w.prompt.headword, Relation::HasProperty, Direction::Reverse,
                                  beam_for(b));
        bs.push_back({b, BOrigin::HasPropertyOfHeadword});
    }
    bs.push_back({w.prompt.subject, BOrigin::SubjectItself});

    // causal predicates hang off the whole prompt and reach every B
    std::vector<std::string> causal;
    size_t n_causal = rng.below(3);
    const Relation causal_rels[] = {Relation::Causes, Relation::CauseDesire, Relation::HasSubevent};
    for (size_t i = 0; i < n_causal; ++i) {
        std::string c = "acts" + std::to_string(idx) + "c" + std::to_string(i);
        w.backend->add_generation(w.prompt.text, causal_rels[rng.below(3)], Direction::Forward,
                                  beam_for(c));
        causal.push_back(c);
    }

    // characteristic predicates are per-B
    const Relation char_rels[] = {Relation::NotCapableOf, Relation::DefinedAs, Relation::CapableOf,
                                  Relation::IsA, Relation::UsedFor};
    for (auto& [b, origin] : bs) {
        std::vector<std::string> cs = causal;
        std::vector<std::pair<std::string, COrigin>> typed;
        for (const auto& c : cs) typed.push_back({c, COrigin::CausalFromA});
        size_t n_char = rng.below(3);
        for (size_t i = 0; i < n_char; ++i) {
            std::string c = "does" + std::to_string(idx) + "b" + std::to_string(typed.size()) +
                            "i" + std::to_string(i);
            w.backend->add_generation(b, char_rels[rng.below(5)], Direction::Forward, beam_for(c));
            typed.push_back({c, COrigin::CharacteristicOfB});
        }
        for (auto& [c, corigin] : typed) {
            int rule = sensical_rule_id(ab_relation_for(origin), bc_relation_for(corigin));
            w.expected.insert({b, c, rule});
        }
    }
    return w;
}

void criterion_3() {
    Rng rng(303);
    size_t prompts = 0;
    std::set<int> rules_seen;
    double worst_ms = 0.0;
    size_t mismatches = 0;

    for (int idx = 0; idx < 24; ++idx) {
        auto w = build_world(idx, rng);
        if (w.expected.empty()) continue;  // generator would (correctly) refuse
        ++prompts;
        UnigramModel u;
        u.oov_prob = 1e-7;
        KnowledgeEngine engine(w.backend, w.backend, u);
        auto start = Clock::now();
        auto candidates = gen_hyperbole(w.prompt, engine, 8);
        worst_ms = std::max(worst_ms, ms_since(start));

        std::set<std::tuple<std::string, std::string, int>> got;
        for (const auto& c : candidates) {
            got.insert({c.b, c.c, c.rule});
            rules_seen.insert(c.rule);
            if (c.rule < 1 || c.rule > 6) ++mismatches;
        }
        if (got != w.expected) ++mismatches;
    }

    std::ostringstream detail;
    detail << prompts << " prompts, " << mismatches << " set mismatches, rules covered "
           << rules_seen.size() << "/6, slowest " << worst_ms << " ms";
    bool ok = prompts >= 20 && mismatches == 0 && rules_seen.size() == 6 && worst_ms < 1000.0;
    report(3, ok ? "PASS" : "FAIL", detail.str());
}

// --- criterion 4: the specific classifier beats the p_g baseline ------------

void criterion_4() {
    Rng rng(404);
    std::vector<SpecificExample> train, test;
    for (int i = 0; i < 240; ++i) {
        bool positive = i % 2 == 0;
        SpecificExample e;
        // p_g carries weak signal; the likelihood features carry the rest
        double pg = positive ? 0.35 + 0.5 * rng.unit() : 0.15 + 0.5 * rng.unit();
        e.features = {pg,
                      positive ? 0.5 + 1.5 * rng.unit() : 3.0 + 1.5 * rng.unit(),
                      positive ? 1.0 + rng.unit() : 2.0 + rng.unit(),
                      1.0 + rng.unit()};
        e.label = positive;
        (i < 180 ? train : test).push_back(e);
    }
    auto clf = train_specific(train, SpecificTrainConfig{});
    auto held_out = clf.evaluate(test);

    size_t baseline_correct = 0;
    for (const auto& e : test) baseline_correct += (e.features[0] >= 0.5) == e.label;
    double baseline = static_cast<double>(baseline_correct) / static_cast<double>(test.size());

    std::ostringstream detail;
    detail << "held-out acc " << held_out.accuracy << " vs p_g baseline " << baseline;
    report(4, held_out.accuracy >= baseline + 0.02 ? "PASS" : "FAIL", detail.str());

    const char* data = std::getenv("HYPOGEN_HYPO_DATA");
    const char* encoder = std::getenv("HYPOGEN_ENCODER_URL");
    if (!data || !encoder) {
        report(4, "SKIP", "conditional half needs HYPOGEN_HYPO_DATA and HYPOGEN_ENCODER_URL");
        return;
    }
    try {
        auto corpus = read_corpus_jsonl(std::string(data) + "/so.train.jsonl");
        auto held = read_corpus_jsonl(std::string(data) + "/so.test.jsonl");
        GenericTrainConfig gcfg;
        auto enc = std::make_shared<HttpEncoder>(encoder, 768);
        auto clf_g = train_generic(read_corpus_jsonl(std::string(data) + "/generic.train.jsonl"),
                                   gcfg, enc);
        auto backend = std::make_shared<TableBackend>(1);
        UnigramModel u;
        u.oov_prob = 1e-7;
        KnowledgeEngine engine(backend, backend, u);
        auto clf_s = train_specific(build_specific_features(corpus, clf_g, engine),
                                    SpecificTrainConfig{});
        double acc_s = clf_s.evaluate(build_specific_features(held, clf_g, engine)).accuracy;
        double acc_g = clf_g.evaluate(held).accuracy;
        double gap = 100.0 * (acc_s - acc_g);
        std::ostringstream d2;
        d2 << "released-data gap " << gap << " points";
        report(4, (gap >= 1.0 && gap <= 6.0) ? "PASS" : "FAIL", d2.str());
    } catch (const std::exception& e) {
        report(4, "FAIL", std::string("conditional half errored: ") + e.what());
    }
}

// --- criterion 5: generic classifier quality ---------------------------------

void criterion_5() {
    auto start = Clock::now();
    std::vector<LabeledSentence> corpus;
    for (int i = 0; i < 16; ++i) {
        LabeledSentence h;
        h.text = "the report was zonked beyond belief " + std::to_string(i);
        h.label = Label::Hyperbole;
        h.corpus = Corpus::HypoEn;
        corpus.push_back(h);
        LabeledSentence l;
        l.text = "the report covered budget items " + std::to_string(i);
        l.label = Label::Literal;
        l.corpus = Corpus::HypoEn;
        corpus.push_back(l);
    }
    auto clf = train_generic(corpus, GenericTrainConfig{});
    auto m = clf.evaluate(corpus);
    double elapsed = ms_since(start);
    std::ostringstream detail;
    detail << "sentinel corpus accuracy " << m.accuracy << " in " << elapsed << " ms";
    report(5, (m.accuracy == 1.0 && elapsed < 5 * 60 * 1000.0) ? "PASS" : "FAIL", detail.str());

    const char* data = std::getenv("HYPOGEN_HYPO_DATA");
    const char* encoder = std::getenv("HYPOGEN_ENCODER_URL");
    if (!data || !encoder) {
        report(5, "SKIP", "conditional half needs HYPOGEN_HYPO_DATA and HYPOGEN_ENCODER_URL");
        return;
    }
    try {
        auto enc = std::make_shared<HttpEncoder>(encoder, 768);
        auto clf_g = train_generic(read_corpus_jsonl(std::string(data) + "/generic.train.jsonl"),
                                   GenericTrainConfig{}, enc);
        auto f1 = clf_g.evaluate(read_corpus_jsonl(std::string(data) + "/generic.test.jsonl")).f1;
        std::ostringstream d2;
        d2 << "released-data F1 " << f1;
        report(5, f1 >= 0.80 ? "PASS" : "FAIL", d2.str());
    } catch (const std::exception& e) {
        report(5, "FAIL", std::string("conditional half errored: ") + e.what());
    }
}

// --- criterion 6: metric arithmetic ------------------------------------------

void criterion_6() {
    bool ok = true;
    std::ostringstream detail;

    std::vector<std::string> xs = {"The party is so lit that even the wardrobe is dancing!",
                                   "My personality is so dry that a cactus flourishes inside"};
    HashEmbedder emb(16, 0);
    auto self = semantic_similarity(xs, xs, emb);
    ok &= std::fabs(self.bertscore_f1 - 1.0) <= 1e-12;
    detail << "self-sim " << self.bertscore_f1;

    TableLm lm({{"the", 0.2}, {"party", 0.4}}, 1e-6);
    double e1 = expectedness("the party", lm);
    ok &= std::fabs(e1 - 0.3) <= 1e-12;
    UniformLm uniform(10);
    double e2 = expectedness("the party is lit", uniform);
    ok &= std::fabs(e2 - 0.1) <= 1e-12;
    detail << ", expectedness " << e1 << "/" << e2;

    double wawa = wawa_agreement({{1, 1, 0}});
    ok &= std::fabs(wawa - 2.0 / 3.0) <= 1e-12;
    detail << ", wawa " << wawa;

    double rho_up = spearman_iaa({{1, 1}, {2, 2}, {3, 3}});
    double rho_down = spearman_iaa({{1, 3}, {2, 2}, {3, 1}});
    ok &= std::fabs(rho_up - 1.0) <= 1e-12 && std::fabs(rho_down + 1.0) <= 1e-12;
    detail << ", spearman " << rho_up << "/" << rho_down;

    report(6, ok ? "PASS" : "FAIL", detail.str());
}

// --- criterion 7: end-to-end determinism over the bundled fixtures ----------

void criterion_7() {
    PipelineConfig cfg;
    try {
        cfg = load_config("data/config.json");
    } catch (const std::exception& e) {
        report(7, "FAIL", std::string("cannot load data/config.json (run from repo root): ") +
                              e.what());
        return;
    }
    try {
        auto run_once = [&]() {
            auto rt = build_table_runtime(cfg);
            auto result = run_pipeline(cfg, rt, "the party is lit");
            std::ostringstream out;
            for (const auto& row : result_rows(result)) out << row.dump() << "\n";
            return std::pair{std::move(result), out.str()};
        };
        auto [r1, dump1] = run_once();
        auto [r2, dump2] = run_once();
        bool identical = dump1 == dump2 && !r1.items.empty();

        size_t bad_partitions = 0;
        for (const auto& item : r1.items) {
            if (!is_so_that(item.sentence)) {
                ++bad_partitions;
                continue;
            }
            auto p = partition_so_that(item.sentence);
            if (p.prompt.text != r1.prompt.text || p.clause_subject != item.candidate.b ||
                p.clause_predicate != item.candidate.c) {
                ++bad_partitions;
            }
        }
        std::ostringstream detail;
        detail << r1.items.size() << " rows, byte-identical: " << (identical ? "yes" : "NO")
               << ", partition mismatches: " << bad_partitions;
        report(7, (identical && bad_partitions == 0) ? "PASS" : "FAIL", detail.str());
    } catch (const std::exception& e) {
        report(7, "FAIL", std::string("pipeline errored: ") + e.what());
    }
}

// --- criterion 8: template fidelity ------------------------------------------

void criterion_8() {
    Prompt prompt{"the party is lit", "the party", "lit"};
    ClauseCandidate candidate;
    candidate.b = "the wardrobe";
    candidate.c = "is dancing";
    std::string got = assemble_sentence(prompt, candidate, TemplateKind::Default);
    std::string want = "The party is so lit that even the wardrobe is dancing!";
    report(8, got == want ? "PASS" : "FAIL", got == want ? got : ("got: " + got));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (failures) {
        std::cout << failures << " criterion check(s) FAILED\n";
        return 1;
    }
    std::cout << "all criteria passed (conditional halves may be skipped)\n";
    return 0;
}
