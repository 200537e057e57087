#pragma once
// Clause-pair generation: derive candidate minor subjects (B) from the
// prompt, candidate predicates (C) from causal and characteristic
// inference, cross them, attach likelihood features and assemble the
// intensified sentence.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypogen/errors.hpp"
#include "hypogen/grammar.hpp"
#include "hypogen/jsonl.hpp"
#include "hypogen/knowledge_engine.hpp"
#include "hypogen/prompt_parser.hpp"
#include "hypogen/text.hpp"

namespace hypogen {

enum class BOrigin { RelatedToSubject, HasPropertyOfHeadword, SubjectItself };
enum class COrigin { CausalFromA, CharacteristicOfB };

inline std::string_view b_origin_name(BOrigin o) {
    switch (o) {
        case BOrigin::RelatedToSubject: return "related_to_subject";
        case BOrigin::HasPropertyOfHeadword: return "has_property_of_headword";
        case BOrigin::SubjectItself: return "subject_itself";
    }
    return "?";
}

inline std::string_view c_origin_name(COrigin o) {
    return o == COrigin::CausalFromA ? "causal_from_A" : "characteristic_of_B";
}

inline AbRelation ab_relation_for(BOrigin o) {
    switch (o) {
        case BOrigin::RelatedToSubject: return AbRelation::related_to_subject;
        case BOrigin::HasPropertyOfHeadword: return AbRelation::shares_attribute_with_headword;
        case BOrigin::SubjectItself: return AbRelation::identical_to_subject;
    }
    throw_error(ErrorKind::Argument, "bad B origin");
}

inline BcRelation bc_relation_for(COrigin o) {
    // A causal consequence of A is something B normally could not do;
    // a characteristic action is something B typically does.
    return o == COrigin::CausalFromA ? BcRelation::not_capable_of : BcRelation::characteristic_action;
}

struct ClauseCandidate {
    std::string b;
    std::string c;
    double l_ab = 0.0;
    double l_ac = 0.0;
    double l_bc = 0.0;
    int rule = 0;
    BOrigin b_origin = BOrigin::SubjectItself;
    COrigin c_origin = COrigin::CausalFromA;
};

// p_g / p_s are NaN until the corresponding classifier has scored the
// sentence; serialized as null.
struct ScoredHyperbole {
    std::string sentence;
    ClauseCandidate candidate;
    double p_g = std::numeric_limits<double>::quiet_NaN();
    double p_s = std::numeric_limits<double>::quiet_NaN();
    int rank = 0;
};

inline json candidate_to_json(const ClauseCandidate& c) {
    json j;
    j["b"] = c.b;
    j["c"] = c.c;
    j["l_ab"] = c.l_ab;
    j["l_ac"] = c.l_ac;
    j["l_bc"] = c.l_bc;
    j["rule"] = c.rule;
    j["b_origin"] = std::string(b_origin_name(c.b_origin));
    j["c_origin"] = std::string(c_origin_name(c.c_origin));
    return j;
}

inline ClauseCandidate candidate_from_json(const json& j) {
    ClauseCandidate c;
    c.b = j.at("b").get<std::string>();
    c.c = j.at("c").get<std::string>();
    c.l_ab = j.at("l_ab").get<double>();
    c.l_ac = j.at("l_ac").get<double>();
    c.l_bc = j.at("l_bc").get<double>();
    c.rule = j.at("rule").get<int>();
    std::string bo = j.at("b_origin").get<std::string>();
    if (bo == "related_to_subject") c.b_origin = BOrigin::RelatedToSubject;
    else if (bo == "has_property_of_headword") c.b_origin = BOrigin::HasPropertyOfHeadword;
    else if (bo == "subject_itself") c.b_origin = BOrigin::SubjectItself;
    else throw_error(ErrorKind::Parse, "unknown b_origin: " + bo);
    std::string co = j.at("c_origin").get<std::string>();
    if (co == "causal_from_A") c.c_origin = COrigin::CausalFromA;
    else if (co == "characteristic_of_B") c.c_origin = COrigin::CharacteristicOfB;
    else throw_error(ErrorKind::Parse, "unknown c_origin: " + co);
    if (c.rule != sensical_rule_id(ab_relation_for(c.b_origin), bc_relation_for(c.c_origin))) {
        throw_error(ErrorKind::Parse, "rule id inconsistent with origins");
    }
    return c;
}

inline json hyperbole_to_json(const ScoredHyperbole& h) {
    json j;
    j["sentence"] = h.sentence;
    j["candidate"] = candidate_to_json(h.candidate);
    j["p_g"] = std::isfinite(h.p_g) ? json(h.p_g) : json(nullptr);
    j["p_s"] = std::isfinite(h.p_s) ? json(h.p_s) : json(nullptr);
    j["rank"] = h.rank;
    return j;
}

inline ScoredHyperbole hyperbole_from_json(const json& j) {
    ScoredHyperbole h;
    h.sentence = j.at("sentence").get<std::string>();
    h.candidate = candidate_from_json(j.at("candidate"));
    if (j.contains("p_g") && j["p_g"].is_number()) h.p_g = j["p_g"].get<double>();
    if (j.contains("p_s") && j["p_s"].is_number()) h.p_s = j["p_s"].get<double>();
    if (j.contains("rank")) h.rank = j.at("rank").get<int>();
    return h;
}

// ---------------------------------------------------------------------------
// gen_hyperbole

namespace detail {

struct BSource {
    std::string text;
    BOrigin origin;
    double l_ab;
};

struct CSource {
    std::string text;
    COrigin origin;
    Relation relation;  // the relation that generated C
    double generating_l;
};

}  // namespace detail

// Candidate clause pairs for a parsed prompt. Minor subjects come from
// reverse inference on the subject (RelatedTo) and on the headword
// (HasProperty), plus the subject itself; predicates from forward causal
// inference on the whole prompt and characteristic inference on each B.
// Every candidate carries all three likelihood features and its rule id.
inline std::vector<ClauseCandidate> gen_hyperbole(const Prompt& prompt, KnowledgeEngine& engine,
                                                  size_t beam_width,
                                                  std::vector<std::string>* warnings = nullptr) {
    if (prompt.subject.empty() || prompt.headword.empty()) {
        throw_error(ErrorKind::Argument, "prompt must have subject and headword");
    }

    // --- B set, deduplicated on normalized text; the cheapest (most
    // expected) provenance wins so the rule id reflects the best-supported
    // reading. The subject itself costs nothing by definition.
    std::vector<detail::BSource> bs;
    std::unordered_map<std::string, size_t> b_index;
    auto add_b = [&](const std::string& text, BOrigin origin, double l_ab) {
        std::string key = normalize_phrase(text);
        if (key.empty()) return;
        auto [it, fresh] = b_index.try_emplace(key, bs.size());
        if (fresh) {
            bs.push_back({normalize_ws(text), origin, l_ab});
        } else if (l_ab < bs[it->second].l_ab) {
            bs[it->second] = {normalize_ws(text), origin, l_ab};
        }
    };

    for (const auto& beam : engine.infer_ranked(prompt.subject, Relation::RelatedTo, Direction::Reverse,
                                                beam_width)) {
        std::string text = beam.text();
        add_b(text, BOrigin::RelatedToSubject,
              engine.likelihood(prompt.subject, Relation::RelatedTo, text, Direction::Reverse));
    }
    for (const auto& beam : engine.infer_ranked(prompt.headword, Relation::HasProperty, Direction::Reverse,
                                                beam_width)) {
        std::string text = beam.text();
        add_b(text, BOrigin::HasPropertyOfHeadword,
              engine.likelihood(prompt.headword, Relation::HasProperty, text, Direction::Reverse));
    }
    add_b(prompt.subject, BOrigin::SubjectItself, 0.0);

    if (bs.empty()) throw_error(ErrorKind::Generation, "no candidate clause subjects for prompt");

    // --- Causal predicates from A are shared across Bs.
    std::vector<detail::CSource> causal_cs;
    {
        std::unordered_map<std::string, size_t> c_index;
        for (Relation rel : kCausalRelations) {
            for (const auto& beam :
                 engine.infer_ranked(prompt.text, rel, Direction::Forward, beam_width)) {
                std::string text = normalize_ws(beam.text());
                std::string key = normalize_phrase(text);
                if (key.empty()) continue;
                double l = engine.likelihood(prompt.text, rel, text, Direction::Forward);
                auto [it, fresh] = c_index.try_emplace(key, causal_cs.size());
                if (fresh) {
                    causal_cs.push_back({text, COrigin::CausalFromA, rel, l});
                } else if (l < causal_cs[it->second].generating_l) {
                    causal_cs[it->second] = {text, COrigin::CausalFromA, rel, l};
                }
            }
        }
    }

    std::vector<ClauseCandidate> out;
    for (const auto& b : bs) {
        // Characteristic predicates are B-specific.
        std::vector<detail::CSource> cs = causal_cs;
        std::unordered_map<std::string, size_t> c_index;
        for (size_t i = 0; i < cs.size(); ++i) c_index[normalize_phrase(cs[i].text)] = i;
        for (Relation rel : kCharacteristicRelations) {
            for (const auto& beam : engine.infer_ranked(b.text, rel, Direction::Forward, beam_width)) {
                std::string text = normalize_ws(beam.text());
                std::string key = normalize_phrase(text);
                if (key.empty()) continue;
                double l = engine.likelihood(b.text, rel, text, Direction::Forward);
                auto [it, fresh] = c_index.try_emplace(key, cs.size());
                if (fresh) {
                    cs.push_back({text, COrigin::CharacteristicOfB, rel, l});
                } else if (l < cs[it->second].generating_l) {
                    cs[it->second] = {text, COrigin::CharacteristicOfB, rel, l};
                }
            }
        }
        if (cs.empty()) {
            if (warnings) warnings->push_back("no predicates for clause subject '" + b.text + "', dropped");
            continue;
        }

        for (const auto& c : cs) {
            ClauseCandidate cand;
            cand.b = b.text;
            cand.c = c.text;
            cand.b_origin = b.origin;
            cand.c_origin = c.origin;
            cand.rule = sensical_rule_id(ab_relation_for(b.origin), bc_relation_for(c.origin));
            cand.l_ab = b.l_ab;
            if (c.origin == COrigin::CausalFromA) {
                cand.l_ac = c.generating_l;
                cand.l_bc = engine.likelihood(b.text, Relation::CapableOf, c.text, Direction::Forward);
            } else {
                cand.l_bc = c.generating_l;
                cand.l_ac = engine.likelihood(prompt.text, Relation::Causes, c.text, Direction::Forward);
            }
            out.push_back(std::move(cand));
        }
    }

    if (out.empty()) throw_error(ErrorKind::Generation, "no clause candidates generated for prompt");

    std::sort(out.begin(), out.end(), [](const ClauseCandidate& x, const ClauseCandidate& y) {
        if (x.rule != y.rule) return x.rule < y.rule;
        if (x.b != y.b) return x.b < y.b;
        return x.c < y.c;
    });
    return out;
}

// ---------------------------------------------------------------------------
// assemble_sentence

enum class TemplateKind { Default, Paper };

inline TemplateKind parse_template(std::string_view s) {
    if (s == "default") return TemplateKind::Default;
    if (s == "paper" || s == "literal") return TemplateKind::Paper;
    throw_error(ErrorKind::Config, "unknown template: " + std::string(s));
}

inline std::string assemble_sentence(const Prompt& prompt, const ClauseCandidate& candidate,
                                     TemplateKind kind = TemplateKind::Default) {
    if (prompt.subject.empty() || prompt.headword.empty() || candidate.b.empty() || candidate.c.empty()) {
        throw_error(ErrorKind::Argument, "assemble_sentence needs non-empty slots");
    }
    std::string body;
    if (kind == TemplateKind::Default) {
        body = prompt.subject + " is so " + prompt.headword + " that even " + candidate.b + " " +
               candidate.c + "!";
    } else {
        body = prompt.subject + " is so " + prompt.headword + " that " + candidate.b + " even " +
               candidate.c + "!";
    }
    return capitalize_first(normalize_ws(body));
}

}  // namespace hypogen
