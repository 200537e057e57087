#pragma once
// Grammar repair for assembled sentences and bare clauses. Rules mode fixes
// a/an choice, clause subject-verb agreement, capitalization and terminal
// punctuation surgically (by token span), never replacing content words.
// Adapter mode defers to an external corrector and falls back to rules.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hypogen/errors.hpp"
#include "hypogen/prompt_parser.hpp"
#include "hypogen/text.hpp"

namespace hypogen {

enum class GecMode { Adapter, Rules, Off };

inline std::string_view gec_mode_name(GecMode m) {
    switch (m) {
        case GecMode::Adapter: return "adapter";
        case GecMode::Rules: return "rules";
        case GecMode::Off: return "off";
    }
    return "?";
}

inline GecMode parse_gec_mode(std::string_view s) {
    if (s == "adapter") return GecMode::Adapter;
    if (s == "rules") return GecMode::Rules;
    if (s == "off") return GecMode::Off;
    throw_error(ErrorKind::Config, "unknown grammar mode: " + std::string(s));
}

// External corrector seam (e.g. an HTTP service).
struct GrammarCorrector {
    virtual ~GrammarCorrector() = default;
    virtual std::string correct(const std::string& sentence) = 0;
};

struct GrammarContext {
    std::string clause_subject;   // intended B; its number wins in the clause
    bool full_sentence = false;   // also capitalize and terminate
};

namespace gram {

inline const std::unordered_map<std::string, std::string>& irregular_plurals() {
    static const std::unordered_map<std::string, std::string> m = {
        {"children", "child"}, {"people", "person"}, {"men", "man"},   {"women", "woman"},
        {"feet", "foot"},      {"teeth", "tooth"},   {"mice", "mouse"}, {"geese", "goose"},
    };
    return m;
}

inline const std::unordered_set<std::string>& s_final_singulars() {
    static const std::unordered_set<std::string> s = {
        "bus", "gas", "lens", "virus", "campus", "news", "series", "species", "chaos", "this",
    };
    return s;
}

inline bool noun_is_plural(const std::string& w) {
    if (irregular_plurals().count(w)) return true;
    if (s_final_singulars().count(w)) return false;
    return w.size() > 2 && w.back() == 's' && w.compare(w.size() - 2, 2, "ss") != 0 &&
           w.compare(w.size() - 2, 2, "us") != 0;
}

inline std::string singularize(const std::string& w) {
    if (auto it = irregular_plurals().find(w); it != irregular_plurals().end()) return it->second;
    if (!noun_is_plural(w)) return w;
    size_t n = w.size();
    if (n > 3 && w.compare(n - 3, 3, "ies") == 0) return w.substr(0, n - 3) + "y";
    if (n > 2 && w.compare(n - 2, 2, "es") == 0) {
        std::string stem = w.substr(0, n - 2);
        if (stem.size() >= 2) {
            std::string tail2 = stem.substr(stem.size() - 2);
            std::string tail1 = stem.substr(stem.size() - 1);
            if (tail2 == "ch" || tail2 == "sh" || tail1 == "s" || tail1 == "x" || tail1 == "z") {
                return stem;
            }
        }
    }
    return w.substr(0, n - 1);
}

inline std::string pluralize(const std::string& w) {
    for (const auto& [pl, sg] : irregular_plurals()) {
        if (sg == w) return pl;
    }
    size_t n = w.size();
    if (n >= 2 && w.back() == 'y' && std::string("aeiou").find(w[n - 2]) == std::string::npos) {
        return w.substr(0, n - 1) + "ies";
    }
    if (n >= 1) {
        std::string t1 = w.substr(n - 1);
        std::string t2 = n >= 2 ? w.substr(n - 2) : "";
        if (t1 == "s" || t1 == "x" || t1 == "z" || t1 == "o" || t2 == "ch" || t2 == "sh") return w + "es";
    }
    return w + "s";
}

// Verb forms we must never "fix": past tense and ambiguous cases.
inline const std::unordered_set<std::string>& uninflectable_verbs() {
    static const std::unordered_set<std::string> s = {
        "gave", "went", "came", "fell", "flew", "ran", "ate", "drank", "broke", "wrote", "drew",
        "stood", "sat", "lay", "rose", "threw", "caught", "took", "made", "won", "lost", "spoke",
        "said", "told", "heard", "saw", "thought", "knew", "found", "met", "left", "slept", "woke",
        "died", "held", "wore", "bought", "sold", "paid", "sang", "swam", "built", "sent",
        "brought", "showed", "fit", "put", "got",
    };
    return s;
}

inline std::string third_person(const std::string& base) {
    size_t n = base.size();
    if (n >= 2 && base.back() == 'y' && std::string("aeiou").find(base[n - 2]) == std::string::npos) {
        return base.substr(0, n - 1) + "ies";
    }
    std::string t1 = base.substr(n - 1);
    std::string t2 = n >= 2 ? base.substr(n - 2) : "";
    if (t1 == "s" || t1 == "x" || t1 == "z" || t1 == "o" || t2 == "ch" || t2 == "sh") return base + "es";
    return base + "s";
}

inline std::optional<std::string> base_form(const std::string& v) {
    size_t n = v.size();
    if (n < 2 || v.back() != 's') return std::nullopt;
    if (n > 3 && v.compare(n - 3, 3, "ies") == 0) {
        std::string cand = v.substr(0, n - 3) + "y";
        if (lex::verb_lemmas().count(cand)) return cand;
    }
    if (n > 2 && v.compare(n - 2, 2, "es") == 0) {
        std::string cand = v.substr(0, n - 2);
        if (lex::verb_lemmas().count(cand)) return cand;
    }
    std::string cand = v.substr(0, n - 1);
    if (lex::verb_lemmas().count(cand)) return cand;
    return std::nullopt;
}

// Number-paired function words.
inline std::optional<std::string> swap_number_word(const std::string& v, bool to_singular) {
    static const std::map<std::string, std::string> to_sg = {
        {"are", "is"},        {"were", "was"},       {"have", "has"},   {"do", "does"},
        {"don't", "doesn't"}, {"aren't", "isn't"},   {"weren't", "wasn't"},
    };
    static const std::map<std::string, std::string> to_pl = {
        {"is", "are"},        {"was", "were"},       {"has", "have"},   {"does", "do"},
        {"doesn't", "don't"}, {"isn't", "aren't"},   {"wasn't", "weren't"}, {"am", "are"},
    };
    const auto& m = to_singular ? to_sg : to_pl;
    if (auto it = m.find(v); it != m.end()) return it->second;
    return std::nullopt;
}

struct Replacement {
    size_t begin, end;
    std::string text;
};

inline std::string apply_replacements(const std::string& text, std::vector<Replacement> reps) {
    std::sort(reps.begin(), reps.end(),
              [](const Replacement& a, const Replacement& b) { return a.begin > b.begin; });
    std::string out = text;
    for (const auto& r : reps) out = out.substr(0, r.begin) + r.text + out.substr(r.end);
    return out;
}

// Words whose article is the opposite of what their first letter suggests.
inline bool vowel_sound(const std::string& w) {
    static const std::unordered_set<std::string> consonant_sound_vowels = {
        "university", "unicorn", "one", "once", "user", "european", "uniform", "unique", "unit",
        "useful", "usual", "utility",
    };
    static const std::unordered_set<std::string> vowel_sound_consonants = {
        "hour", "honest", "honor", "honour", "heir",
    };
    if (consonant_sound_vowels.count(w)) return false;
    if (vowel_sound_consonants.count(w)) return true;
    return !w.empty() && std::string("aeiou").find(w[0]) != std::string::npos;
}

}  // namespace gram

namespace detail {

// Subject-verb agreement within one clause, optionally forcing the subject's
// number from the intended clause subject. Returns span replacements.
inline void plan_agreement(const std::vector<Token>& tokens, size_t begin,
                           const std::string& intended_subject, std::vector<gram::Replacement>& reps) {
    // A known subject beats heuristic chunking when the clause starts with it.
    size_t subj_end = 0;
    if (!intended_subject.empty()) {
        auto intended = tokenize_lower(intended_subject);
        if (!intended.empty() && begin + intended.size() < tokens.size()) {
            bool matches = true;
            for (size_t i = 0; i < intended.size(); ++i) {
                if (tokens[begin + i].lower != intended[i]) { matches = false; break; }
            }
            if (matches) subj_end = begin + intended.size();
        }
    }
    if (subj_end == 0) subj_end = chunk_subject_end(tokens, begin);
    if (subj_end <= begin || subj_end >= tokens.size()) return;

    const Token& head = tokens[subj_end - 1];
    bool pronoun_subject = subj_end - begin == 1 && lex::subject_pronouns().count(tokens[begin].lower);

    // Decide the clause's intended number.
    bool plural;
    std::string pron = pronoun_subject ? tokens[begin].lower : "";
    if (pronoun_subject) {
        plural = pron == "you" || pron == "we" || pron == "they";
    } else if (!intended_subject.empty()) {
        auto subj_tokens = tokenize_lower(intended_subject);
        if (subj_tokens.empty()) return;
        plural = gram::noun_is_plural(subj_tokens.back());
        // Re-inflect the clause's head noun only when it is the same lemma.
        bool head_plural = gram::noun_is_plural(head.lower);
        if (head_plural != plural &&
            gram::singularize(head.lower) == gram::singularize(subj_tokens.back())) {
            std::string fixed = plural ? gram::pluralize(gram::singularize(head.lower))
                                       : gram::singularize(head.lower);
            if (fixed != head.lower) reps.push_back({head.begin, head.end, fixed});
        }
    } else {
        plural = gram::noun_is_plural(head.lower);
    }

    const Token& verb = tokens[subj_end];
    const std::string& v = verb.lower;
    if (pron == "i" && (v == "is" || v == "are")) {
        reps.push_back({verb.begin, verb.end, "am"});
        return;
    }
    if (v == "am" && pron != "i") {
        reps.push_back({verb.begin, verb.end, plural ? "are" : "is"});
        return;
    }
    if (auto swapped = gram::swap_number_word(v, !plural && pron != "i" && pron != "you")) {
        reps.push_back({verb.begin, verb.end, *swapped});
        return;
    }
    if (lex::auxiliaries().count(v) || gram::uninflectable_verbs().count(v)) return;
    if (v.size() > 2 && v.compare(v.size() - 2, 2, "ed") == 0) return;  // past tense

    bool third_singular = !plural && pron != "i" && pron != "you";
    if (third_singular && lex::verb_lemmas().count(v) && !gram::uninflectable_verbs().count(v)) {
        reps.push_back({verb.begin, verb.end, gram::third_person(v)});
    } else if (!third_singular) {
        if (auto base = gram::base_form(v)) reps.push_back({verb.begin, verb.end, *base});
    }
}

inline std::string rules_pass(const std::string& text, const GrammarContext& ctx) {
    auto tokens = tokenize(text);
    std::vector<gram::Replacement> reps;

    // a/an selection.
    for (size_t i = 0; i + 1 < tokens.size(); ++i) {
        const std::string& w = tokens[i].lower;
        if (w != "a" && w != "an") continue;
        bool vowel = gram::vowel_sound(tokens[i + 1].lower);
        std::string want = vowel ? "an" : "a";
        if (w != want) {
            bool upper = std::isupper(static_cast<unsigned char>(tokens[i].text[0])) != 0;
            reps.push_back({tokens[i].begin, tokens[i].end, upper ? capitalize_first(want) : want});
        }
    }

    // Agreement. For a full pattern sentence, fix the even-clause; for a
    // bare clause, fix from the front.
    if (ctx.full_sentence) {
        if (auto hit = locate_pattern(text)) {
            size_t content = hit->conn_last + 1;
            if (content < tokens.size()) plan_agreement(tokens, content, ctx.clause_subject, reps);
        }
    } else {
        plan_agreement(tokens, 0, ctx.clause_subject, reps);
    }

    std::string out = gram::apply_replacements(text, reps);
    if (ctx.full_sentence) {
        out = capitalize_first(normalize_ws(out));
        if (!out.empty() && out.find_last_of(".!?") != out.size() - 1) out += ".";
    }
    return out;
}

}  // namespace detail

// mode=rules: deterministic local fixes. mode=adapter: delegate to the
// corrector, falling back to rules (with a warning) when it is missing or
// fails. mode=off: identity.
inline std::string correct_grammar(const std::string& sentence, GecMode mode, const GrammarContext& ctx = {},
                                   GrammarCorrector* adapter = nullptr, std::string* warning = nullptr) {
    switch (mode) {
        case GecMode::Off:
            return sentence;
        case GecMode::Rules:
            return detail::rules_pass(sentence, ctx);
        case GecMode::Adapter: {
            if (adapter) {
                try {
                    return adapter->correct(sentence);
                } catch (const std::exception& e) {
                    if (warning) *warning = std::string("grammar adapter failed, using rules: ") + e.what();
                }
            } else if (warning) {
                *warning = "no grammar adapter configured, using rules";
            }
            return detail::rules_pass(sentence, ctx);
        }
    }
    return sentence;
}

}  // namespace hypogen
