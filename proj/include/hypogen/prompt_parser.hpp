#pragma once
// Shallow parsing of literal prompts and of the "so ... that/even" pattern.
//
// Parsing is pattern-anchored: the intensifier construction supplies the
// structure, and a small closed-class lexicon plus suffix heuristics stand
// in for a full tagger. No external parser is involved.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "hypogen/errors.hpp"
#include "hypogen/text.hpp"

namespace hypogen {

struct Prompt {
    std::string text;      // literal prompt A, lowercased when derived from a pattern
    std::string subject;   // A.1
    std::string headword;  // A.2, single token
};

enum class Connective { That, Even, ThatEven };

inline std::string_view connective_name(Connective c) {
    switch (c) {
        case Connective::That: return "that";
        case Connective::Even: return "even";
        case Connective::ThatEven: return "that_even";
    }
    return "?";
}

struct PatternPartition {
    Prompt prompt;                 // A, with the intensifier removed
    std::string clause_subject;    // B
    std::string clause_predicate;  // C
    Connective connective = Connective::That;
    size_t head_offset = 0;  // byte offset in prompt.text where the so-head span starts
};

// ---------------------------------------------------------------------------
// Six sensical relations between A, B and C.

enum class AbRelation { related_to_subject, shares_attribute_with_headword, identical_to_subject };
enum class BcRelation { not_capable_of, characteristic_action };

struct SensicalRule {
    int id;
    AbRelation ab_relation;
    BcRelation bc_relation;
};

inline constexpr std::array<SensicalRule, 6> kSensicalRules = {{
    {1, AbRelation::related_to_subject, BcRelation::not_capable_of},
    {2, AbRelation::shares_attribute_with_headword, BcRelation::not_capable_of},
    {3, AbRelation::identical_to_subject, BcRelation::not_capable_of},
    {4, AbRelation::related_to_subject, BcRelation::characteristic_action},
    {5, AbRelation::shares_attribute_with_headword, BcRelation::characteristic_action},
    {6, AbRelation::identical_to_subject, BcRelation::characteristic_action},
}};

inline int sensical_rule_id(AbRelation ab, BcRelation bc) {
    for (const auto& r : kSensicalRules) {
        if (r.ab_relation == ab && r.bc_relation == bc) return r.id;
    }
    throw_error(ErrorKind::Argument, "no sensical rule for relation pair");
}

inline const SensicalRule& sensical_rule(int id) {
    if (id < 1 || id > 6) throw_error(ErrorKind::Argument, "rule id out of range: " + std::to_string(id));
    return kSensicalRules[static_cast<size_t>(id - 1)];
}

// ---------------------------------------------------------------------------
// Closed-class lexicon.

namespace lex {

inline const std::unordered_set<std::string>& linking_verbs() {
    static const std::unordered_set<std::string> s = {
        "is", "are", "was", "were", "am", "be", "been", "being",
        "seems", "seem", "seemed", "looks", "look", "looked",
        "feels", "feel", "felt", "sounds", "sound", "sounded",
        "smells", "smell", "smelled", "tastes", "taste", "tasted",
        "gets", "get", "got", "getting", "grows", "grow", "grew",
        "turns", "turn", "turned", "stays", "stay", "stayed",
    };
    return s;
}

inline const std::unordered_set<std::string>& degree_adverbs() {
    static const std::unordered_set<std::string> s = {
        "so", "very", "really", "extremely", "quite", "super", "too",
        "incredibly", "pretty", "rather", "truly", "absolutely", "totally",
        "insanely", "unbelievably",
    };
    return s;
}

inline const std::unordered_set<std::string>& determiners() {
    static const std::unordered_set<std::string> s = {
        "a", "an", "the", "my", "your", "his", "her", "its", "our", "their",
        "this", "these", "those", "some", "any", "every", "each", "no", "such",
    };
    return s;
}

inline const std::unordered_set<std::string>& subject_pronouns() {
    static const std::unordered_set<std::string> s = {"i", "you", "he", "she", "it", "we", "they"};
    return s;
}

inline const std::unordered_set<std::string>& auxiliaries() {
    static const std::unordered_set<std::string> s = {
        "can", "could", "will", "would", "shall", "should", "may", "might", "must",
        "cannot", "can't", "won't", "wouldn't", "shouldn't", "couldn't", "mustn't",
        "do", "does", "did", "don't", "doesn't", "didn't",
        "have", "has", "had", "having", "hasn't", "haven't", "hadn't",
        "wants", "want", "wanted", "keeps", "keep", "kept",
        "starts", "start", "started", "begins", "begin", "began", "gonna", "gotta",
    };
    return s;
}

// Open-class verb lemmas frequent in clause predicates, plus irregular pasts.
inline const std::unordered_set<std::string>& verb_lemmas() {
    static const std::unordered_set<std::string> s = {
        "dance", "run", "walk", "go", "come", "fall", "fade", "land", "fly", "jump",
        "open", "close", "burn", "fit", "inhabit", "retire", "remove", "adjust",
        "swallow", "drink", "eat", "make", "take", "give", "swim", "sing", "cry",
        "laugh", "smile", "sleep", "wake", "die", "live", "flourish", "rain", "snow",
        "shine", "melt", "freeze", "break", "build", "destroy", "create", "write",
        "read", "paint", "draw", "cook", "bake", "clean", "wash", "drive", "ride",
        "climb", "crawl", "stand", "sit", "lie", "rise", "drop", "throw", "catch",
        "kick", "hit", "push", "pull", "carry", "hold", "wear", "buy", "sell", "pay",
        "cost", "win", "lose", "play", "work", "study", "learn", "teach", "speak",
        "talk", "say", "tell", "ask", "answer", "call", "hear", "listen", "see",
        "watch", "touch", "think", "know", "believe", "hope", "wish", "dream",
        "love", "hate", "like", "need", "help", "try", "stop", "finish", "continue",
        "move", "spin", "roll", "shake", "explode", "collapse", "vanish",
        "disappear", "appear", "arrive", "leave", "wait", "follow", "lead", "meet",
        "join", "use", "find", "put", "send", "bring", "show", "grow",
        // irregular past forms
        "gave", "went", "came", "fell", "flew", "ran", "ate", "drank", "broke",
        "wrote", "drew", "stood", "sat", "lay", "rose", "threw", "caught", "took",
        "made", "won", "lost", "spoke", "said", "told", "heard", "saw", "thought",
        "knew", "found", "met", "left", "slept", "woke", "died", "held", "wore",
        "bought", "sold", "paid", "sang", "swam", "built", "sent", "brought",
        "showed", "put",
    };
    return s;
}

// Adjectives/adverbs accepted as a headword when no copula is present.
inline const std::unordered_set<std::string>& bare_gradables() {
    static const std::unordered_set<std::string> s = {
        "fast", "hard", "well", "high", "low", "deep", "far", "early", "late",
        "loud", "quick", "slow", "long", "often", "much",
    };
    return s;
}

inline bool verb_lemma_match(const std::string& w) {
    const auto& v = verb_lemmas();
    if (v.count(w)) return true;
    size_t n = w.size();
    if (n > 2 && w.back() == 's') {
        if (v.count(w.substr(0, n - 1))) return true;                       // adjusts
        if (n > 3 && w.compare(n - 2, 2, "es") == 0 && v.count(w.substr(0, n - 2))) return true;  // flourishes
        if (n > 4 && w.compare(n - 3, 3, "ies") == 0 && v.count(w.substr(0, n - 3) + "y")) return true;  // cries
    }
    if (n > 2 && w.compare(n - 1, 1, "d") == 0) {
        if (v.count(w.substr(0, n - 1))) return true;  // moved
        if (n > 3 && w.compare(n - 2, 2, "ed") == 0 && v.count(w.substr(0, n - 2))) return true;  // jumped
    }
    if (n > 4 && w.compare(n - 3, 3, "ing") == 0) {
        if (v.count(w.substr(0, n - 3))) return true;        // sleeping
        if (v.count(w.substr(0, n - 3) + "e")) return true;  // dancing
    }
    return false;
}

inline bool adverbish(const std::string& w) {
    if (w.size() > 3 && w.compare(w.size() - 2, 2, "ly") == 0) return true;
    return bare_gradables().count(w) > 0;
}

}  // namespace lex

namespace detail {

// Verb-likeness inside a clause, position-sensitive: a determiner needs a
// nominal head, so the token right after one is never the main verb ("the
// dance floor", "the can of beans").
inline bool verb_like(const std::string& lower, size_t idx_in_chunk, bool det_start) {
    if (det_start && idx_in_chunk < 2) return false;
    if (lex::linking_verbs().count(lower) || lex::auxiliaries().count(lower)) return true;
    if (lex::verb_lemma_match(lower)) return true;
    if (lower.size() > 2 && lower.back() == 's' && lower.compare(lower.size() - 2, 2, "ss") != 0) {
        return true;
    }
    return false;
}

// One past the last token of the subject chunk starting at `begin`.
// Returns begin on failure (no way to leave a non-empty predicate).
inline size_t chunk_subject_end(const std::vector<Token>& tokens, size_t begin) {
    size_t n = tokens.size();
    if (begin >= n) return begin;
    if (lex::subject_pronouns().count(tokens[begin].lower)) return begin + 1;
    bool det_start = lex::determiners().count(tokens[begin].lower) > 0;
    for (size_t j = begin + 1; j < n; ++j) {
        if (verb_like(tokens[j].lower, j - begin, det_start)) return j;
    }
    // No verb found: fall back to the shortest plausible noun phrase.
    size_t want = begin + (det_start ? 2 : 1);
    if (want >= n) return begin;  // nothing left for a predicate
    return want;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// parse_prompt

inline Prompt parse_prompt(const std::string& text) {
    auto tokens = tokenize(text);
    if (tokens.empty()) throw_error(ErrorKind::Parse, "no headword: empty input");

    // Copular clause: subject | linking verb | (degree adverbs) headword.
    for (size_t i = 1; i < tokens.size(); ++i) {
        if (!lex::linking_verbs().count(tokens[i].lower)) continue;
        size_t p = i + 1;
        while (p < tokens.size() && lex::degree_adverbs().count(tokens[p].lower)) ++p;
        if (p >= tokens.size()) {
            throw_error(ErrorKind::Parse, "no headword: nothing follows the copula in '" + text + "'");
        }
        const Token& head = tokens.back();
        if (lex::determiners().count(head.lower) || lex::subject_pronouns().count(head.lower)) {
            throw_error(ErrorKind::Parse, "no headword: '" + head.text + "' cannot be modified by 'so'");
        }
        Prompt prompt;
        prompt.text = normalize_ws(text);
        prompt.subject = normalize_ws(text.substr(tokens[0].begin, tokens[i - 1].end - tokens[0].begin));
        prompt.headword = head.text;
        return prompt;
    }

    // Simple clause: accept a final adverb-ish token as the headword.
    if (tokens.size() >= 2 && lex::adverbish(tokens.back().lower)) {
        size_t subj_end = 0;
        bool det_start = lex::determiners().count(tokens[0].lower) > 0;
        if (lex::subject_pronouns().count(tokens[0].lower)) {
            subj_end = 1;
        } else {
            subj_end = 1;
            while (subj_end < tokens.size() - 1 &&
                   !detail::verb_like(tokens[subj_end].lower, subj_end, det_start)) {
                ++subj_end;
            }
        }
        if (subj_end == 0) throw_error(ErrorKind::Parse, "no subject in '" + text + "'");
        Prompt prompt;
        prompt.text = normalize_ws(text);
        prompt.subject =
            normalize_ws(text.substr(tokens[0].begin, tokens[subj_end - 1].end - tokens[0].begin));
        prompt.headword = tokens.back().text;
        return prompt;
    }

    throw_error(ErrorKind::Parse, "no headword: no gradable adjective or adverb in '" + text + "'");
}

// ---------------------------------------------------------------------------
// partition_so_that / is_so_that

namespace detail {

struct PatternHit {
    PatternPartition partition;
    size_t so_token = 0;          // token index of the winning "so"
    size_t conn_first = 0;        // token indices of the connective
    size_t conn_last = 0;
    std::vector<Token> tokens;    // tokenization of the source sentence
};

inline std::optional<PatternHit> locate_pattern(const std::string& sentence) {
    auto tokens = tokenize(sentence);
    size_t n = tokens.size();
    if (n < 4) return std::nullopt;

    // The last "so" that yields a full head + connective + clause wins.
    for (size_t s = n; s-- > 0;) {
        if (tokens[s].lower != "so" || s == 0) continue;

        // Find the connective after at least one head token.
        size_t c = s + 1;
        while (c < n && tokens[c].lower != "that" && tokens[c].lower != "even") ++c;
        if (c >= n || c == s + 1) continue;  // no connective, or bare "so that"

        Connective conn;
        size_t conn_first = c, conn_last = c, content = c + 1;
        if (tokens[c].lower == "that" && c + 1 < n && tokens[c + 1].lower == "even") {
            conn = Connective::ThatEven;
            conn_last = c + 1;
            content = c + 2;
        } else {
            conn = tokens[c].lower == "that" ? Connective::That : Connective::Even;
        }
        if (content >= n) continue;

        size_t b_end = chunk_subject_end(tokens, content);
        if (b_end <= content || b_end >= n) continue;

        // One template variant puts the particle after the minor subject:
        // "that B even C". It reads as connective glue, not span content.
        size_t subj_end = b_end, pred_begin = b_end;
        if (conn == Connective::That) {
            if (tokens[b_end].lower == "even" && b_end + 1 < n) {
                conn = Connective::ThatEven;
                pred_begin = b_end + 1;
            } else if (b_end >= content + 2 && tokens[b_end - 1].lower == "even") {
                conn = Connective::ThatEven;
                subj_end = b_end - 1;
            }
        }

        // Prompt view of A: prefix before "so" plus the head span, lowercased.
        std::string prefix = normalize_ws(sentence.substr(0, tokens[s].begin));
        if (prefix.empty()) continue;
        std::string head_span = normalize_ws(sentence.substr(
            tokens[s + 1].begin, tokens[c - 1].end - tokens[s + 1].begin));

        PatternHit hit;
        hit.tokens = tokens;
        hit.so_token = s;
        hit.conn_first = conn_first;
        hit.conn_last = conn_last;

        Prompt& prompt = hit.partition.prompt;
        prompt.text = to_lower(prefix + " " + head_span);
        prompt.headword = tokens[c - 1].lower;
        hit.partition.head_offset = prefix.size() + 1;

        // Subject of A: span before a linking verb when one exists.
        std::string lower_prefix = to_lower(prefix);
        auto prefix_tokens = tokenize(lower_prefix);
        size_t subj_last = prefix_tokens.size();  // sentinel: whole prefix
        for (size_t i = 1; i < prefix_tokens.size(); ++i) {
            if (lex::linking_verbs().count(prefix_tokens[i].lower)) {
                subj_last = i;
                break;
            }
        }
        if (subj_last < prefix_tokens.size()) {
            prompt.subject = lower_prefix.substr(
                prefix_tokens[0].begin, prefix_tokens[subj_last - 1].end - prefix_tokens[0].begin);
        } else {
            prompt.subject = lower_prefix;
        }

        hit.partition.connective = conn;
        hit.partition.clause_subject = sentence.substr(
            tokens[content].begin, tokens[subj_end - 1].end - tokens[content].begin);
        hit.partition.clause_predicate = sentence.substr(
            tokens[pred_begin].begin, tokens[n - 1].end - tokens[pred_begin].begin);
        return hit;
    }
    return std::nullopt;
}

}  // namespace detail

inline PatternPartition partition_so_that(const std::string& sentence) {
    auto hit = detail::locate_pattern(sentence);
    if (!hit) {
        throw_error(ErrorKind::Pattern, "no 'so ... that/even' pattern in '" + sentence + "'");
    }
    return hit->partition;
}

inline bool is_so_that(const std::string& sentence) {
    return detail::locate_pattern(sentence).has_value();
}

// Reinsert the intensifier and connective; used to check partitions.
inline std::string reassemble(const PatternPartition& p) {
    std::string conn;
    switch (p.connective) {
        case Connective::That: conn = "that"; break;
        case Connective::Even: conn = "even"; break;
        case Connective::ThatEven: conn = "that even"; break;
    }
    std::string a = p.prompt.text;
    std::string with_so = a.substr(0, p.head_offset) + "so " + a.substr(p.head_offset);
    return with_so + " " + conn + " " + p.clause_subject + " " + p.clause_predicate;
}

}  // namespace hypogen
