#pragma once
// Knowledge-triple and corpus ingestion: TSV triples, simile conversion,
// training-set augmentation, keyword stripping and balanced splits.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hypogen/errors.hpp"
#include "hypogen/jsonl.hpp"
#include "hypogen/prompt_parser.hpp"
#include "hypogen/relations.hpp"
#include "hypogen/rng.hpp"
#include "hypogen/text.hpp"

namespace hypogen {

enum class TripleSource { Conceptnet, Simile };

inline std::string_view triple_source_name(TripleSource s) {
    return s == TripleSource::Conceptnet ? "conceptnet" : "simile";
}

struct KnowledgeTriple {
    std::string head;
    Relation relation = Relation::RelatedTo;
    std::string tail;
    TripleSource source = TripleSource::Conceptnet;

    // Duplicate identity: case/whitespace-insensitive on all three fields.
    std::string key() const {
        return normalize_phrase(head) + "\t" + std::string(relation_name(relation)) + "\t" +
               normalize_phrase(tail);
    }
    bool operator==(const KnowledgeTriple& o) const {
        return head == o.head && relation == o.relation && tail == o.tail;
    }
};

enum class Label { Hyperbole, Literal };
enum class Split { Train, Dev, Test };
enum class Corpus { HypoRed, HypoSo, HypoEn };

inline std::string_view label_name(Label l) { return l == Label::Hyperbole ? "hyperbole" : "literal"; }
inline std::string_view split_name(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Dev: return "dev";
        case Split::Test: return "test";
    }
    return "?";
}
inline std::string_view corpus_name(Corpus c) {
    switch (c) {
        case Corpus::HypoRed: return "hypo_red";
        case Corpus::HypoSo: return "hypo_so";
        case Corpus::HypoEn: return "hypo_en";
    }
    return "?";
}

inline Label parse_label(std::string_view s) {
    if (s == "hyperbole") return Label::Hyperbole;
    if (s == "literal") return Label::Literal;
    throw_error(ErrorKind::Parse, "unknown label: " + std::string(s));
}
inline Split parse_split(std::string_view s) {
    if (s == "train") return Split::Train;
    if (s == "dev") return Split::Dev;
    if (s == "test") return Split::Test;
    throw_error(ErrorKind::Parse, "unknown split: " + std::string(s));
}
inline Corpus parse_corpus(std::string_view s) {
    if (s == "hypo_red") return Corpus::HypoRed;
    if (s == "hypo_so") return Corpus::HypoSo;
    if (s == "hypo_en") return Corpus::HypoEn;
    throw_error(ErrorKind::Parse, "unknown corpus: " + std::string(s));
}

struct LabeledSentence {
    std::string text;
    Label label = Label::Literal;
    std::string trigger_keyword;  // empty when none recorded
    Corpus corpus = Corpus::HypoEn;
    std::optional<Split> split;
};

// ---------------------------------------------------------------------------
// Triple TSV serialization. Format: head <tab> relation <tab> tail.

inline std::string triple_to_tsv(const KnowledgeTriple& t) {
    return t.head + "\t" + std::string(relation_name(t.relation)) + "\t" + t.tail;
}

struct IngestStats {
    size_t kept = 0;
    size_t dropped_relation = 0;
    size_t malformed = 0;
};

struct IngestResult {
    std::vector<KnowledgeTriple> triples;
    IngestStats stats;
};

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace detail

// Reads a ConceptNet-style TSV dump, keeping only the ten relations the
// pipeline understands. Unknown relations and malformed lines are counted,
// not fatal.
inline IngestResult ingest_conceptnet_triples(const std::string& path) {
    auto in = open_input(path);
    IngestResult result;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (normalize_ws(line).empty()) continue;
        auto fields = detail::split_tabs(line);
        if (fields.size() != 3) {
            ++result.stats.malformed;
            continue;
        }
        std::string head = normalize_ws(fields[0]);
        std::string rel = normalize_ws(fields[1]);
        std::string tail = normalize_ws(fields[2]);
        if (head.empty() || tail.empty() || rel.empty()) {
            ++result.stats.malformed;
            continue;
        }
        auto relation = try_parse_relation(rel);
        if (!relation) {
            ++result.stats.dropped_relation;
            continue;
        }
        result.triples.push_back({head, *relation, tail, TripleSource::Conceptnet});
        ++result.stats.kept;
    }
    return result;
}

inline void write_triples_tsv(const std::string& path, const std::vector<KnowledgeTriple>& triples) {
    auto out = open_output(path);
    for (const auto& t : triples) out << triple_to_tsv(t) << "\n";
    if (!out) throw_error(ErrorKind::Io, "failed writing triples to " + path);
}

// ---------------------------------------------------------------------------
// Similes. "as <property> as <entity>" becomes <entity, HasProperty, property>
// with the entity's leading article dropped.

inline KnowledgeTriple simile_to_triplet(const std::string& simile) {
    auto tokens = tokenize_lower(simile);
    for (size_t i = 0; i + 3 < tokens.size(); ++i) {
        if (tokens[i] != "as") continue;
        for (size_t j = i + 2; j < tokens.size(); ++j) {
            if (tokens[j] != "as") continue;
            if (j + 1 >= tokens.size()) break;  // no entity after the second "as"
            std::vector<std::string> prop(tokens.begin() + static_cast<long>(i) + 1,
                                          tokens.begin() + static_cast<long>(j));
            std::vector<std::string> ent(tokens.begin() + static_cast<long>(j) + 1, tokens.end());
            KnowledgeTriple t;
            t.head = strip_leading_article(join(ent));
            t.relation = Relation::HasProperty;
            t.tail = join(prop);
            t.source = TripleSource::Simile;
            if (t.head.empty() || t.tail.empty()) break;
            return t;
        }
        break;  // only the first "as" anchors the pattern
    }
    throw_error(ErrorKind::Pattern, "not an 'as X as Y' simile: '" + simile + "'");
}

// All similes in a file (one per line); non-matching lines are counted.
struct SimileIngestResult {
    std::vector<KnowledgeTriple> triples;
    size_t skipped = 0;
};

inline SimileIngestResult ingest_similes(const std::string& path) {
    auto in = open_input(path);
    SimileIngestResult result;
    std::string line;
    while (std::getline(in, line)) {
        if (normalize_ws(line).empty()) continue;
        try {
            result.triples.push_back(simile_to_triplet(line));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Pattern) throw;
            ++result.skipped;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Training-set augmentation: base ∪ similes with duplicate triples removed.

struct AugmentResult {
    std::vector<KnowledgeTriple> triples;
    std::map<std::string, size_t> kept_per_source;
    size_t duplicates = 0;
};

inline AugmentResult augment_training_set(const std::vector<KnowledgeTriple>& base,
                                          const std::vector<KnowledgeTriple>& similes) {
    AugmentResult result;
    std::unordered_set<std::string> seen;
    auto add_all = [&](const std::vector<KnowledgeTriple>& src) {
        for (const auto& t : src) {
            if (!seen.insert(t.key()).second) {
                ++result.duplicates;
                continue;
            }
            result.triples.push_back(t);
            ++result.kept_per_source[std::string(triple_source_name(t.source))];
        }
    };
    add_all(base);
    add_all(similes);
    return result;
}

// ---------------------------------------------------------------------------
// Keyword stripping. Plain phrases are removed wherever they occur
// (whole-word, case-insensitive); "so...that" / "so...even" remove the
// intensifier and connective at their pattern positions only.

inline const std::vector<std::string>& default_trigger_keywords() {
    static const std::vector<std::string> k = {"I swear", "literally", "so...that", "so...even"};
    return k;
}

inline std::string strip_keywords(const std::string& sentence,
                                  const std::vector<std::string>& keywords = default_trigger_keywords()) {
    struct Range {
        size_t begin, end;
    };
    std::vector<Range> cuts;

    bool want_so_that = false, want_so_even = false;
    std::vector<std::vector<std::string>> plain;
    for (const auto& k : keywords) {
        if (k == "so...that") {
            want_so_that = true;
        } else if (k == "so...even") {
            want_so_even = true;
        } else {
            auto toks = tokenize_lower(k);
            if (!toks.empty()) plain.push_back(std::move(toks));
        }
    }

    auto tokens = tokenize(sentence);

    if (want_so_that || want_so_even) {
        if (auto hit = detail::locate_pattern(sentence)) {
            cuts.push_back({tokens[hit->so_token].begin, tokens[hit->so_token].end});
            for (size_t c = hit->conn_first; c <= hit->conn_last; ++c) {
                const auto& tok = tokens[c];
                if ((tok.lower == "that" && want_so_that) || (tok.lower == "even" && want_so_even)) {
                    cuts.push_back({tok.begin, tok.end});
                }
            }
        }
    }

    for (const auto& phrase : plain) {
        for (size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
            bool match = true;
            for (size_t j = 0; j < phrase.size(); ++j) {
                if (tokens[i + j].lower != phrase[j]) {
                    match = false;
                    break;
                }
            }
            if (match) cuts.push_back({tokens[i].begin, tokens[i + phrase.size() - 1].end});
        }
    }

    if (cuts.empty()) return normalize_ws(sentence);

    std::sort(cuts.begin(), cuts.end(), [](const Range& a, const Range& b) {
        return a.begin != b.begin ? a.begin < b.begin : a.end < b.end;
    });
    std::string out;
    size_t pos = 0;
    for (const auto& c : cuts) {
        if (c.begin < pos) continue;  // overlapping cut already covered
        out += sentence.substr(pos, c.begin - pos);
        pos = c.end;
    }
    out += sentence.substr(pos);
    return normalize_ws(out);
}

// ---------------------------------------------------------------------------
// Corpus JSONL serialization: {text, label, trigger_keyword?, corpus, split?}.

inline json labeled_to_json(const LabeledSentence& s) {
    json j;
    j["text"] = s.text;
    j["label"] = std::string(label_name(s.label));
    if (!s.trigger_keyword.empty()) j["trigger_keyword"] = s.trigger_keyword;
    j["corpus"] = std::string(corpus_name(s.corpus));
    if (s.split) j["split"] = std::string(split_name(*s.split));
    return j;
}

inline LabeledSentence labeled_from_json(const json& j) {
    LabeledSentence s;
    s.text = j.at("text").get<std::string>();
    if (normalize_ws(s.text).empty()) throw_error(ErrorKind::Parse, "empty sentence text");
    s.label = parse_label(j.at("label").get<std::string>());
    if (j.contains("trigger_keyword") && !j["trigger_keyword"].is_null()) {
        s.trigger_keyword = j["trigger_keyword"].get<std::string>();
    }
    s.corpus = parse_corpus(j.at("corpus").get<std::string>());
    if (j.contains("split") && !j["split"].is_null()) {
        s.split = parse_split(j["split"].get<std::string>());
    }
    if (s.corpus == Corpus::HypoSo && !is_so_that(s.text)) {
        throw_error(ErrorKind::Parse, "hypo_so sentence has no intensifier pattern: '" + s.text + "'");
    }
    return s;
}

inline std::vector<LabeledSentence> read_corpus_jsonl(const std::string& path) {
    std::vector<LabeledSentence> out;
    for (auto& j : read_jsonl(path)) out.push_back(labeled_from_json(j));
    return out;
}

inline void write_corpus_jsonl(const std::string& path, const std::vector<LabeledSentence>& corpus) {
    std::vector<json> rows;
    rows.reserve(corpus.size());
    for (const auto& s : corpus) rows.push_back(labeled_to_json(s));
    write_jsonl(path, rows);
}

// ---------------------------------------------------------------------------
// Splitting. Train is balanced by downsampling the majority label; dev and
// test keep each label's natural share. Deterministic under the seed.

struct CorpusSplits {
    std::vector<LabeledSentence> train, dev, test;
};

inline CorpusSplits split_balanced(const std::vector<LabeledSentence>& corpus, uint64_t seed,
                                   double dev_frac = 0.1, double test_frac = 0.1) {
    std::vector<LabeledSentence> pos, neg;
    for (const auto& s : corpus) (s.label == Label::Hyperbole ? pos : neg).push_back(s);
    if (pos.empty() || neg.empty()) {
        throw_error(ErrorKind::Config, "split_balanced needs both labels present");
    }

    CorpusSplits splits;
    std::vector<LabeledSentence> train_pos, train_neg;
    auto carve = [&](std::vector<LabeledSentence>& pool, std::string_view label,
                     std::vector<LabeledSentence>& train_pool) {
        Rng rng(fnv1a(label, seed ^ 0x9e3779b97f4a7c15ULL));
        rng.shuffle(pool);
        size_t n = pool.size();
        size_t n_test = static_cast<size_t>(static_cast<double>(n) * test_frac);
        size_t n_dev = static_cast<size_t>(static_cast<double>(n) * dev_frac);
        for (size_t i = 0; i < n; ++i) {
            LabeledSentence s = pool[i];
            if (i < n_test) {
                s.split = Split::Test;
                splits.test.push_back(std::move(s));
            } else if (i < n_test + n_dev) {
                s.split = Split::Dev;
                splits.dev.push_back(std::move(s));
            } else {
                s.split = Split::Train;
                train_pool.push_back(std::move(s));
            }
        }
    };
    carve(pos, "hyperbole", train_pos);
    carve(neg, "literal", train_neg);

    size_t k = std::min(train_pos.size(), train_neg.size());
    if (k == 0) throw_error(ErrorKind::Config, "split leaves no balanced training pairs");
    train_pos.resize(k);
    train_neg.resize(k);
    splits.train.reserve(2 * k);
    for (auto& s : train_pos) splits.train.push_back(std::move(s));
    for (auto& s : train_neg) splits.train.push_back(std::move(s));
    return splits;
}

// Separates the pattern-specific pool from the generic one and enforces
// their disjointness by dropping generic sentences whose text also appears
// in the pattern pool.
struct PoolPartition {
    std::vector<LabeledSentence> so_pool;
    std::vector<LabeledSentence> generic_pool;
    size_t dropped_overlap = 0;
};

inline PoolPartition partition_pools(const std::vector<LabeledSentence>& corpus) {
    PoolPartition result;
    std::unordered_set<std::string> so_texts;
    for (const auto& s : corpus) {
        if (s.corpus == Corpus::HypoSo) {
            result.so_pool.push_back(s);
            so_texts.insert(normalize_phrase(s.text));
        }
    }
    for (const auto& s : corpus) {
        if (s.corpus == Corpus::HypoSo) continue;
        if (so_texts.count(normalize_phrase(s.text))) {
            ++result.dropped_overlap;
            continue;
        }
        result.generic_pool.push_back(s);
    }
    return result;
}

}  // namespace hypogen
