#pragma once
// Tokenization and string normalization helpers.
//
// Tokens keep their source offsets so callers can cut phrase spans out of
// the original sentence without losing interior punctuation.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hypogen {

struct Token {
    std::string text;   // original spelling
    std::string lower;  // ASCII-lowercased form used for matching
    size_t begin = 0;   // byte offset of first char in the source string
    size_t end = 0;     // one past the last char
};

inline char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(ascii_lower(c));
    return out;
}

inline bool is_word_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) != 0 || c == '\'' || c == '-' || u >= 0x80;
}

// Word tokens only; punctuation separates tokens and is never part of one.
inline std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    size_t i = 0;
    while (i < text.size()) {
        if (!is_word_char(text[i])) {
            ++i;
            continue;
        }
        size_t begin = i;
        while (i < text.size() && is_word_char(text[i])) ++i;
        // trim leading/trailing apostrophes and hyphens
        size_t b = begin, e = i;
        while (b < e && (text[b] == '\'' || text[b] == '-')) ++b;
        while (e > b && (text[e - 1] == '\'' || text[e - 1] == '-')) --e;
        if (b == e) continue;
        Token t;
        t.text = std::string(text.substr(b, e - b));
        t.lower = to_lower(t.text);
        t.begin = b;
        t.end = e;
        tokens.push_back(std::move(t));
    }
    return tokens;
}

inline std::vector<std::string> tokenize_lower(std::string_view text) {
    std::vector<std::string> out;
    for (auto& t : tokenize(text)) out.push_back(std::move(t.lower));
    return out;
}

// Trim and collapse runs of whitespace to single spaces.
inline std::string normalize_ws(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = true;  // swallows leading whitespace
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out.push_back(' ');
        in_space = false;
        out.push_back(c);
    }
    return out;
}

// Lowercase + whitespace-collapse, the comparison key used for dedup.
inline std::string normalize_phrase(std::string_view s) {
    return to_lower(normalize_ws(s));
}

inline std::string strip_leading_article(std::string_view phrase) {
    std::string p = normalize_ws(phrase);
    std::string low = to_lower(p);
    for (std::string_view art : {"a ", "an ", "the "}) {
        if (low.size() > art.size() && low.compare(0, art.size(), art) == 0) {
            return p.substr(art.size());
        }
    }
    return p;
}

inline std::string capitalize_first(std::string s) {
    for (char& c : s) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            break;
        }
        if (!std::isspace(static_cast<unsigned char>(c))) break;
    }
    return s;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep = " ") {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

// FNV-1a, used wherever a platform-stable hash is needed.
inline uint64_t fnv1a(std::string_view s, uint64_t seed = 0xcbf29ce484222325ULL) {
    uint64_t h = seed;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t fnv1a_mix(uint64_t h, uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (i * 8)) & 0xff;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace hypogen
