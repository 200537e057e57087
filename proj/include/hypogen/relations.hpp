#pragma once
// The ten-relation knowledge schema and inference direction.

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "hypogen/errors.hpp"

namespace hypogen {

enum class Relation {
    RelatedTo,
    HasProperty,
    CauseDesire,
    Causes,
    HasSubevent,
    NotCapableOf,
    DefinedAs,
    CapableOf,
    IsA,
    UsedFor,
};

inline constexpr std::array<Relation, 10> kAllRelations = {
    Relation::RelatedTo,    Relation::HasProperty, Relation::CauseDesire, Relation::Causes,
    Relation::HasSubevent,  Relation::NotCapableOf, Relation::DefinedAs,  Relation::CapableOf,
    Relation::IsA,          Relation::UsedFor,
};

// Relations that derive a clause predicate as a result of the prompt.
inline constexpr std::array<Relation, 3> kCausalRelations = {
    Relation::CauseDesire, Relation::Causes, Relation::HasSubevent,
};

// Relations that derive a clause predicate from the clause subject.
inline constexpr std::array<Relation, 5> kCharacteristicRelations = {
    Relation::NotCapableOf, Relation::DefinedAs, Relation::CapableOf,
    Relation::IsA,          Relation::UsedFor,
};

inline std::string_view relation_name(Relation r) {
    switch (r) {
        case Relation::RelatedTo: return "RelatedTo";
        case Relation::HasProperty: return "HasProperty";
        case Relation::CauseDesire: return "CauseDesire";
        case Relation::Causes: return "Causes";
        case Relation::HasSubevent: return "HasSubevent";
        case Relation::NotCapableOf: return "NotCapableOf";
        case Relation::DefinedAs: return "DefinedAs";
        case Relation::CapableOf: return "CapableOf";
        case Relation::IsA: return "IsA";
        case Relation::UsedFor: return "UsedFor";
    }
    return "?";
}

inline std::optional<Relation> try_parse_relation(std::string_view s) {
    for (Relation r : kAllRelations) {
        if (s == relation_name(r)) return r;
    }
    return std::nullopt;
}

inline Relation parse_relation(std::string_view s) {
    if (auto r = try_parse_relation(s)) return *r;
    throw_error(ErrorKind::Argument, "unknown relation: " + std::string(s));
}

enum class Direction { Forward, Reverse };

inline std::string_view direction_name(Direction d) {
    return d == Direction::Forward ? "forward" : "reverse";
}

inline Direction parse_direction(std::string_view s) {
    if (s == "forward") return Direction::Forward;
    if (s == "reverse") return Direction::Reverse;
    throw_error(ErrorKind::Argument, "unknown direction: " + std::string(s));
}

}  // namespace hypogen
