#pragma once

#include "entsparse/corpus.hpp"
#include "entsparse/linker.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace entsparse {

struct ExpansionStrategy {
    enum class Kind { none, explicit_single, hashed_single, explicit_constant, explicit_weighted };

    Kind kind = Kind::none;
    int copies = 1;  // explicit_constant only

    static ExpansionStrategy none() { return {Kind::none, 1}; }
    static ExpansionStrategy explicit_single() { return {Kind::explicit_single, 1}; }
    static ExpansionStrategy hashed_single() { return {Kind::hashed_single, 1}; }
    static ExpansionStrategy explicit_constant(int c);
    static ExpansionStrategy explicit_weighted() { return {Kind::explicit_weighted, 1}; }

    /// Accepts none, explicit, hashed, constant:<c> and weighted.
    static ExpansionStrategy parse(std::string_view flag);
    std::string to_string() const;

    bool operator==(const ExpansionStrategy&) const = default;
};

struct ExpandedText {
    std::string original;
    std::vector<std::string> appended_terms;
    std::string full_text;
};

/// MD5 of the UTF-8 bytes of `entity_name` as 32 lowercase hex digits.
std::string hash_entity(std::string_view entity_name);

/// Appends entity terms to `text` in the order given by `entities`.
ExpandedText expand(std::string_view text, const EntityCounts& entities, const ExpansionStrategy& strategy);

struct ExpandedCollection {
    std::vector<Passage> passages;
    std::vector<std::string> unknown_ids;  // annotated ids absent from the collection
};

/// Expands every passage with its annotated entities. Annotation lists are
/// reduced to first-occurrence entity counts via entity_counts().
ExpandedCollection expand_collection(const std::vector<Passage>& passages, const AnnotationMap& annotations,
                                     const ExpansionStrategy& strategy);

/// Throws if two distinct names in `entity_names` share a digest.
void check_hash_collisions(const std::vector<std::string>& entity_names);

}  // namespace entsparse
