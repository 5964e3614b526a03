#include "entsparse/expansion.hpp"

#include "entsparse/error.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <memory>
#include <unordered_map>
#include <unordered_set>

namespace entsparse {

ExpansionStrategy ExpansionStrategy::explicit_constant(int c) {
    if (c < 1) {
        throw Error("constant expansion factor must be >= 1, got " + std::to_string(c));
    }
    return {Kind::explicit_constant, c};
}

ExpansionStrategy ExpansionStrategy::parse(std::string_view flag) {
    if (flag == "none") return none();
    if (flag == "explicit") return explicit_single();
    if (flag == "hashed") return hashed_single();
    if (flag == "weighted") return explicit_weighted();
    constexpr std::string_view prefix = "constant:";
    if (flag.starts_with(prefix)) {
        auto digits = flag.substr(prefix.size());
        int c = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), c);
        if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty()) {
            return explicit_constant(c);
        }
    }
    throw Error("unknown expansion strategy '" + std::string(flag) +
                "' (expected none, explicit, hashed, constant:<c> or weighted)");
}

std::string ExpansionStrategy::to_string() const {
    switch (kind) {
        case Kind::none: return "none";
        case Kind::explicit_single: return "explicit";
        case Kind::hashed_single: return "hashed";
        case Kind::explicit_constant: return "constant:" + std::to_string(copies);
        case Kind::explicit_weighted: return "weighted";
    }
    return "none";
}

std::string hash_entity(std::string_view entity_name) {
    if (entity_name.empty()) {
        throw Error("cannot hash an empty entity name");
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_md5(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), entity_name.data(), entity_name.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
        throw Error("MD5 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0x0f]);
    }
    return out;
}

ExpandedText expand(std::string_view text, const EntityCounts& entities, const ExpansionStrategy& strategy) {
    ExpandedText result{std::string(text), {}, {}};
    for (const auto& [name, count] : entities) {
        if (count < 1) {
            throw Error("entity '" + name + "' has non-positive count " + std::to_string(count));
        }
        switch (strategy.kind) {
            case ExpansionStrategy::Kind::none:
                break;
            case ExpansionStrategy::Kind::explicit_single:
                result.appended_terms.push_back(name);
                break;
            case ExpansionStrategy::Kind::hashed_single:
                result.appended_terms.push_back(hash_entity(name));
                break;
            case ExpansionStrategy::Kind::explicit_constant:
                result.appended_terms.insert(result.appended_terms.end(), static_cast<std::size_t>(strategy.copies),
                                             name);
                break;
            case ExpansionStrategy::Kind::explicit_weighted:
                result.appended_terms.insert(result.appended_terms.end(), static_cast<std::size_t>(count), name);
                break;
        }
    }
    result.full_text = result.original;
    for (const auto& term : result.appended_terms) {
        if (!result.full_text.empty()) {
            result.full_text.push_back(' ');
        }
        result.full_text += term;
    }
    return result;
}

ExpandedCollection expand_collection(const std::vector<Passage>& passages, const AnnotationMap& annotations,
                                     const ExpansionStrategy& strategy) {
    ExpandedCollection out;
    out.passages.reserve(passages.size());
    std::unordered_set<std::string_view> ids;
    for (const auto& p : passages) {
        ids.insert(p.id);
        auto it = annotations.find(p.id);
        if (it == annotations.end() || strategy.kind == ExpansionStrategy::Kind::none) {
            out.passages.push_back(p);
            continue;
        }
        out.passages.push_back({p.id, expand(p.text, entity_counts(it->second), strategy).full_text});
    }
    for (const auto& [id, list] : annotations) {
        if (!ids.contains(id)) {
            out.unknown_ids.push_back(id);
        }
    }
    return out;
}

void check_hash_collisions(const std::vector<std::string>& entity_names) {
    std::unordered_map<std::string, std::string> seen;
    for (const auto& name : entity_names) {
        auto [it, inserted] = seen.try_emplace(hash_entity(name), name);
        if (!inserted && it->second != name) {
            throw Error("MD5 collision between '" + it->second + "' and '" + name + "'");
        }
    }
}

}  // namespace entsparse
