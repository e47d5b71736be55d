#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/types.hpp"
#include "core/vocab.hpp"

namespace kgsem {

struct Schema;

enum class Split { train = 0, valid = 1, test = 2 };

constexpr const char* split_name(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::valid: return "valid";
        case Split::test: return "test";
    }
    return "?";
}

// In-memory knowledge graph: interned vocabulary plus three disjoint,
// duplicate-free triple splits. Immutable after construction except for class
// interning performed by schema loading.
struct Dataset {
    Vocabulary vocab;
    std::vector<Triple> train;
    std::vector<Triple> valid;
    std::vector<Triple> test;

    const std::vector<Triple>& split(Split s) const {
        switch (s) {
            case Split::valid: return valid;
            case Split::test: return test;
            default: return train;
        }
    }

    std::int32_t num_entities() const { return vocab.entities.size(); }
    std::int32_t num_relations() const { return vocab.relations.size(); }
};

struct LoadStats {
    std::int64_t duplicates_dropped[3] = {0, 0, 0};
};

// Reads three tab-separated triple files (`head\trelation\ttail`, UTF-8, no
// header). Ids follow first occurrence in train, then valid, then test.
// Duplicate lines within a split are dropped (counted in `stats`); the same
// triple appearing in two splits is a validation error.
Dataset load_dataset(const std::string& train_path, const std::string& valid_path,
                     const std::string& test_path, LoadStats* stats = nullptr);

// Writes train.txt/valid.txt/test.txt under `dir` in the same format
// load_dataset reads. Reloading yields an identical triple set per split.
void save_dataset(const Dataset& dataset, const std::string& dir);

// Lookup structure over train ∪ valid ∪ test answering "which heads (tails)
// complete this (r,t) ((h,r)) pattern" — the filter sets of the filtered
// ranking protocol.
class ObservedFactIndex {
public:
    std::span<const EntityId> heads_of(RelationId r, EntityId t) const;
    std::span<const EntityId> tails_of(EntityId h, RelationId r) const;
    bool contains(const Triple& triple) const;

private:
    friend ObservedFactIndex build_observed_index(const Dataset& dataset);

    static std::uint64_t key(std::int32_t a, std::int32_t b) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
               static_cast<std::uint32_t>(b);
    }

    std::unordered_map<std::uint64_t, std::vector<EntityId>> heads_;  // key(r, t)
    std::unordered_map<std::uint64_t, std::vector<EntityId>> tails_;  // key(h, r)
};

ObservedFactIndex build_observed_index(const Dataset& dataset);

struct PrepareReport {
    std::int64_t removed_untyped_triples = 0;
    std::int64_t removed_weak_relation_triples = 0;
    std::int32_t entities_before = 0;
    std::int32_t entities_after = 0;
    std::int32_t relations_before = 0;
    std::int32_t relations_after = 0;

    std::string to_json() const;
};

// Filters the dataset for semantic evaluation: drops triples touching untyped
// entities from every split, then drops from valid/test any triple whose
// relation lacks a domain or range or has fewer than `min_candidates` distinct
// training heads or tails. Ids are re-interned densely (original order kept).
Dataset prepare_dataset(const Dataset& dataset, const Schema& schema,
                        std::int32_t min_candidates, PrepareReport* report = nullptr);

}  // namespace kgsem
