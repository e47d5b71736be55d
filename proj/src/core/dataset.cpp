#include "core/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "core/schema.hpp"

namespace kgsem {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find('\t', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

struct TripleKey {
    std::uint64_t hr;
    std::uint64_t t;
    bool operator==(const TripleKey&) const = default;
};

struct TripleKeyHash {
    std::size_t operator()(const TripleKey& k) const {
        std::uint64_t x = k.hr * 0x9e3779b97f4a7c15ULL ^ (k.t + 0x7f4a7c15ULL);
        x ^= x >> 33;
        return static_cast<std::size_t>(x);
    }
};

TripleKey triple_key(const Triple& t) {
    return {(static_cast<std::uint64_t>(static_cast<std::uint32_t>(t.h)) << 32) |
                static_cast<std::uint32_t>(t.r),
            static_cast<std::uint64_t>(static_cast<std::uint32_t>(t.t))};
}

using TripleSet = std::unordered_set<TripleKey, TripleKeyHash>;

void load_split(const std::string& path, Split split, Dataset& dataset, TripleSet& seen_any,
                std::vector<Triple>& out, LoadStats* stats) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io, "cannot open triple file: " + path);
    }
    TripleSet seen_here;
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto fields = split_fields(line);
        if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
            throw Error(ErrorCode::parse, path + ":" + std::to_string(line_no) +
                                              ": expected `head<TAB>relation<TAB>tail`");
        }
        Triple triple{dataset.vocab.entities.intern(fields[0]),
                      dataset.vocab.relations.intern(fields[1]),
                      dataset.vocab.entities.intern(fields[2])};
        auto key = triple_key(triple);
        if (seen_here.contains(key)) {
            if (stats) stats->duplicates_dropped[static_cast<int>(split)]++;
            continue;
        }
        if (seen_any.contains(key)) {
            throw Error(ErrorCode::validation,
                        "triple (" + fields[0] + ", " + fields[1] + ", " + fields[2] +
                            ") in " + std::string(split_name(split)) +
                            " already appears in an earlier split");
        }
        seen_here.insert(key);
        out.push_back(triple);
    }
    seen_any.merge(seen_here);
}

void write_split(const Dataset& dataset, const std::vector<Triple>& triples,
                 const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::io, "cannot write triple file: " + path.string());
    }
    for (const auto& t : triples) {
        out << dataset.vocab.entities.label(t.h) << '\t' << dataset.vocab.relations.label(t.r)
            << '\t' << dataset.vocab.entities.label(t.t) << '\n';
    }
}

}  // namespace

Dataset load_dataset(const std::string& train_path, const std::string& valid_path,
                     const std::string& test_path, LoadStats* stats) {
    Dataset dataset;
    TripleSet seen;
    load_split(train_path, Split::train, dataset, seen, dataset.train, stats);
    load_split(valid_path, Split::valid, dataset, seen, dataset.valid, stats);
    load_split(test_path, Split::test, dataset, seen, dataset.test, stats);
    return dataset;
}

void save_dataset(const Dataset& dataset, const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_split(dataset, dataset.train, std::filesystem::path(dir) / "train.txt");
    write_split(dataset, dataset.valid, std::filesystem::path(dir) / "valid.txt");
    write_split(dataset, dataset.test, std::filesystem::path(dir) / "test.txt");
}

std::span<const EntityId> ObservedFactIndex::heads_of(RelationId r, EntityId t) const {
    auto it = heads_.find(key(r, t));
    if (it == heads_.end()) return {};
    return it->second;
}

std::span<const EntityId> ObservedFactIndex::tails_of(EntityId h, RelationId r) const {
    auto it = tails_.find(key(h, r));
    if (it == tails_.end()) return {};
    return it->second;
}

bool ObservedFactIndex::contains(const Triple& triple) const {
    auto ts = tails_of(triple.h, triple.r);
    return std::binary_search(ts.begin(), ts.end(), triple.t);
}

ObservedFactIndex build_observed_index(const Dataset& dataset) {
    ObservedFactIndex index;
    for (Split s : {Split::train, Split::valid, Split::test}) {
        for (const auto& t : dataset.split(s)) {
            index.heads_[ObservedFactIndex::key(t.r, t.t)].push_back(t.h);
            index.tails_[ObservedFactIndex::key(t.h, t.r)].push_back(t.t);
        }
    }
    for (auto* map : {&index.heads_, &index.tails_}) {
        for (auto& [k, v] : *map) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
    }
    return index;
}

std::string PrepareReport::to_json() const {
    nlohmann::json j;
    j["removed_untyped_triples"] = removed_untyped_triples;
    j["removed_weak_relation_triples"] = removed_weak_relation_triples;
    j["entities_before"] = entities_before;
    j["entities_after"] = entities_after;
    j["relations_before"] = relations_before;
    j["relations_after"] = relations_after;
    return j.dump(2);
}

Dataset prepare_dataset(const Dataset& dataset, const Schema& schema,
                        std::int32_t min_candidates, PrepareReport* report) {
    PrepareReport local;
    local.entities_before = dataset.num_entities();
    local.relations_before = dataset.num_relations();

    auto typed = [&](const Triple& t) {
        return schema.types.is_typed(t.h) && schema.types.is_typed(t.t);
    };

    std::vector<Triple> splits[3];
    for (Split s : {Split::train, Split::valid, Split::test}) {
        for (const auto& t : dataset.split(s)) {
            if (typed(t)) {
                splits[static_cast<int>(s)].push_back(t);
            } else {
                local.removed_untyped_triples++;
            }
        }
    }

    // Distinct observed heads/tails per relation, counted on the filtered
    // training split.
    std::vector<std::unordered_set<EntityId>> heads(dataset.num_relations());
    std::vector<std::unordered_set<EntityId>> tails(dataset.num_relations());
    for (const auto& t : splits[0]) {
        heads[static_cast<std::size_t>(t.r)].insert(t.h);
        tails[static_cast<std::size_t>(t.r)].insert(t.t);
    }
    auto evaluable = [&](RelationId r) {
        return schema.signature.has_domain(r) && schema.signature.has_range(r) &&
               static_cast<std::int32_t>(heads[static_cast<std::size_t>(r)].size()) >=
                   min_candidates &&
               static_cast<std::int32_t>(tails[static_cast<std::size_t>(r)].size()) >=
                   min_candidates;
    };
    for (int s : {1, 2}) {
        std::vector<Triple> kept;
        kept.reserve(splits[s].size());
        for (const auto& t : splits[s]) {
            if (evaluable(t.r)) {
                kept.push_back(t);
            } else {
                local.removed_weak_relation_triples++;
            }
        }
        splits[s] = std::move(kept);
    }

    if (splits[0].empty()) {
        throw Error(ErrorCode::validation, "prepared training split is empty");
    }

    // Re-intern densely, keeping the original id order of surviving labels.
    Dataset out;
    std::vector<EntityId> ent_map(static_cast<std::size_t>(dataset.num_entities()), kNoId);
    std::vector<RelationId> rel_map(static_cast<std::size_t>(dataset.num_relations()), kNoId);
    std::vector<bool> ent_used(ent_map.size(), false), rel_used(rel_map.size(), false);
    for (const auto& split : splits) {
        for (const auto& t : split) {
            ent_used[static_cast<std::size_t>(t.h)] = true;
            ent_used[static_cast<std::size_t>(t.t)] = true;
            rel_used[static_cast<std::size_t>(t.r)] = true;
        }
    }
    for (std::size_t i = 0; i < ent_map.size(); ++i) {
        if (ent_used[i])
            ent_map[i] = out.vocab.entities.intern(dataset.vocab.entities.label(
                static_cast<std::int32_t>(i)));
    }
    for (std::size_t i = 0; i < rel_map.size(); ++i) {
        if (rel_used[i])
            rel_map[i] = out.vocab.relations.intern(dataset.vocab.relations.label(
                static_cast<std::int32_t>(i)));
    }
    auto remap = [&](const std::vector<Triple>& in, std::vector<Triple>& dst) {
        dst.reserve(in.size());
        for (const auto& t : in) {
            dst.push_back({ent_map[static_cast<std::size_t>(t.h)],
                           rel_map[static_cast<std::size_t>(t.r)],
                           ent_map[static_cast<std::size_t>(t.t)]});
        }
    };
    remap(splits[0], out.train);
    remap(splits[1], out.valid);
    remap(splits[2], out.test);

    local.entities_after = out.num_entities();
    local.relations_after = out.num_relations();
    if (report) *report = local;
    return out;
}

}  // namespace kgsem
