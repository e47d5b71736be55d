#include "core/schema.hpp"

#include <algorithm>
#include <fstream>
#include <queue>

namespace kgsem {

namespace {

void sort_unique(std::vector<std::int32_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Sorted-range intersection test.
bool intersects(std::span<const ClassId> a, std::span<const ClassId> b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (b[j] < a[i])
            ++j;
        else
            return true;
    }
    return false;
}

std::vector<std::vector<std::string>> read_tsv(const std::string& path, std::size_t nfields) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io, "cannot open schema file: " + path);
    }
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
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
        if (fields.size() != nfields) {
            throw Error(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": expected " +
                                              std::to_string(nfields) + " tab-separated fields");
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

void ClassHierarchy::check(ClassId c) const {
    if (!contains(c)) {
        throw Error(ErrorCode::schema, "class id " + std::to_string(c) + " not in hierarchy");
    }
}

std::span<const ClassId> ClassHierarchy::parents(ClassId c) const {
    check(c);
    return parents_[static_cast<std::size_t>(c)];
}

std::span<const std::pair<ClassId, std::int32_t>> ClassHierarchy::ancestors(ClassId c) const {
    check(c);
    return ancestors_[static_cast<std::size_t>(c)];
}

std::vector<ClassId> ClassHierarchy::closure(ClassId c) const {
    check(c);
    std::vector<ClassId> out;
    out.reserve(ancestors_[static_cast<std::size_t>(c)].size());
    for (const auto& [a, d] : ancestors_[static_cast<std::size_t>(c)]) out.push_back(a);
    return out;
}

std::int32_t ClassHierarchy::depth(ClassId c) const {
    check(c);
    for (const auto& [a, d] : ancestors_[static_cast<std::size_t>(c)]) {
        if (a == root_) return d;
    }
    throw Error(ErrorCode::schema,
                "class " + std::to_string(c) + " does not reach the root");
}

double wu_palmer(ClassId a, ClassId b, const ClassHierarchy& hierarchy) {
    auto anc_a = hierarchy.ancestors(a);
    auto anc_b = hierarchy.ancestors(b);
    double best = 0.0;
    std::size_t i = 0, j = 0;
    while (i < anc_a.size() && j < anc_b.size()) {
        if (anc_a[i].first < anc_b[j].first) {
            ++i;
        } else if (anc_b[j].first < anc_a[i].first) {
            ++j;
        } else {
            double da = anc_a[i].second;
            double db = anc_b[j].second;
            double dr = hierarchy.depth(anc_a[i].first);
            double denom = da + db + 2.0 * dr;
            if (denom > 0.0) best = std::max(best, 2.0 * dr / denom);
            ++i;
            ++j;
        }
    }
    return best;
}

// Assembles and validates the hierarchy, then derives per-entity type sets.
class SchemaBuilder {
public:
    ClassHierarchy build_hierarchy(std::vector<std::vector<ClassId>> parents,
                                   const std::vector<bool>& in_hierarchy_file,
                                   const Vocabulary& vocab, const std::string& root_label) {
        ClassHierarchy h;
        h.parents_ = std::move(parents);
        const auto n = static_cast<std::int32_t>(h.parents_.size());

        if (!root_label.empty()) {
            auto id = vocab.classes.find(root_label);
            if (id == kNoId) {
                throw Error(ErrorCode::schema, "root class not found: " + root_label);
            }
            h.root_ = id;
        } else {
            std::vector<ClassId> candidates;
            for (ClassId c = 0; c < n; ++c) {
                if (in_hierarchy_file[static_cast<std::size_t>(c)] &&
                    h.parents_[static_cast<std::size_t>(c)].empty()) {
                    candidates.push_back(c);
                }
            }
            if (candidates.size() != 1) {
                std::string msg = "cannot determine a unique hierarchy root (candidates:";
                for (auto c : candidates) msg += " " + vocab.classes.label(c);
                throw Error(ErrorCode::schema, msg + "); pass an explicit root");
            }
            h.root_ = candidates[0];
        }
        if (!h.parents_[static_cast<std::size_t>(h.root_)].empty()) {
            throw Error(ErrorCode::schema,
                        "root class " + vocab.classes.label(h.root_) + " has a superclass");
        }

        // Classes with no declared superclass hang directly off the root.
        for (ClassId c = 0; c < n; ++c) {
            if (c != h.root_ && h.parents_[static_cast<std::size_t>(c)].empty()) {
                h.parents_[static_cast<std::size_t>(c)].push_back(h.root_);
            }
        }

        detect_cycle(h, vocab);
        compute_ancestors(h);
        return h;
    }

private:
    void detect_cycle(const ClassHierarchy& h, const Vocabulary& vocab) {
        const auto n = h.num_classes();
        // 0 = unvisited, 1 = on stack, 2 = done
        std::vector<std::uint8_t> state(static_cast<std::size_t>(n), 0);
        std::vector<std::pair<ClassId, std::size_t>> stack;
        for (ClassId s = 0; s < n; ++s) {
            if (state[static_cast<std::size_t>(s)] != 0) continue;
            stack.emplace_back(s, 0);
            state[static_cast<std::size_t>(s)] = 1;
            while (!stack.empty()) {
                auto& [c, next] = stack.back();
                auto ps = h.parents_[static_cast<std::size_t>(c)];
                if (next < ps.size()) {
                    ClassId p = ps[next++];
                    auto& st = state[static_cast<std::size_t>(p)];
                    if (st == 1) {
                        throw Error(ErrorCode::schema, "class hierarchy contains a cycle through " +
                                                           vocab.classes.label(p));
                    }
                    if (st == 0) {
                        st = 1;
                        stack.emplace_back(p, 0);
                    }
                } else {
                    state[static_cast<std::size_t>(c)] = 2;
                    stack.pop_back();
                }
            }
        }
    }

    void compute_ancestors(ClassHierarchy& h) {
        const auto n = h.num_classes();
        h.ancestors_.resize(static_cast<std::size_t>(n));
        std::vector<std::int32_t> dist(static_cast<std::size_t>(n));
        for (ClassId c = 0; c < n; ++c) {
            std::fill(dist.begin(), dist.end(), -1);
            std::queue<ClassId> q;
            dist[static_cast<std::size_t>(c)] = 0;
            q.push(c);
            while (!q.empty()) {
                ClassId x = q.front();
                q.pop();
                for (ClassId p : h.parents_[static_cast<std::size_t>(x)]) {
                    if (dist[static_cast<std::size_t>(p)] < 0) {
                        dist[static_cast<std::size_t>(p)] = dist[static_cast<std::size_t>(x)] + 1;
                        q.push(p);
                    }
                }
            }
            auto& anc = h.ancestors_[static_cast<std::size_t>(c)];
            for (ClassId x = 0; x < n; ++x) {
                if (dist[static_cast<std::size_t>(x)] >= 0) {
                    anc.emplace_back(x, dist[static_cast<std::size_t>(x)]);
                }
            }
        }
    }
};

Schema load_schema(const std::string& types_path, const std::string& hierarchy_path,
                   const std::string& signature_path, Vocabulary& vocab,
                   const std::string& root_label) {
    std::vector<std::pair<ClassId, ClassId>> edges;  // (sub, super)
    std::vector<bool> in_hierarchy_file;
    auto mark = [&](ClassId c) {
        if (static_cast<std::size_t>(c) >= in_hierarchy_file.size()) {
            in_hierarchy_file.resize(static_cast<std::size_t>(c) + 1, false);
        }
        in_hierarchy_file[static_cast<std::size_t>(c)] = true;
    };
    if (!hierarchy_path.empty()) {
        for (const auto& row : read_tsv(hierarchy_path, 2)) {
            ClassId sub = vocab.classes.intern(row[0]);
            ClassId super = vocab.classes.intern(row[1]);
            edges.emplace_back(sub, super);
            mark(sub);
            mark(super);
        }
    }

    // Types: lines for entities outside the vocabulary are ignored so a schema
    // covering a superset KG still loads.
    std::vector<std::pair<EntityId, ClassId>> type_rows;
    for (const auto& row : read_tsv(types_path, 2)) {
        EntityId e = vocab.entities.find(row[0]);
        if (e == kNoId) continue;
        type_rows.emplace_back(e, vocab.classes.intern(row[1]));
    }

    std::vector<std::pair<RelationId, std::pair<bool, ClassId>>> sig_rows;  // (r, (is_domain, c))
    if (!signature_path.empty()) {
        for (const auto& row : read_tsv(signature_path, 3)) {
            RelationId r = vocab.relations.find(row[0]);
            bool is_domain;
            if (row[1] == "DOMAIN")
                is_domain = true;
            else if (row[1] == "RANGE")
                is_domain = false;
            else
                throw Error(ErrorCode::parse,
                            signature_path + ": signature kind must be DOMAIN or RANGE, got `" +
                                row[1] + "`");
            ClassId c = vocab.classes.intern(row[2]);
            if (r == kNoId) continue;
            sig_rows.emplace_back(r, std::make_pair(is_domain, c));
        }
    }

    std::string root = root_label;
    if (hierarchy_path.empty() && root.empty()) {
        root = "<root>";
        vocab.classes.intern(root);
    }

    const auto num_classes = vocab.classes.size();
    std::vector<std::vector<ClassId>> parents(static_cast<std::size_t>(num_classes));
    for (auto [sub, super] : edges) {
        if (sub == super) {
            throw Error(ErrorCode::schema, "class hierarchy contains a cycle through " +
                                               vocab.classes.label(sub));
        }
        parents[static_cast<std::size_t>(sub)].push_back(super);
    }
    for (auto& p : parents) sort_unique(p);
    in_hierarchy_file.resize(static_cast<std::size_t>(num_classes), false);

    Schema schema;
    schema.hierarchy =
        SchemaBuilder().build_hierarchy(std::move(parents), in_hierarchy_file, vocab, root);

    const auto num_entities = vocab.entities.size();
    schema.types.asserted.resize(static_cast<std::size_t>(num_entities));
    for (auto [e, c] : type_rows) schema.types.asserted[static_cast<std::size_t>(e)].push_back(c);
    schema.types.closure.resize(static_cast<std::size_t>(num_entities));
    schema.types.most_specific.resize(static_cast<std::size_t>(num_entities));
    for (std::size_t e = 0; e < schema.types.asserted.size(); ++e) {
        auto& asserted = schema.types.asserted[e];
        sort_unique(asserted);
        if (asserted.empty()) continue;
        auto& clo = schema.types.closure[e];
        for (ClassId c : asserted) {
            for (const auto& [a, d] : schema.hierarchy.ancestors(c)) clo.push_back(a);
        }
        sort_unique(clo);
        // Minimal asserted classes: drop any class that is a strict ancestor
        // of another asserted class.
        std::vector<ClassId> strict_ancestors;
        for (ClassId c : asserted) {
            for (const auto& [a, d] : schema.hierarchy.ancestors(c)) {
                if (d > 0) strict_ancestors.push_back(a);
            }
        }
        sort_unique(strict_ancestors);
        for (ClassId c : asserted) {
            if (!std::binary_search(strict_ancestors.begin(), strict_ancestors.end(), c)) {
                schema.types.most_specific[e].push_back(c);
            }
        }
    }

    const auto num_relations = vocab.relations.size();
    schema.signature.domain.resize(static_cast<std::size_t>(num_relations));
    schema.signature.range.resize(static_cast<std::size_t>(num_relations));
    for (auto [r, dc] : sig_rows) {
        auto& side = dc.first ? schema.signature.domain : schema.signature.range;
        side[static_cast<std::size_t>(r)].push_back(dc.second);
    }
    for (auto& d : schema.signature.domain) sort_unique(d);
    for (auto& rg : schema.signature.range) sort_unique(rg);

    return schema;
}

ExtensionalProfile build_extensional_profile(std::span<const Triple> triples,
                                             std::int32_t num_relations) {
    ExtensionalProfile profile;
    profile.heads.resize(static_cast<std::size_t>(num_relations));
    profile.tails.resize(static_cast<std::size_t>(num_relations));
    for (const auto& t : triples) {
        profile.heads[static_cast<std::size_t>(t.r)].insert(t.h);
        profile.tails[static_cast<std::size_t>(t.r)].insert(t.t);
    }
    return profile;
}

namespace {

std::span<const ClassId> typed_or_throw(const std::vector<std::vector<ClassId>>& sets,
                                        EntityId e) {
    if (e < 0 || e >= static_cast<EntityId>(sets.size()) ||
        sets[static_cast<std::size_t>(e)].empty()) {
        throw Error(ErrorCode::validation,
                    "entity " + std::to_string(e) + " is untyped; semantic compatibility "
                    "against a declared signature needs typed entities");
    }
    return sets[static_cast<std::size_t>(e)];
}

}  // namespace

int compatibility_base(const Triple& query, const Triple& candidate, const Schema& schema) {
    if (schema.signature.has_domain(query.r)) {
        auto types = typed_or_throw(schema.types.closure, candidate.h);
        if (!intersects(types, schema.signature.domain[static_cast<std::size_t>(query.r)]))
            return 0;
    }
    if (schema.signature.has_range(query.r)) {
        auto types = typed_or_throw(schema.types.closure, candidate.t);
        if (!intersects(types, schema.signature.range[static_cast<std::size_t>(query.r)]))
            return 0;
    }
    return 1;
}

double compatibility_wup(const Triple& query, const Triple& candidate, const Schema& schema) {
    auto side = [&](EntityId e, const std::vector<ClassId>& signature) {
        auto types = typed_or_throw(schema.types.most_specific, e);
        double best = 0.0;
        for (ClassId c : types) {
            for (ClassId c_prime : signature) {
                best = std::max(best, wu_palmer(c, c_prime, schema.hierarchy));
            }
        }
        return best;
    };
    double head_side = 1.0, tail_side = 1.0;
    if (schema.signature.has_domain(query.r)) {
        head_side =
            side(candidate.h, schema.signature.domain[static_cast<std::size_t>(query.r)]);
    }
    if (schema.signature.has_range(query.r)) {
        tail_side = side(candidate.t, schema.signature.range[static_cast<std::size_t>(query.r)]);
    }
    return std::min(head_side, tail_side);
}

int compatibility_ext(const Triple& query, const Triple& candidate,
                      const ExtensionalProfile& profile) {
    return profile.head_observed(query.r, candidate.h) &&
                   profile.tail_observed(query.r, candidate.t)
               ? 1
               : 0;
}

}  // namespace kgsem
