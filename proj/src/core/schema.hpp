#pragma once

#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "core/dataset.hpp"
#include "core/types.hpp"
#include "core/vocab.hpp"

namespace kgsem {

// Rooted DAG of subclass-of edges. Every class reaches the root by following
// parent edges; the root has no parents. Ancestor sets with shortest edge
// distances are precomputed per class.
class ClassHierarchy {
public:
    ClassId root() const { return root_; }
    std::int32_t num_classes() const { return static_cast<std::int32_t>(parents_.size()); }
    bool contains(ClassId c) const { return c >= 0 && c < num_classes(); }

    std::span<const ClassId> parents(ClassId c) const;

    // {c} plus all ancestors up to the root, sorted by id.
    std::vector<ClassId> closure(ClassId c) const;

    // Shortest edge count from c up to the root.
    std::int32_t depth(ClassId c) const;

    // Sorted (ancestor, shortest distance) pairs; includes (c, 0).
    std::span<const std::pair<ClassId, std::int32_t>> ancestors(ClassId c) const;

private:
    friend class SchemaBuilder;

    void check(ClassId c) const;

    ClassId root_ = kNoId;
    std::vector<std::vector<ClassId>> parents_;
    std::vector<std::vector<std::pair<ClassId, std::int32_t>>> ancestors_;
};

// Wu-Palmer similarity between two classes: 2·d(lcs,root) over
// d(a,lcs) + d(b,lcs) + 2·d(lcs,root), taking the common ancestor that
// maximizes the value. Zero exactly when the only common ancestor is the root.
double wu_palmer(ClassId a, ClassId b, const ClassHierarchy& hierarchy);

struct TypeAssignment {
    // All vectors are sorted by class id and indexed by entity id.
    std::vector<std::vector<ClassId>> asserted;
    std::vector<std::vector<ClassId>> closure;        // asserted plus all ancestors
    std::vector<std::vector<ClassId>> most_specific;  // minimal asserted classes

    bool is_typed(EntityId e) const {
        return e >= 0 && e < static_cast<EntityId>(asserted.size()) &&
               !asserted[static_cast<std::size_t>(e)].empty();
    }
};

struct RelationSignature {
    // Indexed by relation id, sorted class ids; an empty set means the side is
    // undeclared and counts as universally compatible.
    std::vector<std::vector<ClassId>> domain;
    std::vector<std::vector<ClassId>> range;

    bool has_domain(RelationId r) const {
        return r >= 0 && r < static_cast<RelationId>(domain.size()) &&
               !domain[static_cast<std::size_t>(r)].empty();
    }
    bool has_range(RelationId r) const {
        return r >= 0 && r < static_cast<RelationId>(range.size()) &&
               !range[static_cast<std::size_t>(r)].empty();
    }
};

struct Schema {
    ClassHierarchy hierarchy;
    TypeAssignment types;
    RelationSignature signature;
};

// Loads schema files against an existing vocabulary. Class labels are
// interned into vocab.classes; lines naming entities or relations absent from
// the vocabulary are skipped. `hierarchy_path` may be empty, producing a flat
// hierarchy under a synthesized root. When `root_label` is empty the root is
// auto-detected as the unique parentless class of the hierarchy file;
// ambiguity is a schema error. Parentless classes other than the root are
// attached directly to the root.
//
// File formats (tab-separated): `entity\tclass`, `subclass\tsuperclass`,
// `relation\tDOMAIN|RANGE\tclass`. Repeated keys accumulate into sets.
Schema load_schema(const std::string& types_path, const std::string& hierarchy_path,
                   const std::string& signature_path, Vocabulary& vocab,
                   const std::string& root_label = "");

// Per-relation sets of entities observed as heads and tails of the given
// triples.
struct ExtensionalProfile {
    std::vector<std::unordered_set<EntityId>> heads;
    std::vector<std::unordered_set<EntityId>> tails;

    bool head_observed(RelationId r, EntityId e) const {
        return r >= 0 && r < static_cast<RelationId>(heads.size()) &&
               heads[static_cast<std::size_t>(r)].contains(e);
    }
    bool tail_observed(RelationId r, EntityId e) const {
        return r >= 0 && r < static_cast<RelationId>(tails.size()) &&
               tails[static_cast<std::size_t>(r)].contains(e);
    }
};

ExtensionalProfile build_extensional_profile(std::span<const Triple> triples,
                                             std::int32_t num_relations);

// Schema compatibility of a candidate triple with its ground-truth query:
// 1 iff the closure-expanded types of the candidate head intersect the
// relation's domain and likewise for tail and range. Sides without a declared
// signature are compatible; a typed check on an untyped entity is an error.
int compatibility_base(const Triple& query, const Triple& candidate, const Schema& schema);

// Hierarchy-weighted variant: min over the head and tail sides of the best
// Wu-Palmer similarity between any most-specific candidate class and any
// signature class of that side.
double compatibility_wup(const Triple& query, const Triple& candidate, const Schema& schema);

// Extensional variant: 1 iff the candidate head and tail have both been
// observed in that role for the query relation in the profile's source
// triples.
int compatibility_ext(const Triple& query, const Triple& candidate,
                      const ExtensionalProfile& profile);

}  // namespace kgsem
