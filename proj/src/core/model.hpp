#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace kgsem {

enum class ModelKind { transe, transh, distmult, complex, simple };
enum class NormKind { l1, l2 };
enum class QuerySide { head, tail };

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

struct Matrix {
    std::int32_t rows = 0;
    std::int32_t cols = 0;
    std::vector<double> data;

    static Matrix zeros(std::int32_t rows, std::int32_t cols) {
        Matrix m;
        m.rows = rows;
        m.cols = cols;
        m.data.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
        return m;
    }

    bool empty() const { return data.empty(); }

    std::span<double> row(std::int32_t i) {
        return {data.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(cols),
                static_cast<std::size_t>(cols)};
    }
    std::span<const double> row(std::int32_t i) const {
        return {data.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(cols),
                static_cast<std::size_t>(cols)};
    }
};

// Which parameter matrix a gradient row belongs to.
enum class MatrixTag : std::int32_t {
    entity_a = 0,    // embeddings; ComplEx: real part; SimplE: head-role
    entity_b = 1,    // ComplEx: imaginary part; SimplE: tail-role
    relation_a = 2,  // translation / diagonal / real part / direct relation
    relation_b = 3,  // ComplEx: imaginary part; SimplE: inverse relation
    transh_normal = 4,
};
constexpr int kNumMatrixTags = 5;

struct ModelParameters {
    ModelKind kind = ModelKind::transe;
    NormKind norm = NormKind::l2;
    std::int32_t dim = 0;
    std::int32_t num_entities = 0;
    std::int32_t num_relations = 0;
    std::uint64_t seed = 0;

    Matrix entity_a;
    Matrix entity_b;
    Matrix relation_a;
    Matrix relation_b;
    Matrix transh_normal;

    Matrix& matrix(MatrixTag tag);
    const Matrix& matrix(MatrixTag tag) const;
};

// Uniform init in [-6/sqrt(dim), 6/sqrt(dim)], deterministic per seed.
// TransH hyperplane normals are normalized to unit length.
ModelParameters init_parameters(ModelKind kind, std::int32_t num_entities,
                                std::int32_t num_relations, std::int32_t dim, std::uint64_t seed,
                                NormKind norm = NormKind::l2);

// Plausibility score, higher = more plausible. Distance-based models return
// the negated norm.
double score(const ModelParameters& params, const Triple& triple);

// Scores every entity substituted into the open slot of (?,r,fixed) or
// (fixed,r,?). `out` must have num_entities slots.
void score_candidates_into(const ModelParameters& params, QuerySide side, RelationId r,
                           EntityId fixed, std::span<double> out);
std::vector<double> score_candidates(const ModelParameters& params, QuerySide side, RelationId r,
                                     EntityId fixed);

// Calls fn(tag, row) for every parameter row the triple's score depends on.
template <typename Fn>
void for_each_touched_row(ModelKind kind, const Triple& triple, Fn&& fn) {
    fn(MatrixTag::entity_a, triple.h);
    fn(MatrixTag::entity_a, triple.t);
    fn(MatrixTag::relation_a, triple.r);
    switch (kind) {
        case ModelKind::transh:
            fn(MatrixTag::transh_normal, triple.r);
            break;
        case ModelKind::complex:
        case ModelKind::simple:
            fn(MatrixTag::entity_b, triple.h);
            fn(MatrixTag::entity_b, triple.t);
            fn(MatrixTag::relation_b, triple.r);
            break;
        default:
            break;
    }
}

// Binary checkpoint: version header, model metadata, all matrices row-major.
// Round-trips bit-exactly.
void save_checkpoint(const ModelParameters& params, std::int32_t epoch, const std::string& path);

struct Checkpoint {
    ModelParameters params;
    std::int32_t epoch = 0;
};
Checkpoint load_checkpoint(const std::string& path);

}  // namespace kgsem
