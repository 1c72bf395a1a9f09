// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pccse/geometry.hpp"
#include "pccse/types.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace pccse {

// Dense pixel-to-vertex assignment. Background pixels carry the sentinel
// vertex and a zero score.
struct UvMap {
    static constexpr uint32_t no_vertex = std::numeric_limits<uint32_t>::max();

    uint32_t width = 0;
    uint32_t height = 0;
    std::vector<uint32_t> vertex;
    std::vector<float> score;

    UvMap() = default;
    UvMap(uint32_t w, uint32_t h)
        : width(w), height(h), vertex(size_t(w) * h, no_vertex), score(size_t(w) * h, 0.0f) {}

    uint32_t vertex_at(uint32_t x, uint32_t y) const { return vertex[size_t(y) * width + x]; }
    float score_at(uint32_t x, uint32_t y) const { return score[size_t(y) * width + x]; }
    bool foreground(uint32_t x, uint32_t y) const { return vertex_at(x, y) != no_vertex; }
};

// Per-pixel best score and best vertex within each partition, for one pixel.
// score uses -inf for partitions with no vertices.
struct PartitionTables {
    uint32_t width = 0;
    uint32_t height = 0;
    uint32_t partitions = 0;
    std::vector<double> score;  // [y][x][p]
    std::vector<uint32_t> vertex;

    double score_at(uint32_t x, uint32_t y, uint32_t p) const {
        return score[(size_t(y) * width + x) * partitions + p];
    }
    uint32_t vertex_at(uint32_t x, uint32_t y, uint32_t p) const {
        return vertex[(size_t(y) * width + x) * partitions + p];
    }
};

// Argmax of the embedding dot product over all vertices. Ties resolve to the
// smallest vertex index.
UvMap assign_unconstrained(const InstanceInput& instance, const CanonicalMesh& mesh,
                           const EmbeddingSet& embeddings);

// Argmax restricted to the vertices of partitions the label map allows at
// each pixel. A foreground pixel whose allowed set is empty is an internal
// error; background pixels are skipped.
UvMap assign_constrained(const InstanceInput& instance, const CanonicalMesh& mesh,
                         const EmbeddingSet& embeddings, const LabelMap& labels);

// Two-stage variant: per-partition maxima first, then the best admissible
// partition. Disallowed partitions are masked with -inf rather than a
// multiplicative zero, which would mishandle negative scores. Partition ties
// resolve to the one holding the smaller winning vertex index, making the
// result identical to assign_constrained.
UvMap assign_constrained_blocked(const InstanceInput& instance, const CanonicalMesh& mesh,
                                 const EmbeddingSet& embeddings, const LabelMap& labels,
                                 PartitionTables* tables = nullptr);

} // namespace pccse
