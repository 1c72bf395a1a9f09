// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#include "pccse/assign.hpp"

#include "pccse/parallel.hpp"

#include <cmath>
#include <string>

namespace pccse {

namespace {

void check_shapes(const InstanceInput& instance, const CanonicalMesh& mesh,
                  const EmbeddingSet& embeddings) {
    if (embeddings.count() != mesh.vertices.size())
        throw Error(ErrorCode::precondition,
                    "embedding rows (" + std::to_string(embeddings.count()) +
                        ") do not match mesh vertices (" + std::to_string(mesh.vertices.size()) +
                        ")");
    if (instance.embedding_dim != embeddings.dim)
        throw Error(ErrorCode::precondition,
                    "pixel embedding dim (" + std::to_string(instance.embedding_dim) +
                        ") does not match vertex embedding dim (" + std::to_string(embeddings.dim) +
                        ")");
    if (mesh.vertices.empty())
        throw Error(ErrorCode::precondition, "mesh has no vertices");
}

void check_labels(const InstanceInput& instance, const CanonicalMesh& mesh,
                  const LabelMap& labels) {
    if (labels.width != instance.width() || labels.height != instance.height())
        throw Error(ErrorCode::precondition,
                    "label map " + std::to_string(labels.width) + "x" +
                        std::to_string(labels.height) + " does not match instance " +
                        std::to_string(instance.width()) + "x" +
                        std::to_string(instance.height()));
    if (labels.partition_count != mesh.partition_count())
        throw Error(ErrorCode::precondition,
                    "label map carries " + std::to_string(labels.partition_count) +
                        " partitions, mesh has " + std::to_string(mesh.partition_count()));
}

inline double dot(const float* a, const float* b, uint32_t dim) {
    double acc = 0.0;
    for (uint32_t i = 0; i < dim; ++i) acc += double(a[i]) * double(b[i]);
    return acc;
}

} // namespace

UvMap assign_unconstrained(const InstanceInput& instance, const CanonicalMesh& mesh,
                           const EmbeddingSet& embeddings) {
    check_shapes(instance, mesh, embeddings);
    const uint32_t w = instance.width(), h = instance.height();
    const uint32_t dim = embeddings.dim;
    const uint32_t n = uint32_t(embeddings.count());
    UvMap out(w, h);
    parallel_rows(h, [&](uint32_t y) {
        for (uint32_t x = 0; x < w; ++x) {
            if (!instance.foreground(x, y)) continue;
            const float* px = instance.embedding_at(x, y);
            uint32_t best = 0;
            double best_score = dot(px, embeddings.row(0), dim);
            for (uint32_t v = 1; v < n; ++v) {
                const double s = dot(px, embeddings.row(v), dim);
                if (s > best_score) {
                    best_score = s;
                    best = v;
                }
            }
            const size_t i = size_t(y) * w + x;
            out.vertex[i] = best;
            out.score[i] = float(best_score);
        }
    });
    return out;
}

UvMap assign_constrained(const InstanceInput& instance, const CanonicalMesh& mesh,
                         const EmbeddingSet& embeddings, const LabelMap& labels) {
    check_shapes(instance, mesh, embeddings);
    check_labels(instance, mesh, labels);
    const uint32_t w = instance.width(), h = instance.height();
    const uint32_t dim = embeddings.dim;
    const uint32_t n = uint32_t(embeddings.count());
    UvMap out(w, h);
    parallel_rows(h, [&](uint32_t y) {
        for (uint32_t x = 0; x < w; ++x) {
            if (!instance.foreground(x, y)) continue;
            const uint16_t allowed = labels.at(x, y);
            if (allowed == 0)
                throw Error(ErrorCode::internal, "foreground pixel (" + std::to_string(x) + "," +
                                                     std::to_string(y) +
                                                     ") allows no partition");
            const float* px = instance.embedding_at(x, y);
            bool found = false;
            uint32_t best = 0;
            double best_score = 0.0;
            for (uint32_t v = 0; v < n; ++v) {
                const int p = mesh.partition_of[v];
                if (!(allowed & (1u << p))) continue;
                const double s = dot(px, embeddings.row(v), dim);
                if (!found || s > best_score) {
                    found = true;
                    best_score = s;
                    best = v;
                }
            }
            if (!found)
                throw Error(ErrorCode::internal,
                            "foreground pixel (" + std::to_string(x) + "," + std::to_string(y) +
                                ") allows only empty partitions");
            const size_t i = size_t(y) * w + x;
            out.vertex[i] = best;
            out.score[i] = float(best_score);
        }
    });
    return out;
}

UvMap assign_constrained_blocked(const InstanceInput& instance, const CanonicalMesh& mesh,
                                 const EmbeddingSet& embeddings, const LabelMap& labels,
                                 PartitionTables* tables) {
    check_shapes(instance, mesh, embeddings);
    check_labels(instance, mesh, labels);
    const uint32_t w = instance.width(), h = instance.height();
    const uint32_t dim = embeddings.dim;
    const uint32_t n = uint32_t(embeddings.count());
    const uint32_t parts = mesh.partition_count();
    const double neg_inf = -std::numeric_limits<double>::infinity();

    PartitionTables local;
    PartitionTables& t = tables ? *tables : local;
    t.width = w;
    t.height = h;
    t.partitions = parts;
    t.score.assign(size_t(w) * h * parts, neg_inf);
    t.vertex.assign(size_t(w) * h * parts, UvMap::no_vertex);

    UvMap out(w, h);
    parallel_rows(h, [&](uint32_t y) {
        std::vector<double> part_score(parts);
        std::vector<uint32_t> part_vertex(parts);
        for (uint32_t x = 0; x < w; ++x) {
            if (!instance.foreground(x, y)) continue;
            const uint16_t allowed = labels.at(x, y);
            if (allowed == 0)
                throw Error(ErrorCode::internal, "foreground pixel (" + std::to_string(x) + "," +
                                                     std::to_string(y) +
                                                     ") allows no partition");
            const float* px = instance.embedding_at(x, y);

            // Stage one: best score and vertex within every partition.
            std::fill(part_score.begin(), part_score.end(), neg_inf);
            std::fill(part_vertex.begin(), part_vertex.end(), UvMap::no_vertex);
            for (uint32_t v = 0; v < n; ++v) {
                const int p = mesh.partition_of[v];
                const double s = dot(px, embeddings.row(v), dim);
                if (s > part_score[size_t(p)]) {
                    part_score[size_t(p)] = s;
                    part_vertex[size_t(p)] = v;
                }
            }
            const size_t base = (size_t(y) * w + x) * parts;
            std::copy(part_score.begin(), part_score.end(), t.score.begin() + base);
            std::copy(part_vertex.begin(), part_vertex.end(), t.vertex.begin() + base);

            // Stage two: best admissible partition, -inf where masked out.
            int best_p = -1;
            for (uint32_t p = 0; p < parts; ++p) {
                if (!(allowed & (1u << p))) continue;
                if (part_vertex[p] == UvMap::no_vertex) continue;
                if (best_p < 0 || part_score[p] > part_score[size_t(best_p)] ||
                    (part_score[p] == part_score[size_t(best_p)] &&
                     part_vertex[p] < part_vertex[size_t(best_p)]))
                    best_p = int(p);
            }
            if (best_p < 0)
                throw Error(ErrorCode::internal,
                            "foreground pixel (" + std::to_string(x) + "," + std::to_string(y) +
                                ") allows only empty partitions");
            const size_t i = size_t(y) * w + x;
            out.vertex[i] = part_vertex[size_t(best_p)];
            out.score[i] = float(part_score[size_t(best_p)]);
        }
    });
    return out;
}

} // namespace pccse
