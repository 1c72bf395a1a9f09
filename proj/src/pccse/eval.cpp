// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#include "pccse/eval.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace pccse {

GeodesicOracle::GeodesicOracle(const CanonicalMesh& mesh) {
    adjacency_.resize(mesh.vertices.size());
    auto add_edge = [&](uint32_t a, uint32_t b) {
        if (a == b) return;
        const Point3& pa = mesh.vertices[a];
        const Point3& pb = mesh.vertices[b];
        const double w =
            std::sqrt((pa.x - pb.x) * (pa.x - pb.x) + (pa.y - pb.y) * (pa.y - pb.y) +
                      (pa.z - pb.z) * (pa.z - pb.z));
        adjacency_[a].emplace_back(b, w);
        adjacency_[b].emplace_back(a, w);
    };
    for (const auto& f : mesh.faces) {
        add_edge(f[0], f[1]);
        add_edge(f[1], f[2]);
        add_edge(f[2], f[0]);
    }
    for (auto& nbrs : adjacency_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
}

const std::vector<double>& GeodesicOracle::distances_from(uint32_t source) const {
    auto it = cache_.find(source);
    if (it != cache_.end()) return it->second;

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(adjacency_.size(), inf);
    using Item = std::pair<double, uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (const auto& [v, w] : adjacency_[u]) {
            const double nd = d + w;
            if (nd < dist[v]) {
                dist[v] = nd;
                heap.emplace(nd, v);
            }
        }
    }
    for (size_t v = 0; v < dist.size(); ++v)
        if (dist[v] == inf)
            throw Error(ErrorCode::precondition,
                        "mesh is disconnected: vertex " + std::to_string(v) +
                            " unreachable from vertex " + std::to_string(source));
    return cache_.emplace(source, std::move(dist)).first->second;
}

double GeodesicOracle::distance(uint32_t from, uint32_t to) const {
    if (from >= adjacency_.size() || to >= adjacency_.size())
        throw Error(ErrorCode::invalid_argument, "geodesic query out of range");
    return distances_from(from)[to];
}

InstanceScore geodesic_point_similarity(const InstanceInput& instance, const UvMap& uv,
                                        const GeodesicOracle& oracle, double kappa) {
    if (instance.gt_points.empty())
        throw Error(ErrorCode::precondition,
                    "instance '" + instance.id + "' has no evaluable points");
    if (uv.width != instance.width() || uv.height != instance.height())
        throw Error(ErrorCode::precondition, "uv map does not match instance shape");
    InstanceScore score;
    score.id = instance.id;
    double sum = 0.0;
    for (const auto& gt : instance.gt_points) {
        if (gt.vertex >= oracle.vertex_count())
            throw Error(ErrorCode::precondition,
                        "ground-truth vertex " + std::to_string(gt.vertex) + " out of range");
        double k = 0.0;
        if (gt.x >= 0 && gt.y >= 0 && uint32_t(gt.x) < uv.width && uint32_t(gt.y) < uv.height &&
            uv.foreground(uint32_t(gt.x), uint32_t(gt.y))) {
            const double g = oracle.distance(uv.vertex_at(uint32_t(gt.x), uint32_t(gt.y)),
                                             gt.vertex);
            k = std::exp(-(g * g) / (2.0 * kappa * kappa));
        }
        sum += k;
        ++score.evaluated_points;
    }
    score.gps = sum / double(score.evaluated_points);
    return score;
}

std::vector<double> ap_thresholds() {
    std::vector<double> t;
    for (int i = 0; i < 10; ++i) t.push_back(0.50 + 0.05 * i);
    return t;
}

double average_precision(const std::vector<double>& gps_values) {
    if (gps_values.empty())
        throw Error(ErrorCode::precondition, "no instances to average");
    const auto thresholds = ap_thresholds();
    double sum = 0.0;
    for (double t : thresholds) {
        size_t tp = 0;
        for (double g : gps_values)
            if (g >= t) ++tp;
        sum += double(tp) / double(gps_values.size());
    }
    return 100.0 * sum / double(thresholds.size());
}

} // namespace pccse
