// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pccse/assign.hpp"
#include "pccse/types.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace pccse {

// Shortest-path distances along mesh edges, Euclidean edge weights.
// Distances from a source are computed once and cached.
class GeodesicOracle {
public:
    explicit GeodesicOracle(const CanonicalMesh& mesh);

    double distance(uint32_t from, uint32_t to) const;
    const std::vector<double>& distances_from(uint32_t source) const;
    size_t vertex_count() const { return adjacency_.size(); }

private:
    std::vector<std::vector<std::pair<uint32_t, double>>> adjacency_;
    mutable std::unordered_map<uint32_t, std::vector<double>> cache_;
};

struct InstanceScore {
    std::string id;
    double gps = 0.0;
    size_t evaluated_points = 0;
};

// Mean per-point geodesic kernel exp(-g^2 / (2 kappa^2)) over ground-truth
// points. Points landing on background score zero. Throws when the instance
// carries no ground-truth points.
InstanceScore geodesic_point_similarity(const InstanceInput& instance, const UvMap& uv,
                                        const GeodesicOracle& oracle, double kappa);

// Percentage AP over GPS thresholds 0.50 to 0.95 in steps of 0.05, counting
// an instance as a true positive at a threshold when its GPS reaches it.
double average_precision(const std::vector<double>& gps_values);

std::vector<double> ap_thresholds();

} // namespace pccse
