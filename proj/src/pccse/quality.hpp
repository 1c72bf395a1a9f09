// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pccse/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pccse {

struct AuditThresholds {
    double bone_distance_max = 0.25;    // scale-normalized point-to-anchor distance
    double points_in_mask_min = 0.7;
    double mask_in_bbox_min = 0.8;
    double laterality_min_distance = 0.10;

    void validate() const;
};

struct PartFlag {
    int partition = -1;
    std::string reason;    // "far_from_bone" or "laterality"
    double value = 0.0;    // offending normalized distance
    size_t points = 0;     // ground-truth points attributed to the part
};

struct InstanceAudit {
    std::string id;
    bool auditable = true;
    std::string not_auditable_reason;

    double mask_in_bbox = 0.0;
    double points_in_mask = 0.0;
    bool bbox_mismatch = false;
    bool low_point_containment = false;
    bool crowd = false;

    bool skeletal_audited = true;
    std::string skeletal_skip_reason;

    std::vector<PartFlag> part_flags;

    bool remove_instance() const { return bbox_mismatch || crowd; }
    bool clean() const { return !remove_instance() && !low_point_containment && part_flags.empty(); }
};

struct RemovalEntry {
    std::string id;
    bool whole_instance = false;
    std::vector<int> partitions;    // sorted, unique; empty when whole_instance
    std::string reason;
};

struct ConsistencyReport {
    std::vector<InstanceAudit> audits;
    std::vector<RemovalEntry> removals;

    size_t flagged_instances = 0;
    size_t total_instances = 0;
    size_t flagged_points = 0;
    size_t total_points = 0;
};

// Per-instance consistency checks: mask/bbox agreement, point containment,
// scale-normalized distance of each part's points to its skeletal anchor, and
// left/right confusion between paired parts.
InstanceAudit audit_instance(const InstanceInput& instance, const CanonicalMesh& mesh,
                             const AuditThresholds& thresholds);

ConsistencyReport build_removal_list(const std::vector<InstanceInput>& instances,
                                     const CanonicalMesh& mesh,
                                     const AuditThresholds& thresholds);

// Drops whole instances or all points of flagged parts, never single points.
// Applying the same list twice changes nothing.
std::vector<InstanceInput> apply_removal(const std::vector<InstanceInput>& instances,
                                         const CanonicalMesh& mesh,
                                         const std::vector<RemovalEntry>& removals);

} // namespace pccse
