// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#include "pccse/quality.hpp"

#include "pccse/geometry.hpp"
#include "pccse/scale.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>

namespace pccse {

void AuditThresholds::validate() const {
    if (bone_distance_max <= 0.0)
        throw Error(ErrorCode::invalid_argument, "bone_distance_max must be positive");
    if (points_in_mask_min < 0.0 || points_in_mask_min > 1.0)
        throw Error(ErrorCode::invalid_argument, "points_in_mask_min must be in [0, 1]");
    if (mask_in_bbox_min < 0.0 || mask_in_bbox_min > 1.0)
        throw Error(ErrorCode::invalid_argument, "mask_in_bbox_min must be in [0, 1]");
    if (laterality_min_distance < 0.0)
        throw Error(ErrorCode::invalid_argument, "laterality_min_distance must be non-negative");
}

namespace {

// Segment, single point, or quadrilateral a part's points are measured against.
struct Anchor {
    enum class Kind { segment, point, quad } kind = Kind::point;
    Point2 a{}, b{};
    std::array<Point2, 4> quad{};
};

double anchor_distance(const Anchor& anchor, Point2 p) {
    switch (anchor.kind) {
    case Anchor::Kind::segment:
        return point_segment_distance(p, anchor.a, anchor.b);
    case Anchor::Kind::point:
        return std::hypot(p.x - anchor.a.x, p.y - anchor.a.y);
    case Anchor::Kind::quad: {
        bool inside = false;
        const auto& q = anchor.quad;
        for (int i = 0, j = 3; i < 4; j = i++) {
            if ((q[i].y > p.y) != (q[j].y > p.y)) {
                const double x_at =
                    q[i].x + (p.y - q[i].y) * (q[j].x - q[i].x) / (q[j].y - q[i].y);
                if (p.x < x_at) inside = !inside;
            }
        }
        if (inside) return 0.0;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0, j = 3; i < 4; j = i++)
            best = std::min(best, point_segment_distance(p, q[i], q[j]));
        return best;
    }
    }
    return 0.0;
}

// Builds the anchor for a partition from present keypoints; nullopt when the
// needed keypoints are absent. The head has no anchor and is never flagged.
std::optional<Anchor> anchor_for(int partition, const Skeleton2D& skel) {
    auto seg = [&](int a, int b) -> std::optional<Anchor> {
        if (!skel.present(a) || !skel.present(b)) return std::nullopt;
        Anchor an;
        an.kind = Anchor::Kind::segment;
        an.a = skel.point(a);
        an.b = skel.point(b);
        return an;
    };
    auto pt = [&](int a) -> std::optional<Anchor> {
        if (!skel.present(a)) return std::nullopt;
        Anchor an;
        an.kind = Anchor::Kind::point;
        an.a = skel.point(a);
        return an;
    };
    switch (partition) {
    case parts::left_arm: return seg(kp::left_shoulder, kp::left_elbow);
    case parts::right_arm: return seg(kp::right_shoulder, kp::right_elbow);
    case parts::left_forearm: return seg(kp::left_elbow, kp::left_wrist);
    case parts::right_forearm: return seg(kp::right_elbow, kp::right_wrist);
    case parts::left_hand: return pt(kp::left_wrist);
    case parts::right_hand: return pt(kp::right_wrist);
    case parts::left_thigh: return seg(kp::left_hip, kp::left_knee);
    case parts::right_thigh: return seg(kp::right_hip, kp::right_knee);
    case parts::left_shin: return seg(kp::left_knee, kp::left_ankle);
    case parts::right_shin: return seg(kp::right_knee, kp::right_ankle);
    case parts::left_foot: return pt(kp::left_ankle);
    case parts::right_foot: return pt(kp::right_ankle);
    case parts::torso_front:
    case parts::torso_back: {
        if (!skel.present(kp::left_shoulder) || !skel.present(kp::right_shoulder) ||
            !skel.present(kp::right_hip) || !skel.present(kp::left_hip))
            return std::nullopt;
        Anchor an;
        an.kind = Anchor::Kind::quad;
        an.quad = {skel.point(kp::left_shoulder), skel.point(kp::right_shoulder),
                   skel.point(kp::right_hip), skel.point(kp::left_hip)};
        return an;
    }
    default: return std::nullopt;
    }
}

} // namespace

InstanceAudit audit_instance(const InstanceInput& instance, const CanonicalMesh& mesh,
                             const AuditThresholds& thresholds) {
    thresholds.validate();
    InstanceAudit audit;
    audit.id = instance.id;
    audit.crowd = instance.iscrowd.value_or(false);

    if (instance.mask.empty()) {
        audit.auditable = false;
        audit.not_auditable_reason = "instance has no mask";
        return audit;
    }

    // Mask containment in the box.
    size_t fg = 0, fg_in_box = 0;
    const double bx = instance.bbox[0], by = instance.bbox[1];
    const double bx1 = bx + instance.bbox[2], by1 = by + instance.bbox[3];
    for (uint32_t y = 0; y < instance.height(); ++y) {
        for (uint32_t x = 0; x < instance.width(); ++x) {
            if (!instance.foreground(x, y)) continue;
            ++fg;
            if (double(x) >= bx && double(x) < bx1 && double(y) >= by && double(y) < by1)
                ++fg_in_box;
        }
    }
    audit.mask_in_bbox = fg == 0 ? 0.0 : double(fg_in_box) / double(fg);
    audit.bbox_mismatch = fg > 0 && audit.mask_in_bbox < thresholds.mask_in_bbox_min;
    if (fg == 0) {
        audit.auditable = false;
        audit.not_auditable_reason = "mask has no foreground pixels";
        return audit;
    }

    if (instance.gt_points.empty()) {
        audit.auditable = false;
        audit.not_auditable_reason = "instance has no ground-truth points";
        return audit;
    }

    size_t in_mask = 0;
    for (const auto& gt : instance.gt_points) {
        if (gt.x >= 0 && gt.y >= 0 && uint32_t(gt.x) < instance.width() &&
            uint32_t(gt.y) < instance.height() && instance.foreground(uint32_t(gt.x), uint32_t(gt.y)))
            ++in_mask;
    }
    audit.points_in_mask = double(in_mask) / double(instance.gt_points.size());
    audit.low_point_containment = audit.points_in_mask < thresholds.points_in_mask_min;

    // Skeletal checks need a pixel scale to normalize distances.
    double pixels_per_unit = 0.0;
    try {
        pixels_per_unit = estimate_scale(instance.skeleton).pixels_per_unit;
    } catch (const Error&) {
        audit.skeletal_audited = false;
        audit.skeletal_skip_reason = "scale unavailable";
        return audit;
    }

    std::map<int, std::vector<Point2>> points_of;
    for (const auto& gt : instance.gt_points) {
        if (gt.vertex < mesh.partition_of.size())
            points_of[mesh.partition_of[gt.vertex]].push_back(
                Point2{double(gt.x), double(gt.y)});
    }

    auto mean_distance = [&](const std::vector<Point2>& pts,
                             const Anchor& anchor) {
        double sum = 0.0;
        for (const auto& p : pts) sum += anchor_distance(anchor, p);
        return sum / double(pts.size()) / pixels_per_unit;
    };

    for (const auto& [partition, pts] : points_of) {
        if (partition == parts::head || pts.empty()) continue;
        const auto anchor = anchor_for(partition, instance.skeleton);
        if (!anchor) continue;
        const double d_own = mean_distance(pts, *anchor);
        if (d_own > thresholds.bone_distance_max)
            audit.part_flags.push_back(
                {partition, "far_from_bone", d_own, pts.size()});

        const int opposite = parts::mirror(partition);
        if (opposite == partition) continue;
        const auto opp_anchor = anchor_for(opposite, instance.skeleton);
        if (!opp_anchor) continue;
        const double d_opp = mean_distance(pts, *opp_anchor);
        if (d_own > std::max(thresholds.laterality_min_distance, d_opp))
            audit.part_flags.push_back({partition, "laterality", d_own, pts.size()});
    }
    return audit;
}

ConsistencyReport build_removal_list(const std::vector<InstanceInput>& instances,
                                     const CanonicalMesh& mesh,
                                     const AuditThresholds& thresholds) {
    ConsistencyReport report;
    report.total_instances = instances.size();
    for (const auto& instance : instances) {
        report.total_points += instance.gt_points.size();
        InstanceAudit audit = audit_instance(instance, mesh, thresholds);

        std::string whole_reason;
        if (audit.crowd)
            whole_reason = "crowd";
        else if (audit.bbox_mismatch)
            whole_reason = "bbox_mismatch";
        else if (audit.low_point_containment)
            whole_reason = "points_outside_mask";

        if (!whole_reason.empty()) {
            report.removals.push_back({instance.id, true, {}, whole_reason});
            ++report.flagged_instances;
            report.flagged_points += instance.gt_points.size();
            report.audits.push_back(std::move(audit));
            continue;
        }

        std::set<int> flagged;
        std::string reason;
        for (const auto& flag : audit.part_flags) {
            flagged.insert(flag.partition);
            if (flag.reason == "laterality") flagged.insert(parts::mirror(flag.partition));
            if (!reason.empty()) reason += ",";
            reason += parts::names()[size_t(flag.partition)] + (":" + flag.reason);
        }
        if (!flagged.empty()) {
            RemovalEntry entry{instance.id, false,
                               std::vector<int>(flagged.begin(), flagged.end()), reason};
            for (const auto& gt : instance.gt_points)
                if (gt.vertex < mesh.partition_of.size() &&
                    flagged.count(mesh.partition_of[gt.vertex]))
                    ++report.flagged_points;
            report.removals.push_back(std::move(entry));
            ++report.flagged_instances;
        }
        report.audits.push_back(std::move(audit));
    }
    return report;
}

std::vector<InstanceInput> apply_removal(const std::vector<InstanceInput>& instances,
                                         const CanonicalMesh& mesh,
                                         const std::vector<RemovalEntry>& removals) {
    std::map<std::string, std::vector<const RemovalEntry*>> by_id;
    for (const auto& entry : removals) by_id[entry.id].push_back(&entry);

    std::vector<InstanceInput> kept;
    kept.reserve(instances.size());
    for (const auto& instance : instances) {
        auto it = by_id.find(instance.id);
        if (it == by_id.end()) {
            kept.push_back(instance);
            continue;
        }
        bool drop = false;
        std::set<int> partitions;
        for (const auto* entry : it->second) {
            if (entry->whole_instance) drop = true;
            partitions.insert(entry->partitions.begin(), entry->partitions.end());
        }
        if (drop) continue;
        InstanceInput copy = instance;
        copy.gt_points.clear();
        for (const auto& gt : instance.gt_points) {
            const int p = gt.vertex < mesh.partition_of.size()
                              ? mesh.partition_of[gt.vertex]
                              : -1;
            if (!partitions.count(p)) copy.gt_points.push_back(gt);
        }
        kept.push_back(std::move(copy));
    }
    return kept;
}

} // namespace pccse
