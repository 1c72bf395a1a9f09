// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pccse/types.hpp"

namespace pccse {

struct Capsule {
    Point2 a;
    Point2 b;
    double radius = 0.0; // pixels; a == b degenerates to a disc

    bool contains(Point2 p) const;
};

enum class Facing { frontal, dorsal, indeterminate };

const char* to_string(Facing facing);

/// Per-pixel sets of allowed partition labels, encoded as bitmasks.
/// Background pixels carry 0; every foreground pixel carries a non-empty set
/// that includes the head bit.
struct LabelMap {
    uint32_t width = 0;
    uint32_t height = 0;
    uint32_t partition_count = 0; // <= 16
    std::vector<uint16_t> allowed;

    LabelMap() = default;
    LabelMap(uint32_t w, uint32_t h, uint32_t partitions)
        : width(w), height(h), partition_count(partitions),
          allowed(size_t(w) * h, 0) {}

    uint16_t at(uint32_t x, uint32_t y) const { return allowed[size_t(y) * width + x]; }
    uint16_t& at(uint32_t x, uint32_t y) { return allowed[size_t(y) * width + x]; }
    uint16_t all_bits() const { return uint16_t((1u << partition_count) - 1u); }
    bool allows(uint32_t x, uint32_t y, int partition) const {
        return (at(x, y) >> partition) & 1u;
    }
};

/// All-permissive map: every foreground pixel gets every bit. Equivalent to no
/// constraints at all.
LabelMap all_bits_label_map(const Mask& mask, uint32_t partition_count);

/// Euclidean distance from p to the closed segment [a, b]; a == b degenerates
/// to point distance.
double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// Orientation of the shoulder-hip quadrilateral LS -> RS -> RH -> LH in image
/// coordinates (y down). Negative shoelace area = frontal, positive = dorsal,
/// |area| < 1 px^2 = indeterminate.
Facing quadrilateral_facing(Point2 left_shoulder, Point2 right_shoulder, Point2 right_hip,
                            Point2 left_hip);

/// Rasterizes the pose-induced proximal regions into a LabelMap over the
/// foreground mask:
///  - each present principal bone contributes a capsule for its partition;
///  - the torso is the shoulder-hip quadrilateral plus capsules along its two
///    lateral sides; inside the quadrilateral only the facing side's bit stays
///    (both when facing is indeterminate);
///  - hands/feet get wrist/ankle discs of factor*radius (coco17) or chains of
///    standard-radius capsules through the finger/toe keypoints (wholebody133);
///  - the head bit and the bits of missing body parts are set everywhere;
///  - foreground pixels outside all regions get all bits.
LabelMap build_proximal_regions(const Skeleton2D& skeleton, double radius, const Mask& mask,
                                double hand_foot_radius_factor);

} // namespace pccse
