// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#include "pccse/scale.hpp"

#include <cmath>

namespace pccse {

ScaleEstimate estimate_scale(const Skeleton2D& skeleton) {
    ScaleEstimate estimate;
    for (const auto& bone : skeleton.bones) {
        if (bone.canonical_length <= 0.0) continue;
        if (!skeleton.present(bone.a) || !skeleton.present(bone.b)) continue;
        const Point2 pa = skeleton.point(bone.a);
        const Point2 pb = skeleton.point(bone.b);
        BoneEstimate be;
        be.bone = bone.name;
        be.pixel_length = std::hypot(pb.x - pa.x, pb.y - pa.y);
        be.canonical_length = bone.canonical_length;
        be.pixels_per_unit = be.pixel_length / be.canonical_length;
        if (be.pixels_per_unit > estimate.pixels_per_unit) {
            estimate.pixels_per_unit = be.pixels_per_unit;
            estimate.contributing_bone = be.bone;
        }
        estimate.per_bone.push_back(std::move(be));
    }
    if (estimate.per_bone.empty() || estimate.pixels_per_unit <= 0.0)
        throw Error(ErrorCode::unavailable,
                    "scale unavailable: no bone with both endpoints present and a canonical "
                    "length");
    return estimate;
}

double capsule_radius(const ScaleEstimate& scale, double delta) {
    return delta * scale.pixels_per_unit;
}

double estimate_height(const ScaleEstimate& scale, double canonical_height) {
    if (canonical_height <= 0.0)
        throw Error(ErrorCode::invalid_argument, "canonical height must be positive");
    return scale.pixels_per_unit * canonical_height;
}

} // namespace pccse
