// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pccse/types.hpp"

#include <string>
#include <vector>

namespace pccse {

struct BoneEstimate {
    std::string bone;
    double pixel_length = 0.0;
    double canonical_length = 0.0;
    double pixels_per_unit = 0.0;
};

struct ScaleEstimate {
    double pixels_per_unit = 0.0;
    std::string contributing_bone;
    std::vector<BoneEstimate> per_bone;
};

// Largest per-bone ratio of on-image length to canonical length, taken over
// bones with both endpoints present and a bound canonical length.
// Throws ErrorCode::unavailable when no bone qualifies.
ScaleEstimate estimate_scale(const Skeleton2D& skeleton);

double capsule_radius(const ScaleEstimate& scale, double delta);

// Estimated standing height in pixels, independent of the visible extent.
double estimate_height(const ScaleEstimate& scale, double canonical_height);

} // namespace pccse
