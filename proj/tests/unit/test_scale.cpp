// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "pccse/scale.hpp"

using namespace pccse;

namespace {

Skeleton2D two_forearm_skeleton() {
    Skeleton2D s;
    s.kind = SkeletonKind::coco17;
    s.keypoints.resize(17);
    auto place = [&](int id, double x, double y) { s.keypoints[size_t(id)] = {x, y, 1.0, true}; };
    place(kp::left_elbow, 0, 0);
    place(kp::left_wrist, 100, 0);
    place(kp::right_elbow, 0, 50);
    place(kp::right_wrist, 80, 50);
    s.bones = make_principal_bones();
    bind_bone_lengths(s, {{"left_forearm", 0.5}, {"right_forearm", 0.5}});
    return s;
}

} // namespace

TEST_CASE("scale takes the largest per-bone pixels-per-unit ratio") {
    const Skeleton2D s = two_forearm_skeleton();
    const ScaleEstimate scale = estimate_scale(s);
    CHECK(scale.pixels_per_unit == doctest::Approx(200.0)); // 100 px / 0.5 units
    CHECK(scale.contributing_bone == "left_forearm");
    REQUIRE(scale.per_bone.size() == 2);
    for (const auto& bone : scale.per_bone) {
        if (bone.bone == "right_forearm") {
            CHECK(bone.pixel_length == doctest::Approx(80.0));
            CHECK(bone.pixels_per_unit == doctest::Approx(160.0));
        }
    }
}

TEST_CASE("bones with a missing endpoint or an unbound length are skipped") {
    Skeleton2D s = two_forearm_skeleton();
    s.keypoints[kp::left_wrist].present = false; // left forearm loses an endpoint
    ScaleEstimate scale = estimate_scale(s);
    CHECK(scale.pixels_per_unit == doctest::Approx(160.0));
    CHECK(scale.contributing_bone == "right_forearm");

    bind_bone_lengths(s, {{"right_forearm", 0.0}}); // unbind the survivor
    CHECK_THROWS_AS(estimate_scale(s), Error);
    try {
        estimate_scale(s);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::unavailable);
    }
}

TEST_CASE("scale is unavailable with no usable bone") {
    Skeleton2D s;
    s.kind = SkeletonKind::coco17;
    s.keypoints.resize(17); // nothing present
    s.bones = make_principal_bones();
    CHECK_THROWS_AS(estimate_scale(s), Error);
}

TEST_CASE("capsule radius and height scale linearly with pixels per unit") {
    ScaleEstimate scale;
    scale.pixels_per_unit = 258.0;
    CHECK(capsule_radius(scale, 0.08) == doctest::Approx(20.64));
    CHECK(capsule_radius(scale, 0.0) == doctest::Approx(0.0));
    CHECK(estimate_height(scale, 1.7) == doctest::Approx(438.6));
    CHECK_THROWS_AS(estimate_height(scale, 0.0), Error);
}
