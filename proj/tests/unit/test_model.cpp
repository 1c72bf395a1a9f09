// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "pccse/types.hpp"
#include "testkit/testkit.hpp"

#include <set>
#include <string>

using namespace pccse;

TEST_CASE("partition table order and lookup") {
    const auto& names = parts::names();
    REQUIRE(names.size() == size_t(parts::count));
    CHECK(std::string(names[parts::left_arm]) == "left_arm");
    CHECK(std::string(names[parts::right_forearm]) == "right_forearm");
    CHECK(std::string(names[parts::torso_front]) == "torso_front");
    CHECK(std::string(names[parts::torso_back]) == "torso_back");
    CHECK(std::string(names[parts::head]) == "head");
    for (int i = 0; i < parts::count; ++i) CHECK(parts::index_of(names[i]) == i);
    CHECK(parts::index_of("no_such_part") == -1);
}

TEST_CASE("partition mirror is an involution pairing left with right") {
    for (int i = 0; i < parts::count; ++i) {
        const int m = parts::mirror(i);
        CHECK(parts::mirror(m) == i);
        const std::string name = parts::names()[i];
        const std::string mirrored = parts::names()[m];
        if (name.rfind("left_", 0) == 0) CHECK(mirrored == "right_" + name.substr(5));
        else if (name.rfind("right_", 0) == 0) CHECK(mirrored == "left_" + name.substr(6));
        else CHECK(m == i);
    }
}

TEST_CASE("principal bone table covers the limb partitions and the quad sides") {
    const auto bones = make_principal_bones();
    REQUIRE(bones.size() == 12);

    int quad_sides = 0;
    std::set<int> limb_partitions;
    for (const auto& bone : bones) {
        if (bone.is_quad_side) {
            ++quad_sides;
            CHECK(bone.partition == parts::torso_front);
        } else {
            limb_partitions.insert(bone.partition);
        }
        CHECK(bone.canonical_length == 0.0);
    }
    CHECK(quad_sides == 4);
    CHECK(limb_partitions ==
          std::set<int>{parts::left_arm, parts::right_arm, parts::left_forearm,
                        parts::right_forearm, parts::left_thigh, parts::right_thigh,
                        parts::left_shin, parts::right_shin});

    for (const auto& bone : bones) {
        const std::string name = bone.name;
        if (name == "left_forearm") {
            CHECK(bone.a == kp::left_elbow);
            CHECK(bone.b == kp::left_wrist);
        } else if (name == "right_thigh") {
            CHECK(bone.a == kp::right_hip);
            CHECK(bone.b == kp::right_knee);
        } else if (name == "quad_top") {
            CHECK(bone.a == kp::left_shoulder);
            CHECK(bone.b == kp::right_shoulder);
        }
    }
}

TEST_CASE("bind_bone_lengths fills lengths by name and ignores unknown entries") {
    Skeleton2D skeleton;
    skeleton.bones = make_principal_bones();
    bind_bone_lengths(skeleton, {{"left_forearm", 0.27}, {"bogus", 9.0}});
    for (const auto& bone : skeleton.bones) {
        if (std::string(bone.name) == "left_forearm") CHECK(bone.canonical_length == doctest::Approx(0.27));
        else CHECK(bone.canonical_length == 0.0);
    }
}

TEST_CASE("presence threshold treats zero confidence as unlabeled") {
    Skeleton2D skeleton;
    skeleton.keypoints.resize(4);
    skeleton.keypoints[0].confidence = 0.0;
    skeleton.keypoints[1].confidence = 0.29;
    skeleton.keypoints[2].confidence = 0.30;
    skeleton.keypoints[3].confidence = 0.95;

    apply_presence_threshold(skeleton, 0.3);
    CHECK_FALSE(skeleton.keypoints[0].present);
    CHECK_FALSE(skeleton.keypoints[1].present);
    CHECK(skeleton.keypoints[2].present);
    CHECK(skeleton.keypoints[3].present);

    apply_presence_threshold(skeleton, 0.0);
    CHECK_FALSE(skeleton.keypoints[0].present); // unlabeled even at threshold 0
    CHECK(skeleton.keypoints[1].present);
}

TEST_CASE("skeleton kind names and keypoint counts") {
    CHECK(std::string(to_string(SkeletonKind::coco17)) == "coco17");
    CHECK(std::string(to_string(SkeletonKind::wholebody133)) == "wholebody133");
    CHECK(skeleton_kind_from_string("coco17") == SkeletonKind::coco17);
    CHECK(skeleton_kind_from_string("wholebody133") == SkeletonKind::wholebody133);
    CHECK_FALSE(skeleton_kind_from_string("coco18").has_value());
    CHECK(keypoint_count(SkeletonKind::coco17) == 17);
    CHECK(keypoint_count(SkeletonKind::wholebody133) == 133);
}

TEST_CASE("engine config validation") {
    EngineConfig config;
    CHECK_NOTHROW(config.validate());

    auto expect_invalid = [](EngineConfig bad, const char* field) {
        try {
            bad.validate();
            FAIL_CHECK("expected validation failure for " << field);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::invalid_argument);
            CHECK(e.field() == field);
        }
    };
    EngineConfig bad = config;
    bad.delta = -0.1;
    expect_invalid(bad, "delta");
    bad = config;
    bad.kappa = 0.0;
    expect_invalid(bad, "kappa");
    bad = config;
    bad.hand_foot_radius_factor = 0.5;
    expect_invalid(bad, "hand_foot_radius_factor");
    bad = config;
    bad.presence_threshold = 1.5;
    expect_invalid(bad, "presence_threshold");
    bad = config;
    bad.canonical_height = -1.0;
    expect_invalid(bad, "canonical_height");
}

TEST_CASE("mannequin fixture satisfies every mesh invariant") {
    const auto m = testkit::make_mannequin();
    const auto report = validate_mesh(m.mesh, m.embeddings);
    for (const auto& issue : report.issues)
        FAIL_CHECK(issue.code << ": " << issue.message);
    CHECK(report.ok());
    CHECK(m.mesh.has_default_partitions());
    CHECK(m.mesh.canonical_height == doctest::Approx(1.70));

    // The mirror table is an involution mapping each vertex into the
    // mirrored partition.
    REQUIRE(m.mirror.size() == m.mesh.vertex_count());
    for (uint32_t v = 0; v < m.mesh.vertex_count(); ++v) {
        const uint32_t w = m.mirror[v];
        REQUIRE(w < m.mesh.vertex_count());
        CHECK(m.mirror[w] == v);
        CHECK(m.mesh.partition_of[w] == parts::mirror(m.mesh.partition_of[v]));
    }
}

TEST_CASE("validate_mesh reports each violation with a stable code") {
    auto m = testkit::make_mannequin();

    auto has_code = [](const ValidationReport& report, const std::string& code) {
        for (const auto& issue : report.issues)
            if (issue.code == code) return true;
        return false;
    };

    SUBCASE("face index out of range") {
        m.mesh.faces.push_back({0, 1, m.mesh.vertex_count()});
        CHECK(has_code(validate_mesh(m.mesh, m.embeddings), "face_index_out_of_range"));
    }
    SUBCASE("uv count mismatch") {
        m.mesh.uv.pop_back();
        CHECK(has_code(validate_mesh(m.mesh, m.embeddings), "uv_count_mismatch"));
    }
    SUBCASE("uv out of range") {
        m.mesh.uv[0] = {1.5f, 0.0f};
        CHECK(has_code(validate_mesh(m.mesh, m.embeddings), "uv_out_of_range"));
    }
    SUBCASE("partition count mismatch") {
        m.mesh.partition_of.pop_back();
        CHECK(has_code(validate_mesh(m.mesh, m.embeddings), "partition_count_mismatch"));
    }
    SUBCASE("partition label out of range") {
        m.mesh.partition_of[0] = parts::count;
        CHECK(has_code(validate_mesh(m.mesh, m.embeddings), "partition_label_out_of_range"));
    }
    SUBCASE("empty partition") {
        for (auto& label : m.mesh.partition_of)
            if (label == parts::left_hand) label = parts::left_forearm;
        CHECK(has_code(validate_mesh(m.mesh, m.embeddings), "empty_partition"));
    }
    SUBCASE("embedding count mismatch") {
        m.embeddings.rows.resize(m.embeddings.rows.size() - m.embeddings.dim);
        CHECK(has_code(validate_mesh(m.mesh, m.embeddings), "embedding_count_mismatch"));
    }
    SUBCASE("non unit embedding row") {
        m.embeddings.rows[0] = 2.0f;
        CHECK(has_code(validate_mesh(m.mesh, m.embeddings), "non_unit_embedding_row"));
    }
    SUBCASE("disconnected mesh") {
        m.mesh.vertices.push_back({0.0, 0.0, 0.0});
        m.mesh.uv.push_back({0.0f, 0.0f});
        m.mesh.partition_of.push_back(parts::head);
        m.embeddings.rows.resize(m.embeddings.rows.size() + m.embeddings.dim, 0.0f);
        m.embeddings.rows[m.embeddings.rows.size() - 1] = 1.0f;
        CHECK(has_code(validate_mesh(m.mesh, m.embeddings), "disconnected_mesh"));
    }
}
