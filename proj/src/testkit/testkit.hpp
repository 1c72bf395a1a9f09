// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pccse/geometry.hpp"
#include "pccse/io/formats.hpp"
#include "pccse/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pccse::testkit {

// Low-poly articulated figure with the default 15-way partitioning, one-hot
// vertex embeddings and an exact left/right vertex mirror table.
struct Mannequin {
    CanonicalMesh mesh;
    EmbeddingSet embeddings;
    std::vector<uint32_t> mirror; // vertex -> mirrored vertex (self on center parts)
};

Mannequin make_mannequin();

// Arms-down frontal test pose on a 96x96 canvas, person's left on the
// viewer's right side of the image at larger x.
Skeleton2D fixture_skeleton();

struct FixtureOptions {
    std::string id = "instance";
    double detection_score = 1.0;
    bool corrupt_forearms = false; // forearm pixels lean toward the mirror vertex
    bool swap_forearm_gt = false;  // forearm ground truth placed on the wrong side
    bool crowd = false;
    bool bad_bbox = false;         // box covering a sliver of the mask
    bool points_outside = false;   // most ground truth pushed off the mask
};

InstanceInput make_instance(const Mannequin& m, const FixtureOptions& options);

// Jittered copies of the fixture pose for height tracking.
FramesInput make_frames(int count, double jitter_px, uint64_t seed);

// Random skeleton with all bones bound to the mannequin's canonical lengths;
// the left thigh is always present so a scale estimate exists.
Skeleton2D random_skeleton(uint64_t seed);

// Random assignment problem: mesh with 3..8 non-empty partitions, unit
// embeddings with deliberate duplicate rows, a random mask, pixel embeddings
// (some copied verbatim from vertex rows to force ties) and a random
// non-empty-per-pixel label map.
struct RandomCase {
    CanonicalMesh mesh;
    EmbeddingSet embeddings;
    InstanceInput instance;
    LabelMap labels;
};

RandomCase make_random_case(uint64_t seed);

// Writes the full on-disk corpus: mannequin files, instances, eval and audit
// sets, dance frames and the default config.
void write_corpus(const std::string& root);

} // namespace pccse::testkit
