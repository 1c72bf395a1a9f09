// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pccse/assign.hpp"
#include "pccse/geometry.hpp"
#include "pccse/quality.hpp"
#include "pccse/types.hpp"

#include <string>
#include <vector>

namespace pccse {

// All loaders resolve relative paths inside a file against that file's
// directory and throw Error with the offending path attached.

CanonicalMesh load_mesh(const std::string& path);
void save_mesh(const std::string& path, const CanonicalMesh& mesh);

// PCT1 f32 [N, D]; rows are checked, not re-normalized.
EmbeddingSet load_embeddings(const std::string& path);
void save_embeddings(const std::string& path, const EmbeddingSet& embeddings);

// Instance JSON referencing a mask png and a PCT1 f32 [H, W, D] embedding
// tensor. Foreground embedding rows are normalized on load unless already
// unit within 1e-5; a zero foreground row is a format error naming the pixel.
InstanceInput load_instance(const std::string& path);

// Writes `<stem>.json`, `<stem>.mask.png`, `<stem>.emb.pct` next to each
// other under `dir`.
void save_instance(const std::string& dir, const std::string& stem,
                   const InstanceInput& instance);

struct SetInput {
    CanonicalMesh mesh;
    EmbeddingSet embeddings;
    std::vector<InstanceInput> instances;
};

SetInput load_set(const std::string& path);
void save_set(const std::string& path, const std::string& mesh_ref,
              const std::string& embeddings_ref, const std::vector<std::string>& instance_refs);

// Strict key set; unknown keys are format errors.
EngineConfig load_config(const std::string& path);
void save_config(const std::string& path, const EngineConfig& config);

struct Frame {
    std::string id;
    Skeleton2D skeleton;
};

struct FramesInput {
    double canonical_height = 0.0; // 0 when the file does not state one
    std::vector<Frame> frames;
};

FramesInput load_frames(const std::string& path);
void save_frames(const std::string& path, const FramesInput& frames);

// LabelMap round-trips as a PCT1 u16 [H, W] bitmask raster.
void save_label_map(const std::string& path, const LabelMap& labels);
LabelMap load_label_map(const std::string& path, uint32_t partition_count);

// UvMap round-trips as `<prefix>.vertices.pct` (u32 [H, W]),
// `<prefix>.scores.pct` (f32 [H, W]) and a `<prefix>.json` sidecar.
void save_uv_map(const std::string& prefix, const UvMap& uv);
UvMap load_uv_map(const std::string& prefix);

void save_removals(const std::string& path, const ConsistencyReport& report);
std::vector<RemovalEntry> load_removals(const std::string& path);

// Full per-instance audit details plus the summary counters.
void save_audit_report(const std::string& path, const ConsistencyReport& report);

} // namespace pccse
