// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pccse/assign.hpp"
#include "pccse/eval.hpp"
#include "pccse/io/formats.hpp"
#include "pccse/quality.hpp"
#include "pccse/scale.hpp"
#include "pccse/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pccse {

enum class AssignMode { baseline, constrained, blocked };

const char* to_string(AssignMode mode);
std::optional<AssignMode> assign_mode_from_string(const std::string& s);

struct AssignOutcome {
    UvMap uv;
    LabelMap labels;      // the map the assignment actually consulted
    AssignMode mode = AssignMode::baseline;
    double radius_px = 0.0;
    double pixels_per_unit = 0.0;
    std::string scale_bone;
    bool all_bits_fallback = false; // constraints collapsed to all-bits
    std::string fallback_reason;
};

// Pose-induced label map for one instance. Requires the default partition
// layout; collapses to all-bits when the scale is unavailable or the radius
// is degenerate, recording the reason in the outcome fields.
LabelMap build_labels_for_instance(const InstanceInput& instance, const CanonicalMesh& mesh,
                                   const EngineConfig& config, AssignOutcome* meta = nullptr);

// Threshold presence, build or take labels, run the selected kernel.
AssignOutcome run_assign(const InstanceInput& instance, const CanonicalMesh& mesh,
                         const EmbeddingSet& embeddings, const EngineConfig& config,
                         AssignMode mode, const LabelMap* labels = nullptr);

// Per-partition foreground pixel counts of a uv map, partition name -> count.
std::vector<std::pair<std::string, size_t>> partition_histogram(const UvMap& uv,
                                                                const CanonicalMesh& mesh);

std::string assign_summary_json(const AssignOutcome& outcome, const CanonicalMesh& mesh);

struct EvalInstance {
    std::string id;
    double gps = 0.0;
    size_t points = 0;
    double detection_score = 1.0;
};

struct EvalResult {
    AssignMode mode = AssignMode::blocked;
    double kappa = 0.0;
    double delta = 0.0;
    double ap = 0.0;
    std::vector<EvalInstance> per_instance;
};

// Assigns and scores every instance of a set. A removal list is applied
// first; instances left without ground truth are skipped.
EvalResult evaluate_set(const SetInput& set, const EngineConfig& config, AssignMode mode,
                        const std::vector<RemovalEntry>* removals = nullptr);

void save_eval_report(const std::string& path, const EvalResult& result);

ConsistencyReport check_set(const SetInput& set, const EngineConfig& config,
                            const AuditThresholds& thresholds);

struct AblationRow {
    std::string label; // delta value or "baseline"
    double ap = 0.0;
};

std::vector<AblationRow> ablate_delta(const SetInput& set, const EngineConfig& config,
                                      const std::vector<double>& deltas, bool include_baseline);

struct FrameHeight {
    std::string id;
    double pixels_per_unit = 0.0; // 0 when the frame's scale is unavailable
    std::string bone;
    double height_px = 0.0;
};

// Per-frame scale and height estimates. Canonical height comes from the
// config when positive, else the frames file, else the mesh.
std::vector<FrameHeight> height_track(const FramesInput& frames, const CanonicalMesh& mesh,
                                      const EngineConfig& config);

} // namespace pccse
