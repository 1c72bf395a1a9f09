// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#include "pccse/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>

using nlohmann::json;

namespace pccse {

const char* to_string(AssignMode mode) {
    switch (mode) {
    case AssignMode::baseline: return "baseline";
    case AssignMode::constrained: return "constrained";
    default: return "blocked";
    }
}

std::optional<AssignMode> assign_mode_from_string(const std::string& s) {
    if (s == "baseline") return AssignMode::baseline;
    if (s == "constrained") return AssignMode::constrained;
    if (s == "blocked") return AssignMode::blocked;
    return std::nullopt;
}

LabelMap build_labels_for_instance(const InstanceInput& instance, const CanonicalMesh& mesh,
                                   const EngineConfig& config, AssignOutcome* meta) {
    config.validate();
    if (!mesh.has_default_partitions())
        throw Error(ErrorCode::precondition,
                    "mesh does not use the default body partitioning; pose constraints need it");

    Skeleton2D skeleton = instance.skeleton;
    bind_bone_lengths(skeleton, mesh.bones);
    apply_presence_threshold(skeleton, config.presence_threshold);

    double radius = 0.0;
    try {
        const ScaleEstimate scale = estimate_scale(skeleton);
        radius = capsule_radius(scale, config.delta);
        if (meta) {
            meta->pixels_per_unit = scale.pixels_per_unit;
            meta->scale_bone = scale.contributing_bone;
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::unavailable) throw;
        if (meta) {
            meta->all_bits_fallback = true;
            meta->fallback_reason = e.what();
        }
        return all_bits_label_map(instance.mask, mesh.partition_count());
    }

    if (meta) meta->radius_px = radius;
    if (radius <= 0.0) {
        if (meta) {
            meta->all_bits_fallback = true;
            meta->fallback_reason = "capsule radius is zero";
        }
        return all_bits_label_map(instance.mask, mesh.partition_count());
    }
    return build_proximal_regions(skeleton, radius, instance.mask,
                                  config.hand_foot_radius_factor);
}

AssignOutcome run_assign(const InstanceInput& instance, const CanonicalMesh& mesh,
                         const EmbeddingSet& embeddings, const EngineConfig& config,
                         AssignMode mode, const LabelMap* labels) {
    config.validate();
    AssignOutcome outcome;
    outcome.mode = mode;
    if (mode == AssignMode::baseline) {
        outcome.labels = all_bits_label_map(instance.mask, mesh.partition_count());
        outcome.uv = assign_unconstrained(instance, mesh, embeddings);
        return outcome;
    }
    if (labels)
        outcome.labels = *labels;
    else
        outcome.labels = build_labels_for_instance(instance, mesh, config, &outcome);
    if (mode == AssignMode::constrained)
        outcome.uv = assign_constrained(instance, mesh, embeddings, outcome.labels);
    else
        outcome.uv = assign_constrained_blocked(instance, mesh, embeddings, outcome.labels);
    return outcome;
}

std::vector<std::pair<std::string, size_t>> partition_histogram(const UvMap& uv,
                                                                const CanonicalMesh& mesh) {
    std::vector<size_t> counts(mesh.partition_count(), 0);
    for (size_t i = 0; i < uv.vertex.size(); ++i) {
        const uint32_t v = uv.vertex[i];
        if (v == UvMap::no_vertex) continue;
        if (v < mesh.partition_of.size()) ++counts[size_t(mesh.partition_of[v])];
    }
    std::vector<std::pair<std::string, size_t>> histogram;
    for (uint32_t p = 0; p < mesh.partition_count(); ++p)
        histogram.emplace_back(mesh.partition_names[p], counts[p]);
    return histogram;
}

std::string assign_summary_json(const AssignOutcome& outcome, const CanonicalMesh& mesh) {
    json hist = json::object();
    for (const auto& [name, count] : partition_histogram(outcome.uv, mesh)) hist[name] = count;
    json j{{"mode", to_string(outcome.mode)},
           {"radius_px", outcome.radius_px},
           {"pixels_per_unit", outcome.pixels_per_unit},
           {"scale_bone", outcome.scale_bone},
           {"all_bits_fallback", outcome.all_bits_fallback},
           {"fallback_reason", outcome.fallback_reason},
           {"partition_histogram", std::move(hist)}};
    return j.dump(2) + "\n";
}

namespace {

void require_valid(const SetInput& set) {
    const ValidationReport report = validate_mesh(set.mesh, set.embeddings);
    if (!report.ok())
        throw Error(ErrorCode::precondition,
                    "mesh validation failed: " + report.issues.front().code + ": " +
                        report.issues.front().message);
}

} // namespace

EvalResult evaluate_set(const SetInput& set, const EngineConfig& config, AssignMode mode,
                        const std::vector<RemovalEntry>* removals) {
    config.validate();
    require_valid(set);
    const std::vector<InstanceInput>* instances = &set.instances;
    std::vector<InstanceInput> cleaned;
    if (removals) {
        cleaned = apply_removal(set.instances, set.mesh, *removals);
        instances = &cleaned;
    }

    EvalResult result;
    result.mode = mode;
    result.kappa = config.kappa;
    result.delta = config.delta;
    GeodesicOracle oracle(set.mesh);
    std::vector<double> gps_values;
    for (const auto& instance : *instances) {
        if (instance.gt_points.empty()) continue;
        const AssignOutcome outcome = run_assign(instance, set.mesh, set.embeddings, config, mode);
        const InstanceScore score =
            geodesic_point_similarity(instance, outcome.uv, oracle, config.kappa);
        result.per_instance.push_back(
            {instance.id, score.gps, score.evaluated_points, instance.detection_score});
        gps_values.push_back(score.gps);
    }
    if (gps_values.empty())
        throw Error(ErrorCode::precondition, "set has no evaluable instances");
    result.ap = average_precision(gps_values);
    return result;
}

void save_eval_report(const std::string& path, const EvalResult& result) {
    json per = json::array();
    for (const auto& e : result.per_instance)
        per.push_back({{"id", e.id},
                       {"gps", e.gps},
                       {"points", e.points},
                       {"detection_score", e.detection_score}});
    json j{{"mode", to_string(result.mode)}, {"kappa", result.kappa},
           {"delta", result.delta},         {"ap", result.ap},
           {"instances", std::move(per)},   {"gps_thresholds", ap_thresholds()}};
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot open report for writing", path);
    out << j.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::io, "failed writing report", path);
}

ConsistencyReport check_set(const SetInput& set, const EngineConfig& config,
                            const AuditThresholds& thresholds) {
    config.validate();
    thresholds.validate();
    std::vector<InstanceInput> prepared = set.instances;
    for (auto& instance : prepared) {
        bind_bone_lengths(instance.skeleton, set.mesh.bones);
        apply_presence_threshold(instance.skeleton, config.presence_threshold);
    }
    return build_removal_list(prepared, set.mesh, thresholds);
}

std::vector<AblationRow> ablate_delta(const SetInput& set, const EngineConfig& config,
                                      const std::vector<double>& deltas, bool include_baseline) {
    if (deltas.empty() && !include_baseline)
        throw Error(ErrorCode::invalid_argument, "nothing to ablate");
    std::vector<AblationRow> rows;
    if (include_baseline) {
        const EvalResult r = evaluate_set(set, config, AssignMode::baseline);
        rows.push_back({"baseline", r.ap});
    }
    for (double delta : deltas) {
        EngineConfig variant = config;
        variant.delta = delta;
        const EvalResult r = evaluate_set(set, variant, AssignMode::blocked);
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "%g", delta);
        rows.push_back({buffer, r.ap});
    }
    return rows;
}

std::vector<FrameHeight> height_track(const FramesInput& frames, const CanonicalMesh& mesh,
                                      const EngineConfig& config) {
    config.validate();
    double canonical_height = config.canonical_height;
    if (canonical_height <= 0.0) canonical_height = frames.canonical_height;
    if (canonical_height <= 0.0) canonical_height = mesh.canonical_height;
    if (canonical_height <= 0.0)
        throw Error(ErrorCode::invalid_argument,
                    "canonical height is not set in config, frames file, or mesh");

    std::vector<FrameHeight> heights;
    for (const auto& frame : frames.frames) {
        Skeleton2D skeleton = frame.skeleton;
        bind_bone_lengths(skeleton, mesh.bones);
        apply_presence_threshold(skeleton, config.presence_threshold);
        FrameHeight h;
        h.id = frame.id;
        try {
            const ScaleEstimate scale = estimate_scale(skeleton);
            h.pixels_per_unit = scale.pixels_per_unit;
            h.bone = scale.contributing_bone;
            h.height_px = estimate_height(scale, canonical_height);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::unavailable) throw;
        }
        heights.push_back(std::move(h));
    }
    return heights;
}

} // namespace pccse
