// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#include "pccse/pccse.h"

#include "pccse/eval.hpp"
#include "pccse/io/formats.hpp"
#include "pccse/io/png_io.hpp"
#include "pccse/pipeline.hpp"
#include "pccse/render.hpp"
#include "pccse/scale.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

using nlohmann::json;

struct pccse_mesh {
    pccse::CanonicalMesh value;
};
struct pccse_embeddings {
    pccse::EmbeddingSet value;
};
struct pccse_instance {
    pccse::InstanceInput value;
};
struct pccse_labelmap {
    pccse::LabelMap value;
};
struct pccse_uvmap {
    pccse::UvMap value;
};

namespace {

thread_local std::string g_last_error;

pccse_status map_code(pccse::ErrorCode code) {
    switch (code) {
    case pccse::ErrorCode::io: return PCCSE_ERR_IO;
    case pccse::ErrorCode::format: return PCCSE_ERR_FORMAT;
    case pccse::ErrorCode::invalid_argument: return PCCSE_ERR_INVALID_ARGUMENT;
    case pccse::ErrorCode::precondition: return PCCSE_ERR_PRECONDITION;
    case pccse::ErrorCode::unavailable: return PCCSE_ERR_UNAVAILABLE;
    default: return PCCSE_ERR_INTERNAL;
    }
}

template <typename Fn>
pccse_status guarded(Fn&& fn) noexcept {
    try {
        fn();
        g_last_error.clear();
        return PCCSE_OK;
    } catch (const pccse::Error& e) {
        g_last_error = e.what();
        if (!e.file().empty()) g_last_error += " [" + e.file() + "]";
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PCCSE_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return PCCSE_ERR_INTERNAL;
    }
}

pccse_status invalid(const char* message) noexcept {
    g_last_error = message;
    return PCCSE_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

pccse::EngineConfig to_engine(const pccse_config* config) {
    pccse::EngineConfig c;
    if (config) {
        c.delta = config->delta;
        c.presence_threshold = config->presence_threshold;
        c.kappa = config->kappa;
        c.canonical_height = config->canonical_height;
        c.hand_foot_radius_factor = config->hand_foot_radius_factor;
    }
    return c;
}

pccse::AssignMode to_mode(pccse_assign_mode mode) {
    switch (mode) {
    case PCCSE_ASSIGN_BASELINE: return pccse::AssignMode::baseline;
    case PCCSE_ASSIGN_CONSTRAINED: return pccse::AssignMode::constrained;
    default: return pccse::AssignMode::blocked;
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw pccse::Error(pccse::ErrorCode::io, "cannot open file for writing", path);
    out << text;
    if (!out) throw pccse::Error(pccse::ErrorCode::io, "failed writing file", path);
}

} // namespace

extern "C" {

const char* pccse_last_error(void) { return g_last_error.c_str(); }

void pccse_string_free(char* s) { std::free(s); }

void pccse_config_defaults(pccse_config* config) {
    if (!config) return;
    const pccse::EngineConfig d;
    config->delta = d.delta;
    config->presence_threshold = d.presence_threshold;
    config->kappa = d.kappa;
    config->canonical_height = d.canonical_height;
    config->hand_foot_radius_factor = d.hand_foot_radius_factor;
}

void pccse_audit_thresholds_defaults(pccse_audit_thresholds* thresholds) {
    if (!thresholds) return;
    const pccse::AuditThresholds d;
    thresholds->bone_distance_max = d.bone_distance_max;
    thresholds->points_in_mask_min = d.points_in_mask_min;
    thresholds->mask_in_bbox_min = d.mask_in_bbox_min;
    thresholds->laterality_min_distance = d.laterality_min_distance;
}

pccse_status pccse_config_load(const char* path, pccse_config* config) {
    if (!path || !config) return invalid("null argument");
    return guarded([&] {
        const pccse::EngineConfig c = pccse::load_config(path);
        config->delta = c.delta;
        config->presence_threshold = c.presence_threshold;
        config->kappa = c.kappa;
        config->canonical_height = c.canonical_height;
        config->hand_foot_radius_factor = c.hand_foot_radius_factor;
    });
}

pccse_status pccse_mesh_load(const char* path, pccse_mesh** out) {
    if (!path || !out) return invalid("null argument");
    return guarded([&] { *out = new pccse_mesh{pccse::load_mesh(path)}; });
}

void pccse_mesh_free(pccse_mesh* mesh) { delete mesh; }

uint32_t pccse_mesh_vertex_count(const pccse_mesh* mesh) {
    return mesh ? mesh->value.vertex_count() : 0;
}

uint32_t pccse_mesh_partition_count(const pccse_mesh* mesh) {
    return mesh ? mesh->value.partition_count() : 0;
}

double pccse_mesh_canonical_height(const pccse_mesh* mesh) {
    return mesh ? mesh->value.canonical_height : 0.0;
}

pccse_status pccse_embeddings_load(const char* path, pccse_embeddings** out) {
    if (!path || !out) return invalid("null argument");
    return guarded([&] { *out = new pccse_embeddings{pccse::load_embeddings(path)}; });
}

void pccse_embeddings_free(pccse_embeddings* embeddings) { delete embeddings; }

uint32_t pccse_embeddings_count(const pccse_embeddings* embeddings) {
    return embeddings ? embeddings->value.count() : 0;
}

uint32_t pccse_embeddings_dim(const pccse_embeddings* embeddings) {
    return embeddings ? embeddings->value.dim : 0;
}

pccse_status pccse_instance_load(const char* path, pccse_instance** out) {
    if (!path || !out) return invalid("null argument");
    return guarded([&] { *out = new pccse_instance{pccse::load_instance(path)}; });
}

void pccse_instance_free(pccse_instance* instance) { delete instance; }

uint32_t pccse_instance_width(const pccse_instance* instance) {
    return instance ? instance->value.width() : 0;
}

uint32_t pccse_instance_height(const pccse_instance* instance) {
    return instance ? instance->value.height() : 0;
}

pccse_status pccse_validate(const pccse_mesh* mesh, const pccse_embeddings* embeddings, int* ok,
                            char** report_json) {
    if (!mesh || !embeddings) return invalid("null argument");
    return guarded([&] {
        const pccse::ValidationReport report =
            pccse::validate_mesh(mesh->value, embeddings->value);
        if (ok) *ok = report.ok() ? 1 : 0;
        if (report_json) {
            json issues = json::array();
            for (const auto& issue : report.issues)
                issues.push_back({{"code", issue.code}, {"message", issue.message}});
            *report_json =
                dup_string(json{{"ok", report.ok()}, {"issues", std::move(issues)}}.dump(2));
        }
    });
}

pccse_status pccse_estimate_scale(const pccse_instance* instance, const pccse_mesh* mesh,
                                  const pccse_config* config, pccse_scale* out) {
    if (!instance || !mesh || !out) return invalid("null argument");
    return guarded([&] {
        pccse::Skeleton2D skeleton = instance->value.skeleton;
        pccse::bind_bone_lengths(skeleton, mesh->value.bones);
        pccse::apply_presence_threshold(skeleton, to_engine(config).presence_threshold);
        const pccse::ScaleEstimate estimate = pccse::estimate_scale(skeleton);
        out->pixels_per_unit = estimate.pixels_per_unit;
        std::snprintf(out->contributing_bone, sizeof(out->contributing_bone), "%s",
                      estimate.contributing_bone.c_str());
    });
}

pccse_status pccse_labelmap_build(const pccse_instance* instance, const pccse_mesh* mesh,
                                  const pccse_config* config, pccse_labelmap** out) {
    if (!instance || !mesh || !out) return invalid("null argument");
    return guarded([&] {
        *out = new pccse_labelmap{
            pccse::build_labels_for_instance(instance->value, mesh->value, to_engine(config))};
    });
}

pccse_status pccse_labelmap_all_bits(const pccse_instance* instance, const pccse_mesh* mesh,
                                     pccse_labelmap** out) {
    if (!instance || !mesh || !out) return invalid("null argument");
    return guarded([&] {
        *out = new pccse_labelmap{
            pccse::all_bits_label_map(instance->value.mask, mesh->value.partition_count())};
    });
}

pccse_status pccse_labelmap_load(const char* path, const pccse_mesh* mesh, pccse_labelmap** out) {
    if (!path || !mesh || !out) return invalid("null argument");
    return guarded([&] {
        *out = new pccse_labelmap{pccse::load_label_map(path, mesh->value.partition_count())};
    });
}

pccse_status pccse_labelmap_save(const pccse_labelmap* labels, const char* path) {
    if (!labels || !path) return invalid("null argument");
    return guarded([&] { pccse::save_label_map(path, labels->value); });
}

void pccse_labelmap_free(pccse_labelmap* labels) { delete labels; }

uint16_t pccse_labelmap_at(const pccse_labelmap* labels, uint32_t x, uint32_t y) {
    if (!labels || x >= labels->value.width || y >= labels->value.height) return 0;
    return labels->value.at(x, y);
}

pccse_status pccse_assign(const pccse_instance* instance, const pccse_mesh* mesh,
                          const pccse_embeddings* embeddings, const pccse_config* config,
                          pccse_assign_mode mode, const pccse_labelmap* labels, pccse_uvmap** out,
                          char** summary_json) {
    if (!instance || !mesh || !embeddings || !out) return invalid("null argument");
    return guarded([&] {
        pccse::AssignOutcome outcome =
            pccse::run_assign(instance->value, mesh->value, embeddings->value, to_engine(config),
                              to_mode(mode), labels ? &labels->value : nullptr);
        if (summary_json)
            *summary_json = dup_string(pccse::assign_summary_json(outcome, mesh->value));
        *out = new pccse_uvmap{std::move(outcome.uv)};
    });
}

void pccse_uvmap_free(pccse_uvmap* uv) { delete uv; }

uint32_t pccse_uvmap_width(const pccse_uvmap* uv) { return uv ? uv->value.width : 0; }

uint32_t pccse_uvmap_height(const pccse_uvmap* uv) { return uv ? uv->value.height : 0; }

uint32_t pccse_uvmap_vertex_at(const pccse_uvmap* uv, uint32_t x, uint32_t y) {
    if (!uv || x >= uv->value.width || y >= uv->value.height) return PCCSE_NO_VERTEX;
    return uv->value.vertex_at(x, y);
}

float pccse_uvmap_score_at(const pccse_uvmap* uv, uint32_t x, uint32_t y) {
    if (!uv || x >= uv->value.width || y >= uv->value.height) return 0.0f;
    return uv->value.score_at(x, y);
}

pccse_status pccse_uvmap_save(const pccse_uvmap* uv, const char* prefix) {
    if (!uv || !prefix) return invalid("null argument");
    return guarded([&] { pccse::save_uv_map(prefix, uv->value); });
}

pccse_status pccse_uvmap_load(const char* prefix, pccse_uvmap** out) {
    if (!prefix || !out) return invalid("null argument");
    return guarded([&] { *out = new pccse_uvmap{pccse::load_uv_map(prefix)}; });
}

pccse_status pccse_render_png(const pccse_uvmap* uv, const pccse_mesh* mesh, const char* path) {
    if (!uv || !mesh || !path) return invalid("null argument");
    return guarded(
        [&] { pccse::write_rgb8_png(path, pccse::render_uv(uv->value, mesh->value)); });
}

pccse_status pccse_evaluate_set(const char* set_path, const pccse_config* config,
                                pccse_assign_mode mode, const char* removal_path,
                                const char* report_path, double* ap_out) {
    if (!set_path || !report_path) return invalid("null argument");
    return guarded([&] {
        const pccse::SetInput set = pccse::load_set(set_path);
        std::vector<pccse::RemovalEntry> removals;
        if (removal_path) removals = pccse::load_removals(removal_path);
        const pccse::EvalResult result = pccse::evaluate_set(
            set, to_engine(config), to_mode(mode), removal_path ? &removals : nullptr);
        pccse::save_eval_report(report_path, result);
        if (ap_out) *ap_out = result.ap;
    });
}

pccse_status pccse_check_set(const char* set_path, const pccse_config* config,
                             const pccse_audit_thresholds* thresholds, const char* report_path,
                             const char* removal_path, size_t* flagged_instances_out) {
    if (!set_path || !report_path || !removal_path) return invalid("null argument");
    return guarded([&] {
        pccse::AuditThresholds t;
        if (thresholds) {
            t.bone_distance_max = thresholds->bone_distance_max;
            t.points_in_mask_min = thresholds->points_in_mask_min;
            t.mask_in_bbox_min = thresholds->mask_in_bbox_min;
            t.laterality_min_distance = thresholds->laterality_min_distance;
        }
        const pccse::SetInput set = pccse::load_set(set_path);
        const pccse::ConsistencyReport report = pccse::check_set(set, to_engine(config), t);
        pccse::save_audit_report(report_path, report);
        pccse::save_removals(removal_path, report);
        if (flagged_instances_out) *flagged_instances_out = report.flagged_instances;
    });
}

pccse_status pccse_ablate_delta(const char* set_path, const pccse_config* config,
                                const double* deltas, size_t delta_count, int include_baseline,
                                const char* csv_path) {
    if (!set_path || !csv_path || (delta_count > 0 && !deltas)) return invalid("null argument");
    return guarded([&] {
        const pccse::SetInput set = pccse::load_set(set_path);
        const std::vector<double> values(deltas, deltas + delta_count);
        const auto rows =
            pccse::ablate_delta(set, to_engine(config), values, include_baseline != 0);
        std::string csv = "delta,ap\n";
        char line[64];
        for (const auto& row : rows) {
            std::snprintf(line, sizeof(line), "%s,%.6f\n", row.label.c_str(), row.ap);
            csv += line;
        }
        write_text(csv_path, csv);
    });
}

pccse_status pccse_height_track(const char* frames_path, const char* mesh_path,
                                const pccse_config* config, const char* csv_path,
                                double* cov_out) {
    if (!frames_path || !mesh_path || !csv_path) return invalid("null argument");
    return guarded([&] {
        const pccse::FramesInput frames = pccse::load_frames(frames_path);
        const pccse::CanonicalMesh mesh = pccse::load_mesh(mesh_path);
        const auto heights = pccse::height_track(frames, mesh, to_engine(config));
        std::string csv = "frame,pixels_per_unit,bone,height_px\n";
        char line[160];
        double sum = 0.0, sq = 0.0;
        size_t valid = 0;
        for (const auto& h : heights) {
            std::snprintf(line, sizeof(line), "%s,%.6f,%s,%.6f\n", h.id.c_str(),
                          h.pixels_per_unit, h.bone.c_str(), h.height_px);
            csv += line;
            if (h.pixels_per_unit > 0.0) {
                sum += h.height_px;
                sq += h.height_px * h.height_px;
                ++valid;
            }
        }
        write_text(csv_path, csv);
        if (cov_out) {
            *cov_out = 0.0;
            if (valid > 0 && sum > 0.0) {
                const double mean = sum / double(valid);
                const double var = std::max(0.0, sq / double(valid) - mean * mean);
                *cov_out = std::sqrt(var) / mean;
            }
        }
    });
}

} // extern "C"
