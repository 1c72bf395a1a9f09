/* Copyright (c) 2026 pccse contributors */
/* SPDX-License-Identifier: Apache-2.0 */

/* C interface to the pose-constrained surface assignment engine.
 * All functions return a pccse_status; outputs are written through pointer
 * arguments. On failure, pccse_last_error() describes the problem for the
 * calling thread. Strings returned through char** are heap-allocated and
 * must be released with pccse_string_free(). */

#ifndef PCCSE_H
#define PCCSE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define PCCSE_API __attribute__((visibility("default")))

typedef enum pccse_status {
    PCCSE_OK = 0,
    PCCSE_ERR_IO = 1,
    PCCSE_ERR_FORMAT = 2,
    PCCSE_ERR_INVALID_ARGUMENT = 3,
    PCCSE_ERR_PRECONDITION = 4,
    PCCSE_ERR_UNAVAILABLE = 5,
    PCCSE_ERR_INTERNAL = 6
} pccse_status;

typedef enum pccse_assign_mode {
    PCCSE_ASSIGN_BASELINE = 0,
    PCCSE_ASSIGN_CONSTRAINED = 1,
    PCCSE_ASSIGN_BLOCKED = 2
} pccse_assign_mode;

typedef struct pccse_mesh pccse_mesh;
typedef struct pccse_embeddings pccse_embeddings;
typedef struct pccse_instance pccse_instance;
typedef struct pccse_labelmap pccse_labelmap;
typedef struct pccse_uvmap pccse_uvmap;

typedef struct pccse_config {
    double delta;
    double presence_threshold;
    double kappa;
    double canonical_height; /* 0 = take the mesh's value */
    double hand_foot_radius_factor;
} pccse_config;

typedef struct pccse_audit_thresholds {
    double bone_distance_max;
    double points_in_mask_min;
    double mask_in_bbox_min;
    double laterality_min_distance;
} pccse_audit_thresholds;

typedef struct pccse_scale {
    double pixels_per_unit;
    char contributing_bone[32];
} pccse_scale;

/* The vertex value an unassigned (background) pixel carries. */
#define PCCSE_NO_VERTEX 0xFFFFFFFFu

PCCSE_API const char* pccse_last_error(void);
PCCSE_API void pccse_string_free(char* s);

PCCSE_API void pccse_config_defaults(pccse_config* config);
PCCSE_API void pccse_audit_thresholds_defaults(pccse_audit_thresholds* thresholds);

/* Overwrites *config with the file's values (missing keys keep defaults;
 * unknown keys are a format error). */
PCCSE_API pccse_status pccse_config_load(const char* path, pccse_config* config);

/* -- resources ----------------------------------------------------------- */

PCCSE_API pccse_status pccse_mesh_load(const char* path, pccse_mesh** out);
PCCSE_API void pccse_mesh_free(pccse_mesh* mesh);
PCCSE_API uint32_t pccse_mesh_vertex_count(const pccse_mesh* mesh);
PCCSE_API uint32_t pccse_mesh_partition_count(const pccse_mesh* mesh);
PCCSE_API double pccse_mesh_canonical_height(const pccse_mesh* mesh);

PCCSE_API pccse_status pccse_embeddings_load(const char* path, pccse_embeddings** out);
PCCSE_API void pccse_embeddings_free(pccse_embeddings* embeddings);
PCCSE_API uint32_t pccse_embeddings_count(const pccse_embeddings* embeddings);
PCCSE_API uint32_t pccse_embeddings_dim(const pccse_embeddings* embeddings);

PCCSE_API pccse_status pccse_instance_load(const char* path, pccse_instance** out);
PCCSE_API void pccse_instance_free(pccse_instance* instance);
PCCSE_API uint32_t pccse_instance_width(const pccse_instance* instance);
PCCSE_API uint32_t pccse_instance_height(const pccse_instance* instance);

/* Mesh/embedding consistency report as a JSON string; *ok is 1 when clean. */
PCCSE_API pccse_status pccse_validate(const pccse_mesh* mesh, const pccse_embeddings* embeddings,
                                      int* ok, char** report_json);

/* Scale from the instance's skeleton with bone lengths bound from the mesh. */
PCCSE_API pccse_status pccse_estimate_scale(const pccse_instance* instance,
                                            const pccse_mesh* mesh,
                                            const pccse_config* config, pccse_scale* out);

/* -- label maps ---------------------------------------------------------- */

PCCSE_API pccse_status pccse_labelmap_build(const pccse_instance* instance,
                                            const pccse_mesh* mesh, const pccse_config* config,
                                            pccse_labelmap** out);
PCCSE_API pccse_status pccse_labelmap_all_bits(const pccse_instance* instance,
                                               const pccse_mesh* mesh, pccse_labelmap** out);
PCCSE_API pccse_status pccse_labelmap_load(const char* path, const pccse_mesh* mesh,
                                           pccse_labelmap** out);
PCCSE_API pccse_status pccse_labelmap_save(const pccse_labelmap* labels, const char* path);
PCCSE_API void pccse_labelmap_free(pccse_labelmap* labels);
PCCSE_API uint16_t pccse_labelmap_at(const pccse_labelmap* labels, uint32_t x, uint32_t y);

/* -- assignment ---------------------------------------------------------- */

/* labels may be NULL: constrained modes then build the pose-induced map.
 * summary_json (optional) receives mode, radius, scale and the per-partition
 * pixel histogram. */
PCCSE_API pccse_status pccse_assign(const pccse_instance* instance, const pccse_mesh* mesh,
                                    const pccse_embeddings* embeddings,
                                    const pccse_config* config, pccse_assign_mode mode,
                                    const pccse_labelmap* labels, pccse_uvmap** out,
                                    char** summary_json);

PCCSE_API void pccse_uvmap_free(pccse_uvmap* uv);
PCCSE_API uint32_t pccse_uvmap_width(const pccse_uvmap* uv);
PCCSE_API uint32_t pccse_uvmap_height(const pccse_uvmap* uv);
PCCSE_API uint32_t pccse_uvmap_vertex_at(const pccse_uvmap* uv, uint32_t x, uint32_t y);
PCCSE_API float pccse_uvmap_score_at(const pccse_uvmap* uv, uint32_t x, uint32_t y);

/* Writes <prefix>.vertices.pct, <prefix>.scores.pct and <prefix>.json. */
PCCSE_API pccse_status pccse_uvmap_save(const pccse_uvmap* uv, const char* prefix);
PCCSE_API pccse_status pccse_uvmap_load(const char* prefix, pccse_uvmap** out);

/* UV visualization PNG (black background). */
PCCSE_API pccse_status pccse_render_png(const pccse_uvmap* uv, const pccse_mesh* mesh,
                                        const char* path);

/* -- set pipelines -------------------------------------------------------- */

/* Scores a set and writes a JSON report; removal_path may be NULL. */
PCCSE_API pccse_status pccse_evaluate_set(const char* set_path, const pccse_config* config,
                                          pccse_assign_mode mode, const char* removal_path,
                                          const char* report_path, double* ap_out);

/* Audits a set; writes the audit report and the removal list. */
PCCSE_API pccse_status pccse_check_set(const char* set_path, const pccse_config* config,
                                       const pccse_audit_thresholds* thresholds,
                                       const char* report_path, const char* removal_path,
                                       size_t* flagged_instances_out);

/* AP for each delta (and optionally the unconstrained baseline) as CSV. */
PCCSE_API pccse_status pccse_ablate_delta(const char* set_path, const pccse_config* config,
                                          const double* deltas, size_t delta_count,
                                          int include_baseline, const char* csv_path);

/* Per-frame scale/height CSV; cov_out (optional) gets the coefficient of
 * variation of the estimated heights. */
PCCSE_API pccse_status pccse_height_track(const char* frames_path, const char* mesh_path,
                                          const pccse_config* config, const char* csv_path,
                                          double* cov_out);

#ifdef __cplusplus
}
#endif

#endif /* PCCSE_H */
