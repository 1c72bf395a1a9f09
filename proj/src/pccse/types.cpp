// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#include "pccse/types.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace pccse {

namespace parts {

const std::array<const char*, count>& names() {
    static const std::array<const char*, count> table = {
        "left_arm",   "right_arm",   "left_forearm", "right_forearm", "left_hand",
        "right_hand", "left_thigh",  "right_thigh",  "left_shin",     "right_shin",
        "left_foot",  "right_foot",  "torso_front",  "torso_back",    "head",
    };
    return table;
}

int index_of(const std::string& name) {
    const auto& table = names();
    for (int i = 0; i < count; ++i)
        if (name == table[i]) return i;
    return -1;
}

int mirror(int partition) {
    switch (partition) {
    case left_arm: return right_arm;
    case right_arm: return left_arm;
    case left_forearm: return right_forearm;
    case right_forearm: return left_forearm;
    case left_hand: return right_hand;
    case right_hand: return left_hand;
    case left_thigh: return right_thigh;
    case right_thigh: return left_thigh;
    case left_shin: return right_shin;
    case right_shin: return left_shin;
    case left_foot: return right_foot;
    case right_foot: return left_foot;
    default: return partition;
    }
}

} // namespace parts

const char* to_string(SkeletonKind kind) {
    return kind == SkeletonKind::coco17 ? "coco17" : "wholebody133";
}

std::optional<SkeletonKind> skeleton_kind_from_string(const std::string& s) {
    if (s == "coco17") return SkeletonKind::coco17;
    if (s == "wholebody133") return SkeletonKind::wholebody133;
    return std::nullopt;
}

int keypoint_count(SkeletonKind kind) {
    return kind == SkeletonKind::coco17 ? kp::coco17_count : kp::wholebody133_count;
}

std::vector<PrincipalBone> make_principal_bones() {
    using namespace kp;
    // Declaration order is the tie-break order for the scale estimator.
    return {
        {"left_arm", left_shoulder, left_elbow, parts::left_arm, 0.0, false},
        {"right_arm", right_shoulder, right_elbow, parts::right_arm, 0.0, false},
        {"left_forearm", left_elbow, left_wrist, parts::left_forearm, 0.0, false},
        {"right_forearm", right_elbow, right_wrist, parts::right_forearm, 0.0, false},
        {"left_thigh", left_hip, left_knee, parts::left_thigh, 0.0, false},
        {"right_thigh", right_hip, right_knee, parts::right_thigh, 0.0, false},
        {"left_shin", left_knee, left_ankle, parts::left_shin, 0.0, false},
        {"right_shin", right_knee, right_ankle, parts::right_shin, 0.0, false},
        {"quad_top", left_shoulder, right_shoulder, parts::torso_front, 0.0, true},
        {"quad_left", left_shoulder, left_hip, parts::torso_front, 0.0, true},
        {"quad_right", right_shoulder, right_hip, parts::torso_front, 0.0, true},
        {"quad_bottom", left_hip, right_hip, parts::torso_front, 0.0, true},
    };
}

void bind_bone_lengths(Skeleton2D& skeleton,
                       const std::vector<std::pair<std::string, double>>& table) {
    for (auto& bone : skeleton.bones) {
        for (const auto& [name, length] : table) {
            if (name == bone.name) {
                bone.canonical_length = length;
                break;
            }
        }
    }
}

void apply_presence_threshold(Skeleton2D& skeleton, double threshold) {
    for (auto& kpnt : skeleton.keypoints)
        kpnt.present = kpnt.confidence > 0.0 && kpnt.confidence >= threshold;
}

bool CanonicalMesh::has_default_partitions() const {
    if (partition_names.size() != size_t(parts::count)) return false;
    const auto& expected = parts::names();
    for (int i = 0; i < parts::count; ++i)
        if (partition_names[i] != expected[i]) return false;
    return true;
}

void EngineConfig::validate() const {
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw Error(ErrorCode::invalid_argument, "config: delta must be >= 0", {}, "delta");
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw Error(ErrorCode::invalid_argument, "config: kappa must be > 0", {}, "kappa");
    if (!(hand_foot_radius_factor >= 1.0))
        throw Error(ErrorCode::invalid_argument, "config: hand_foot_radius_factor must be >= 1",
                    {}, "hand_foot_radius_factor");
    if (presence_threshold < 0.0 || presence_threshold > 1.0)
        throw Error(ErrorCode::invalid_argument,
                    "config: presence_threshold must be in [0,1]", {}, "presence_threshold");
    if (canonical_height < 0.0)
        throw Error(ErrorCode::invalid_argument, "config: canonical_height must be >= 0", {},
                    "canonical_height");
}

namespace {

void check_connectivity(const CanonicalMesh& mesh, ValidationReport& report) {
    const uint32_t n = mesh.vertex_count();
    if (n == 0) return;

    std::vector<std::vector<uint32_t>> adj(n);
    for (const auto& f : mesh.faces) {
        if (f[0] >= n || f[1] >= n || f[2] >= n) continue; // reported separately
        for (int e = 0; e < 3; ++e) {
            uint32_t a = f[e], b = f[(e + 1) % 3];
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
    }

    std::vector<uint8_t> seen(n, 0);
    std::queue<uint32_t> queue;
    queue.push(0);
    seen[0] = 1;
    uint32_t reached = 1;
    while (!queue.empty()) {
        uint32_t v = queue.front();
        queue.pop();
        for (uint32_t w : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                queue.push(w);
            }
        }
    }
    if (reached != n) {
        uint32_t witness = 0;
        for (uint32_t v = 0; v < n; ++v)
            if (!seen[v]) {
                witness = v;
                break;
            }
        std::ostringstream msg;
        msg << "mesh edge graph is disconnected: " << (n - reached) << " of " << n
            << " vertices unreachable from vertex 0 (e.g. vertex " << witness << ")";
        report.issues.push_back({"disconnected_mesh", msg.str()});
    }
}

} // namespace

ValidationReport validate_mesh(const CanonicalMesh& mesh, const EmbeddingSet& embeddings) {
    ValidationReport report;
    const uint32_t n = mesh.vertex_count();

    for (size_t fi = 0; fi < mesh.faces.size(); ++fi) {
        const auto& f = mesh.faces[fi];
        for (int e = 0; e < 3; ++e) {
            if (f[e] >= n) {
                std::ostringstream msg;
                msg << "face index out of range: face " << fi << " references vertex " << f[e]
                    << " but the mesh has " << n << " vertices";
                report.issues.push_back({"face_index_out_of_range", msg.str()});
            }
        }
    }

    if (mesh.uv.size() != n)
        report.issues.push_back(
            {"uv_count_mismatch", "uv entries (" + std::to_string(mesh.uv.size()) +
                                      ") do not match vertex count (" + std::to_string(n) + ")"});
    for (size_t i = 0; i < mesh.uv.size(); ++i) {
        const auto& t = mesh.uv[i];
        if (t[0] < 0.f || t[0] > 1.f || t[1] < 0.f || t[1] > 1.f) {
            report.issues.push_back(
                {"uv_out_of_range", "uv of vertex " + std::to_string(i) + " outside [0,1]^2"});
            break; // one witness is enough
        }
    }

    if (mesh.partition_of.size() != n) {
        report.issues.push_back({"partition_count_mismatch",
                                 "partition_of entries (" + std::to_string(mesh.partition_of.size()) +
                                     ") do not match vertex count (" + std::to_string(n) + ")"});
    } else {
        const int p = int(mesh.partition_count());
        std::vector<uint32_t> population(size_t(std::max(p, 0)), 0);
        for (size_t i = 0; i < mesh.partition_of.size(); ++i) {
            int32_t label = mesh.partition_of[i];
            if (label < 0 || label >= p) {
                std::ostringstream msg;
                msg << "vertex " << i << " carries partition label " << label
                    << " outside [0," << p << ")";
                report.issues.push_back({"partition_label_out_of_range", msg.str()});
            } else {
                ++population[size_t(label)];
            }
        }
        for (int label = 0; label < p; ++label) {
            if (population[size_t(label)] == 0) {
                report.issues.push_back(
                    {"empty_partition", "partition \"" + mesh.partition_names[size_t(label)] +
                                            "\" (label " + std::to_string(label) +
                                            ") has no vertices"});
            }
        }
    }

    if (embeddings.dim == 0 || embeddings.count() != n) {
        std::ostringstream msg;
        msg << "embedding rows (" << embeddings.count() << ") do not match vertex count (" << n
            << ")";
        report.issues.push_back({"embedding_count_mismatch", msg.str()});
    } else {
        for (uint32_t i = 0; i < n; ++i) {
            const float* row = embeddings.row(i);
            double sq = 0.0;
            for (uint32_t d = 0; d < embeddings.dim; ++d) sq += double(row[d]) * row[d];
            if (std::abs(std::sqrt(sq) - 1.0) > 1e-4) {
                std::ostringstream msg;
                msg << "non-unit embedding row " << i << " (norm " << std::sqrt(sq) << ")";
                report.issues.push_back({"non_unit_embedding_row", msg.str()});
            }
        }
    }

    check_connectivity(mesh, report);
    return report;
}

} // namespace pccse
