// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pccse {

enum class ErrorCode {
    io,
    format,
    invalid_argument,
    precondition,
    unavailable,
    internal,
};

/// Engine-level error. `file` and `field` locate the offending input when known.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::string file = {}, std::string field = {})
        : std::runtime_error(std::move(message)), code_(code), file_(std::move(file)),
          field_(std::move(field)) {}

    ErrorCode code() const { return code_; }
    const std::string& file() const { return file_; }
    const std::string& field() const { return field_; }

private:
    ErrorCode code_;
    std::string file_;
    std::string field_;
};

template <typename T>
struct Raster {
    uint32_t width = 0;
    uint32_t height = 0;
    std::vector<T> data;

    Raster() = default;
    Raster(uint32_t w, uint32_t h, T fill = T{}) : width(w), height(h), data(size_t(w) * h, fill) {}

    T& at(uint32_t x, uint32_t y) { return data[size_t(y) * width + x]; }
    const T& at(uint32_t x, uint32_t y) const { return data[size_t(y) * width + x]; }
    size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }
};

using Mask = Raster<uint8_t>;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// The default human partitioning. Label ids are stable; serialized files and the
// LabelMap bit layout depend on this exact order.
namespace parts {
enum : int {
    left_arm = 0,
    right_arm,
    left_forearm,
    right_forearm,
    left_hand,
    right_hand,
    left_thigh,
    right_thigh,
    left_shin,
    right_shin,
    left_foot,
    right_foot,
    torso_front,
    torso_back,
    head,
    count, // 15
};

const std::array<const char*, count>& names();
int index_of(const std::string& name); // -1 if unknown

/// Mirror partner (left_arm <-> right_arm, ...); torso/head map to themselves.
int mirror(int partition);
} // namespace parts

// COCO-17 keypoints; WholeBody-133 shares ids 0..16 and appends feet, face and hands.
namespace kp {
enum : int {
    nose = 0,
    left_eye,
    right_eye,
    left_ear,
    right_ear,
    left_shoulder,
    right_shoulder,
    left_elbow,
    right_elbow,
    left_wrist,
    right_wrist,
    left_hip,
    right_hip,
    left_knee,
    right_knee,
    left_ankle,
    right_ankle,
    coco17_count = 17,

    left_big_toe = 17,
    left_small_toe = 18,
    left_heel = 19,
    right_big_toe = 20,
    right_small_toe = 21,
    right_heel = 22,
    face_begin = 23,
    face_end = 91, // exclusive
    left_hand_root = 91,  // left hand block: 91..111
    right_hand_root = 112, // right hand block: 112..132
    wholebody133_count = 133,
};
} // namespace kp

enum class SkeletonKind { coco17, wholebody133 };

const char* to_string(SkeletonKind kind);
std::optional<SkeletonKind> skeleton_kind_from_string(const std::string& s);
int keypoint_count(SkeletonKind kind);

struct Keypoint {
    double x = 0.0;
    double y = 0.0;
    double confidence = 0.0;
    bool present = false;
};

/// A skeleton edge used to induce constraints and scale estimates.
/// `partition` is the mesh partition the bone's capsule feeds; the four
/// torso quadrilateral sides carry torso_front here but are consumed by the
/// dedicated torso construction rather than as plain capsules.
struct PrincipalBone {
    const char* name;
    int a;
    int b;
    int partition;
    double canonical_length = 0.0; // model units; bound from a mesh bone table
    bool is_quad_side = false;
};

struct Skeleton2D {
    SkeletonKind kind = SkeletonKind::coco17;
    std::vector<Keypoint> keypoints;
    std::vector<PrincipalBone> bones;

    bool present(int id) const {
        return id >= 0 && size_t(id) < keypoints.size() && keypoints[id].present;
    }
    Point2 point(int id) const { return {keypoints[id].x, keypoints[id].y}; }
};

/// The 12 principal bones (8 limb bones + 4 quadrilateral sides) in declaration
/// order. Canonical lengths are zero until bound against a mesh bone table.
std::vector<PrincipalBone> make_principal_bones();

/// Fills canonical lengths from a name -> model-unit-length table.
/// Unknown names in the table are ignored; bones absent from the table keep 0.
void bind_bone_lengths(Skeleton2D& skeleton,
                       const std::vector<std::pair<std::string, double>>& table);

struct CanonicalMesh {
    std::vector<Point3> vertices;
    std::vector<std::array<uint32_t, 3>> faces;
    std::vector<std::array<float, 2>> uv;       // per vertex, in [0,1]^2
    std::vector<int32_t> partition_of;          // per vertex
    std::vector<std::string> partition_names;   // label id -> name
    std::vector<std::pair<std::string, double>> bones; // canonical bone lengths
    double canonical_height = 0.0;              // model units

    uint32_t vertex_count() const { return uint32_t(vertices.size()); }
    uint32_t partition_count() const { return uint32_t(partition_names.size()); }

    /// True when partition_names equals the default human partitioning in its
    /// documented order (required by the pose-constraint pipeline).
    bool has_default_partitions() const;
};

struct EmbeddingSet {
    uint32_t dim = 0;
    std::vector<float> rows; // vertex-major, rows.size() == n * dim, unit rows

    uint32_t count() const { return dim == 0 ? 0 : uint32_t(rows.size() / dim); }
    const float* row(uint32_t i) const { return rows.data() + size_t(i) * dim; }
};

struct GtPoint {
    int32_t x = 0;
    int32_t y = 0;
    uint32_t vertex = 0;
};

struct InstanceInput {
    std::string id;              // source path or synthetic name
    std::array<double, 4> bbox{}; // x, y, w, h in pixels
    Mask mask;
    uint32_t embedding_dim = 0;
    std::vector<float> pixel_embeddings; // H * W * D, row-major, unit rows inside mask
    Skeleton2D skeleton;
    std::vector<GtPoint> gt_points;
    double detection_score = 1.0;
    std::optional<bool> iscrowd;

    uint32_t width() const { return mask.width; }
    uint32_t height() const { return mask.height; }
    const float* embedding_at(uint32_t x, uint32_t y) const {
        return pixel_embeddings.data() + (size_t(y) * mask.width + x) * embedding_dim;
    }
    bool foreground(uint32_t x, uint32_t y) const { return mask.at(x, y) != 0; }
};

struct EngineConfig {
    double delta = 0.08;                 // bone-width factor
    double presence_threshold = 0.3;     // keypoint confidence cutoff
    double kappa = 0.255;                // GPS normalization, model units
    double canonical_height = 0.0;       // 0 = take the mesh's value
    double hand_foot_radius_factor = 2.0;

    void validate() const; // throws Error(invalid_argument) on bad values
};

struct ValidationIssue {
    std::string code;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

/// Diagnostic check of every mesh/embedding invariant. Never throws: all
/// violations are collected into the report.
ValidationReport validate_mesh(const CanonicalMesh& mesh, const EmbeddingSet& embeddings);

/// Recomputes keypoint presence flags from confidences.
void apply_presence_threshold(Skeleton2D& skeleton, double threshold);

} // namespace pccse
