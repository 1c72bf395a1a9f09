// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#include "pccse/io/formats.hpp"

#include "pccse/io/png_io.hpp"
#include "pccse/io/tensor.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace pccse {

namespace {

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open file", path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::format, std::string("invalid json: ") + e.what(), path);
    }
    return j;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot open file for writing", path);
    out << j.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::io, "failed writing file", path);
}

std::string sibling(const std::string& anchor_file, const std::string& ref) {
    fs::path p(ref);
    if (p.is_absolute()) return p.string();
    return (fs::path(anchor_file).parent_path() / p).string();
}

const json& require(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end())
        throw Error(ErrorCode::format, std::string("missing field '") + key + "'", path, key);
    return *it;
}

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : it->get<T>();
}

// Turns stray json type errors into format errors naming the file.
template <typename F>
auto parse_guard(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::format, std::string("invalid value: ") + e.what(), path);
    }
}

Skeleton2D skeleton_from_json(const json& j, const std::string& path) {
    Skeleton2D skel;
    const std::string kind = field_or<std::string>(j, "kind", "coco17");
    const auto parsed = skeleton_kind_from_string(kind);
    if (!parsed)
        throw Error(ErrorCode::format, "unknown skeleton kind '" + kind + "'", path, "kind");
    skel.kind = *parsed;
    const auto& kps = require(j, "keypoints", path);
    const int expected = keypoint_count(skel.kind);
    if (!kps.is_array() || int(kps.size()) != expected)
        throw Error(ErrorCode::format,
                    "skeleton '" + kind + "' needs " + std::to_string(expected) + " keypoints, got " +
                        std::to_string(kps.size()),
                    path, "keypoints");
    skel.keypoints.reserve(kps.size());
    for (const auto& k : kps) {
        if (!k.is_array() || k.size() != 3)
            throw Error(ErrorCode::format, "keypoint entries must be [x, y, confidence]", path,
                        "keypoints");
        Keypoint kp;
        kp.x = k[0].get<double>();
        kp.y = k[1].get<double>();
        kp.confidence = k[2].get<double>();
        kp.present = kp.confidence > 0.0;
        skel.keypoints.push_back(kp);
    }
    skel.bones = make_principal_bones();
    return skel;
}

json skeleton_to_json(const Skeleton2D& skel) {
    json kps = json::array();
    for (const auto& kp : skel.keypoints) kps.push_back({kp.x, kp.y, kp.confidence});
    return json{{"kind", to_string(skel.kind)}, {"keypoints", std::move(kps)}};
}

} // namespace

CanonicalMesh load_mesh(const std::string& path) {
    const json j = read_json(path);
    return parse_guard(path, [&]() -> CanonicalMesh {
    CanonicalMesh mesh;
    for (const auto& v : require(j, "vertices", path)) {
        if (!v.is_array() || v.size() != 3)
            throw Error(ErrorCode::format, "vertices must be [x, y, z]", path, "vertices");
        mesh.vertices.push_back({v[0].get<double>(), v[1].get<double>(), v[2].get<double>()});
    }
    for (const auto& f : require(j, "faces", path)) {
        if (!f.is_array() || f.size() != 3)
            throw Error(ErrorCode::format, "faces must be triangles", path, "faces");
        mesh.faces.push_back({f[0].get<uint32_t>(), f[1].get<uint32_t>(), f[2].get<uint32_t>()});
    }
    for (const auto& t : require(j, "uv", path)) {
        if (!t.is_array() || t.size() != 2)
            throw Error(ErrorCode::format, "uv must be [u, v]", path, "uv");
        mesh.uv.push_back({t[0].get<float>(), t[1].get<float>()});
    }
    for (const auto& p : require(j, "partitions", path)) mesh.partition_of.push_back(p.get<int32_t>());
    for (const auto& n : require(j, "partition_names", path))
        mesh.partition_names.push_back(n.get<std::string>());
    if (auto it = j.find("bones"); it != j.end()) {
        for (const auto& [name, length] : it->items())
            mesh.bones.emplace_back(name, length.get<double>());
    }
    mesh.canonical_height = field_or<double>(j, "canonical_height", 0.0);
    return mesh;
    });
}

void save_mesh(const std::string& path, const CanonicalMesh& mesh) {
    json j;
    j["vertices"] = json::array();
    for (const auto& v : mesh.vertices) j["vertices"].push_back({v.x, v.y, v.z});
    j["faces"] = json::array();
    for (const auto& f : mesh.faces) j["faces"].push_back({f[0], f[1], f[2]});
    j["uv"] = json::array();
    for (const auto& t : mesh.uv) j["uv"].push_back({t[0], t[1]});
    j["partitions"] = mesh.partition_of;
    j["partition_names"] = mesh.partition_names;
    json bones = json::object();
    for (const auto& [name, length] : mesh.bones) bones[name] = length;
    j["bones"] = std::move(bones);
    j["canonical_height"] = mesh.canonical_height;
    write_json(path, j);
}

EmbeddingSet load_embeddings(const std::string& path) {
    const Tensor t = read_tensor(path);
    if (t.dims.size() != 2)
        throw Error(ErrorCode::format, "embeddings tensor must be [vertices, dim]", path);
    EmbeddingSet set;
    set.dim = t.dims[1];
    if (set.dim == 0) throw Error(ErrorCode::format, "embedding dim must be positive", path);
    const float* data = tensor_data<float>(t, path);
    set.rows.assign(data, data + t.element_count());
    return set;
}

void save_embeddings(const std::string& path, const EmbeddingSet& embeddings) {
    write_tensor(path, make_tensor<float>({embeddings.count(), embeddings.dim},
                                          embeddings.rows.data(), embeddings.rows.size()));
}

InstanceInput load_instance(const std::string& path) {
    const json j = read_json(path);
    return parse_guard(path, [&]() -> InstanceInput {
    InstanceInput inst;
    inst.id = field_or<std::string>(j, "id", fs::path(path).stem().string());
    const auto& bbox = require(j, "bbox", path);
    if (!bbox.is_array() || bbox.size() != 4)
        throw Error(ErrorCode::format, "bbox must be [x, y, w, h]", path, "bbox");
    for (int i = 0; i < 4; ++i) inst.bbox[size_t(i)] = bbox[size_t(i)].get<double>();

    inst.mask = read_gray8_png(sibling(path, require(j, "mask", path).get<std::string>()));

    const Tensor empt = read_tensor(sibling(path, require(j, "embeddings", path).get<std::string>()));
    if (empt.dims.size() != 3)
        throw Error(ErrorCode::format, "pixel embeddings must be [h, w, dim]", path, "embeddings");
    if (empt.dims[0] != inst.mask.height || empt.dims[1] != inst.mask.width)
        throw Error(ErrorCode::format,
                    "pixel embeddings are " + std::to_string(empt.dims[1]) + "x" +
                        std::to_string(empt.dims[0]) + ", mask is " +
                        std::to_string(inst.mask.width) + "x" + std::to_string(inst.mask.height),
                    path, "embeddings");
    inst.embedding_dim = empt.dims[2];
    const float* data = tensor_data<float>(empt, path);
    inst.pixel_embeddings.assign(data, data + empt.element_count());

    for (uint32_t y = 0; y < inst.height(); ++y) {
        for (uint32_t x = 0; x < inst.width(); ++x) {
            if (!inst.foreground(x, y)) continue;
            float* row = inst.pixel_embeddings.data() +
                         (size_t(y) * inst.width() + x) * inst.embedding_dim;
            double sq = 0.0;
            for (uint32_t d = 0; d < inst.embedding_dim; ++d) sq += double(row[d]) * double(row[d]);
            const double norm = std::sqrt(sq);
            if (norm == 0.0)
                throw Error(ErrorCode::format,
                            "zero-norm embedding at foreground pixel (" + std::to_string(x) + "," +
                                std::to_string(y) + ")",
                            path, "embeddings");
            if (std::abs(norm - 1.0) <= 1e-5) continue;
            for (uint32_t d = 0; d < inst.embedding_dim; ++d)
                row[d] = float(double(row[d]) / norm);
        }
    }

    inst.skeleton = skeleton_from_json(require(j, "skeleton", path), path);
    if (auto it = j.find("gt_points"); it != j.end()) {
        for (const auto& p : *it) {
            if (!p.is_array() || p.size() != 3)
                throw Error(ErrorCode::format, "gt points must be [x, y, vertex]", path,
                            "gt_points");
            inst.gt_points.push_back(
                {p[0].get<int32_t>(), p[1].get<int32_t>(), p[2].get<uint32_t>()});
        }
    }
    inst.detection_score = field_or<double>(j, "detection_score", 1.0);
    if (auto it = j.find("iscrowd"); it != j.end()) inst.iscrowd = it->get<bool>();
    return inst;
    });
}

void save_instance(const std::string& dir, const std::string& stem,
                   const InstanceInput& instance) {
    fs::create_directories(dir);
    const std::string mask_name = stem + ".mask.png";
    const std::string emb_name = stem + ".emb.pct";
    write_gray8_png((fs::path(dir) / mask_name).string(), instance.mask);
    write_tensor((fs::path(dir) / emb_name).string(),
                 make_tensor<float>({instance.height(), instance.width(), instance.embedding_dim},
                                    instance.pixel_embeddings.data(),
                                    instance.pixel_embeddings.size()));
    json j;
    j["id"] = instance.id;
    j["bbox"] = instance.bbox;
    j["mask"] = mask_name;
    j["embeddings"] = emb_name;
    j["skeleton"] = skeleton_to_json(instance.skeleton);
    json pts = json::array();
    for (const auto& p : instance.gt_points) pts.push_back({p.x, p.y, p.vertex});
    j["gt_points"] = std::move(pts);
    j["detection_score"] = instance.detection_score;
    if (instance.iscrowd) j["iscrowd"] = *instance.iscrowd;
    write_json((fs::path(dir) / (stem + ".json")).string(), j);
}

SetInput load_set(const std::string& path) {
    const json j = read_json(path);
    return parse_guard(path, [&]() -> SetInput {
    SetInput set;
    set.mesh = load_mesh(sibling(path, require(j, "mesh", path).get<std::string>()));
    set.embeddings =
        load_embeddings(sibling(path, require(j, "embeddings", path).get<std::string>()));
    for (const auto& ref : require(j, "instances", path)) {
        InstanceInput inst = load_instance(sibling(path, ref.get<std::string>()));
        bind_bone_lengths(inst.skeleton, set.mesh.bones);
        set.instances.push_back(std::move(inst));
    }
    if (set.instances.empty())
        throw Error(ErrorCode::format, "set lists no instances", path, "instances");
    return set;
    });
}

void save_set(const std::string& path, const std::string& mesh_ref,
              const std::string& embeddings_ref, const std::vector<std::string>& instance_refs) {
    write_json(path, json{{"mesh", mesh_ref},
                          {"embeddings", embeddings_ref},
                          {"instances", instance_refs}});
}

EngineConfig load_config(const std::string& path) {
    const json j = read_json(path);
    return parse_guard(path, [&]() -> EngineConfig {
    EngineConfig config;
    for (const auto& [key, value] : j.items()) {
        if (key == "delta") config.delta = value.get<double>();
        else if (key == "presence_threshold") config.presence_threshold = value.get<double>();
        else if (key == "kappa") config.kappa = value.get<double>();
        else if (key == "canonical_height") config.canonical_height = value.get<double>();
        else if (key == "hand_foot_radius_factor")
            config.hand_foot_radius_factor = value.get<double>();
        else
            throw Error(ErrorCode::format, "unknown config key '" + key + "'", path, key);
    }
    config.validate();
    return config;
    });
}

void save_config(const std::string& path, const EngineConfig& config) {
    write_json(path, json{{"delta", config.delta},
                          {"presence_threshold", config.presence_threshold},
                          {"kappa", config.kappa},
                          {"canonical_height", config.canonical_height},
                          {"hand_foot_radius_factor", config.hand_foot_radius_factor}});
}

FramesInput load_frames(const std::string& path) {
    const json j = read_json(path);
    return parse_guard(path, [&]() -> FramesInput {
    FramesInput input;
    input.canonical_height = field_or<double>(j, "canonical_height", 0.0);
    for (const auto& f : require(j, "frames", path)) {
        Frame frame;
        frame.id = field_or<std::string>(f, "id", "frame_" + std::to_string(input.frames.size()));
        frame.skeleton = skeleton_from_json(require(f, "skeleton", path), path);
        input.frames.push_back(std::move(frame));
    }
    if (input.frames.empty()) throw Error(ErrorCode::format, "no frames", path, "frames");
    return input;
    });
}

void save_frames(const std::string& path, const FramesInput& frames) {
    json arr = json::array();
    for (const auto& f : frames.frames)
        arr.push_back({{"id", f.id}, {"skeleton", skeleton_to_json(f.skeleton)}});
    json j{{"frames", std::move(arr)}};
    if (frames.canonical_height > 0.0) j["canonical_height"] = frames.canonical_height;
    write_json(path, j);
}

void save_label_map(const std::string& path, const LabelMap& labels) {
    write_tensor(path, make_tensor<uint16_t>({labels.height, labels.width},
                                             labels.allowed.data(), labels.allowed.size()));
}

LabelMap load_label_map(const std::string& path, uint32_t partition_count) {
    const Tensor t = read_tensor(path);
    if (t.dims.size() != 2)
        throw Error(ErrorCode::format, "label map tensor must be [h, w]", path);
    LabelMap lm(t.dims[1], t.dims[0], partition_count);
    const uint16_t* data = tensor_data<uint16_t>(t, path);
    lm.allowed.assign(data, data + t.element_count());
    const uint16_t all = lm.all_bits();
    for (size_t i = 0; i < lm.allowed.size(); ++i)
        if (lm.allowed[i] & ~all)
            throw Error(ErrorCode::format,
                        "label map sets bits beyond " + std::to_string(partition_count) +
                            " partitions",
                        path);
    return lm;
}

void save_uv_map(const std::string& prefix, const UvMap& uv) {
    write_tensor(prefix + ".vertices.pct",
                 make_tensor<uint32_t>({uv.height, uv.width}, uv.vertex.data(), uv.vertex.size()));
    write_tensor(prefix + ".scores.pct",
                 make_tensor<float>({uv.height, uv.width}, uv.score.data(), uv.score.size()));
    write_json(prefix + ".json", json{{"width", uv.width},
                                      {"height", uv.height},
                                      {"background_vertex", UvMap::no_vertex}});
}

UvMap load_uv_map(const std::string& prefix) {
    const json j = read_json(prefix + ".json");
    return parse_guard(prefix + ".json", [&]() -> UvMap {
    const Tensor vt = read_tensor(prefix + ".vertices.pct");
    const Tensor st = read_tensor(prefix + ".scores.pct");
    if (vt.dims.size() != 2 || st.dims != vt.dims)
        throw Error(ErrorCode::format, "uv map tensors disagree on shape", prefix);
    UvMap uv(vt.dims[1], vt.dims[0]);
    if (require(j, "width", prefix + ".json").get<uint32_t>() != uv.width ||
        require(j, "height", prefix + ".json").get<uint32_t>() != uv.height)
        throw Error(ErrorCode::format, "uv map sidecar disagrees with tensors", prefix + ".json");
    const uint32_t* vd = tensor_data<uint32_t>(vt, prefix);
    const float* sd = tensor_data<float>(st, prefix);
    uv.vertex.assign(vd, vd + vt.element_count());
    uv.score.assign(sd, sd + st.element_count());
    return uv;
    });
}

void save_removals(const std::string& path, const ConsistencyReport& report) {
    json removals = json::array();
    for (const auto& r : report.removals)
        removals.push_back({{"id", r.id},
                            {"whole_instance", r.whole_instance},
                            {"partitions", r.partitions},
                            {"reason", r.reason}});
    write_json(path, json{{"removals", std::move(removals)},
                          {"summary",
                           {{"flagged_instances", report.flagged_instances},
                            {"total_instances", report.total_instances},
                            {"flagged_points", report.flagged_points},
                            {"total_points", report.total_points}}}});
}

void save_audit_report(const std::string& path, const ConsistencyReport& report) {
    json audits = json::array();
    for (const auto& a : report.audits) {
        json flags = json::array();
        for (const auto& f : a.part_flags)
            flags.push_back({{"partition", f.partition},
                             {"part", parts::names()[size_t(f.partition)]},
                             {"reason", f.reason},
                             {"value", f.value},
                             {"points", f.points}});
        json entry{{"id", a.id},
                   {"auditable", a.auditable},
                   {"crowd", a.crowd},
                   {"flags", std::move(flags)}};
        if (!a.auditable) entry["not_auditable_reason"] = a.not_auditable_reason;
        if (a.auditable) {
            entry["mask_in_bbox"] = a.mask_in_bbox;
            entry["points_in_mask"] = a.points_in_mask;
            entry["bbox_mismatch"] = a.bbox_mismatch;
            entry["low_point_containment"] = a.low_point_containment;
            if (!a.skeletal_audited) entry["skeletal_skip_reason"] = a.skeletal_skip_reason;
        }
        audits.push_back(std::move(entry));
    }
    write_json(path, json{{"audits", std::move(audits)},
                          {"summary",
                           {{"flagged_instances", report.flagged_instances},
                            {"total_instances", report.total_instances},
                            {"flagged_points", report.flagged_points},
                            {"total_points", report.total_points}}}});
}

std::vector<RemovalEntry> load_removals(const std::string& path) {
    const json j = read_json(path);
    return parse_guard(path, [&]() -> std::vector<RemovalEntry> {
    std::vector<RemovalEntry> entries;
    for (const auto& r : require(j, "removals", path)) {
        RemovalEntry entry;
        entry.id = require(r, "id", path).get<std::string>();
        entry.whole_instance = field_or<bool>(r, "whole_instance", false);
        if (auto it = r.find("partitions"); it != r.end())
            entry.partitions = it->get<std::vector<int>>();
        entry.reason = field_or<std::string>(r, "reason", "");
        entries.push_back(std::move(entry));
    }
    return entries;
    });
}

} // namespace pccse
