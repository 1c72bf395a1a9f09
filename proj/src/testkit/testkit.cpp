// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#include "testkit/testkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <random>

namespace fs = std::filesystem;

namespace pccse::testkit {

namespace {

constexpr double kRingRadius = 0.03;
constexpr double kTorsoZ = 0.06;
constexpr double kCanonicalHeight = 1.70;

// Image-space fixture layout: pixels per model unit and head-top row.
constexpr double kScale = 48.0;
constexpr double kTopY = 8.0;
constexpr uint32_t kCanvas = 96;

double img_y(double model_y) { return kTopY + (kCanonicalHeight - model_y) * kScale; }

std::vector<std::pair<std::string, double>> bone_table() {
    const double quad_side = std::sqrt(0.10 * 0.10 + 0.52 * 0.52);
    return {{"left_arm", 0.26},     {"right_arm", 0.26},  {"left_forearm", 0.26},
            {"right_forearm", 0.26}, {"left_thigh", 0.43}, {"right_thigh", 0.43},
            {"left_shin", 0.39},    {"right_shin", 0.39}, {"quad_top", 0.40},
            {"quad_left", quad_side}, {"quad_right", quad_side}, {"quad_bottom", 0.20}};
}

struct MeshBuilder {
    CanonicalMesh mesh;
    std::vector<uint32_t> mirror;
    std::vector<std::vector<uint32_t>> of_part{size_t(parts::count)};

    uint32_t add(Point3 p, int part) {
        const uint32_t i = uint32_t(mesh.vertices.size());
        mesh.vertices.push_back(p);
        mesh.partition_of.push_back(part);
        of_part[size_t(part)].push_back(i);
        mirror.push_back(i);
        return i;
    }

    void face(uint32_t a, uint32_t b, uint32_t c) { mesh.faces.push_back({a, b, c}); }

    // Triangle ring of radius kRingRadius around `center` in the (u, v) plane.
    std::array<uint32_t, 3> ring(Point3 center, Point3 u, Point3 v, int part) {
        std::array<uint32_t, 3> ids{};
        for (int k = 0; k < 3; ++k) {
            const double t = 2.0 * 3.14159265358979323846 * k / 3.0;
            ids[size_t(k)] = add({center.x + kRingRadius * (std::cos(t) * u.x + std::sin(t) * v.x),
                                  center.y + kRingRadius * (std::cos(t) * u.y + std::sin(t) * v.y),
                                  center.z + kRingRadius * (std::cos(t) * u.z + std::sin(t) * v.z)},
                                 part);
        }
        return ids;
    }

    void tube(const std::array<uint32_t, 3>& a, const std::array<uint32_t, 3>& b) {
        for (int k = 0; k < 3; ++k) {
            const int n = (k + 1) % 3;
            face(a[size_t(k)], a[size_t(n)], b[size_t(k)]);
            face(a[size_t(n)], b[size_t(n)], b[size_t(k)]);
        }
    }
};

// Two-ring limb segment; returns {start ring, end ring}.
std::array<std::array<uint32_t, 3>, 2> limb(MeshBuilder& b, Point3 a, Point3 e, Point3 u, Point3 v,
                                            int part) {
    const auto ra = b.ring(a, u, v, part);
    const auto re = b.ring(e, u, v, part);
    b.tube(ra, re);
    return {ra, re};
}

Point3 mirror_x(Point3 p) { return {-p.x, p.y, p.z}; }

} // namespace

Mannequin make_mannequin() {
    MeshBuilder b;

    // Torso grids: rows at shoulder, mid and hip height; width tapers.
    uint32_t front[3][3], back[3][3];
    for (int side = 0; side < 2; ++side) {
        const int part = side == 0 ? parts::torso_front : parts::torso_back;
        const double z = side == 0 ? kTorsoZ : -kTorsoZ;
        for (int r = 0; r < 3; ++r) {
            const double y = 1.42 - 0.26 * r;
            const double half = 0.20 - 0.05 * r;
            for (int c = 0; c < 3; ++c) {
                const double x = half * (1.0 - c); // c=0 left (+x), c=2 right (-x)
                (side == 0 ? front : back)[r][c] = b.add({x, y, z}, part);
            }
        }
    }
    auto grid_faces = [&](uint32_t g[3][3]) {
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                b.face(g[r][c], g[r][c + 1], g[r + 1][c]);
                b.face(g[r][c + 1], g[r + 1][c + 1], g[r + 1][c]);
            }
    };
    grid_faces(front);
    grid_faces(back);
    for (int r = 0; r < 2; ++r) {
        b.face(front[r][0], back[r][0], front[r + 1][0]);
        b.face(front[r][2], back[r][2], front[r + 1][2]);
    }
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            b.mirror[front[r][c]] = front[r][2 - c];
            b.mirror[back[r][c]] = back[r][2 - c];
        }

    // Head: two rings and an apex. Ring vertices have no exact x-mirror
    // counterpart; the mirror table maps them to themselves.
    const Point3 xhat{1, 0, 0}, zhat{0, 0, 1};
    const auto head_base = b.ring({0, 1.50, 0}, xhat, zhat, parts::head);
    const auto head_top = b.ring({0, 1.62, 0}, xhat, zhat, parts::head);
    b.tube(head_base, head_top);
    const uint32_t apex = b.add({0, kCanonicalHeight, 0}, parts::head);
    for (int k = 0; k < 3; ++k) b.face(head_top[size_t(k)], head_top[size_t((k + 1) % 3)], apex);
    b.face(head_base[0], front[0][1], back[0][1]);

    // Left limbs, then mirrored right limbs in identical local order.
    struct Limb {
        int left_part, right_part;
        Point3 a, e; // canonical left-side endpoints
        Point3 u, v; // ring plane
    };
    const Point3 yhat{0, 1, 0};
    const std::vector<Limb> limbs = {
        {parts::left_arm, parts::right_arm, {0.20, 1.42, 0}, {0.46, 1.42, 0}, yhat, zhat},
        {parts::left_forearm, parts::right_forearm, {0.46, 1.42, 0}, {0.72, 1.42, 0}, yhat, zhat},
        {parts::left_hand, parts::right_hand, {0.72, 1.42, 0}, {0.80, 1.42, 0}, yhat, zhat},
        {parts::left_thigh, parts::right_thigh, {0.10, 0.90, 0}, {0.10, 0.47, 0}, xhat, zhat},
        {parts::left_shin, parts::right_shin, {0.10, 0.47, 0}, {0.10, 0.08, 0}, xhat, zhat},
        {parts::left_foot, parts::right_foot, {0.10, 0.08, 0}, {0.10, 0.02, 0.12}, xhat, zhat},
    };
    std::array<std::array<std::array<uint32_t, 3>, 2>, 6> lrings, rrings;
    for (size_t i = 0; i < limbs.size(); ++i) {
        const Limb& L = limbs[i];
        lrings[i] = limb(b, L.a, L.e, L.u, L.v, L.left_part);
        rrings[i] = limb(b, mirror_x(L.a), mirror_x(L.e), mirror_x(L.u), L.v, L.right_part);
        for (int ring = 0; ring < 2; ++ring)
            for (int k = 0; k < 3; ++k) {
                b.mirror[lrings[i][size_t(ring)][size_t(k)]] = rrings[i][size_t(ring)][size_t(k)];
                b.mirror[rrings[i][size_t(ring)][size_t(k)]] = lrings[i][size_t(ring)][size_t(k)];
            }
    }
    // Stitch: shoulders and hips to the torso columns, joints to each other.
    b.face(lrings[0][0][0], front[0][0], back[0][0]);
    b.face(rrings[0][0][0], front[0][2], back[0][2]);
    b.face(lrings[3][0][0], front[2][0], back[2][0]);
    b.face(rrings[3][0][0], front[2][2], back[2][2]);
    const int joint_pairs[4][2] = {{0, 1}, {1, 2}, {3, 4}, {4, 5}}; // arm chain, leg chain
    for (const auto& jp : joint_pairs) {
        b.face(lrings[size_t(jp[0])][1][0], lrings[size_t(jp[1])][0][0],
               lrings[size_t(jp[1])][0][1]);
        b.face(rrings[size_t(jp[0])][1][0], rrings[size_t(jp[1])][0][0],
               rrings[size_t(jp[1])][0][1]);
    }

    Mannequin m;
    m.mesh = std::move(b.mesh);
    m.mirror = std::move(b.mirror);

    const auto& names = parts::names();
    m.mesh.partition_names.assign(names.begin(), names.end());
    m.mesh.bones = bone_table();
    m.mesh.canonical_height = kCanonicalHeight;

    // UV islands: one 4x4 grid cell per partition.
    std::vector<size_t> seen(size_t(parts::count), 0);
    std::vector<size_t> totals(size_t(parts::count), 0);
    for (int32_t p : m.mesh.partition_of) ++totals[size_t(p)];
    m.mesh.uv.resize(m.mesh.vertices.size());
    for (size_t i = 0; i < m.mesh.vertices.size(); ++i) {
        const int p = m.mesh.partition_of[i];
        const size_t k = seen[size_t(p)]++;
        const size_t n = totals[size_t(p)];
        const double lu = n <= 1 ? 0.0 : double(k) / double(n - 1);
        const double lv = double(k % 3) / 2.0;
        m.mesh.uv[i] = {float((p % 4 + 0.1 + 0.8 * lu) / 4.0),
                        float((p / 4 + 0.1 + 0.8 * lv) / 4.0)};
    }

    m.embeddings.dim = m.mesh.vertex_count();
    m.embeddings.rows.assign(size_t(m.embeddings.dim) * m.embeddings.dim, 0.0f);
    for (uint32_t v = 0; v < m.embeddings.dim; ++v)
        m.embeddings.rows[size_t(v) * m.embeddings.dim + v] = 1.0f;
    return m;
}

Skeleton2D fixture_skeleton() {
    Skeleton2D skel;
    skel.kind = SkeletonKind::coco17;
    skel.keypoints.resize(size_t(kp::coco17_count));
    auto set = [&](int id, double x, double y) {
        skel.keypoints[size_t(id)] = {x, y, 1.0, true};
    };
    const double cx = 48.0;
    set(kp::nose, cx, img_y(1.58));
    set(kp::left_eye, cx + 1.44, img_y(1.62));
    set(kp::right_eye, cx - 1.44, img_y(1.62));
    set(kp::left_ear, cx + 2.88, img_y(1.60));
    set(kp::right_ear, cx - 2.88, img_y(1.60));
    set(kp::left_shoulder, cx + 9.6, img_y(1.42));
    set(kp::right_shoulder, cx - 9.6, img_y(1.42));
    set(kp::left_elbow, cx + 10.56, img_y(1.16));
    set(kp::right_elbow, cx - 10.56, img_y(1.16));
    set(kp::left_wrist, cx + 10.56, img_y(0.90));
    set(kp::right_wrist, cx - 10.56, img_y(0.90));
    set(kp::left_hip, cx + 4.8, img_y(0.90));
    set(kp::right_hip, cx - 4.8, img_y(0.90));
    set(kp::left_knee, cx + 4.8, img_y(0.47));
    set(kp::right_knee, cx - 4.8, img_y(0.47));
    set(kp::left_ankle, cx + 4.8, img_y(0.08));
    set(kp::right_ankle, cx - 4.8, img_y(0.08));
    skel.bones = make_principal_bones();
    bind_bone_lengths(skel, bone_table());
    return skel;
}

namespace {

struct PartPrimitive {
    int partition;
    Point2 a, b;       // pose segment, image px
    double half_width;
    Point3 can_a, can_b;
};

std::vector<PartPrimitive> fixture_primitives() {
    const Skeleton2D skel = fixture_skeleton();
    auto at = [&](int id) { return skel.point(id); };
    const double hw = 2.5;
    std::vector<PartPrimitive> prims = {
        {parts::left_arm, at(kp::left_shoulder), at(kp::left_elbow), hw,
         {0.20, 1.42, 0}, {0.46, 1.42, 0}},
        {parts::right_arm, at(kp::right_shoulder), at(kp::right_elbow), hw,
         {-0.20, 1.42, 0}, {-0.46, 1.42, 0}},
        {parts::left_forearm, at(kp::left_elbow), at(kp::left_wrist), hw,
         {0.46, 1.42, 0}, {0.72, 1.42, 0}},
        {parts::right_forearm, at(kp::right_elbow), at(kp::right_wrist), hw,
         {-0.46, 1.42, 0}, {-0.72, 1.42, 0}},
        {parts::left_hand, at(kp::left_wrist), {at(kp::left_wrist).x, img_y(0.82)}, hw,
         {0.72, 1.42, 0}, {0.80, 1.42, 0}},
        {parts::right_hand, at(kp::right_wrist), {at(kp::right_wrist).x, img_y(0.82)}, hw,
         {-0.72, 1.42, 0}, {-0.80, 1.42, 0}},
        {parts::left_thigh, at(kp::left_hip), at(kp::left_knee), hw,
         {0.10, 0.90, 0}, {0.10, 0.47, 0}},
        {parts::right_thigh, at(kp::right_hip), at(kp::right_knee), hw,
         {-0.10, 0.90, 0}, {-0.10, 0.47, 0}},
        {parts::left_shin, at(kp::left_knee), at(kp::left_ankle), hw,
         {0.10, 0.47, 0}, {0.10, 0.08, 0}},
        {parts::right_shin, at(kp::right_knee), at(kp::right_ankle), hw,
         {-0.10, 0.47, 0}, {-0.10, 0.08, 0}},
        {parts::left_foot, at(kp::left_ankle), {at(kp::left_ankle).x, img_y(-0.02)}, hw,
         {0.10, 0.08, 0}, {0.10, 0.02, 0.12}},
        {parts::right_foot, at(kp::right_ankle), {at(kp::right_ankle).x, img_y(-0.02)}, hw,
         {-0.10, 0.08, 0}, {-0.10, 0.02, 0.12}},
        {parts::head, {48.0, img_y(1.50)}, {48.0, img_y(1.70)}, 4.5,
         {0, 1.50, 0}, {0, 1.70, 0}},
    };
    return prims;
}

struct Classified {
    int partition;
    Point3 canonical;
};

struct FixtureSampler {
    std::vector<PartPrimitive> prims = fixture_primitives();
    Point2 quad[4];

    FixtureSampler() {
        const Skeleton2D skel = fixture_skeleton();
        quad[0] = skel.point(kp::left_shoulder);
        quad[1] = skel.point(kp::right_shoulder);
        quad[2] = skel.point(kp::right_hip);
        quad[3] = skel.point(kp::left_hip);
    }

    bool in_quad(Point2 p) const {
        bool inside = false;
        for (int i = 0, j = 3; i < 4; j = i++) {
            if ((quad[i].y > p.y) != (quad[j].y > p.y)) {
                const double x_at = quad[i].x + (p.y - quad[i].y) * (quad[j].x - quad[i].x) /
                                                    (quad[j].y - quad[i].y);
                if (p.x < x_at) inside = !inside;
            }
        }
        return inside;
    }

    Point3 torso_canonical(Point2 p) const {
        const double row_t = std::clamp((p.y - quad[0].y) / (quad[3].y - quad[0].y), 0.0, 1.0);
        const double xl = quad[0].x - (quad[0].x - quad[3].x) * row_t;
        const double xr = quad[1].x - (quad[1].x - quad[2].x) * row_t;
        const double col_t = std::clamp((xl - p.x) / (xl - xr), 0.0, 1.0);
        const double half = 0.20 - 0.10 * row_t;
        return {half * (1.0 - 2.0 * col_t), 1.42 - 0.52 * row_t, kTorsoZ};
    }

    std::optional<Classified> classify(Point2 p) const {
        if (in_quad(p)) return Classified{parts::torso_front, torso_canonical(p)};
        double best_d = 0.0;
        const PartPrimitive* best = nullptr;
        for (const auto& prim : prims) {
            const double d = point_segment_distance(p, prim.a, prim.b);
            if (d <= prim.half_width && (!best || d < best_d)) {
                best = &prim;
                best_d = d;
            }
        }
        if (!best) return std::nullopt;
        const double abx = best->b.x - best->a.x, aby = best->b.y - best->a.y;
        const double sq = abx * abx + aby * aby;
        double t = sq == 0.0 ? 0.0
                             : ((p.x - best->a.x) * abx + (p.y - best->a.y) * aby) / sq;
        t = std::clamp(t, 0.0, 1.0);
        return Classified{best->partition,
                          {best->can_a.x + t * (best->can_b.x - best->can_a.x),
                           best->can_a.y + t * (best->can_b.y - best->can_a.y),
                           best->can_a.z + t * (best->can_b.z - best->can_a.z)}};
    }
};

uint32_t nearest_vertex(const Mannequin& m, int partition, Point3 c) {
    uint32_t best = UvMap::no_vertex;
    double best_sq = 0.0;
    for (uint32_t v = 0; v < m.mesh.vertex_count(); ++v) {
        if (m.mesh.partition_of[v] != partition) continue;
        const Point3& q = m.mesh.vertices[v];
        const double sq = (q.x - c.x) * (q.x - c.x) + (q.y - c.y) * (q.y - c.y) +
                          (q.z - c.z) * (q.z - c.z);
        if (best == UvMap::no_vertex || sq < best_sq) {
            best = v;
            best_sq = sq;
        }
    }
    return best;
}

} // namespace

InstanceInput make_instance(const Mannequin& m, const FixtureOptions& options) {
    const FixtureSampler sampler;
    const uint32_t dim = m.embeddings.dim;

    InstanceInput inst;
    inst.id = options.id;
    inst.detection_score = options.detection_score;
    if (options.crowd) inst.iscrowd = true;
    inst.mask = Mask(kCanvas, kCanvas, 0);
    inst.embedding_dim = dim;
    inst.pixel_embeddings.assign(size_t(kCanvas) * kCanvas * dim, 0.0f);
    inst.skeleton = fixture_skeleton();

    uint32_t min_x = kCanvas, min_y = kCanvas, max_x = 0, max_y = 0;
    for (uint32_t y = 0; y < kCanvas; ++y) {
        for (uint32_t x = 0; x < kCanvas; ++x) {
            const auto cls = sampler.classify({double(x), double(y)});
            if (!cls) continue;
            inst.mask.at(x, y) = 255;
            min_x = std::min(min_x, x);
            min_y = std::min(min_y, y);
            max_x = std::max(max_x, x);
            max_y = std::max(max_y, y);
            const uint32_t v = nearest_vertex(m, cls->partition, cls->canonical);
            float* row = inst.pixel_embeddings.data() + (size_t(y) * kCanvas + x) * dim;
            const bool forearm = cls->partition == parts::left_forearm ||
                                 cls->partition == parts::right_forearm;
            if (options.corrupt_forearms && forearm) {
                const double norm = std::sqrt(1.0 + 0.36);
                row[m.mirror[v]] = float(1.0 / norm);
                row[v] = float(0.6 / norm);
            } else {
                row[v] = 1.0f;
            }
        }
    }
    inst.bbox = {double(min_x), double(min_y), double(max_x - min_x + 1),
                 double(max_y - min_y + 1)};
    if (options.bad_bbox) inst.bbox = {0.0, 0.0, 12.0, double(kCanvas)};

    // Ground truth: a few pixels per part, vertex taken from the rendered
    // assignment so clean instances score a perfect match.
    auto push_gt = [&](Point2 p, int expect_partition) {
        const int ix = int(std::lround(p.x)), iy = int(std::lround(p.y));
        if (ix < 0 || iy < 0 || ix >= int(kCanvas) || iy >= int(kCanvas)) return;
        const auto cls = sampler.classify({double(ix), double(iy)});
        if (!cls || cls->partition != expect_partition) return;
        inst.gt_points.push_back(
            {ix, iy, nearest_vertex(m, cls->partition, cls->canonical)});
    };
    for (const auto& prim : sampler.prims) {
        const double abx = prim.b.x - prim.a.x, aby = prim.b.y - prim.a.y;
        const double len = std::hypot(abx, aby);
        const double px = -aby / len, py = abx / len; // unit perpendicular
        for (const double t : {0.15, 0.85})
            push_gt({prim.a.x + t * abx, prim.a.y + t * aby}, prim.partition);
        for (const double off : {0.0, 2.0, -2.0})
            push_gt({prim.a.x + 0.5 * abx + off * px, prim.a.y + 0.5 * aby + off * py},
                    prim.partition);
    }
    const double torso_ts[5][2] = {{0.2, 0.2}, {0.2, 0.8}, {0.5, 0.5}, {0.8, 0.2}, {0.8, 0.8}};
    for (const auto& rc : torso_ts) {
        const double y = sampler.quad[0].y + rc[0] * (sampler.quad[3].y - sampler.quad[0].y);
        const double xl = sampler.quad[0].x - (sampler.quad[0].x - sampler.quad[3].x) * rc[0];
        const double xr = sampler.quad[1].x - (sampler.quad[1].x - sampler.quad[2].x) * rc[0];
        push_gt({xl - rc[1] * (xl - xr), y}, parts::torso_front);
    }

    if (options.swap_forearm_gt) {
        for (auto& gt : inst.gt_points) {
            const int p = m.mesh.partition_of[gt.vertex];
            if (p == parts::left_forearm || p == parts::right_forearm)
                gt.x = int(kCanvas) - gt.x;
        }
    }
    if (options.points_outside) {
        for (auto& gt : inst.gt_points) gt.x += 30;
    }
    return inst;
}

FramesInput make_frames(int count, double jitter_px, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-jitter_px, jitter_px);
    FramesInput frames;
    const Skeleton2D base = fixture_skeleton();
    for (int f = 0; f < count; ++f) {
        Frame frame;
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%03d", f);
        frame.id = name;
        frame.skeleton = base;
        for (auto& kpnt : frame.skeleton.keypoints) {
            kpnt.x += jitter(rng);
            kpnt.y += jitter(rng);
        }
        frames.frames.push_back(std::move(frame));
    }
    return frames;
}

Skeleton2D random_skeleton(uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(20.0, 180.0);
    std::bernoulli_distribution present(0.9);
    Skeleton2D skel;
    skel.kind = SkeletonKind::coco17;
    skel.keypoints.resize(size_t(kp::coco17_count));
    for (auto& kpnt : skel.keypoints) {
        kpnt.x = coord(rng);
        kpnt.y = coord(rng);
        kpnt.present = present(rng);
        kpnt.confidence = kpnt.present ? 1.0 : 0.0;
    }
    skel.keypoints[size_t(kp::left_hip)].present = true;
    skel.keypoints[size_t(kp::left_hip)].confidence = 1.0;
    skel.keypoints[size_t(kp::left_knee)].present = true;
    skel.keypoints[size_t(kp::left_knee)].confidence = 1.0;
    skel.bones = make_principal_bones();
    bind_bone_lengths(skel, bone_table());
    return skel;
}

RandomCase make_random_case(uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform_int = [&](uint32_t lo, uint32_t hi) {
        return std::uniform_int_distribution<uint32_t>(lo, hi)(rng);
    };
    std::normal_distribution<double> gauss(0.0, 1.0);

    RandomCase c;
    const uint32_t k = uniform_int(3, 8);
    const uint32_t n = uniform_int(20, 60);
    const uint32_t dim = uniform_int(8, 32);

    for (uint32_t p = 0; p < k; ++p) c.mesh.partition_names.push_back("p" + std::to_string(p));
    for (uint32_t v = 0; v < n; ++v) {
        c.mesh.vertices.push_back({gauss(rng), gauss(rng), gauss(rng)});
        c.mesh.uv.push_back({0.5f, 0.5f});
        c.mesh.partition_of.push_back(v < k ? int32_t(v) : int32_t(uniform_int(0, k - 1)));
    }
    c.mesh.canonical_height = 1.0;

    auto unit_row = [&](float* row) {
        double sq = 0.0;
        for (uint32_t d = 0; d < dim; ++d) {
            row[d] = float(gauss(rng));
            sq += double(row[d]) * double(row[d]);
        }
        const double norm = std::sqrt(sq);
        for (uint32_t d = 0; d < dim; ++d) row[d] = float(double(row[d]) / norm);
    };
    c.embeddings.dim = dim;
    c.embeddings.rows.resize(size_t(n) * dim);
    for (uint32_t v = 0; v < n; ++v) unit_row(c.embeddings.rows.data() + size_t(v) * dim);
    for (uint32_t d = 0; d < n / 5; ++d) {
        const uint32_t dst = uniform_int(0, n - 1), src = uniform_int(0, n - 1);
        std::copy_n(c.embeddings.rows.data() + size_t(src) * dim, dim,
                    c.embeddings.rows.data() + size_t(dst) * dim);
    }

    const uint32_t w = uniform_int(8, 32), h = uniform_int(8, 32);
    c.instance.id = "random_case";
    c.instance.mask = Mask(w, h, 0);
    c.instance.embedding_dim = dim;
    c.instance.pixel_embeddings.assign(size_t(w) * h * dim, 0.0f);
    c.instance.bbox = {0.0, 0.0, double(w), double(h)};
    c.labels = LabelMap(w, h, k);
    std::bernoulli_distribution fg(0.7), copy_row(0.2);
    for (uint32_t y = 0; y < h; ++y) {
        for (uint32_t x = 0; x < w; ++x) {
            if (!fg(rng)) continue;
            c.instance.mask.at(x, y) = 255;
            float* row = c.instance.pixel_embeddings.data() + (size_t(y) * w + x) * dim;
            if (copy_row(rng))
                std::copy_n(c.embeddings.rows.data() + size_t(uniform_int(0, n - 1)) * dim, dim,
                            row);
            else
                unit_row(row);
            c.labels.at(x, y) = uint16_t(uniform_int(1, (1u << k) - 1));
        }
    }
    return c;
}

void write_corpus(const std::string& root) {
    fs::create_directories(fs::path(root) / "instances");
    fs::create_directories(fs::path(root) / "sets");
    fs::create_directories(fs::path(root) / "frames");

    const Mannequin m = make_mannequin();
    save_mesh((fs::path(root) / "mannequin.mesh.json").string(), m.mesh);
    save_embeddings((fs::path(root) / "mannequin.embeddings.pct").string(), m.embeddings);
    save_config((fs::path(root) / "config.json").string(), EngineConfig{});

    const std::string idir = (fs::path(root) / "instances").string();
    std::vector<std::string> eval_refs, audit_refs;
    auto emit = [&](const FixtureOptions& options, std::vector<std::string>& refs) {
        save_instance(idir, options.id, make_instance(m, options));
        refs.push_back("../instances/" + options.id + ".json");
    };

    const double scores_clean[4] = {0.95, 0.90, 0.85, 0.80};
    const double scores_corrupt[4] = {0.75, 0.70, 0.65, 0.60};
    for (int i = 0; i < 4; ++i) {
        FixtureOptions options;
        options.id = "clean_00" + std::to_string(i);
        options.detection_score = scores_clean[i];
        emit(options, eval_refs);
    }
    for (int i = 0; i < 4; ++i) {
        FixtureOptions options;
        options.id = "corrupt_00" + std::to_string(i);
        options.detection_score = scores_corrupt[i];
        options.corrupt_forearms = true;
        emit(options, eval_refs);
    }

    for (int i = 0; i < 3; ++i) {
        FixtureOptions options;
        options.id = "audit_clean_00" + std::to_string(i);
        emit(options, audit_refs);
    }
    for (int i = 0; i < 3; ++i) {
        FixtureOptions options;
        options.id = "audit_swapped_00" + std::to_string(i);
        options.swap_forearm_gt = true;
        emit(options, audit_refs);
    }
    {
        FixtureOptions options;
        options.id = "audit_crowd_000";
        options.crowd = true;
        emit(options, audit_refs);
    }
    {
        FixtureOptions options;
        options.id = "audit_badbox_000";
        options.bad_bbox = true;
        emit(options, audit_refs);
    }
    {
        FixtureOptions options;
        options.id = "audit_outside_000";
        options.points_outside = true;
        emit(options, audit_refs);
    }

    save_set((fs::path(root) / "sets" / "eval_suite.json").string(), "../mannequin.mesh.json",
             "../mannequin.embeddings.pct", eval_refs);
    save_set((fs::path(root) / "sets" / "audit_suite.json").string(), "../mannequin.mesh.json",
             "../mannequin.embeddings.pct", audit_refs);
    save_frames((fs::path(root) / "frames" / "dance.json").string(),
                make_frames(12, 1.0, 20260815));
}

} // namespace pccse::testkit
