// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#include "pccse/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace pccse {

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const double abx = b.x - a.x;
    const double aby = b.y - a.y;
    const double sq = abx * abx + aby * aby;
    if (sq == 0.0) return std::hypot(p.x - a.x, p.y - a.y);
    double t = ((p.x - a.x) * abx + (p.y - a.y) * aby) / sq;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * abx), p.y - (a.y + t * aby));
}

bool Capsule::contains(Point2 p) const {
    return point_segment_distance(p, a, b) <= radius;
}

const char* to_string(Facing facing) {
    switch (facing) {
    case Facing::frontal: return "frontal";
    case Facing::dorsal: return "dorsal";
    default: return "indeterminate";
    }
}

Facing quadrilateral_facing(Point2 ls, Point2 rs, Point2 rh, Point2 lh) {
    const Point2 poly[4] = {ls, rs, rh, lh};
    double twice_area = 0.0;
    for (int i = 0; i < 4; ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % 4];
        twice_area += p.x * q.y - q.x * p.y;
    }
    const double area = 0.5 * twice_area;
    if (std::abs(area) < 1.0) return Facing::indeterminate;
    return area < 0.0 ? Facing::frontal : Facing::dorsal;
}

LabelMap all_bits_label_map(const Mask& mask, uint32_t partition_count) {
    LabelMap lm(mask.width, mask.height, partition_count);
    const uint16_t all = lm.all_bits();
    for (uint32_t y = 0; y < mask.height; ++y)
        for (uint32_t x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) lm.at(x, y) = all;
    return lm;
}

namespace {

struct BoundedCapsule {
    Capsule capsule;
    double x0, y0, x1, y1; // bounding box, inflated by the radius

    explicit BoundedCapsule(Capsule c)
        : capsule(c), x0(std::min(c.a.x, c.b.x) - c.radius), y0(std::min(c.a.y, c.b.y) - c.radius),
          x1(std::max(c.a.x, c.b.x) + c.radius), y1(std::max(c.a.y, c.b.y) + c.radius) {}

    bool contains(Point2 p) const {
        if (p.x < x0 || p.x > x1 || p.y < y0 || p.y > y1) return false;
        return capsule.contains(p);
    }
};

bool point_in_quad(Point2 p, const Point2 quad[4]) {
    // Even-odd crossing test against the closed polygon.
    bool inside = false;
    for (int i = 0, j = 3; i < 4; j = i++) {
        const Point2& a = quad[i];
        const Point2& b = quad[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_at = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_at) inside = !inside;
        }
    }
    return inside;
}

// Whole-body finger/toe chains: consecutive pairs become capsules.
struct Chain {
    int partition;
    std::vector<int> ids;
};

std::vector<Chain> wholebody_chains() {
    std::vector<Chain> chains;
    for (int side = 0; side < 2; ++side) {
        const bool left = side == 0;
        const int wrist = left ? kp::left_wrist : kp::right_wrist;
        const int root = left ? kp::left_hand_root : kp::right_hand_root;
        const int hand = left ? parts::left_hand : parts::right_hand;
        for (int finger = 0; finger < 5; ++finger) {
            Chain c{hand, {wrist, root}};
            for (int k = 0; k < 4; ++k) c.ids.push_back(root + 1 + finger * 4 + k);
            chains.push_back(std::move(c));
        }
        const int ankle = left ? kp::left_ankle : kp::right_ankle;
        const int foot = left ? parts::left_foot : parts::right_foot;
        const int toes[3] = {left ? kp::left_big_toe : kp::right_big_toe,
                             left ? kp::left_small_toe : kp::right_small_toe,
                             left ? kp::left_heel : kp::right_heel};
        for (int t = 0; t < 3; ++t) chains.push_back({foot, {ankle, toes[t]}});
    }
    return chains;
}

} // namespace

LabelMap build_proximal_regions(const Skeleton2D& skeleton, double radius, const Mask& mask,
                                double hand_foot_radius_factor) {
    // Collapsed regions constrain nothing: every foreground pixel falls under
    // the all-bits rule, reproducing the unconstrained assignment.
    if (radius <= 0.0) return all_bits_label_map(mask, parts::count);

    std::vector<std::vector<BoundedCapsule>> capsules_of(parts::count);

    for (const auto& bone : skeleton.bones) {
        if (bone.is_quad_side) continue; // consumed by the torso construction
        if (skeleton.present(bone.a) && skeleton.present(bone.b))
            capsules_of[size_t(bone.partition)].emplace_back(
                Capsule{skeleton.point(bone.a), skeleton.point(bone.b), radius});
    }

    if (skeleton.kind == SkeletonKind::coco17) {
        const double disc = radius * hand_foot_radius_factor;
        const std::pair<int, int> centers[4] = {{kp::left_wrist, parts::left_hand},
                                                {kp::right_wrist, parts::right_hand},
                                                {kp::left_ankle, parts::left_foot},
                                                {kp::right_ankle, parts::right_foot}};
        for (const auto& [id, partition] : centers) {
            if (skeleton.present(id))
                capsules_of[size_t(partition)].emplace_back(
                    Capsule{skeleton.point(id), skeleton.point(id), disc});
        }
    } else {
        for (const auto& chain : wholebody_chains()) {
            for (size_t i = 0; i + 1 < chain.ids.size(); ++i) {
                const int a = chain.ids[i], b = chain.ids[i + 1];
                if (skeleton.present(a) && skeleton.present(b))
                    capsules_of[size_t(chain.partition)].emplace_back(
                        Capsule{skeleton.point(a), skeleton.point(b), radius});
            }
        }
    }

    // Torso: quadrilateral interior plus capsules along its two lateral sides.
    Point2 quad[4];
    bool torso_built = false;
    Facing facing = Facing::indeterminate;
    std::vector<BoundedCapsule> torso_sides;
    if (skeleton.present(kp::left_shoulder) && skeleton.present(kp::right_shoulder) &&
        skeleton.present(kp::right_hip) && skeleton.present(kp::left_hip)) {
        quad[0] = skeleton.point(kp::left_shoulder);
        quad[1] = skeleton.point(kp::right_shoulder);
        quad[2] = skeleton.point(kp::right_hip);
        quad[3] = skeleton.point(kp::left_hip);
        facing = quadrilateral_facing(quad[0], quad[1], quad[2], quad[3]);
        torso_sides.emplace_back(Capsule{quad[0], quad[3], radius}); // left side
        torso_sides.emplace_back(Capsule{quad[1], quad[2], radius}); // right side
        torso_built = true;
    }

    // A body part whose keypoints did not yield a single region is missing:
    // it stays mappable from any foreground pixel. The head always is.
    uint16_t missing_bits = uint16_t(1u << parts::head);
    for (int p = 0; p < parts::count; ++p) {
        if (p == parts::head || p == parts::torso_front || p == parts::torso_back) continue;
        if (capsules_of[size_t(p)].empty()) missing_bits |= uint16_t(1u << p);
    }
    if (!torso_built)
        missing_bits |= uint16_t((1u << parts::torso_front) | (1u << parts::torso_back));

    const uint16_t both_torso = uint16_t((1u << parts::torso_front) | (1u << parts::torso_back));
    const uint16_t facing_bits = facing == Facing::frontal ? uint16_t(1u << parts::torso_front)
                                 : facing == Facing::dorsal ? uint16_t(1u << parts::torso_back)
                                                            : both_torso;

    LabelMap lm(mask.width, mask.height, parts::count);
    const uint16_t all = lm.all_bits();
    for (uint32_t y = 0; y < mask.height; ++y) {
        for (uint32_t x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            const Point2 p{double(x), double(y)};
            uint16_t bits = missing_bits;
            bool covered = false;
            for (int part = 0; part < parts::count; ++part) {
                for (const auto& c : capsules_of[size_t(part)]) {
                    if (c.contains(p)) {
                        bits |= uint16_t(1u << part);
                        covered = true;
                        break;
                    }
                }
            }
            if (torso_built) {
                if (point_in_quad(p, quad)) {
                    bits |= facing_bits;
                    covered = true;
                } else if (torso_sides[0].contains(p) || torso_sides[1].contains(p)) {
                    bits |= both_torso;
                    covered = true;
                }
            }
            lm.at(x, y) = covered ? bits : all;
        }
    }
    return lm;
}

} // namespace pccse
