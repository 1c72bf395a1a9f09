// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. Each numbered criterion prints one
// [PASS]/[FAIL] line; the exit code is the number of failures.

#include "pccse/assign.hpp"
#include "pccse/eval.hpp"
#include "pccse/geometry.hpp"
#include "pccse/pipeline.hpp"
#include "pccse/quality.hpp"
#include "pccse/scale.hpp"
#include "testkit/testkit.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace pccse;
namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool condition, const std::string& what) {
    if (!condition) throw Failure(what);
}

template <typename T>
std::string str(const T& value) {
    std::ostringstream os;
    os << value;
    return os.str();
}

const testkit::Mannequin& mannequin() {
    static const testkit::Mannequin m = testkit::make_mannequin();
    return m;
}

InstanceInput fixture(const std::string& id, bool corrupt) {
    testkit::FixtureOptions options;
    options.id = id;
    options.corrupt_forearms = corrupt;
    return testkit::make_instance(mannequin(), options);
}

// Exhaustive per-pixel reference: scan every vertex of every allowed
// partition.
UvMap brute_force(const InstanceInput& instance, const CanonicalMesh& mesh,
                  const EmbeddingSet& embeddings, const LabelMap& labels) {
    UvMap out(instance.width(), instance.height());
    for (uint32_t y = 0; y < instance.height(); ++y) {
        for (uint32_t x = 0; x < instance.width(); ++x) {
            if (!instance.foreground(x, y)) continue;
            const uint16_t bits = labels.at(x, y);
            const float* px = instance.embedding_at(x, y);
            uint32_t best = UvMap::no_vertex;
            double best_score = -std::numeric_limits<double>::infinity();
            for (uint32_t v = 0; v < mesh.vertex_count(); ++v) {
                if (!((bits >> mesh.partition_of[v]) & 1)) continue;
                const float* row = embeddings.row(v);
                double s = 0.0;
                for (uint32_t d = 0; d < embeddings.dim; ++d)
                    s += double(px[d]) * double(row[d]);
                if (s > best_score) {
                    best_score = s;
                    best = v;
                }
            }
            const size_t i = size_t(y) * out.width + x;
            out.vertex[i] = best;
            out.score[i] = float(best_score);
        }
    }
    return out;
}

std::vector<std::vector<double>> floyd_warshall(const CanonicalMesh& mesh) {
    const size_t n = mesh.vertices.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (size_t i = 0; i < n; ++i) d[i][i] = 0.0;
    auto edge = [&](uint32_t a, uint32_t b) {
        if (a == b) return;
        const auto& pa = mesh.vertices[a];
        const auto& pb = mesh.vertices[b];
        const double w =
            std::sqrt((pa.x - pb.x) * (pa.x - pb.x) + (pa.y - pb.y) * (pa.y - pb.y) +
                      (pa.z - pb.z) * (pa.z - pb.z));
        if (w < d[a][b]) d[a][b] = d[b][a] = w;
    };
    for (const auto& f : mesh.faces) {
        edge(f[0], f[1]);
        edge(f[1], f[2]);
        edge(f[2], f[0]);
    }
    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < n; ++i) {
            if (d[i][k] == inf) continue;
            for (size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
        }
    return d;
}

std::vector<uint8_t> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure("cannot read " + path);
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                                std::istreambuf_iterator<char>());
}

// ---------------------------------------------------------------------------

// 1. Constrained kernels equal an exhaustive reference on randomized cases.
void criterion_oracle_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    for (uint64_t seed = 1; seed <= 120; ++seed) {
        const testkit::RandomCase rc = testkit::make_random_case(seed);
        const UvMap reference = brute_force(rc.instance, rc.mesh, rc.embeddings, rc.labels);
        const UvMap flat = assign_constrained(rc.instance, rc.mesh, rc.embeddings, rc.labels);
        const UvMap blocked =
            assign_constrained_blocked(rc.instance, rc.mesh, rc.embeddings, rc.labels);
        expect(flat.vertex == reference.vertex,
               "flat kernel diverges from brute force on seed " + str(seed));
        expect(blocked.vertex == reference.vertex,
               "blocked kernel diverges from brute force on seed " + str(seed));
        expect(flat.score == reference.score,
               "flat scores diverge from brute force on seed " + str(seed));
        expect(blocked.score == reference.score,
               "blocked scores diverge from brute force on seed " + str(seed));
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    expect(elapsed < 60.0, "oracle sweep took " + str(elapsed) + "s, budget is 60s");
}

// 2. All-bits, zero radius and giant radius all reproduce the baseline.
void criterion_degenerate_limits() {
    const auto& m = mannequin();
    EngineConfig config;
    for (const bool corrupt : {false, true}) {
        const InstanceInput instance = fixture(corrupt ? "limit_corrupt" : "limit_clean", corrupt);
        const UvMap baseline =
            run_assign(instance, m.mesh, m.embeddings, config, AssignMode::baseline).uv;

        const LabelMap all = all_bits_label_map(instance.mask, m.mesh.partition_count());
        for (const AssignMode mode : {AssignMode::constrained, AssignMode::blocked}) {
            const UvMap with_all =
                run_assign(instance, m.mesh, m.embeddings, config, mode, &all).uv;
            expect(with_all.vertex == baseline.vertex && with_all.score == baseline.score,
                   std::string("all-bits ") + to_string(mode) + " deviates from baseline");

            EngineConfig zero = config;
            zero.delta = 0.0;
            const AssignOutcome zero_outcome =
                run_assign(instance, m.mesh, m.embeddings, zero, mode);
            expect(zero_outcome.all_bits_fallback, "zero delta did not fall back to all bits");
            expect(zero_outcome.uv.vertex == baseline.vertex &&
                       zero_outcome.uv.score == baseline.score,
                   std::string("zero-delta ") + to_string(mode) + " deviates from baseline");

            EngineConfig huge = config;
            huge.delta = 150.0; // far beyond the 96x96 image diagonal
            const UvMap huge_uv = run_assign(instance, m.mesh, m.embeddings, huge, mode).uv;
            expect(huge_uv.vertex == baseline.vertex && huge_uv.score == baseline.score,
                   std::string("giant-delta ") + to_string(mode) + " deviates from baseline");
        }
    }
}

// 3. Constraints help on the corrupted suite, most at the tuned width.
void criterion_direction_of_effect() {
    SetInput set;
    set.mesh = mannequin().mesh;
    set.embeddings = mannequin().embeddings;
    for (int i = 0; i < 4; ++i) set.instances.push_back(fixture("clean_" + str(i), false));
    for (int i = 0; i < 4; ++i) set.instances.push_back(fixture("corrupt_" + str(i), true));

    EngineConfig config;
    const double baseline_ap = evaluate_set(set, config, AssignMode::baseline).ap;
    const double tuned_ap = evaluate_set(set, config, AssignMode::blocked).ap;
    EngineConfig narrow = config;
    narrow.delta = 0.02;
    const double narrow_ap = evaluate_set(set, narrow, AssignMode::blocked).ap;
    EngineConfig wide = config;
    wide.delta = 0.5;
    const double wide_ap = evaluate_set(set, wide, AssignMode::blocked).ap;

    expect(tuned_ap > baseline_ap, "AP(0.08)=" + str(tuned_ap) +
                                       " not above baseline AP=" + str(baseline_ap));
    expect(tuned_ap > narrow_ap,
           "AP(0.08)=" + str(tuned_ap) + " not above AP(0.02)=" + str(narrow_ap));
    expect(tuned_ap > wide_ap,
           "AP(0.08)=" + str(tuned_ap) + " not above AP(0.5)=" + str(wide_ap));
}

// 4. GPS closed forms, independent recomputation and all-pairs geodesics.
void criterion_gps_correctness() {
    const double kappa = 0.255;

    {
        CanonicalMesh two;
        two.vertices = {{0, 0, 0}, {kappa * std::sqrt(2.0 * std::log(2.0)), 0, 0}};
        two.faces = {{0, 1, 1}};
        two.uv = {{0.f, 0.f}, {1.f, 1.f}};
        two.partition_of = {0, 0};
        two.partition_names = {"pair"};
        const GeodesicOracle oracle(two);

        InstanceInput probe;
        probe.id = "probe";
        probe.mask = Mask(1, 1, 1);
        probe.embedding_dim = 1;
        probe.pixel_embeddings = {1.f};
        UvMap uv(1, 1);
        uv.vertex = {0};
        uv.score = {1.f};

        probe.gt_points = {{0, 0, 0}};
        const double at_zero = geodesic_point_similarity(probe, uv, oracle, kappa).gps;
        expect(std::abs(at_zero - 1.0) <= 1e-9, "GPS at zero distance is " + str(at_zero));

        probe.gt_points = {{0, 0, 1}};
        const double at_half = geodesic_point_similarity(probe, uv, oracle, kappa).gps;
        expect(std::abs(at_half - 0.5) <= 1e-9, "GPS at half-distance is " + str(at_half));
    }

    const auto& m = mannequin();
    const auto fw = floyd_warshall(m.mesh);
    const GeodesicOracle oracle(m.mesh);
    for (uint32_t a = 0; a < m.mesh.vertex_count(); ++a) {
        const auto& from_a = oracle.distances_from(a);
        for (uint32_t b = 0; b < m.mesh.vertex_count(); ++b)
            expect(std::abs(from_a[b] - fw[a][b]) <= 1e-9,
                   "geodesic (" + str(a) + "," + str(b) + ") = " + str(from_a[b]) +
                       ", all-pairs oracle says " + str(fw[a][b]));
    }

    EngineConfig config;
    for (const bool corrupt : {false, true}) {
        const InstanceInput instance = fixture(corrupt ? "gps_corrupt" : "gps_clean", corrupt);
        const UvMap uv =
            run_assign(instance, m.mesh, m.embeddings, config, AssignMode::blocked).uv;
        const double reported = geodesic_point_similarity(instance, uv, oracle, kappa).gps;

        double sum = 0.0;
        for (const auto& gt : instance.gt_points) {
            double kernel = 0.0;
            if (gt.x >= 0 && gt.y >= 0 && uint32_t(gt.x) < uv.width &&
                uint32_t(gt.y) < uv.height && uv.foreground(uint32_t(gt.x), uint32_t(gt.y))) {
                const uint32_t predicted = uv.vertex_at(uint32_t(gt.x), uint32_t(gt.y));
                const double g = fw[predicted][gt.vertex];
                kernel = std::exp(-(g * g) / (2.0 * kappa * kappa));
            }
            sum += kernel;
        }
        const double recomputed = sum / double(instance.gt_points.size());
        expect(std::abs(reported - recomputed) <= 1e-9,
               "GPS " + str(reported) + " != scalar recomputation " + str(recomputed));
    }
}

// 5. Geometry: analytic distances, facing mirror flips, usable label sets.
void criterion_geometry_properties() {
    const Point2 a{0, 0}, b{10, 0};
    expect(point_segment_distance({5, 0}, a, b) == 0.0, "on-segment distance not zero");
    expect(point_segment_distance({13, 4}, a, b) == 5.0, "3-4-5 corner distance wrong");
    expect(point_segment_distance({5, 7}, a, b) == 7.0, "perpendicular distance wrong");
    expect(point_segment_distance({3, 4}, {0, 0}, {0, 0}) == 5.0, "degenerate segment wrong");

    std::mt19937_64 rng(20260815);
    std::uniform_real_distribution<double> coord(0.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        const Point2 ls{coord(rng), coord(rng)}, rs{coord(rng), coord(rng)};
        const Point2 rh{coord(rng), coord(rng)}, lh{coord(rng), coord(rng)};
        const Facing facing = quadrilateral_facing(ls, rs, rh, lh);
        const Facing mirrored = quadrilateral_facing({-ls.x, ls.y}, {-rs.x, rs.y},
                                                     {-rh.x, rh.y}, {-lh.x, lh.y});
        Facing flipped = facing;
        if (facing == Facing::frontal) flipped = Facing::dorsal;
        else if (facing == Facing::dorsal) flipped = Facing::frontal;
        expect(mirrored == flipped,
               "facing did not flip under mirroring on random quad " + str(i));
    }

    for (uint64_t seed = 1; seed <= 100; ++seed) {
        const Skeleton2D skeleton = testkit::random_skeleton(seed);
        Mask mask(48, 48, 0);
        for (uint32_t y = 0; y < mask.height; ++y)
            for (uint32_t x = 0; x < mask.width; ++x)
                mask.at(x, y) = ((x * 13 + y * 29 + seed * 7) % 11) < 6 ? 1 : 0;
        const double radius = capsule_radius(estimate_scale(skeleton), 0.08);
        const LabelMap labels = build_proximal_regions(skeleton, radius, mask, 2.0);
        for (uint32_t y = 0; y < mask.height; ++y)
            for (uint32_t x = 0; x < mask.width; ++x) {
                if (mask.at(x, y)) {
                    expect(labels.at(x, y) != 0, "empty label set at a foreground pixel, seed " +
                                                     str(seed));
                    expect(labels.allows(x, y, parts::head),
                           "head missing from a label set, seed " + str(seed));
                } else {
                    expect(labels.at(x, y) == 0, "background pixel got labels, seed " + str(seed));
                }
            }
    }
}

// 6. Scale invariances and height stability over jittered frames.
void criterion_scale_invariances() {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    std::uniform_real_distribution<double> shift(-500.0, 500.0);
    std::uniform_real_distribution<double> zoom(0.1, 10.0);

    for (uint64_t seed = 1; seed <= 1000; ++seed) {
        const Skeleton2D base = testkit::random_skeleton(seed);
        const double s0 = estimate_scale(base).pixels_per_unit;

        const double t = angle(rng), tx = shift(rng), ty = shift(rng);
        const double c = std::cos(t), s = std::sin(t);
        Skeleton2D moved = base;
        for (auto& kpnt : moved.keypoints) {
            const double x = kpnt.x, y = kpnt.y;
            kpnt.x = c * x - s * y + tx;
            kpnt.y = s * x + c * y + ty;
        }
        const double s1 = estimate_scale(moved).pixels_per_unit;
        expect(std::abs(s1 - s0) <= 1e-9 * std::max(1.0, std::abs(s0)),
               "rigid motion changed the scale on seed " + str(seed) + ": " + str(s0) + " vs " +
                   str(s1));

        const double lambda = zoom(rng);
        Skeleton2D zoomed = base;
        for (auto& kpnt : zoomed.keypoints) {
            kpnt.x *= lambda;
            kpnt.y *= lambda;
        }
        const double s2 = estimate_scale(zoomed).pixels_per_unit;
        expect(std::abs(s2 - lambda * s0) <= 1e-9 * std::max(1.0, lambda * s0),
               "zoom did not scale the estimate on seed " + str(seed));
    }

    const FramesInput frames = testkit::make_frames(12, 1.0, 20260815);
    EngineConfig config;
    const std::vector<FrameHeight> heights = height_track(frames, mannequin().mesh, config);
    expect(heights.size() == 12, "expected 12 frames");
    double mean = 0.0;
    for (const auto& h : heights) {
        expect(h.pixels_per_unit > 0.0, "frame " + h.id + " lost its scale");
        mean += h.height_px;
    }
    mean /= double(heights.size());
    double var = 0.0;
    for (const auto& h : heights) var += (h.height_px - mean) * (h.height_px - mean);
    var /= double(heights.size());
    const double cov = std::sqrt(var) / mean;
    expect(cov < 0.10, "height coefficient of variation " + str(cov) + " is not below 10%");
}

// 7. Laterality detector precision/recall on fixtures; idempotent removal.
void criterion_quality_auditor() {
    const auto& m = mannequin();
    std::vector<InstanceInput> clean, swapped;
    for (int i = 0; i < 5; ++i) {
        testkit::FixtureOptions c;
        c.id = "clean_" + str(i);
        clean.push_back(testkit::make_instance(m, c));
        testkit::FixtureOptions s;
        s.id = "swapped_" + str(i);
        s.swap_forearm_gt = true;
        swapped.push_back(testkit::make_instance(m, s));
    }

    auto laterality_fired = [&](const InstanceInput& instance) {
        const InstanceAudit audit = audit_instance(instance, m.mesh, {});
        expect(audit.auditable && audit.skeletal_audited,
               "fixture " + instance.id + " was not fully audited");
        for (const auto& flag : audit.part_flags)
            if (flag.reason == "laterality") return true;
        return false;
    };
    for (const auto& instance : swapped)
        expect(laterality_fired(instance), "detector missed mirrored fixture " + instance.id);
    for (const auto& instance : clean)
        expect(!laterality_fired(instance), "detector fired on clean fixture " + instance.id);

    std::vector<InstanceInput> suite = clean;
    suite.insert(suite.end(), swapped.begin(), swapped.end());
    const ConsistencyReport report = build_removal_list(suite, m.mesh, {});
    const auto once = apply_removal(suite, m.mesh, report.removals);
    const auto twice = apply_removal(once, m.mesh, report.removals);
    expect(once.size() == twice.size(), "removal changed the instance count on reapplication");
    for (size_t i = 0; i < once.size(); ++i) {
        expect(once[i].id == twice[i].id, "removal reordered instances on reapplication");
        expect(once[i].gt_points.size() == twice[i].gt_points.size(),
               "removal dropped more points on reapplication for " + once[i].id);
    }
    expect(report.flagged_instances == swapped.size(),
           "expected exactly the mirrored fixtures to be flagged");
}

// 8. Every CLI subcommand is byte-reproducible on the corpus.
void criterion_cli_reproducibility() {
    // The harness passes explicit paths; direct runs fall back to the build
    // tree layout next to this binary.
    const fs::path exe_dir = fs::read_symlink("/proc/self/exe").parent_path();
    const char* cli_env = std::getenv("PCCSE_CLI");
    const char* corpus_env = std::getenv("CORPUS_DIR");
    const std::string cli = cli_env ? cli_env : (exe_dir / ".." / "tools" / "pccse").string();
    const std::string corpus = corpus_env ? corpus_env : (exe_dir / ".." / "corpus").string();
    expect(fs::exists(cli), "cli binary not found: " + cli);
    expect(fs::exists(corpus), "corpus not found: " + corpus);

    const fs::path base = fs::temp_directory_path() / "pccse_acceptance_cli";
    fs::remove_all(base);

    // Commands run from inside their run directory and write relative output
    // paths, so the two runs' stdout and files can be compared byte for byte.
    auto run = [&](const fs::path& dir, const std::string& args) {
        fs::create_directories(dir);
        const std::string command = "cd \"" + dir.string() + "\" && \"" + cli + "\" " + args +
                                    " > stdout.log 2>&1";
        expect(std::system(command.c_str()) == 0, "command failed: " + command);
    };

    struct Step {
        std::string name;
        std::string args;
        std::vector<std::string> outputs;
    };
    const std::string mesh = corpus + "/mannequin.mesh.json";
    const std::string embeddings = corpus + "/mannequin.embeddings.pct";
    const std::vector<Step> steps = {
        {"assign",
         "assign --instance " + corpus + "/instances/corrupt_000.json --mesh " + mesh +
             " --embeddings " + embeddings + " --mode blocked --out uv --render uv.png",
         {"uv.vertices.pct", "uv.scores.pct", "uv.json", "uv.summary.json", "uv.png",
          "stdout.log"}},
        {"regions",
         "regions --instance " + corpus + "/instances/clean_000.json --mesh " + mesh +
             " --out labels.pct",
         {"labels.pct", "stdout.log"}},
        {"evaluate",
         "evaluate --set " + corpus + "/sets/eval_suite.json --mode blocked --report eval.json",
         {"eval.json", "stdout.log"}},
        {"check",
         "check --set " + corpus + "/sets/audit_suite.json --report audit.json "
         "--removal removals.json",
         {"audit.json", "removals.json", "stdout.log"}},
        {"render",
         "render --uv uv --mesh " + mesh + " --out render.png",
         {"render.png", "stdout.log"}},
        {"ablate-delta",
         "ablate-delta --set " + corpus + "/sets/eval_suite.json --deltas 0.02,0.08 "
         "--baseline --out ablation.csv",
         {"ablation.csv", "stdout.log"}},
        {"height-track",
         "height-track --frames " + corpus + "/frames/dance.json --mesh " + mesh +
             " --out heights.csv",
         {"heights.csv", "stdout.log"}},
    };

    for (const Step& step : steps) {
        const fs::path run_a = base / (step.name + "_a");
        const fs::path run_b = base / (step.name + "_b");
        if (step.name == "render") {
            // Seed both run directories with an identical uv map to render.
            for (const fs::path& dir : {run_a, run_b}) {
                fs::create_directories(dir);
                for (const char* suffix : {".vertices.pct", ".scores.pct", ".json"})
                    fs::copy_file(base / "assign_a" / ("uv" + std::string(suffix)),
                                  dir / ("uv" + std::string(suffix)));
            }
        }
        run(run_a, step.args);
        run(run_b, step.args);
        for (const std::string& file : step.outputs) {
            const auto a = slurp((run_a / file).string());
            const auto b = slurp((run_b / file).string());
            expect(a == b, step.name + ": " + file + " differs between runs (" + str(a.size()) +
                               " vs " + str(b.size()) + " bytes)");
            expect(!a.empty(), step.name + ": " + file + " is empty");
        }
    }
}

} // namespace

int main() {
    struct Criterion {
        const char* label;
        void (*fn)();
    };
    const Criterion criteria[] = {
        {"1. oracle equivalence of constrained kernels", criterion_oracle_equivalence},
        {"2. degenerate limits reproduce the baseline", criterion_degenerate_limits},
        {"3. direction of effect on the swapped-limb suite", criterion_direction_of_effect},
        {"4. gps and geodesic correctness", criterion_gps_correctness},
        {"5. geometry properties", criterion_geometry_properties},
        {"6. scale invariances and height stability", criterion_scale_invariances},
        {"7. quality auditor precision and idempotence", criterion_quality_auditor},
        {"8. cli byte reproducibility", criterion_cli_reproducibility},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        try {
            criterion.fn();
            std::printf("[PASS] %s\n", criterion.label);
        } catch (const std::exception& e) {
            ++failures;
            std::printf("[FAIL] %s: %s\n", criterion.label, e.what());
        }
        std::fflush(stdout);
    }
    return failures;
}
