// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

// Exercises the shared library through its C surface only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pccse/pccse.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string corpus() {
    const char* dir = std::getenv("CORPUS_DIR");
    REQUIRE(dir != nullptr);
    return dir;
}

const fs::path& scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "pccse_capi_scratch";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::vector<uint8_t> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                                std::istreambuf_iterator<char>());
}

struct Loaded {
    pccse_mesh* mesh = nullptr;
    pccse_embeddings* embeddings = nullptr;
    pccse_instance* instance = nullptr;

    ~Loaded() {
        pccse_instance_free(instance);
        pccse_embeddings_free(embeddings);
        pccse_mesh_free(mesh);
    }
};

void load_fixture(Loaded& l, const std::string& instance_name) {
    REQUIRE(pccse_mesh_load((corpus() + "/mannequin.mesh.json").c_str(), &l.mesh) == PCCSE_OK);
    REQUIRE(pccse_embeddings_load((corpus() + "/mannequin.embeddings.pct").c_str(),
                                  &l.embeddings) == PCCSE_OK);
    REQUIRE(pccse_instance_load((corpus() + "/instances/" + instance_name + ".json").c_str(),
                                &l.instance) == PCCSE_OK);
}

} // namespace

TEST_CASE("defaults structs are populated") {
    pccse_config config;
    pccse_config_defaults(&config);
    CHECK(config.delta == doctest::Approx(0.08));
    CHECK(config.kappa == doctest::Approx(0.255));
    CHECK(config.presence_threshold == doctest::Approx(0.3));
    CHECK(config.hand_foot_radius_factor == doctest::Approx(2.0));
    CHECK(config.canonical_height == 0.0);

    pccse_audit_thresholds thresholds;
    pccse_audit_thresholds_defaults(&thresholds);
    CHECK(thresholds.bone_distance_max == doctest::Approx(0.25));
    CHECK(thresholds.points_in_mask_min == doctest::Approx(0.7));
    CHECK(thresholds.mask_in_bbox_min == doctest::Approx(0.8));
    CHECK(thresholds.laterality_min_distance == doctest::Approx(0.10));
}

TEST_CASE("config files load through the C surface") {
    pccse_config config;
    pccse_config_defaults(&config);
    config.delta = -1.0;
    REQUIRE(pccse_config_load((corpus() + "/config.json").c_str(), &config) == PCCSE_OK);
    CHECK(config.delta == doctest::Approx(0.08));

    const pccse_status status = pccse_config_load("/nonexistent/config.json", &config);
    CHECK(status == PCCSE_ERR_IO);
    CHECK(std::strlen(pccse_last_error()) > 0);
}

TEST_CASE("mesh, embeddings and instance expose their shapes") {
    Loaded l;
    load_fixture(l, "clean_000");
    CHECK(pccse_mesh_vertex_count(l.mesh) > 0);
    CHECK(pccse_mesh_partition_count(l.mesh) == 15);
    CHECK(pccse_mesh_canonical_height(l.mesh) == doctest::Approx(1.70));
    CHECK(pccse_embeddings_count(l.embeddings) == pccse_mesh_vertex_count(l.mesh));
    CHECK(pccse_embeddings_dim(l.embeddings) > 0);
    CHECK(pccse_instance_width(l.instance) == 96);
    CHECK(pccse_instance_height(l.instance) == 96);

    int ok = 0;
    char* report = nullptr;
    REQUIRE(pccse_validate(l.mesh, l.embeddings, &ok, &report) == PCCSE_OK);
    CHECK(ok == 1);
    REQUIRE(report != nullptr);
    CHECK(std::string(report).find("issues") != std::string::npos);
    pccse_string_free(report);
}

TEST_CASE("scale estimation reports the dominant bone") {
    Loaded l;
    load_fixture(l, "clean_000");
    pccse_config config;
    pccse_config_defaults(&config);
    pccse_scale scale;
    REQUIRE(pccse_estimate_scale(l.instance, l.mesh, &config, &scale) == PCCSE_OK);
    CHECK(scale.pixels_per_unit > 0.0);
    CHECK(std::strlen(scale.contributing_bone) > 0);
}

TEST_CASE("label maps build, save and load") {
    Loaded l;
    load_fixture(l, "clean_000");
    pccse_config config;
    pccse_config_defaults(&config);

    pccse_labelmap* labels = nullptr;
    REQUIRE(pccse_labelmap_build(l.instance, l.mesh, &config, &labels) == PCCSE_OK);
    const std::string path = (scratch() / "labels.pct").string();
    REQUIRE(pccse_labelmap_save(labels, path.c_str()) == PCCSE_OK);

    pccse_labelmap* back = nullptr;
    REQUIRE(pccse_labelmap_load(path.c_str(), l.mesh, &back) == PCCSE_OK);
    const uint32_t w = pccse_instance_width(l.instance);
    const uint32_t h = pccse_instance_height(l.instance);
    for (uint32_t y = 0; y < h; y += 7)
        for (uint32_t x = 0; x < w; x += 7)
            CHECK(pccse_labelmap_at(back, x, y) == pccse_labelmap_at(labels, x, y));
    pccse_labelmap_free(back);

    pccse_labelmap* all = nullptr;
    REQUIRE(pccse_labelmap_all_bits(l.instance, l.mesh, &all) == PCCSE_OK);
    // Foreground pixels carry every partition bit, background none. The built
    // map above has the same support, so use it to pick a foreground pixel.
    size_t foreground = 0;
    for (uint32_t y = 0; y < h; ++y)
        for (uint32_t x = 0; x < w; ++x) {
            if (pccse_labelmap_at(labels, x, y) == 0) {
                CHECK(pccse_labelmap_at(all, x, y) == 0);
            } else {
                CHECK(pccse_labelmap_at(all, x, y) == 0x7fff);
                ++foreground;
            }
        }
    CHECK(foreground > 0);
    pccse_labelmap_free(all);
    pccse_labelmap_free(labels);
}

TEST_CASE("assignment modes run end to end") {
    Loaded l;
    load_fixture(l, "corrupt_000");
    pccse_config config;
    pccse_config_defaults(&config);

    pccse_uvmap* baseline = nullptr;
    REQUIRE(pccse_assign(l.instance, l.mesh, l.embeddings, &config, PCCSE_ASSIGN_BASELINE,
                         nullptr, &baseline, nullptr) == PCCSE_OK);

    char* summary = nullptr;
    pccse_uvmap* blocked = nullptr;
    REQUIRE(pccse_assign(l.instance, l.mesh, l.embeddings, &config, PCCSE_ASSIGN_BLOCKED, nullptr,
                         &blocked, &summary) == PCCSE_OK);
    REQUIRE(summary != nullptr);
    CHECK(std::string(summary).find("\"mode\": \"blocked\"") != std::string::npos);
    pccse_string_free(summary);

    pccse_uvmap* constrained = nullptr;
    REQUIRE(pccse_assign(l.instance, l.mesh, l.embeddings, &config, PCCSE_ASSIGN_CONSTRAINED,
                         nullptr, &constrained, nullptr) == PCCSE_OK);

    const uint32_t w = pccse_uvmap_width(blocked);
    const uint32_t h = pccse_uvmap_height(blocked);
    CHECK(w == pccse_instance_width(l.instance));
    CHECK(h == pccse_instance_height(l.instance));

    // Blocked and flat agree everywhere; the corrupted forearms force the
    // constrained result away from the baseline somewhere.
    bool differs = false;
    for (uint32_t y = 0; y < h; ++y) {
        for (uint32_t x = 0; x < w; ++x) {
            REQUIRE(pccse_uvmap_vertex_at(blocked, x, y) ==
                    pccse_uvmap_vertex_at(constrained, x, y));
            if (pccse_uvmap_vertex_at(blocked, x, y) != pccse_uvmap_vertex_at(baseline, x, y))
                differs = true;
        }
    }
    CHECK(differs);

    const std::string prefix = (scratch() / "uv").string();
    REQUIRE(pccse_uvmap_save(blocked, prefix.c_str()) == PCCSE_OK);
    pccse_uvmap* loaded = nullptr;
    REQUIRE(pccse_uvmap_load(prefix.c_str(), &loaded) == PCCSE_OK);
    CHECK(pccse_uvmap_vertex_at(loaded, 48, 48) == pccse_uvmap_vertex_at(blocked, 48, 48));

    const std::string png = (scratch() / "uv.png").string();
    REQUIRE(pccse_render_png(blocked, l.mesh, png.c_str()) == PCCSE_OK);
    CHECK(slurp(png).size() > 8);

    pccse_uvmap_free(loaded);
    pccse_uvmap_free(constrained);
    pccse_uvmap_free(blocked);
    pccse_uvmap_free(baseline);
}

TEST_CASE("set evaluation and auditing produce reports") {
    pccse_config config;
    pccse_config_defaults(&config);

    double baseline_ap = 0.0, blocked_ap = 0.0;
    const std::string report_a = (scratch() / "eval_baseline.json").string();
    const std::string report_b = (scratch() / "eval_blocked.json").string();
    REQUIRE(pccse_evaluate_set((corpus() + "/sets/eval_suite.json").c_str(), &config,
                               PCCSE_ASSIGN_BASELINE, nullptr, report_a.c_str(),
                               &baseline_ap) == PCCSE_OK);
    REQUIRE(pccse_evaluate_set((corpus() + "/sets/eval_suite.json").c_str(), &config,
                               PCCSE_ASSIGN_BLOCKED, nullptr, report_b.c_str(),
                               &blocked_ap) == PCCSE_OK);
    CHECK(blocked_ap > baseline_ap);
    CHECK(slurp(report_b).size() > 2);

    pccse_audit_thresholds thresholds;
    pccse_audit_thresholds_defaults(&thresholds);
    const std::string audit_report = (scratch() / "audit.json").string();
    const std::string removal = (scratch() / "removals.json").string();
    size_t flagged = 0;
    REQUIRE(pccse_check_set((corpus() + "/sets/audit_suite.json").c_str(), &config, &thresholds,
                            audit_report.c_str(), removal.c_str(), &flagged) == PCCSE_OK);
    CHECK(flagged > 0);

    // Evaluating with the removal list applied still works.
    double cleaned_ap = 0.0;
    const std::string report_c = (scratch() / "eval_cleaned.json").string();
    REQUIRE(pccse_evaluate_set((corpus() + "/sets/audit_suite.json").c_str(), &config,
                               PCCSE_ASSIGN_BLOCKED, removal.c_str(), report_c.c_str(),
                               &cleaned_ap) == PCCSE_OK);
    CHECK(cleaned_ap >= 0.0);
    CHECK(cleaned_ap <= 100.0);
}

TEST_CASE("delta ablation and height tracking write csv") {
    pccse_config config;
    pccse_config_defaults(&config);
    const double deltas[3] = {0.02, 0.08, 0.5};
    const std::string csv = (scratch() / "ablation.csv").string();
    REQUIRE(pccse_ablate_delta((corpus() + "/sets/eval_suite.json").c_str(), &config, deltas, 3,
                               1, csv.c_str()) == PCCSE_OK);
    const auto bytes = slurp(csv);
    const std::string text(bytes.begin(), bytes.end());
    CHECK(text.find("delta,ap") != std::string::npos);
    CHECK(text.find("baseline") != std::string::npos);
    CHECK(text.find("0.08") != std::string::npos);

    double cov = -1.0;
    const std::string heights = (scratch() / "heights.csv").string();
    REQUIRE(pccse_height_track((corpus() + "/frames/dance.json").c_str(),
                               (corpus() + "/mannequin.mesh.json").c_str(), &config,
                               heights.c_str(), &cov) == PCCSE_OK);
    CHECK(cov >= 0.0);
    CHECK(cov < 0.10);
    const auto hbytes = slurp(heights);
    const std::string htext(hbytes.begin(), hbytes.end());
    CHECK(htext.find("frame,pixels_per_unit,bone,height_px") != std::string::npos);
}

TEST_CASE("failures set the thread-local error message") {
    pccse_mesh* mesh = nullptr;
    CHECK(pccse_mesh_load("/nonexistent/mesh.json", &mesh) == PCCSE_ERR_IO);
    CHECK(mesh == nullptr);
    CHECK(std::string(pccse_last_error()).find("nonexistent") != std::string::npos);

    // Invalid arguments are rejected before any work happens.
    CHECK(pccse_mesh_load(nullptr, &mesh) == PCCSE_ERR_INVALID_ARGUMENT);
    CHECK(pccse_mesh_load("/tmp/x.json", nullptr) == PCCSE_ERR_INVALID_ARGUMENT);

    // A malformed file is a format error.
    const std::string bad = (scratch() / "bad_mesh.json").string();
    std::ofstream(bad) << "{\"vertices\": 3}";
    CHECK(pccse_mesh_load(bad.c_str(), &mesh) == PCCSE_ERR_FORMAT);
    CHECK(mesh == nullptr);
    CHECK(std::strlen(pccse_last_error()) > 0);
}
