// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

// Command line shell over the shared library's C interface.

#include "pccse/pccse.h"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 8);
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out;
}

[[noreturn]] void die(pccse_status status) {
    std::fprintf(stderr, "{\"error\": {\"status\": %d, \"message\": \"%s\"}}\n", int(status),
                 json_escape(pccse_last_error()).c_str());
    std::exit(1);
}

void check(pccse_status status) {
    if (status != PCCSE_OK) die(status);
}

// Layered config: defaults, then PCCSE_CONFIG, then --config, then flags.
struct ConfigArgs {
    std::string config_path;
    double delta = -1.0, presence = -1.0, kappa = -1.0, height = -1.0, factor = -1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "config json path");
        cmd->add_option("--delta", delta, "bone-width factor");
        cmd->add_option("--presence-threshold", presence, "keypoint confidence cutoff");
        cmd->add_option("--kappa", kappa, "gps normalization");
        cmd->add_option("--canonical-height", height, "model-unit height override");
        cmd->add_option("--hand-foot-radius-factor", factor, "hand/foot disc factor");
    }

    pccse_config resolve() const {
        pccse_config config;
        pccse_config_defaults(&config);
        if (const char* env = std::getenv("PCCSE_CONFIG"); env && *env)
            check(pccse_config_load(env, &config));
        if (!config_path.empty()) check(pccse_config_load(config_path.c_str(), &config));
        if (delta >= 0.0) config.delta = delta;
        if (presence >= 0.0) config.presence_threshold = presence;
        if (kappa >= 0.0) config.kappa = kappa;
        if (height >= 0.0) config.canonical_height = height;
        if (factor >= 0.0) config.hand_foot_radius_factor = factor;
        return config;
    }
};

pccse_assign_mode parse_mode(const std::string& mode) {
    if (mode == "baseline") return PCCSE_ASSIGN_BASELINE;
    if (mode == "constrained") return PCCSE_ASSIGN_CONSTRAINED;
    return PCCSE_ASSIGN_BLOCKED;
}

void write_file(const std::string& path, const char* text) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) {
        std::fprintf(stderr,
                     "{\"error\": {\"status\": 1, \"message\": \"cannot write %s\"}}\n",
                     json_escape(path).c_str());
        std::exit(1);
    }
    std::fputs(text, f);
    std::fclose(f);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pose-constrained pixel-to-surface assignment"};
    app.require_subcommand(1);

    // assign
    auto* assign = app.add_subcommand("assign", "compute a uv map for one instance");
    std::string a_instance, a_mesh, a_embeddings, a_out, a_mode = "blocked", a_labels,
                a_render;
    bool a_all_bits = false;
    ConfigArgs a_config;
    assign->add_option("--instance", a_instance)->required();
    assign->add_option("--mesh", a_mesh)->required();
    assign->add_option("--embeddings", a_embeddings)->required();
    assign->add_option("--out", a_out, "output prefix")->required();
    assign->add_option("--mode", a_mode)->check(CLI::IsMember({"baseline", "constrained", "blocked"}));
    assign->add_option("--labels", a_labels, "precomputed label map");
    assign->add_flag("--all-bits", a_all_bits, "use an all-permissive label map");
    assign->add_option("--render", a_render, "also write a uv png");
    a_config.attach(assign);

    // regions
    auto* regions = app.add_subcommand("regions", "rasterize pose-induced label maps");
    std::string r_instance, r_mesh, r_out;
    ConfigArgs r_config;
    regions->add_option("--instance", r_instance)->required();
    regions->add_option("--mesh", r_mesh)->required();
    regions->add_option("--out", r_out, "label map pct path")->required();
    r_config.attach(regions);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "score a set");
    std::string e_set, e_report, e_mode = "blocked", e_removal;
    ConfigArgs e_config;
    evaluate->add_option("--set", e_set)->required();
    evaluate->add_option("--report", e_report)->required();
    evaluate->add_option("--mode", e_mode)->check(CLI::IsMember({"baseline", "constrained", "blocked"}));
    evaluate->add_option("--removal", e_removal, "removal list to apply first");
    e_config.attach(evaluate);

    // check
    auto* check_cmd = app.add_subcommand("check", "audit a set's annotations");
    std::string c_set, c_report, c_removal;
    ConfigArgs c_config;
    pccse_audit_thresholds thresholds;
    pccse_audit_thresholds_defaults(&thresholds);
    check_cmd->add_option("--set", c_set)->required();
    check_cmd->add_option("--report", c_report)->required();
    check_cmd->add_option("--removal", c_removal)->required();
    check_cmd->add_option("--bone-distance-max", thresholds.bone_distance_max);
    check_cmd->add_option("--points-in-mask-min", thresholds.points_in_mask_min);
    check_cmd->add_option("--mask-in-bbox-min", thresholds.mask_in_bbox_min);
    check_cmd->add_option("--laterality-min-distance", thresholds.laterality_min_distance);
    c_config.attach(check_cmd);

    // render
    auto* render = app.add_subcommand("render", "visualize a stored uv map");
    std::string v_uv, v_mesh, v_out;
    render->add_option("--uv", v_uv, "uv map prefix")->required();
    render->add_option("--mesh", v_mesh)->required();
    render->add_option("--out", v_out, "png path")->required();

    // ablate-delta
    auto* ablate = app.add_subcommand("ablate-delta", "sweep the bone-width factor");
    std::string b_set, b_out;
    std::vector<double> b_deltas;
    bool b_baseline = false;
    ConfigArgs b_config;
    ablate->add_option("--set", b_set)->required();
    ablate->add_option("--out", b_out, "csv path")->required();
    ablate->add_option("--deltas", b_deltas, "comma-separated values")
        ->required()
        ->delimiter(',');
    ablate->add_flag("--baseline", b_baseline, "include an unconstrained row");
    b_config.attach(ablate);

    // height-track
    auto* height = app.add_subcommand("height-track", "per-frame scale and height");
    std::string h_frames, h_mesh, h_out;
    ConfigArgs h_config;
    height->add_option("--frames", h_frames)->required();
    height->add_option("--mesh", h_mesh)->required();
    height->add_option("--out", h_out, "csv path")->required();
    h_config.attach(height);

    CLI11_PARSE(app, argc, argv);

    if (*assign) {
        const pccse_config config = a_config.resolve();
        pccse_instance* instance = nullptr;
        pccse_mesh* mesh = nullptr;
        pccse_embeddings* embeddings = nullptr;
        check(pccse_instance_load(a_instance.c_str(), &instance));
        check(pccse_mesh_load(a_mesh.c_str(), &mesh));
        check(pccse_embeddings_load(a_embeddings.c_str(), &embeddings));
        pccse_labelmap* labels = nullptr;
        if (a_all_bits && !a_labels.empty()) {
            std::fprintf(stderr, "{\"error\": {\"status\": 3, \"message\": "
                                 "\"--labels and --all-bits are mutually exclusive\"}}\n");
            return 1;
        }
        if (a_all_bits) check(pccse_labelmap_all_bits(instance, mesh, &labels));
        if (!a_labels.empty()) check(pccse_labelmap_load(a_labels.c_str(), mesh, &labels));
        pccse_uvmap* uv = nullptr;
        char* summary = nullptr;
        check(pccse_assign(instance, mesh, embeddings, &config, parse_mode(a_mode), labels, &uv,
                           &summary));
        check(pccse_uvmap_save(uv, a_out.c_str()));
        write_file(a_out + ".summary.json", summary);
        if (!a_render.empty()) check(pccse_render_png(uv, mesh, a_render.c_str()));
        std::printf("%s", summary);
        pccse_string_free(summary);
        pccse_uvmap_free(uv);
        pccse_labelmap_free(labels);
        pccse_embeddings_free(embeddings);
        pccse_mesh_free(mesh);
        pccse_instance_free(instance);
    } else if (*regions) {
        const pccse_config config = r_config.resolve();
        pccse_instance* instance = nullptr;
        pccse_mesh* mesh = nullptr;
        check(pccse_instance_load(r_instance.c_str(), &instance));
        check(pccse_mesh_load(r_mesh.c_str(), &mesh));
        pccse_labelmap* labels = nullptr;
        check(pccse_labelmap_build(instance, mesh, &config, &labels));
        check(pccse_labelmap_save(labels, r_out.c_str()));
        std::printf("{\"labels\": \"%s\"}\n", json_escape(r_out).c_str());
        pccse_labelmap_free(labels);
        pccse_mesh_free(mesh);
        pccse_instance_free(instance);
    } else if (*evaluate) {
        const pccse_config config = e_config.resolve();
        double ap = 0.0;
        check(pccse_evaluate_set(e_set.c_str(), &config, parse_mode(e_mode),
                                 e_removal.empty() ? nullptr : e_removal.c_str(),
                                 e_report.c_str(), &ap));
        std::printf("{\"ap\": %.6f, \"report\": \"%s\"}\n", ap, json_escape(e_report).c_str());
    } else if (*check_cmd) {
        const pccse_config config = c_config.resolve();
        size_t flagged = 0;
        check(pccse_check_set(c_set.c_str(), &config, &thresholds, c_report.c_str(),
                              c_removal.c_str(), &flagged));
        std::printf("{\"flagged_instances\": %zu, \"report\": \"%s\", \"removal\": \"%s\"}\n",
                    flagged, json_escape(c_report).c_str(), json_escape(c_removal).c_str());
    } else if (*render) {
        pccse_uvmap* uv = nullptr;
        pccse_mesh* mesh = nullptr;
        check(pccse_uvmap_load(v_uv.c_str(), &uv));
        check(pccse_mesh_load(v_mesh.c_str(), &mesh));
        check(pccse_render_png(uv, mesh, v_out.c_str()));
        std::printf("{\"png\": \"%s\"}\n", json_escape(v_out).c_str());
        pccse_mesh_free(mesh);
        pccse_uvmap_free(uv);
    } else if (*ablate) {
        const pccse_config config = b_config.resolve();
        check(pccse_ablate_delta(b_set.c_str(), &config, b_deltas.data(), b_deltas.size(),
                                 b_baseline ? 1 : 0, b_out.c_str()));
        std::printf("{\"csv\": \"%s\"}\n", json_escape(b_out).c_str());
    } else if (*height) {
        const pccse_config config = h_config.resolve();
        double cov = 0.0;
        check(pccse_height_track(h_frames.c_str(), h_mesh.c_str(), &config, h_out.c_str(), &cov));
        std::printf("{\"csv\": \"%s\", \"height_cov\": %.6f}\n", json_escape(h_out).c_str(), cov);
    }
    return 0;
}
