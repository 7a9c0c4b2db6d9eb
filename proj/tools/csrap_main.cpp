#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "csrap/errors.hpp"
#include "csrap/experiment.hpp"

using namespace csrap;

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty()) out.push_back(cell);
    }
    return out;
}

void apply_overrides(ExperimentConfig& cfg, const std::string& policies,
                     const std::string& seeds, const std::string& out_dir,
                     const std::string& format) {
    if (!policies.empty()) {
        cfg.policies.clear();
        for (const auto& p : split_csv(policies)) cfg.policies.push_back(parse_policy(p));
    }
    if (!seeds.empty()) {
        cfg.seeds.clear();
        for (const auto& s : split_csv(seeds)) cfg.seeds.push_back(std::stoull(s));
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!format.empty()) {
        if (format != "csv" && format != "json")
            throw ConfigError("--format must be csv or json");
        cfg.metrics_format = format;
    }
}

int cmd_run(const std::string& config_path, const std::string& policies,
            const std::string& seeds, const std::string& out_dir, const std::string& format,
            int threads, bool single) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    apply_overrides(cfg, policies, seeds, out_dir, format);
    if (single) {
        // simulate = one point of each sweep axis
        if (!cfg.sweep_periods.empty()) cfg.sweep_periods.resize(1);
        if (!cfg.sweep_horizons.empty()) cfg.sweep_horizons.resize(1);
        if (!cfg.sweep_drops.empty()) cfg.sweep_drops.resize(1);
    }
    const auto results = run_experiment(cfg, threads);
    std::printf("%s\n", metrics_csv_header().c_str());
    for (const auto& r : results) std::printf("%s\n", metrics_csv_row(r).c_str());
    std::printf("# %zu cell(s) -> %s\n", results.size(), cfg.out_dir.c_str());
    return 0;
}

int cmd_pack_debug(const std::string& items_path, double canvas_area, const std::string& mode,
                   double quantum, const std::string& svg_path) {
    std::ifstream in(items_path);
    if (!in) throw ConfigError("cannot open items file: " + items_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(items_path + ": " + e.what());
    }
    std::vector<PackItem> items;
    for (const auto& it : j) {
        PackItem p;
        p.id = it.at("id").get<int>();
        p.width = it.at("width").get<double>();
        p.height = it.at("height").get<double>();
        p.rotatable = it.value("rotatable", true);
        items.push_back(p);
    }
    const PackMode pm = mode == "quantized" ? PackMode::Quantized : PackMode::General;
    const auto layout = pack(items, canvas_area, pm, quantum);
    if (!layout) {
        double total = 0;
        for (const auto& it : items) total += it.width * it.height;
        std::printf("infeasible: %zu item(s), total area %.1f vs canvas %.1f (%s mode)\n",
                    items.size(), total, canvas_area, mode.c_str());
        return 1;
    }
    std::printf("canvas %.1f x %.1f (%zu placement(s))\n", layout->canvas_width,
                layout->canvas_height, layout->placements.size());
    for (const auto& p : layout->placements)
        std::printf("  item %-4d at [%8.1f %8.1f %8.1f %8.1f]%s\n", p.id, p.rect.x_min,
                    p.rect.y_min, p.rect.x_max, p.rect.y_max, p.rotated ? " (rotated)" : "");
    if (!svg_path.empty()) {
        std::ofstream svg(svg_path);
        if (!svg) throw ConfigError("cannot open svg output: " + svg_path);
        svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 "
            << layout->canvas_width << ' ' << layout->canvas_height << "\">\n";
        svg << "<rect width=\"" << layout->canvas_width << "\" height=\""
            << layout->canvas_height << "\" fill=\"#f8f8f8\" stroke=\"#333\"/>\n";
        int hue = 0;
        for (const auto& p : layout->placements) {
            svg << "<rect x=\"" << p.rect.x_min << "\" y=\"" << p.rect.y_min << "\" width=\""
                << p.rect.width() << "\" height=\"" << p.rect.height() << "\" fill=\"hsl("
                << (hue % 360) << ",60%,70%)\" stroke=\"#333\"/>\n";
            svg << "<text x=\"" << (p.rect.x_min + 4) << "\" y=\"" << (p.rect.y_min + 14)
                << "\" font-size=\"12\">" << p.id << "</text>\n";
            hue += 47;
        }
        svg << "</svg>\n";
        std::printf("svg written to %s\n", svg_path.c_str());
    }
    return 0;
}

int cmd_validate_profile(const std::string& path) {
    const AccuracyProfile profile = load_profile(path);
    const auto issues = validate_profile(profile);
    if (issues.empty()) {
        std::printf("profile ok: %zu size bin(s) x %zu ratio(s)\n", profile.size_bins.size(),
                    profile.ratios.size());
        return 0;
    }
    for (const auto& v : issues)
        std::printf("violation: bin %zu ratio %zu: %s\n", v.bin, v.ratio_index, v.what.c_str());
    return 1;
}

int cmd_gen_trace(const std::string& out_path, TraceParams params, uint64_t seed) {
    const Trace trace = generate_trace(params, seed);
    save_trace(trace, out_path);
    size_t rows = 0;
    for (const auto& f : trace.frames) rows += f.objects.size();
    std::printf("wrote %zu frame(s), %zu row(s) to %s\n", trace.frames.size(), rows,
                out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"canvas-based attention scheduling simulator"};
    app.require_subcommand(1);

    std::string config_path, policies, seeds, out_dir, format;
    int threads = 0;

    auto add_run_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
        cmd->add_option("--policy", policies, "comma-separated policy override");
        cmd->add_option("--seed", seeds, "comma-separated seed override");
        cmd->add_option("--out", out_dir, "output directory override");
        cmd->add_option("--format", format, "metrics format: csv|json");
        cmd->add_option("--threads", threads, "worker threads (1 = serial reference)");
    };
    CLI::App* simulate = app.add_subcommand("simulate", "run a single sweep point");
    add_run_flags(simulate);
    CLI::App* sweep = app.add_subcommand("sweep", "run the full sweep cross-product");
    add_run_flags(sweep);

    std::string items_path, pack_mode = "general", svg_path;
    double canvas_area = 512 * 512, quantum = 8;
    CLI::App* pack_cmd = app.add_subcommand("pack-debug", "pack an item file and dump the layout");
    pack_cmd->add_option("--items", items_path, "items JSON [{id,width,height,rotatable}]")
        ->required();
    pack_cmd->add_option("--canvas", canvas_area, "canvas area in pixels^2");
    pack_cmd->add_option("--mode", pack_mode, "general|quantized");
    pack_cmd->add_option("--quantum", quantum, "side quantum");
    pack_cmd->add_option("--svg", svg_path, "write an SVG of the layout");

    std::string profile_path;
    CLI::App* vp = app.add_subcommand("validate-profile", "check an accuracy profile");
    vp->add_option("--profile", profile_path, "profile JSON path")->required();

    std::string trace_out = "trace.csv";
    TraceParams tp;
    uint64_t trace_seed = 1;
    CLI::App* gt = app.add_subcommand("gen-trace", "generate a synthetic trace CSV");
    gt->add_option("--out", trace_out, "output CSV path");
    gt->add_option("--objects", tp.objects, "number of objects");
    gt->add_option("--frames", tp.frames, "number of frames");
    gt->add_option("--width", tp.width, "frame width");
    gt->add_option("--height", tp.height, "frame height");
    gt->add_option("--speed-min", tp.speed_min, "min speed px/frame");
    gt->add_option("--speed-max", tp.speed_max, "max speed px/frame");
    gt->add_option("--size-min", tp.size_min, "min box width");
    gt->add_option("--size-max", tp.size_max, "max box width");
    gt->add_option("--jitter", tp.pos_jitter, "positional jitter px/frame");
    gt->add_option("--spawn-rate", tp.spawn_rate, "expected spawns per frame");
    gt->add_option("--despawn-rate", tp.despawn_rate, "per-object leave probability");
    gt->add_option("--classes", tp.classes, "number of classes");
    gt->add_option("--seed", trace_seed, "trace seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return cmd_run(config_path, policies, seeds, out_dir, format, threads, true);
        if (sweep->parsed())
            return cmd_run(config_path, policies, seeds, out_dir, format, threads, false);
        if (pack_cmd->parsed())
            return cmd_pack_debug(items_path, canvas_area, pack_mode, quantum, svg_path);
        if (vp->parsed()) return cmd_validate_profile(profile_path);
        if (gt->parsed()) return cmd_gen_trace(trace_out, tp, trace_seed);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
