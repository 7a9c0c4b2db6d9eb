#include "csrap/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "csrap/config_json.hpp"
#include "csrap/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace csrap {

using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return j;
}

void parse_trace_params(const json& j, TraceParams& p) {
    p.objects = j.value("objects", p.objects);
    p.frames = j.value("frames", p.frames);
    p.width = j.value("width", p.width);
    p.height = j.value("height", p.height);
    p.speed_min = j.value("speed_min", p.speed_min);
    p.speed_max = j.value("speed_max", p.speed_max);
    p.size_min = j.value("size_min", p.size_min);
    p.size_max = j.value("size_max", p.size_max);
    p.aspect_min = j.value("aspect_min", p.aspect_min);
    p.aspect_max = j.value("aspect_max", p.aspect_max);
    p.pos_jitter = j.value("pos_jitter", p.pos_jitter);
    p.spawn_rate = j.value("spawn_rate", p.spawn_rate);
    p.despawn_rate = j.value("despawn_rate", p.despawn_rate);
    p.classes = j.value("classes", p.classes);
    p.importance_min = j.value("importance_min", p.importance_min);
    p.importance_max = j.value("importance_max", p.importance_max);
    p.frame_period = j.value("frame_period", p.frame_period);
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
    const json j = read_json_file(path);
    ExperimentConfig cfg;

    if (j.contains("trace")) {
        const auto& t = j.at("trace");
        if (t.contains("file")) cfg.trace_file = t.at("file").get<std::string>();
        parse_trace_params(t, cfg.trace);
        cfg.trace_seed = t.value("seed", cfg.trace_seed);
    }
    if (j.contains("policies")) {
        cfg.policies.clear();
        for (const auto& p : j.at("policies")) cfg.policies.push_back(parse_policy(p));
    }
    if (j.contains("horizon")) from_json_into(j.at("horizon"), cfg.horizon);
    if (j.contains("resources")) from_json_into(j.at("resources"), cfg.resources);
    if (j.contains("resize")) from_json_into(j.at("resize"), cfg.resize);
    if (j.contains("latency")) {
        const auto& l = j.at("latency");
        cfg.latency.canvas_overhead_ms = l.value("canvas_overhead_ms", cfg.latency.canvas_overhead_ms);
        cfg.latency.area_rate_ms = l.value("area_rate_ms", cfg.latency.area_rate_ms);
        cfg.latency.batch_item_ms = l.value("batch_item_ms", cfg.latency.batch_item_ms);
        cfg.latency.full_frame_ms = l.value("full_frame_ms", cfg.latency.full_frame_ms);
    }
    if (j.contains("detector")) {
        const auto& d = j.at("detector");
        cfg.detector.threshold_mode = d.value("threshold_mode", cfg.detector.threshold_mode);
        cfg.detector.box_noise = d.value("box_noise", cfg.detector.box_noise);
        cfg.detector.iou_floor = d.value("iou_floor", cfg.detector.iou_floor);
    }
    if (j.contains("motion")) {
        const auto& m = j.at("motion");
        cfg.motion.samples = m.value("samples", cfg.motion.samples);
        cfg.motion.sample_jitter = m.value("sample_jitter", cfg.motion.sample_jitter);
        cfg.motion.drift = m.value("drift", cfg.motion.drift);
    }
    if (j.contains("scheduler")) {
        const auto& s = j.at("scheduler");
        const std::string mode = s.value("pack_mode", std::string("general"));
        if (mode == "quantized")
            cfg.sched.pack_mode = PackMode::Quantized;
        else if (mode == "general")
            cfg.sched.pack_mode = PackMode::General;
        else
            throw ConfigError(path + ": unknown pack_mode '" + mode + "'");
        cfg.sched.capacity_fraction = s.value("capacity_fraction", cfg.sched.capacity_fraction);
        cfg.sched.weighted_efficiency =
            s.value("weighted_efficiency", cfg.sched.weighted_efficiency);
        cfg.sched.area_only_packing = s.value("area_only_packing", cfg.sched.area_only_packing);
    }
    if (j.contains("criticality")) {
        const auto& c = j.at("criticality");
        cfg.criticality.default_threshold =
            c.value("default_threshold", cfg.criticality.default_threshold);
        if (c.contains("width_thresholds"))
            for (const auto& [k, v] : c.at("width_thresholds").items())
                cfg.criticality.width_thresholds[std::stoi(k)] = v.get<double>();
    }
    if (j.contains("profile")) {
        const auto& p = j.at("profile");
        if (p.contains("file")) cfg.profile_file = p.at("file").get<std::string>();
        cfg.profile_params.a_max = p.value("a_max", cfg.profile_params.a_max);
        cfg.profile_params.k = p.value("k", cfg.profile_params.k);
        cfg.profile_params.s_ref = p.value("s_ref", cfg.profile_params.s_ref);
        if (p.contains("size_bins"))
            cfg.profile_params.size_bins = p.at("size_bins").get<std::vector<double>>();
        if (p.contains("ratios"))
            cfg.profile_params.ratios = p.at("ratios").get<std::vector<double>>();
    }
    if (j.contains("canvas_sizes"))
        cfg.canvas_sizes = j.at("canvas_sizes").get<std::vector<double>>();
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        if (s.contains("frame_periods"))
            cfg.sweep_periods = s.at("frame_periods").get<std::vector<double>>();
        if (s.contains("horizon_lens"))
            cfg.sweep_horizons = s.at("horizon_lens").get<std::vector<int>>();
        if (s.contains("drop_ratios"))
            cfg.sweep_drops = s.at("drop_ratios").get<std::vector<double>>();
    }
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<uint64_t>>();
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.metrics_format = j.value("metrics_format", cfg.metrics_format);
    cfg.emit_uncertainty = j.value("emit_uncertainty", cfg.emit_uncertainty);
    cfg.emit_schedules = j.value("emit_schedules", cfg.emit_schedules);

    if (cfg.policies.empty()) throw ConfigError(path + ": policy list is empty");
    if (cfg.seeds.empty()) throw ConfigError(path + ": seed list is empty");
    if (cfg.metrics_format != "csv" && cfg.metrics_format != "json")
        throw ConfigError(path + ": metrics_format must be csv or json");
    if (cfg.trace_file && !std::filesystem::exists(*cfg.trace_file))
        throw ConfigError(path + ": trace file not found: " + *cfg.trace_file);
    if (cfg.profile_file && !std::filesystem::exists(*cfg.profile_file))
        throw ConfigError(path + ": profile file not found: " + *cfg.profile_file);
    cfg.horizon.validate();
    cfg.resources.validate();
    cfg.resize.validate();
    return cfg;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::string metrics_csv_header() {
    return "frame_period,horizon_len,drop_ratio,policy,seed,detection_rate,"
           "detection_precision,critical_detection_rate,critical_detection_precision,"
           "weighted_recall,max_weighted_uncertainty,mean_weighted_uncertainty,"
           "latency_p50_ms,latency_p95_ms,latency_p99_ms,budget_utilization,"
           "schedule_violations";
}

std::string metrics_csv_row(const CellResult& c) {
    std::ostringstream out;
    out << fmt(c.period) << ',' << c.horizon_len << ',' << fmt(c.drop_ratio) << ','
        << to_string(c.policy) << ',' << c.seed << ',' << fmt(c.metrics.detection_rate) << ','
        << fmt(c.metrics.detection_precision) << ',' << fmt(c.metrics.critical_detection_rate)
        << ',' << fmt(c.metrics.critical_detection_precision) << ','
        << fmt(c.metrics.weighted_recall) << ',' << fmt(c.metrics.max_weighted_uncertainty)
        << ',' << fmt(c.metrics.mean_weighted_uncertainty) << ','
        << fmt(c.metrics.latency_p50_ms) << ',' << fmt(c.metrics.latency_p95_ms) << ','
        << fmt(c.metrics.latency_p99_ms) << ',' << fmt(c.metrics.budget_utilization) << ','
        << c.schedule_violations;
    return out.str();
}

namespace {

json plan_to_json(const CanvasPlan& p) {
    json items = json::array();
    for (const auto& it : p.items) {
        items.push_back({{"object_id", it.object_id},
                         {"ratio", it.ratio},
                         {"accuracy", it.accuracy},
                         {"alloc_area", it.alloc_area},
                         {"rotated", it.rotated},
                         {"placement",
                          {it.placement.x_min, it.placement.y_min, it.placement.x_max,
                           it.placement.y_max}}});
    }
    const char* kind = "canvas";
    switch (p.kind) {
        case PlanKind::Canvas: kind = "canvas"; break;
        case PlanKind::FullFrame: kind = "full_frame"; break;
        case PlanKind::Batch: kind = "batch"; break;
        case PlanKind::Region: kind = "region"; break;
    }
    return {{"kind", kind},
            {"size", p.size},
            {"start", p.start},
            {"frame_index", p.frame_index},
            {"source_frame", p.source_frame},
            {"cost", p.cost},
            {"layout_width", p.layout.canvas_width},
            {"layout_height", p.layout.canvas_height},
            {"items", items}};
}

PlanKind kind_from_string(const std::string& s) {
    if (s == "canvas") return PlanKind::Canvas;
    if (s == "full_frame") return PlanKind::FullFrame;
    if (s == "batch") return PlanKind::Batch;
    if (s == "region") return PlanKind::Region;
    throw ConfigError("unknown plan kind: " + s);
}

}  // namespace

std::string schedule_to_json(const Schedule& s) {
    json plans = json::array();
    for (const auto& p : s.plans) plans.push_back(plan_to_json(p));
    json j{{"policy", to_string(s.policy)},
           {"canvas_size", s.canvas_size},
           {"canvas_count", s.canvas_count},
           {"predicted_max_uncertainty", s.predicted_max_u},
           {"pack_mode", s.pack_mode == PackMode::Quantized ? "quantized" : "general"},
           {"capacity_fraction", s.capacity_fraction},
           {"warnings", s.warnings},
           {"plans", plans}};
    return j.dump(2);
}

Schedule schedule_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("schedule json: ") + e.what());
    }
    Schedule s;
    s.policy = parse_policy(j.at("policy").get<std::string>());
    s.canvas_size = j.value("canvas_size", 0.0);
    s.canvas_count = j.value("canvas_count", 0);
    s.predicted_max_u = j.value("predicted_max_uncertainty", 0.0);
    s.pack_mode = j.value("pack_mode", std::string("general")) == "quantized"
                      ? PackMode::Quantized
                      : PackMode::General;
    s.capacity_fraction = j.value("capacity_fraction", 0.5);
    if (j.contains("warnings"))
        s.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& pj : j.at("plans")) {
        CanvasPlan p;
        p.kind = kind_from_string(pj.at("kind").get<std::string>());
        p.size = pj.value("size", 0.0);
        p.start = pj.value("start", 0.0);
        p.frame_index = pj.value("frame_index", 0);
        p.source_frame = pj.value("source_frame", 0);
        p.cost = pj.value("cost", 0.0);
        p.layout.canvas_width = pj.value("layout_width", 0.0);
        p.layout.canvas_height = pj.value("layout_height", 0.0);
        for (const auto& ij : pj.at("items")) {
            PlanItem it;
            it.object_id = ij.at("object_id").get<int>();
            it.ratio = ij.value("ratio", 1.0);
            it.accuracy = ij.value("accuracy", 0.0);
            it.alloc_area = ij.value("alloc_area", 0.0);
            it.rotated = ij.value("rotated", false);
            const auto& pl = ij.at("placement");
            it.placement = {pl.at(0).get<double>(), pl.at(1).get<double>(),
                            pl.at(2).get<double>(), pl.at(3).get<double>()};
            p.items.push_back(it);
            if (it.placement.area() > 0)
                p.layout.placements.push_back({it.object_id, it.placement, it.rotated});
        }
        s.plans.push_back(std::move(p));
    }
    return s;
}

namespace {

struct Cell {
    double period;
    int horizon_len;
    double drop;
    Policy policy;
    uint64_t seed;
};

struct CellOutput {
    CellResult result;
    std::string uncertainty_rows;
    std::string schedule_json;
};

CellOutput run_cell(const ExperimentConfig& cfg, const AccuracyProfile& profile,
                    const Trace& base_trace, const Cell& cell) {
    Trace trace = base_trace;
    trace.frame_period = cell.period;
    if (cell.drop > 0) trace = drop_frames(trace, cell.drop, cell.horizon_len, cell.seed);

    HorizonConfig hc = cfg.horizon;
    hc.horizon_len = cell.horizon_len;
    hc.frame_period = cell.period;

    SimModels models;
    models.profile = profile;
    models.resize = cfg.resize;
    models.resources = cfg.resources;
    models.latency = cfg.latency;
    models.detector = cfg.detector;
    models.motion = cfg.motion;
    models.sched = cfg.sched;
    models.canvas_sizes = cfg.canvas_sizes;

    const EpisodeResult episode = run_episode(trace, cell.policy, models, hc, cell.seed);

    CellOutput out;
    out.result.period = cell.period;
    out.result.horizon_len = cell.horizon_len;
    out.result.drop_ratio = cell.drop;
    out.result.policy = cell.policy;
    out.result.seed = cell.seed;
    out.result.metrics = evaluate(episode, trace, cfg.criticality);
    for (const auto& s : episode.schedules)
        out.result.schedule_violations +=
            static_cast<int>(validate_schedule(s, models.resources, hc).size());

    if (cfg.emit_uncertainty) {
        std::ostringstream rows;
        for (const auto& fl : episode.frames)
            for (const auto& o : fl.objects)
                rows << fmt(cell.period) << ',' << cell.horizon_len << ',' << fmt(cell.drop)
                     << ',' << to_string(cell.policy) << ',' << cell.seed << ',' << fl.frame
                     << ',' << o.id << ',' << fmt(o.uncertainty) << '\n';
        out.uncertainty_rows = rows.str();
    }
    if (cfg.emit_schedules && !episode.schedules.empty())
        out.schedule_json = schedule_to_json(episode.schedules.front());
    return out;
}

std::string cell_tag(const Cell& c) {
    std::ostringstream tag;
    tag << "p" << fmt(c.period) << "_h" << c.horizon_len << "_d" << fmt(c.drop) << "_"
        << to_string(c.policy) << "_s" << c.seed;
    return tag.str();
}

}  // namespace

std::vector<CellResult> run_experiment(const ExperimentConfig& cfg, int threads) {
    const AccuracyProfile profile = cfg.profile_file
                                        ? load_profile(*cfg.profile_file)
                                        : synthetic_profile(cfg.profile_params);
    {
        const auto issues = validate_profile(profile);
        if (!issues.empty())
            throw ConfigError("accuracy profile invalid: " + issues.front().what);
    }
    const Trace base_trace = cfg.trace_file
                                 ? load_trace(*cfg.trace_file, cfg.horizon.frame_period,
                                              cfg.trace.width, cfg.trace.height)
                                 : generate_trace(cfg.trace, cfg.trace_seed);

    const std::vector<double> periods =
        cfg.sweep_periods.empty() ? std::vector<double>{cfg.horizon.frame_period}
                                  : cfg.sweep_periods;
    const std::vector<int> horizons = cfg.sweep_horizons.empty()
                                          ? std::vector<int>{cfg.horizon.horizon_len}
                                          : cfg.sweep_horizons;
    const std::vector<double> drops =
        cfg.sweep_drops.empty() ? std::vector<double>{0.0} : cfg.sweep_drops;

    std::vector<Cell> cells;
    for (double period : periods)
        for (int hl : horizons)
            for (double drop : drops)
                for (Policy pol : cfg.policies)
                    for (uint64_t seed : cfg.seeds) cells.push_back({period, hl, drop, pol, seed});

    std::vector<CellOutput> outputs(cells.size());
    if (threads == 1) {
        for (size_t i = 0; i < cells.size(); ++i)
            outputs[i] = run_cell(cfg, profile, base_trace, cells[i]);
    } else {
#ifdef _OPENMP
        if (threads > 1) omp_set_num_threads(threads);
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(cells.size()); ++i)
            outputs[static_cast<size_t>(i)] =
                run_cell(cfg, profile, base_trace, cells[static_cast<size_t>(i)]);
#else
        for (size_t i = 0; i < cells.size(); ++i)
            outputs[i] = run_cell(cfg, profile, base_trace, cells[i]);
#endif
    }

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    std::vector<CellResult> results;
    results.reserve(outputs.size());
    for (const auto& o : outputs) results.push_back(o.result);

    if (cfg.metrics_format == "json") {
        json rows = json::array();
        for (const auto& r : results) {
            rows.push_back({{"frame_period", r.period},
                            {"horizon_len", r.horizon_len},
                            {"drop_ratio", r.drop_ratio},
                            {"policy", to_string(r.policy)},
                            {"seed", r.seed},
                            {"detection_rate", r.metrics.detection_rate},
                            {"detection_precision", r.metrics.detection_precision},
                            {"critical_detection_rate", r.metrics.critical_detection_rate},
                            {"critical_detection_precision",
                             r.metrics.critical_detection_precision},
                            {"weighted_recall", r.metrics.weighted_recall},
                            {"max_weighted_uncertainty", r.metrics.max_weighted_uncertainty},
                            {"mean_weighted_uncertainty", r.metrics.mean_weighted_uncertainty},
                            {"latency_p50_ms", r.metrics.latency_p50_ms},
                            {"latency_p95_ms", r.metrics.latency_p95_ms},
                            {"latency_p99_ms", r.metrics.latency_p99_ms},
                            {"budget_utilization", r.metrics.budget_utilization},
                            {"schedule_violations", r.schedule_violations}});
        }
        std::ofstream out(fs::path(cfg.out_dir) / "metrics.json");
        out << rows.dump(2) << '\n';
    } else {
        std::ofstream out(fs::path(cfg.out_dir) / "metrics.csv");
        out << metrics_csv_header() << '\n';
        for (const auto& r : results) out << metrics_csv_row(r) << '\n';
    }
    if (cfg.emit_uncertainty) {
        std::ofstream out(fs::path(cfg.out_dir) / "uncertainty.csv");
        out << "frame_period,horizon_len,drop_ratio,policy,seed,frame,object_id,uncertainty\n";
        for (const auto& o : outputs) out << o.uncertainty_rows;
    }
    if (cfg.emit_schedules) {
        const fs::path dir = fs::path(cfg.out_dir) / "schedules";
        fs::create_directories(dir);
        for (size_t i = 0; i < outputs.size(); ++i) {
            if (outputs[i].schedule_json.empty()) continue;
            std::ofstream out(dir / (cell_tag(cells[i]) + ".json"));
            out << outputs[i].schedule_json << '\n';
        }
    }
    return results;
}

}  // namespace csrap
