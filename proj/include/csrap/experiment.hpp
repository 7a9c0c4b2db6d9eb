#pragma once
#include <optional>
#include <string>
#include <vector>

#include "csrap/sim.hpp"

namespace csrap {

struct ExperimentConfig {
    std::optional<std::string> trace_file;
    TraceParams trace;
    uint64_t trace_seed = 1;

    std::vector<Policy> policies{Policy::CSRAP};
    HorizonConfig horizon;
    ResourceModel resources;
    ResizePolicy resize;
    LatencyModel latency;
    DetectorModel detector;
    MotionModel motion;
    SchedulerOptions sched;
    CriticalityConfig criticality;

    std::optional<std::string> profile_file;
    SyntheticProfileParams profile_params;  // used when no profile file is given

    std::vector<double> canvas_sizes{128 * 128, 192 * 192, 256 * 256, 384 * 384, 512 * 512};
    std::vector<double> sweep_periods;    // empty -> {horizon.frame_period}
    std::vector<int> sweep_horizons;      // empty -> {horizon.horizon_len}
    std::vector<double> sweep_drops;      // empty -> {0}
    std::vector<uint64_t> seeds{1};
    std::string out_dir = "results";
    std::string metrics_format = "csv";  // csv | json
    bool emit_uncertainty = true;
    bool emit_schedules = true;
};

// Reads a JSON experiment config; unknown keys are ignored, referenced files
// must exist. Throws ConfigError with a file diagnostic otherwise.
ExperimentConfig load_experiment_config(const std::string& path);

struct CellResult {
    double period = 0;
    int horizon_len = 0;
    double drop_ratio = 0;
    Policy policy = Policy::CSRAP;
    uint64_t seed = 0;
    Metrics metrics;
    int schedule_violations = 0;
};

// Runs the sweep cross-product (periods x horizons x drops x policies x seeds)
// and writes metrics.csv|json, uncertainty.csv, and per-cell schedule JSON
// dumps into cfg.out_dir. threads = 1 forces the serial reference path; 0 uses
// the OpenMP default. Output is identical either way.
std::vector<CellResult> run_experiment(const ExperimentConfig& cfg, int threads = 0);

// Fixed metrics.csv column order used by run_experiment and the CLI.
std::string metrics_csv_header();
std::string metrics_csv_row(const CellResult& cell);

std::string schedule_to_json(const Schedule& s);
Schedule schedule_from_json(const std::string& text);

}  // namespace csrap
