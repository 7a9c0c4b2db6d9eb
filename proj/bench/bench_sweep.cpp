// Compares the serial reference sweep against the OpenMP worker pool on a
// medium synthetic workload and verifies both produce identical metrics.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "csrap/experiment.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace csrap;
namespace fs = std::filesystem;

namespace {

std::string results_fingerprint(const std::vector<CellResult>& rows) {
    std::ostringstream out;
    for (const auto& r : rows) out << metrics_csv_row(r) << '\n';
    return out.str();
}

ExperimentConfig bench_config(const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.trace.objects = 16;
    cfg.trace.frames = 120;
    cfg.trace.speed_min = 1;
    cfg.trace.speed_max = 5;
    cfg.trace.pos_jitter = 0.5;
    cfg.trace_seed = 7;
    cfg.policies = {Policy::CSRAP, Policy::FS, Policy::HUF, Policy::BHUF, Policy::BPB,
                    Policy::GBPB};
    cfg.resources.budget = 400000;
    cfg.resources.canvas_overhead = 20000;
    cfg.horizon.horizon_len = 10;
    cfg.horizon.frame_period = 0.1;
    cfg.sweep_periods = {0.07, 0.1, 0.15};
    cfg.sweep_drops = {0.0, 0.3};
    cfg.seeds = {1, 2, 3, 4};
    cfg.out_dir = out_dir;
    cfg.emit_uncertainty = false;
    cfg.emit_schedules = false;
    return cfg;
}

}  // namespace

int main() {
    const fs::path tmp = fs::temp_directory_path() / "csrap_bench";
    fs::create_directories(tmp);

    const ExperimentConfig serial_cfg = bench_config((tmp / "serial").string());
    const ExperimentConfig parallel_cfg = bench_config((tmp / "parallel").string());

    const auto t0 = std::chrono::steady_clock::now();
    const auto serial = run_experiment(serial_cfg, 1);
    const auto t1 = std::chrono::steady_clock::now();
    const auto parallel = run_experiment(parallel_cfg, 0);
    const auto t2 = std::chrono::steady_clock::now();

    const double serial_s = std::chrono::duration<double>(t1 - t0).count();
    const double parallel_s = std::chrono::duration<double>(t2 - t1).count();

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("cells            : %zu\n", serial.size());
    std::printf("serial reference : %.3f s\n", serial_s);
    std::printf("worker pool (%2d) : %.3f s\n", threads, parallel_s);
    std::printf("speedup          : %.2fx\n", parallel_s > 0 ? serial_s / parallel_s : 0.0);

    if (results_fingerprint(serial) != results_fingerprint(parallel)) {
        std::printf("MISMATCH: serial and parallel sweeps disagree\n");
        return 1;
    }
    std::printf("serial and parallel outputs are identical\n");
    return 0;
}
