#pragma once
#include <vector>

#include "csrap/errors.hpp"

namespace csrap {

// Scheduling horizon parameters shared by the scheduler, baselines and simulator.
struct HorizonConfig {
    int horizon_len = 10;       // H_l frames per horizon, >= 2
    double frame_period = 0.1;  // P seconds between frames, > 0
    int min_frequency = 1;      // I_min, in [1, horizon_len - 1]
    int quantum = 8;            // q pixels, >= 1

    void validate() const {
        if (horizon_len < 2) throw ConfigError("horizon_len must be >= 2");
        if (frame_period <= 0) throw ConfigError("frame_period must be > 0");
        if (min_frequency < 1 || min_frequency > horizon_len - 1)
            throw ConfigError("min_frequency must lie in [1, horizon_len-1]");
        if (quantum < 1) throw ConfigError("quantum must be >= 1");
    }
};

// Compute budget model. Budget and costs are abstract compute units per horizon;
// executing a canvas of area S costs canvas_overhead + area_cost_rate * S.
struct ResourceModel {
    double budget = 400000;            // R, compute units per horizon
    double canvas_overhead = 20000;    // c0, fixed cost per canvas / batch / region
    double area_cost_rate = 1.0;       // cost per pixel^2 processed
    double frame_volume = 1920.0 * 1280.0;  // V, full-frame pixel count
    double accel_capacity = 1000000;   // V_GPU, pixel^2 the accelerator covers per period (< V)
    double batch_latency_slope = 8000; // extra cost per batched item (baselines)
    // When set, the anchor full inspection is billed against the horizon
    // budget and the schedulers only get to plan with what remains. Off by
    // default: the usual operating point has R far below one full-frame cost
    // (the keyframe runs on the ingest path), so billing it would leave the
    // schedulers nothing to work with.
    bool charge_full_inspection = false;

    double canvas_cost(double area) const { return canvas_overhead + area_cost_rate * area; }
    double full_frame_cost() const { return canvas_cost(frame_volume); }

    void validate() const {
        if (budget <= 0) throw ConfigError("budget must be > 0");
        if (canvas_overhead < 0) throw ConfigError("canvas_overhead must be >= 0");
        if (area_cost_rate < 0) throw ConfigError("area_cost_rate must be >= 0");
        if (frame_volume <= 0) throw ConfigError("frame_volume must be > 0");
        if (accel_capacity >= frame_volume)
            throw ConfigError("accel_capacity must be smaller than frame_volume");
    }
};

// Admissible resize factors (ascending, in (0,1]) and the accuracy band that
// keeps a (object, ratio) pair eligible for allocation.
struct ResizePolicy {
    std::vector<double> factors = {0.25, 0.5, 0.75, 1.0};
    double acc_min = 0.0;
    double acc_max = 1.0;

    void validate() const {
        if (factors.empty()) throw ConfigError("resize policy needs at least one factor");
        double prev = 0.0;
        for (double f : factors) {
            if (f <= prev || f > 1.0) throw ConfigError("resize factors must be strictly increasing in (0,1]");
            prev = f;
        }
        if (acc_min > acc_max) throw ConfigError("acc_min must not exceed acc_max");
    }
};

}  // namespace csrap
