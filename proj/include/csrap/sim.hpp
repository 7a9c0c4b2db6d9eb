#pragma once
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "csrap/baselines.hpp"
#include "csrap/tracking.hpp"

namespace csrap {

struct TraceObject {
    int id = 0;
    int cls = 0;
    Rect box;
    double importance = 1.0;
};

struct TraceFrame {
    std::vector<TraceObject> objects;
    bool dropped = false;  // camera frame never delivered
};

struct Trace {
    double frame_period = 0.1;
    double frame_width = 1920;
    double frame_height = 1280;
    std::vector<TraceFrame> frames;
};

struct TraceParams {
    int objects = 10;
    int frames = 100;
    double width = 1920;
    double height = 1280;
    double speed_min = 0;  // px per frame
    double speed_max = 4;
    double size_min = 24;  // native box width range
    double size_max = 160;
    double aspect_min = 0.6;
    double aspect_max = 1.8;
    double pos_jitter = 0;      // per-frame positional noise, px
    double spawn_rate = 0;      // expected new objects per frame
    double despawn_rate = 0;    // per-object per-frame leave probability
    int classes = 3;
    double importance_min = 0.5;
    double importance_max = 2.0;
    double frame_period = 0.1;
};

// Constant-velocity objects bouncing inside the frame; fully deterministic in
// (params, seed). speed_min == speed_max == 0 with zero jitter yields boxes
// that are identical across frames.
Trace generate_trace(const TraceParams& params, uint64_t seed);

// CSV with header frame,id,class,x_min,y_min,x_max,y_max,importance.
Trace load_trace(const std::string& path, double frame_period = 0.1, double width = 1920,
                 double height = 1280);
void save_trace(const Trace& trace, const std::string& path);

// Marks floor(ratio * window) frames dropped in every horizon-length window,
// chosen uniformly without replacement; a dropped window start exercises the
// simulator's anchor promotion.
Trace drop_frames(const Trace& trace, double ratio, int horizon_len, uint64_t seed);

struct DetectorModel {
    bool threshold_mode = false;  // success iff accuracy >= 0.5 instead of Bernoulli(accuracy)
    double box_noise = 1.0;       // uniform positional noise on detected boxes, px
    double iou_floor = 0.5;       // association gate
};

struct MotionModel {
    int samples = 25;           // flow samples per object per frame
    double sample_jitter = 2.0; // uniform per-sample noise, px
    double drift = 1.0;         // uniform per-object per-frame shared error, px
};

// Wall-clock latency of inspections in milliseconds, independent of the
// compute-unit budget model.
struct LatencyModel {
    double canvas_overhead_ms = 4.0;
    double area_rate_ms = 419.0 / (1920.0 * 1280.0);
    double batch_item_ms = 8.0;
    double full_frame_ms = 419.0;

    double canvas_ms(double area) const { return canvas_overhead_ms + area_rate_ms * area; }
    double batch_ms(std::size_t n, double area) const {
        return canvas_overhead_ms + area_rate_ms * area +
               batch_item_ms * static_cast<double>(n);
    }
};

struct SimModels {
    AccuracyProfile profile;
    ResizePolicy resize;
    ResourceModel resources;
    LatencyModel latency;
    DetectorModel detector;
    MotionModel motion;
    SchedulerOptions sched;
    std::vector<double> canvas_sizes;  // CGPOIS candidate areas
};

struct ObjectFrameLog {
    int id = 0;
    int cls = 0;
    Rect box;            // tracker's current estimate
    double uncertainty = 0;
    double weight = 0;
    double last_inspect = 0;
    double last_accuracy = 1;
};

struct FrameLog {
    int frame = 0;  // 0-based index into the trace
    double time = 0;
    bool dropped = false;
    std::vector<ObjectFrameLog> objects;
};

struct InspectionEvent {
    int frame = 0;
    double time = 0;
    int object_id = 0;
    double ratio = 1;
    double accuracy = 0;
    bool success = false;
    bool full = false;
};

struct HorizonLog {
    int start_frame = 0;
    double budget = 0;
    double consumed = 0;
};

struct EpisodeResult {
    std::vector<FrameLog> frames;
    std::vector<InspectionEvent> inspections;
    std::vector<HorizonLog> horizons;
    std::vector<Schedule> schedules;
    std::vector<double> latencies_ms;
};

// Discrete-time closed loop: full inspection at each horizon anchor, motion
// update + uncertainty growth on partial frames, policy schedule computed once
// per horizon at the first partial frame, canvases executed at their start
// times against the most recent available frame. Deterministic in the seed.
EpisodeResult run_episode(const Trace& trace, Policy policy, const SimModels& models,
                          const HorizonConfig& cfg, uint64_t seed);

struct CriticalityConfig {
    std::map<int, double> width_thresholds;  // class -> width above which critical
    double default_threshold = std::numeric_limits<double>::max();
};

struct Metrics {
    double detection_rate = 0;
    double detection_precision = 0;
    double critical_detection_rate = 0;
    double critical_detection_precision = 0;
    double weighted_recall = 0;
    double max_weighted_uncertainty = 0;
    double mean_weighted_uncertainty = 0;
    double latency_p50_ms = 0;
    double latency_p95_ms = 0;
    double latency_p99_ms = 0;
    double budget_utilization = 0;  // consumed / budget, averaged over horizons
};

// Per-frame association of tracker boxes to ground truth at IoU >= 0.5,
// aggregated over the episode.
Metrics evaluate(const EpisodeResult& episode, const Trace& trace,
                 const CriticalityConfig& crit = {});

}  // namespace csrap
