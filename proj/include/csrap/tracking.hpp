#pragma once
#include <utility>
#include <vector>

#include "csrap/geometry.hpp"

namespace csrap {

// Per-region motion samples (one displacement vector per sampled pixel cell).
struct MotionEstimate {
    std::vector<double> dx;
    std::vector<double> dy;
};

// Inputs of the growth-rate estimate: expanded candidate-region area at the
// first partial observation of the horizon, box area at the last full-frame
// detection, and the latency of that full inspection.
struct ExpansionRecord {
    double expanded_area = 0;
    double full_area = 0;
    double full_latency = 0;
};

struct TrackedObject {
    int id = 0;
    Rect box;             // current predicted box B
    Rect expanded;        // conservative candidate region containing the box
    double size = 0;      // native box area S_i at the last detection
    double importance = 1;    // semantic score v_i
    double growth = 0;        // u_i, frozen per horizon
    double last_inspect = 0;  // t_i
    double last_accuracy = 1; // accuracy of the inspection at t_i
    int cls = 0;

    double weight() const { return importance * growth; }
};

// Box translated by the per-axis median displacement. Throws EmptyMotionError.
Rect predict_box(const Rect& box, const MotionEstimate& m);

// Region stretched by the per-axis displacement extrema (min on the low edges,
// max on the high edges), so every sampled motion stays inside. Throws
// EmptyMotionError.
Rect expand_region(const Rect& region, const MotionEstimate& m);

// u = sqrt(expanded_area / full_area) / full_latency. Throws
// DegenerateTrackError when full_area or full_latency is not positive.
double growth_rate(const ExpansionRecord& e);

// U_i(t) = weight * (t - last_inspect) / last_accuracy, t >= last_inspect.
// Throws ZeroAccuracyError when last_accuracy is zero.
double uncertainty(const TrackedObject& o, double t);

// Minimum-cost assignment between track boxes and detections under cost
// 1 - IoU; matched pairs with IoU below iou_floor are discarded. Returns
// (track_index, detection_index) pairs sorted by track index.
std::vector<std::pair<int, int>> associate(const std::vector<Rect>& tracks,
                                           const std::vector<Rect>& detections,
                                           double iou_floor);

}  // namespace csrap
