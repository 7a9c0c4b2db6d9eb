#pragma once
#include <string>
#include <vector>

#include "csrap/accuracy.hpp"
#include "csrap/config.hpp"
#include "csrap/packing.hpp"

namespace csrap {

// Scheduler-facing view of a tracked object: native box dimensions plus the
// uncertainty weight w = importance * growth.
struct ObjectSpec {
    int id = 0;
    double width = 0;
    double height = 0;
    double weight = 0;

    double size() const { return width * height; }
};

enum class Policy { CSRAP, FS, HUF, BHUF, BPB, GBPB };

std::string to_string(Policy p);
Policy parse_policy(const std::string& name);

struct FrequencyEntry {
    int id = 0;
    int inspections = 0;  // I_i
};

struct FrequencyAssignment {
    std::vector<FrequencyEntry> entries;  // one per object, input order
};

struct CanvasMapping {
    int canvas_count = 0;
    std::vector<std::vector<int>> objects;  // object ids per canvas
    std::vector<double> load;               // Σ native sizes per canvas
};

enum class PlanKind { Canvas, FullFrame, Batch, Region };

struct PlanItem {
    int object_id = 0;
    double ratio = 1.0;
    double accuracy = 0.0;
    double alloc_area = 0.0;
    Rect placement;  // within the canvas; meaningful for PlanKind::Canvas
    bool rotated = false;
};

struct CanvasPlan {
    PlanKind kind = PlanKind::Canvas;
    double size = 0;       // canvas area (full frame volume for FullFrame plans)
    double start = 0;      // t_c, seconds from horizon start
    int frame_index = 0;   // k in {2..H_l}
    int source_frame = 0;  // nominal frame the inspection reads
    double cost = 0;       // compute units charged against the horizon budget
    std::vector<PlanItem> items;
    Layout layout;  // populated for PlanKind::Canvas
};

struct Schedule {
    Policy policy = Policy::CSRAP;
    std::vector<CanvasPlan> plans;   // sorted by start time
    double canvas_size = 0;          // uniform canvas area (CSRAP), 0 otherwise
    int canvas_count = 0;
    double predicted_max_u = 0;
    PackMode pack_mode = PackMode::General;
    double capacity_fraction = 0.5;
    std::vector<std::string> warnings;
};

struct SchedulerOptions {
    PackMode pack_mode = PackMode::General;
    double capacity_fraction = -1;    // <= 0 means mode default: 0.5 general, 1.0 quantized
    bool weighted_efficiency = true;  // use G = w * gain / area (unweighted switch off)
    bool area_only_packing = false;   // replace geometric pack checks with the area bound

    double fraction() const {
        if (capacity_fraction > 0) return capacity_fraction;
        return pack_mode == PackMode::Quantized ? 1.0 : 0.5;
    }
};

// I_i = floor(I_min + ((w_i - w_min)/(w_max - w_min)) * (H_l - I_min - 1)); the
// fraction is 1 for every object when all weights are equal (incl. n = 1).
FrequencyAssignment inspection_frequencies(const std::vector<ObjectSpec>& objects,
                                           const HorizonConfig& cfg);

struct CanvasOption {
    double size = 0;  // canvas area
    int count = 0;    // canvases affordable per horizon, capped at H_l - 1
};

// Affordable canvas counts floor(R / (c0 + rate*S)) per candidate size, capped
// at H_l - 1; sizes the budget cannot afford even once are rejected. Throws
// NoFeasibleCanvasError when nothing survives.
std::vector<CanvasOption> feasible_canvas_sizes(const std::vector<double>& candidates,
                                                const ResourceModel& rm,
                                                const HorizonConfig& cfg);

// Canvas j (1-based) runs at frame k_j = 1 + ceil(j*(H_l-1)/count), i.e. at
// t_c = (k_j - 1) * P; indices are strictly increasing and end at H_l.
std::vector<std::pair<double, int>> assign_timing(int canvas_count,
                                                  const HorizonConfig& cfg);

// Objects in descending-frequency order (ties by id) place their first copy on
// the least-loaded canvas among the first floor(count / I_i); load ties prefer
// the canvas minimizing the object's own worst inspection gap, then the lowest
// index. Remaining copies replicate at first + m*stride.
CanvasMapping cpois_assign(const FrequencyAssignment& freqs, int canvas_count,
                           const std::vector<ObjectSpec>& objects,
                           const HorizonConfig& cfg,
                           std::vector<std::string>* warnings = nullptr);

// Per-canvas resize selection: greedy by efficiency G over ladder increments,
// phase 1 up to half the effective capacity (fraction * canvas_area), phase 2
// up to the full effective capacity with a packing check per upgrade. Emits one
// CanvasPlan per canvas with layout and timing.
std::vector<CanvasPlan> fsocm(const CanvasMapping& mapping, double canvas_area,
                              const AccuracyProfile& profile, const ResizePolicy& policy,
                              const std::vector<ObjectSpec>& objects,
                              const HorizonConfig& cfg, const SchedulerOptions& opts = {},
                              std::vector<std::string>* warnings = nullptr);

// Max over objects of the worst per-frame-boundary uncertainty, assuming every
// scheduled inspection succeeds at its scheduled accuracy. Objects start from a
// full inspection at t = 0 with full-frame accuracy; the value at boundary t_k
// uses the most recent inspection strictly before t_k.
double predicted_max_uncertainty(const Schedule& schedule,
                                 const std::vector<ObjectSpec>& objects,
                                 const AccuracyProfile& profile,
                                 const HorizonConfig& cfg);

// Canvas-size search: evaluates every feasible (size, count) option through
// cpois_assign + fsocm and keeps the schedule with minimum predicted U_max
// (ties: smaller size, then smaller count).
Schedule cgpois(const std::vector<ObjectSpec>& objects,
                const std::vector<double>& candidate_sizes,
                const AccuracyProfile& profile, const ResizePolicy& policy,
                const ResourceModel& rm, const HorizonConfig& cfg,
                const SchedulerOptions& opts = {});

// Re-checks the schedule constraints: per-plan frame indices and object
// uniqueness, plan ordering, per-canvas capacity (Σ allocated ≤ fraction *
// size) and layout geometry, total cost within budget, and for uniform canvas
// schedules the count forms N ≤ floor(R/cost) and 1 ≤ N ≤ H_l - 1.
std::vector<std::string> validate_schedule(const Schedule& schedule,
                                           const ResourceModel& rm,
                                           const HorizonConfig& cfg);

// Accuracy of a full-resolution inspection for an object of this size (largest
// profiled ratio, normally 1.0).
double full_frame_accuracy(const AccuracyProfile& profile, double size);

}  // namespace csrap
