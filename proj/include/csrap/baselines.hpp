#pragma once
#include <vector>

#include "csrap/scheduler.hpp"

namespace csrap {

// Horizon schedules for the non-canvas policies. All of them spend the same
// budget R over frames 2..H_l and emit plans executable by the simulator:
//   FS   - full-frame inspections at a fixed stride.
//   HUF  - per-frame greedy region crops by predicted uncertainty.
//   BHUF - like HUF but crops are resized toward a common bin and batched.
//   BPB  - per-object inspection frequencies proportional to weight, spread
//          evenly and executed as one native-resolution batch per frame.
//   GBPB - BPB with a per-object resize ratio chosen by weighted accuracy
//          gain per unit area.
Schedule baseline_schedule(Policy policy, const std::vector<ObjectSpec>& objects,
                           const AccuracyProfile& profile, const ResizePolicy& resize,
                           const ResourceModel& rm, const HorizonConfig& cfg,
                           const SchedulerOptions& opts = {});

// Dispatches to cgpois for Policy::CSRAP and to baseline_schedule otherwise.
Schedule make_schedule(Policy policy, const std::vector<ObjectSpec>& objects,
                       const std::vector<double>& candidate_sizes,
                       const AccuracyProfile& profile, const ResizePolicy& resize,
                       const ResourceModel& rm, const HorizonConfig& cfg,
                       const SchedulerOptions& opts = {});

}  // namespace csrap
