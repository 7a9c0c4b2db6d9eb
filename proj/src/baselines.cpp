#include "csrap/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "csrap/errors.hpp"

namespace csrap {

namespace {

constexpr double kEps = 1e-9;

double top_ratio(const AccuracyProfile& profile) {
    if (profile.ratios.empty()) throw ConfigError("accuracy profile has no ratios");
    return profile.ratios.back();
}

Schedule fixed_stride(const std::vector<ObjectSpec>& objects, const AccuracyProfile& profile,
                      const ResourceModel& rm, const HorizonConfig& cfg) {
    Schedule s;
    s.policy = Policy::FS;
    const double cost_full = rm.full_frame_cost();
    const double per_frame = rm.budget / (cfg.horizon_len - 1);
    const int stride = std::max(1, static_cast<int>(std::ceil(cost_full / per_frame - kEps)));
    if (stride > cfg.horizon_len - 1) {
        s.warnings.push_back("budget below one full-frame inspection per horizon");
        return s;
    }
    const double r_top = top_ratio(profile);
    for (int k = 1 + stride; k <= cfg.horizon_len; k += stride) {
        CanvasPlan plan;
        plan.kind = PlanKind::FullFrame;
        plan.size = rm.frame_volume;
        plan.start = (k - 1) * cfg.frame_period;
        plan.frame_index = k;
        plan.source_frame = k;
        plan.cost = cost_full;
        for (const auto& o : objects) {
            PlanItem item;
            item.object_id = o.id;
            item.ratio = r_top;
            item.accuracy = lookup(profile, o.size(), r_top);
            item.alloc_area = o.size();
            plan.items.push_back(item);
        }
        s.plans.push_back(std::move(plan));
    }
    return s;
}

struct InspectState {
    double t_last = 0;
    double accuracy = 1;
};

// Predicted uncertainty ordering used by the per-frame greedy baselines,
// descending with id as the tie-break.
std::vector<const ObjectSpec*> by_priority(const std::vector<ObjectSpec>& objects,
                                           const std::map<int, InspectState>& state, double t) {
    std::vector<const ObjectSpec*> order;
    for (const auto& o : objects) order.push_back(&o);
    std::sort(order.begin(), order.end(), [&](const ObjectSpec* a, const ObjectSpec* b) {
        const auto& sa = state.at(a->id);
        const auto& sb = state.at(b->id);
        const double ua = sa.accuracy > kEps ? a->weight * (t - sa.t_last) / sa.accuracy
                                             : std::numeric_limits<double>::infinity();
        const double ub = sb.accuracy > kEps ? b->weight * (t - sb.t_last) / sb.accuracy
                                             : std::numeric_limits<double>::infinity();
        if (ua != ub) return ua > ub;
        return a->id < b->id;
    });
    return order;
}

Schedule heaviest_first(const std::vector<ObjectSpec>& objects, const AccuracyProfile& profile,
                        const ResourceModel& rm, const HorizonConfig& cfg) {
    Schedule s;
    s.policy = Policy::HUF;
    const double per_frame = rm.budget / (cfg.horizon_len - 1);
    const double r_top = top_ratio(profile);
    std::map<int, InspectState> state;
    for (const auto& o : objects)
        state[o.id] = {0.0, full_frame_accuracy(profile, o.size())};
    for (int k = 2; k <= cfg.horizon_len; ++k) {
        const double t_k = (k - 1) * cfg.frame_period;
        double left = per_frame;
        for (const ObjectSpec* o : by_priority(objects, state, t_k)) {
            const double cost = rm.canvas_overhead + rm.area_cost_rate * o->size();
            if (cost > left + kEps) continue;  // try cheaper regions further down
            CanvasPlan plan;
            plan.kind = PlanKind::Region;
            plan.size = o->size();
            plan.start = t_k;
            plan.frame_index = k;
            plan.source_frame = k;
            plan.cost = cost;
            PlanItem item;
            item.object_id = o->id;
            item.ratio = r_top;
            item.accuracy = lookup(profile, o->size(), r_top);
            item.alloc_area = o->size();
            plan.items.push_back(item);
            s.plans.push_back(std::move(plan));
            left -= cost;
            state[o->id] = {t_k, item.accuracy};
        }
    }
    return s;
}

// Resize factor whose scaled area lands nearest the target bin, preferring the
// smaller factor on ties.
double bin_ratio(const ObjectSpec& o, const ResizePolicy& resize, double target_bin) {
    const double want = std::sqrt(target_bin / std::max(o.size(), 1.0));
    double best = resize.factors.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (double f : resize.factors) {
        const double d = std::abs(f - want);
        if (d < best_d - kEps) {
            best = f;
            best_d = d;
        }
    }
    return best;
}

Schedule batched_heaviest_first(const std::vector<ObjectSpec>& objects,
                                const AccuracyProfile& profile, const ResizePolicy& resize,
                                const ResourceModel& rm, const HorizonConfig& cfg) {
    Schedule s;
    s.policy = Policy::BHUF;
    const double per_frame = rm.budget / (cfg.horizon_len - 1);
    const double target_bin = profile.size_bins[profile.size_bins.size() / 2];
    std::map<int, InspectState> state;
    for (const auto& o : objects)
        state[o.id] = {0.0, full_frame_accuracy(profile, o.size())};
    for (int k = 2; k <= cfg.horizon_len; ++k) {
        const double t_k = (k - 1) * cfg.frame_period;
        CanvasPlan plan;
        plan.kind = PlanKind::Batch;
        plan.start = t_k;
        plan.frame_index = k;
        plan.source_frame = k;
        double area_sum = 0;
        for (const ObjectSpec* o : by_priority(objects, state, t_k)) {
            const double r = bin_ratio(*o, resize, target_bin);
            const double w = quantize_len(o->width * r, cfg.quantum);
            const double h = quantize_len(o->height * r, cfg.quantum);
            const double a = w * h;
            const double n = static_cast<double>(plan.items.size());
            // batch cost = c0 + rate * Σareas + per-item dispatch slope
            const double cost_with = rm.canvas_overhead + rm.area_cost_rate * (area_sum + a) +
                                     rm.batch_latency_slope * (n + 1);
            if (cost_with > per_frame + kEps) continue;
            PlanItem item;
            item.object_id = o->id;
            item.ratio = r;
            item.accuracy = lookup(profile, o->size(), r);
            item.alloc_area = a;
            plan.items.push_back(item);
            area_sum += a;
            state[o->id] = {t_k, item.accuracy};
        }
        if (plan.items.empty()) continue;
        plan.size = area_sum;
        plan.cost = rm.canvas_overhead + rm.area_cost_rate * area_sum +
                    rm.batch_latency_slope * static_cast<double>(plan.items.size());
        s.plans.push_back(std::move(plan));
    }
    return s;
}

// Shared machinery for the proportional-budget policies: given a per-object
// resize ratio, distribute B inspection tasks by weight (largest remainder),
// spread them evenly over frames 2..H_l, and batch per frame.
Schedule proportional_budget(Policy which, const std::vector<ObjectSpec>& objects,
                             const AccuracyProfile& profile, const ResizePolicy& resize,
                             const ResourceModel& rm, const HorizonConfig& cfg,
                             const std::map<int, double>& ratio_of) {
    Schedule s;
    s.policy = which;
    if (objects.empty()) return s;
    const int frames = cfg.horizon_len - 1;

    struct Task {
        int id;
        double ratio;
        double accuracy;
        double area;       // resized (charged) area
        double unit_cost;  // rate * area + per-item slope
    };
    std::map<int, Task> proto;
    double mean_cost = 0;
    for (const auto& o : objects) {
        Task t;
        t.id = o.id;
        t.ratio = ratio_of.at(o.id);
        const double w = quantize_len(o.width * t.ratio, cfg.quantum);
        const double h = quantize_len(o.height * t.ratio, cfg.quantum);
        t.area = w * h;
        t.accuracy = lookup(profile, o.size(), t.ratio);
        t.unit_cost = rm.area_cost_rate * t.area + rm.batch_latency_slope;
        mean_cost += t.unit_cost;
        proto[o.id] = t;
    }
    mean_cost /= static_cast<double>(objects.size());
    const double usable = rm.budget - frames * rm.canvas_overhead;
    int total_tasks =
        mean_cost > kEps ? static_cast<int>(std::floor(usable / mean_cost + kEps)) : 0;
    total_tasks = std::max(total_tasks, 0);

    // Largest-remainder apportionment of tasks by weight.
    double weight_sum = 0;
    for (const auto& o : objects) weight_sum += std::max(o.weight, 0.0);
    struct Quota {
        int id;
        int base;
        double frac;
        double weight;
    };
    std::vector<Quota> quotas;
    for (const auto& o : objects) {
        const double share = weight_sum > kEps
                                 ? std::max(o.weight, 0.0) / weight_sum
                                 : 1.0 / static_cast<double>(objects.size());
        const double q = total_tasks * share;
        quotas.push_back({o.id, static_cast<int>(std::floor(q + kEps)),
                          q - std::floor(q + kEps), o.weight});
    }
    int assigned = 0;
    for (const auto& q : quotas) assigned += q.base;
    int leftover = total_tasks - assigned;
    std::sort(quotas.begin(), quotas.end(), [](const Quota& a, const Quota& b) {
        if (std::abs(a.frac - b.frac) > kEps) return a.frac > b.frac;
        if (std::abs(a.weight - b.weight) > kEps) return a.weight > b.weight;
        return a.id < b.id;
    });
    std::map<int, int> count;
    for (auto& q : quotas) {
        if (leftover > 0 && q.base < frames) {
            ++q.base;
            --leftover;
        }
        count[q.id] = std::min(q.base, frames);  // at most one task per frame
    }

    // Spread each object's tasks evenly: frame 1 + ceil(m * frames / I).
    std::map<int, std::vector<int>> frame_tasks;  // frame -> object ids
    for (const auto& o : objects) {
        const int insp = count[o.id];
        for (int m = 1; m <= insp; ++m) {
            const long long k =
                1 + (static_cast<long long>(m) * frames + insp - 1) / insp;
            frame_tasks[static_cast<int>(k)].push_back(o.id);
        }
    }
    for (auto& [k, ids] : frame_tasks) std::sort(ids.begin(), ids.end());

    auto total_cost = [&]() {
        double c = 0;
        for (const auto& [k, ids] : frame_tasks) {
            if (ids.empty()) continue;
            c += rm.canvas_overhead;
            for (int id : ids) c += proto[id].unit_cost;
        }
        return c;
    };
    // Deterministic trim: while over budget, the lowest-weight object (ties:
    // higher id) loses its latest remaining task.
    while (total_cost() > rm.budget + 1e-6) {
        int victim = -1;
        double victim_w = std::numeric_limits<double>::infinity();
        for (const auto& o : objects) {
            if (count[o.id] <= 0) continue;
            if (o.weight < victim_w - kEps ||
                (std::abs(o.weight - victim_w) <= kEps && o.id > victim)) {
                victim = o.id;
                victim_w = o.weight;
            }
        }
        if (victim < 0) break;
        for (auto it = frame_tasks.rbegin(); it != frame_tasks.rend(); ++it) {
            auto pos = std::find(it->second.begin(), it->second.end(), victim);
            if (pos != it->second.end()) {
                it->second.erase(pos);
                --count[victim];
                break;
            }
        }
    }

    for (const auto& [k, ids] : frame_tasks) {
        if (ids.empty()) continue;
        CanvasPlan plan;
        plan.kind = PlanKind::Batch;
        plan.start = (k - 1) * cfg.frame_period;
        plan.frame_index = k;
        plan.source_frame = k;
        double area_sum = 0;
        for (int id : ids) {
            const Task& t = proto[id];
            PlanItem item;
            item.object_id = id;
            item.ratio = t.ratio;
            item.accuracy = t.accuracy;
            item.alloc_area = t.area;
            plan.items.push_back(item);
            area_sum += t.area;
        }
        plan.size = area_sum;
        plan.cost = rm.canvas_overhead + rm.area_cost_rate * area_sum +
                    rm.batch_latency_slope * static_cast<double>(ids.size());
        s.plans.push_back(std::move(plan));
    }
    return s;
}

std::map<int, double> native_ratios(const std::vector<ObjectSpec>& objects,
                                    const AccuracyProfile& profile) {
    std::map<int, double> out;
    const double r = top_ratio(profile);
    for (const auto& o : objects) out[o.id] = r;
    return out;
}

// Per-object resize ratio maximizing weighted accuracy per unit of charged
// area, restricted to the admissible accuracy band when possible.
std::map<int, double> gain_ratios(const std::vector<ObjectSpec>& objects,
                                  const AccuracyProfile& profile, const ResizePolicy& resize,
                                  const HorizonConfig& cfg) {
    std::map<int, double> out;
    for (const auto& o : objects) {
        double best_r = top_ratio(profile);
        double best_v = -std::numeric_limits<double>::infinity();
        bool any_admissible = false;
        for (int pass = 0; pass < 2 && !any_admissible; ++pass) {
            for (double f : resize.factors) {
                double acc;
                try {
                    acc = lookup(profile, o.size(), f);
                } catch (const UnknownRatioError&) {
                    continue;
                }
                if (pass == 0 && (acc < resize.acc_min - kEps || acc > resize.acc_max + kEps))
                    continue;
                const double w = quantize_len(o.width * f, cfg.quantum);
                const double h = quantize_len(o.height * f, cfg.quantum);
                const double area = std::max(w * h, 1.0);
                const double v = std::max(o.weight, kEps) * acc / area;
                if (v > best_v + kEps) {
                    best_v = v;
                    best_r = f;
                }
                if (pass == 0) any_admissible = true;
            }
            if (pass == 0 && !any_admissible) best_v = -std::numeric_limits<double>::infinity();
        }
        out[o.id] = best_r;
    }
    return out;
}

}  // namespace

Schedule baseline_schedule(Policy policy, const std::vector<ObjectSpec>& objects,
                           const AccuracyProfile& profile, const ResizePolicy& resize,
                           const ResourceModel& rm, const HorizonConfig& cfg,
                           const SchedulerOptions& opts) {
    cfg.validate();
    rm.validate();
    Schedule s;
    switch (policy) {
        case Policy::FS:
            s = fixed_stride(objects, profile, rm, cfg);
            break;
        case Policy::HUF:
            s = heaviest_first(objects, profile, rm, cfg);
            break;
        case Policy::BHUF:
            s = batched_heaviest_first(objects, profile, resize, rm, cfg);
            break;
        case Policy::BPB:
            s = proportional_budget(Policy::BPB, objects, profile, resize, rm, cfg,
                                    native_ratios(objects, profile));
            break;
        case Policy::GBPB:
            s = proportional_budget(Policy::GBPB, objects, profile, resize, rm, cfg,
                                    gain_ratios(objects, profile, resize, cfg));
            break;
        case Policy::CSRAP:
            throw ConfigError("baseline_schedule: use cgpois for the canvas policy");
    }
    std::stable_sort(s.plans.begin(), s.plans.end(),
                     [](const CanvasPlan& a, const CanvasPlan& b) { return a.start < b.start; });
    s.capacity_fraction = opts.fraction();
    s.pack_mode = opts.pack_mode;
    s.canvas_count = static_cast<int>(s.plans.size());
    s.predicted_max_u = predicted_max_uncertainty(s, objects, profile, cfg);
    return s;
}

Schedule make_schedule(Policy policy, const std::vector<ObjectSpec>& objects,
                       const std::vector<double>& candidate_sizes, const AccuracyProfile& profile,
                       const ResizePolicy& resize, const ResourceModel& rm,
                       const HorizonConfig& cfg, const SchedulerOptions& opts) {
    if (policy == Policy::CSRAP)
        return cgpois(objects, candidate_sizes, profile, resize, rm, cfg, opts);
    return baseline_schedule(policy, objects, profile, resize, rm, cfg, opts);
}

}  // namespace csrap
