#include "csrap/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "csrap/errors.hpp"

namespace csrap {

namespace {
constexpr double kEps = 1e-9;
}

std::string to_string(Policy p) {
    switch (p) {
        case Policy::CSRAP: return "csrap";
        case Policy::FS: return "fs";
        case Policy::HUF: return "huf";
        case Policy::BHUF: return "bhuf";
        case Policy::BPB: return "bpb";
        case Policy::GBPB: return "gbpb";
    }
    return "unknown";
}

Policy parse_policy(const std::string& name) {
    std::string s;
    for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == "csrap") return Policy::CSRAP;
    if (s == "fs") return Policy::FS;
    if (s == "huf") return Policy::HUF;
    if (s == "bhuf") return Policy::BHUF;
    if (s == "bpb") return Policy::BPB;
    if (s == "gbpb") return Policy::GBPB;
    throw ConfigError("unknown policy: " + name);
}

FrequencyAssignment inspection_frequencies(const std::vector<ObjectSpec>& objects,
                                           const HorizonConfig& cfg) {
    cfg.validate();
    FrequencyAssignment out;
    if (objects.empty()) return out;
    double w_min = std::numeric_limits<double>::infinity();
    double w_max = -std::numeric_limits<double>::infinity();
    for (const auto& o : objects) {
        w_min = std::min(w_min, o.weight);
        w_max = std::max(w_max, o.weight);
    }
    const double span = w_max - w_min;
    const int i_min = cfg.min_frequency;
    const int i_max = cfg.horizon_len - 1;
    out.entries.reserve(objects.size());
    for (const auto& o : objects) {
        double frac = span > kEps ? (o.weight - w_min) / span : 1.0;
        int insp = static_cast<int>(std::floor(i_min + frac * (i_max - i_min) + kEps));
        insp = std::clamp(insp, i_min, i_max);
        out.entries.push_back({o.id, insp});
    }
    return out;
}

std::vector<CanvasOption> feasible_canvas_sizes(const std::vector<double>& candidates,
                                                const ResourceModel& rm,
                                                const HorizonConfig& cfg) {
    cfg.validate();
    rm.validate();
    std::vector<CanvasOption> out;
    for (double size : candidates) {
        if (size <= 0) continue;
        const double cost = rm.canvas_cost(size);
        int affordable = static_cast<int>(std::floor(rm.budget / cost + kEps));
        if (affordable < 1) continue;  // cannot run even one canvas of this size
        out.push_back({size, std::min(affordable, cfg.horizon_len - 1)});
    }
    std::sort(out.begin(), out.end(),
              [](const CanvasOption& a, const CanvasOption& b) { return a.size < b.size; });
    if (out.empty()) throw NoFeasibleCanvasError();
    return out;
}

std::vector<std::pair<double, int>> assign_timing(int canvas_count, const HorizonConfig& cfg) {
    cfg.validate();
    std::vector<std::pair<double, int>> out;
    if (canvas_count < 1) return out;
    const long long span = cfg.horizon_len - 1;
    out.reserve(static_cast<size_t>(canvas_count));
    for (long long j = 1; j <= canvas_count; ++j) {
        long long k = 1 + (j * span + canvas_count - 1) / canvas_count;  // 1 + ceil(j*span/count)
        out.emplace_back((static_cast<double>(k) - 1.0) * cfg.frame_period, static_cast<int>(k));
    }
    return out;
}

namespace {

// Worst gap between consecutive inspections of an object whose copies sit on
// canvases first, first+stride, ... given the timing table; evaluated at the
// frame boundaries of the horizon with an implicit inspection at t = 0.
double worst_gap(int first, int stride, int copies,
                 const std::vector<std::pair<double, int>>& timing,
                 const HorizonConfig& cfg) {
    std::vector<double> times{0.0};
    for (int m = 0; m < copies; ++m) {
        int idx = first + m * stride;
        if (idx < 0 || idx >= static_cast<int>(timing.size())) break;
        times.push_back(timing[static_cast<size_t>(idx)].first);
    }
    std::sort(times.begin(), times.end());
    double worst = 0;
    for (int k = 1; k <= cfg.horizon_len; ++k) {
        const double t_k = (k - 1) * cfg.frame_period;
        double last = 0;
        for (double t : times)
            if (t < t_k - kEps) last = std::max(last, t);
        worst = std::max(worst, t_k - last);
    }
    return worst;
}

}  // namespace

CanvasMapping cpois_assign(const FrequencyAssignment& freqs, int canvas_count,
                           const std::vector<ObjectSpec>& objects, const HorizonConfig& cfg,
                           std::vector<std::string>* warnings) {
    cfg.validate();
    if (canvas_count < 1) throw ConfigError("cpois_assign: canvas_count must be >= 1");
    CanvasMapping mapping;
    mapping.canvas_count = canvas_count;
    mapping.objects.assign(static_cast<size_t>(canvas_count), {});
    mapping.load.assign(static_cast<size_t>(canvas_count), 0.0);

    std::map<int, const ObjectSpec*> by_id;
    for (const auto& o : objects) by_id[o.id] = &o;

    std::vector<FrequencyEntry> order = freqs.entries;
    std::sort(order.begin(), order.end(), [](const FrequencyEntry& a, const FrequencyEntry& b) {
        if (a.inspections != b.inspections) return a.inspections > b.inspections;
        return a.id < b.id;
    });

    const auto timing = assign_timing(canvas_count, cfg);
    for (const auto& entry : order) {
        auto it = by_id.find(entry.id);
        if (it == by_id.end())
            throw ConfigError("cpois_assign: frequency entry for unknown object id " +
                              std::to_string(entry.id));
        const ObjectSpec& obj = *it->second;
        int insp = entry.inspections;
        if (insp < 1) continue;
        if (insp > canvas_count) {
            if (warnings)
                warnings->push_back("object " + std::to_string(obj.id) + ": frequency " +
                                    std::to_string(insp) + " exceeds canvas count " +
                                    std::to_string(canvas_count) + "; clamped");
            insp = canvas_count;
        }
        const int stride = canvas_count / insp;
        int best = 0;
        double best_load = std::numeric_limits<double>::infinity();
        double best_gap = std::numeric_limits<double>::infinity();
        for (int c = 0; c < stride; ++c) {
            const double load = mapping.load[static_cast<size_t>(c)];
            if (load > best_load + kEps) continue;
            const double gap = worst_gap(c, stride, insp, timing, cfg);
            if (load < best_load - kEps || gap < best_gap - kEps) {
                best = c;
                best_load = load;
                best_gap = gap;
            }
        }
        for (int m = 0; m < insp; ++m) {
            const int c = best + m * stride;
            mapping.objects[static_cast<size_t>(c)].push_back(obj.id);
            mapping.load[static_cast<size_t>(c)] += obj.size();
        }
    }
    return mapping;
}

namespace {

struct RankedEntry {
    int object_id = 0;
    int level = 0;  // 1-based ladder level this entry upgrades to
    double gain = 0;
    double area_delta = 0;
    double efficiency = 0;
};

std::vector<PackItem> selection_items(const std::map<int, SizeLadder>& ladders,
                                      const std::map<int, int>& chosen) {
    std::vector<PackItem> items;
    for (const auto& [id, level] : chosen) {
        if (level < 1) continue;
        const auto& lv = ladders.at(id).levels[static_cast<size_t>(level - 1)];
        items.push_back({id, lv.width, lv.height, true});
    }
    return items;
}

double selection_area(const std::map<int, SizeLadder>& ladders, const std::map<int, int>& chosen) {
    double total = 0;
    for (const auto& [id, level] : chosen) {
        if (level < 1) continue;
        total += ladders.at(id).levels[static_cast<size_t>(level - 1)].area;
    }
    return total;
}

}  // namespace

std::vector<CanvasPlan> fsocm(const CanvasMapping& mapping, double canvas_area,
                              const AccuracyProfile& profile, const ResizePolicy& policy,
                              const std::vector<ObjectSpec>& objects, const HorizonConfig& cfg,
                              const SchedulerOptions& opts, std::vector<std::string>* warnings) {
    cfg.validate();
    if (canvas_area <= 0) throw ConfigError("fsocm: canvas_area must be positive");
    std::map<int, const ObjectSpec*> by_id;
    for (const auto& o : objects) by_id[o.id] = &o;

    const double side = canvas_side(canvas_area, cfg.quantum);
    const double s_eff = opts.fraction() * canvas_area;
    const auto timing = assign_timing(mapping.canvas_count, cfg);

    std::vector<CanvasPlan> plans;
    plans.reserve(static_cast<size_t>(mapping.canvas_count));
    for (int c = 0; c < mapping.canvas_count; ++c) {
        std::vector<int> ids = mapping.objects[static_cast<size_t>(c)];
        std::sort(ids.begin(), ids.end());

        std::map<int, SizeLadder> ladders;
        std::vector<RankedEntry> entries;
        for (int id : ids) {
            auto it = by_id.find(id);
            if (it == by_id.end())
                throw ConfigError("fsocm: mapping references unknown object id " +
                                  std::to_string(id));
            const ObjectSpec& obj = *it->second;
            SizeLadder ladder =
                build_ladder(profile, policy, obj.width, obj.height, cfg.quantum, side);
            if (ladder.levels.empty()) {
                if (warnings)
                    warnings->push_back("canvas " + std::to_string(c + 1) + ": object " +
                                        std::to_string(id) +
                                        " has no admissible resize level; dropped");
                continue;
            }
            const double w = opts.weighted_efficiency ? obj.weight : 1.0;
            for (size_t lv = 0; lv < ladder.levels.size(); ++lv) {
                EfficiencyEntry e = efficiency_terms(w, ladder, static_cast<int>(lv));
                entries.push_back({id, static_cast<int>(lv) + 1, e.gain, e.area_delta,
                                   e.efficiency});
            }
            ladders.emplace(id, std::move(ladder));
        }
        std::sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
            if (std::abs(a.efficiency - b.efficiency) > kEps) return a.efficiency > b.efficiency;
            if (a.object_id != b.object_id) return a.object_id < b.object_id;
            return a.level < b.level;
        });

        std::map<int, int> chosen;  // object id -> accepted ladder level (0 = none)
        for (const auto& [id, ladder] : ladders) chosen[id] = 0;
        double used = 0;
        size_t srindex = entries.size();

        // Phase 1: pure greedy up to half the effective capacity; the first
        // rejection is remembered and retried in phase 2.
        for (size_t k = 0; k < entries.size(); ++k) {
            const auto& e = entries[k];
            if (chosen[e.object_id] != e.level - 1) continue;  // out-of-order increment
            if (used + e.area_delta <= s_eff / 2 + kEps) {
                chosen[e.object_id] = e.level;
                used += e.area_delta;
            } else {
                srindex = k;
                break;
            }
        }
        // Phase 2: keep climbing the ranked list while the area bound and the
        // geometric packing both admit the upgrade.
        for (size_t k = srindex; k < entries.size(); ++k) {
            const auto& e = entries[k];
            if (chosen[e.object_id] != e.level - 1) continue;
            if (used + e.area_delta > s_eff + kEps) break;
            auto trial = chosen;
            trial[e.object_id] = e.level;
            bool ok = true;
            if (!opts.area_only_packing)
                ok = can_pack(selection_items(ladders, trial), canvas_area, opts.pack_mode,
                              cfg.quantum);
            if (!ok) break;
            chosen = std::move(trial);
            used += e.area_delta;
        }

        // Materialize the layout; drop lowest-weight objects if the geometric
        // pack of the accepted selection fails (cannot happen for selections
        // within half capacity, kept as a safety net).
        std::optional<Layout> layout;
        if (!opts.area_only_packing) {
            for (;;) {
                auto items = selection_items(ladders, chosen);
                if (items.empty()) {
                    layout = Layout{};
                    const double s = canvas_side(canvas_area, cfg.quantum);
                    layout->canvas_width = s;
                    layout->canvas_height = s;
                    break;
                }
                layout = pack(items, canvas_area, opts.pack_mode, cfg.quantum);
                if (layout) break;
                int victim = -1;
                double victim_w = std::numeric_limits<double>::infinity();
                for (const auto& [id, level] : chosen) {
                    if (level < 1) continue;
                    const double w = by_id.at(id)->weight;
                    if (w < victim_w - kEps || (w < victim_w + kEps && id > victim)) {
                        victim = id;
                        victim_w = w;
                    }
                }
                if (victim < 0) break;
                if (warnings)
                    warnings->push_back("canvas " + std::to_string(c + 1) + ": object " +
                                        std::to_string(victim) +
                                        " dropped to restore packability");
                chosen[victim] = 0;
            }
        }

        for (const auto& [id, level] : chosen) {
            if (level == 0 && warnings)
                warnings->push_back("canvas " + std::to_string(c + 1) + ": object " +
                                    std::to_string(id) + " received no allocation");
        }

        CanvasPlan plan;
        plan.kind = PlanKind::Canvas;
        plan.size = canvas_area;
        plan.start = timing[static_cast<size_t>(c)].first;
        plan.frame_index = timing[static_cast<size_t>(c)].second;
        plan.source_frame = plan.frame_index;
        if (layout) plan.layout = *layout;

        std::map<int, const Placement*> placed;
        if (layout)
            for (const auto& p : layout->placements) placed[p.id] = &p;
        for (const auto& [id, level] : chosen) {
            if (level < 1) continue;
            const auto& lv = ladders.at(id).levels[static_cast<size_t>(level - 1)];
            PlanItem item;
            item.object_id = id;
            item.ratio = lv.ratio;
            item.accuracy = lv.accuracy;
            item.alloc_area = lv.area;
            if (auto it = placed.find(id); it != placed.end()) {
                item.placement = it->second->rect;
                item.rotated = it->second->rotated;
            }
            plan.items.push_back(item);
        }
        plans.push_back(std::move(plan));
    }
    return plans;
}

double full_frame_accuracy(const AccuracyProfile& profile, double size) {
    if (profile.ratios.empty()) throw ConfigError("accuracy profile has no ratios");
    return lookup(profile, size, profile.ratios.back());
}

double predicted_max_uncertainty(const Schedule& schedule, const std::vector<ObjectSpec>& objects,
                                 const AccuracyProfile& profile, const HorizonConfig& cfg) {
    cfg.validate();
    double worst = 0;
    for (const auto& obj : objects) {
        // (time, accuracy) events; every object starts from a full-frame
        // detection at t = 0.
        std::vector<std::pair<double, double>> events{
            {0.0, full_frame_accuracy(profile, obj.size())}};
        for (const auto& plan : schedule.plans)
            for (const auto& item : plan.items)
                if (item.object_id == obj.id) events.emplace_back(plan.start, item.accuracy);
        std::sort(events.begin(), events.end());
        for (int k = 1; k <= cfg.horizon_len; ++k) {
            const double t_k = (k - 1) * cfg.frame_period;
            double last_t = 0, last_a = 0;
            bool any = false;
            for (const auto& [t, a] : events) {
                if (t >= t_k - kEps) break;
                if (a <= kEps) continue;  // zero-accuracy inspection carries no information
                last_t = t;
                last_a = a;
                any = true;
            }
            if (!any) continue;  // k = 1 boundary: no inspection strictly before t = 0
            worst = std::max(worst, obj.weight * (t_k - last_t) / last_a);
        }
    }
    return worst;
}

Schedule cgpois(const std::vector<ObjectSpec>& objects, const std::vector<double>& candidate_sizes,
                const AccuracyProfile& profile, const ResizePolicy& policy,
                const ResourceModel& rm, const HorizonConfig& cfg, const SchedulerOptions& opts) {
    cfg.validate();
    rm.validate();
    if (objects.empty()) throw ConfigError("cgpois: object set is empty");
    const FrequencyAssignment freqs = inspection_frequencies(objects, cfg);
    const auto options = feasible_canvas_sizes(candidate_sizes, rm, cfg);

    bool have_best = false;
    Schedule best;
    for (const auto& opt : options) {
        for (int count = 1; count <= opt.count; ++count) {
            std::vector<std::string> warns;
            const CanvasMapping mapping =
                cpois_assign(freqs, count, objects, cfg, &warns);
            Schedule cand;
            cand.policy = Policy::CSRAP;
            cand.plans = fsocm(mapping, opt.size, profile, policy, objects, cfg, opts, &warns);
            for (auto& plan : cand.plans) plan.cost = rm.canvas_cost(opt.size);
            cand.canvas_size = opt.size;
            cand.canvas_count = count;
            cand.pack_mode = opts.pack_mode;
            cand.capacity_fraction = opts.fraction();
            cand.warnings = std::move(warns);
            cand.predicted_max_u = predicted_max_uncertainty(cand, objects, profile, cfg);
            if (!have_best || cand.predicted_max_u < best.predicted_max_u - kEps ||
                (cand.predicted_max_u < best.predicted_max_u + kEps &&
                 (cand.canvas_size < best.canvas_size - kEps ||
                  (std::abs(cand.canvas_size - best.canvas_size) <= kEps &&
                   cand.canvas_count < best.canvas_count)))) {
                best = std::move(cand);
                have_best = true;
            }
        }
    }
    if (!have_best) throw NoFeasibleCanvasError();
    return best;
}

std::vector<std::string> validate_schedule(const Schedule& schedule, const ResourceModel& rm,
                                           const HorizonConfig& cfg) {
    std::vector<std::string> violations;
    double total_cost = 0;
    double prev_start = -std::numeric_limits<double>::infinity();
    for (size_t p = 0; p < schedule.plans.size(); ++p) {
        const auto& plan = schedule.plans[p];
        const std::string tag = "plan " + std::to_string(p + 1);
        if (plan.frame_index < 2 || plan.frame_index > cfg.horizon_len)
            violations.push_back(tag + ": frame index " + std::to_string(plan.frame_index) +
                                 " outside [2, " + std::to_string(cfg.horizon_len) + "]");
        if (std::abs(plan.start - (plan.frame_index - 1) * cfg.frame_period) > 1e-6)
            violations.push_back(tag + ": start time disagrees with frame index");
        if (plan.start < prev_start - kEps)
            violations.push_back(tag + ": plans not sorted by start time");
        prev_start = std::max(prev_start, plan.start);
        std::vector<int> ids;
        double alloc = 0;
        for (const auto& item : plan.items) {
            ids.push_back(item.object_id);
            alloc += item.alloc_area;
        }
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
            violations.push_back(tag + ": duplicate object within plan");
        if (plan.kind == PlanKind::Canvas) {
            const double cap = schedule.capacity_fraction * plan.size;
            if (alloc > cap + 1e-6)
                violations.push_back(tag + ": allocated area " + std::to_string(alloc) +
                                     " exceeds capacity " + std::to_string(cap));
            if (!plan.layout.placements.empty() && !layout_valid(plan.layout))
                violations.push_back(tag + ": layout has overlaps or out-of-bounds placements");
            if (!plan.layout.placements.empty() &&
                plan.layout.placements.size() != plan.items.size())
                violations.push_back(tag + ": layout does not cover every allocated object");
        }
        total_cost += plan.cost;
    }
    if (total_cost > rm.budget * (1 + 1e-9) + 1e-6)
        violations.push_back("total cost " + std::to_string(total_cost) + " exceeds budget " +
                             std::to_string(rm.budget));
    if (schedule.policy == Policy::CSRAP && !schedule.plans.empty()) {
        const int n = schedule.canvas_count;
        if (n < 1 || n > cfg.horizon_len - 1)
            violations.push_back("canvas count " + std::to_string(n) + " outside [1, " +
                                 std::to_string(cfg.horizon_len - 1) + "]");
        const double cost = rm.canvas_cost(schedule.canvas_size);
        const int affordable = static_cast<int>(std::floor(rm.budget / cost + kEps));
        if (n > affordable)
            violations.push_back("canvas count " + std::to_string(n) +
                                 " exceeds affordable count " + std::to_string(affordable));
        if (static_cast<int>(schedule.plans.size()) != n)
            violations.push_back("plan list does not match canvas count");
    }
    return violations;
}

}  // namespace csrap
