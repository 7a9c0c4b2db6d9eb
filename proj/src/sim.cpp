#include "csrap/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "csrap/errors.hpp"

namespace csrap {

namespace {
constexpr double kEps = 1e-9;
}

Trace generate_trace(const TraceParams& params, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    struct Mover {
        TraceObject obj;
        double vx = 0, vy = 0;
    };
    Trace trace;
    trace.frame_period = params.frame_period;
    trace.frame_width = params.width;
    trace.frame_height = params.height;

    int next_id = 1;
    auto spawn = [&]() {
        Mover m;
        std::uniform_real_distribution<double> size_d(params.size_min, params.size_max);
        std::uniform_real_distribution<double> aspect_d(params.aspect_min, params.aspect_max);
        const double w = size_d(rng);
        const double h = std::min(w * aspect_d(rng), params.height - 1);
        std::uniform_real_distribution<double> x_d(0.0, std::max(params.width - w, 1.0));
        std::uniform_real_distribution<double> y_d(0.0, std::max(params.height - h, 1.0));
        const double x = x_d(rng);
        const double y = y_d(rng);
        m.obj.id = next_id++;
        m.obj.cls = params.classes > 0
                        ? static_cast<int>(unit(rng) * params.classes) % params.classes
                        : 0;
        m.obj.box = {x, y, x + w, y + h};
        std::uniform_real_distribution<double> imp_d(params.importance_min, params.importance_max);
        m.obj.importance = imp_d(rng);
        std::uniform_real_distribution<double> speed_d(params.speed_min, params.speed_max);
        const double speed = speed_d(rng);
        const double angle = unit(rng) * 2.0 * M_PI;
        m.vx = speed * std::cos(angle);
        m.vy = speed * std::sin(angle);
        return m;
    };

    std::vector<Mover> movers;
    movers.reserve(static_cast<size_t>(params.objects));
    for (int i = 0; i < params.objects; ++i) movers.push_back(spawn());

    std::uniform_real_distribution<double> jit(-params.pos_jitter, params.pos_jitter);
    for (int f = 0; f < params.frames; ++f) {
        if (f > 0) {
            for (auto& m : movers) {
                double dx = m.vx, dy = m.vy;
                if (params.pos_jitter > 0) {
                    dx += jit(rng);
                    dy += jit(rng);
                }
                Rect b = m.obj.box.translated(dx, dy);
                // reflect off the frame borders
                if (b.x_min < 0) {
                    b = m.obj.box.translated(-dx, dy);
                    m.vx = -m.vx;
                } else if (b.x_max > params.width) {
                    b = m.obj.box.translated(-dx, dy);
                    m.vx = -m.vx;
                }
                if (b.y_min < 0) {
                    b = {b.x_min, m.obj.box.y_min - (b.y_min - m.obj.box.y_min),
                         b.x_max, m.obj.box.y_max - (b.y_max - m.obj.box.y_max)};
                    m.vy = -m.vy;
                } else if (b.y_max > params.height) {
                    b = {b.x_min, m.obj.box.y_min - (b.y_min - m.obj.box.y_min),
                         b.x_max, m.obj.box.y_max - (b.y_max - m.obj.box.y_max)};
                    m.vy = -m.vy;
                }
                m.obj.box = b;
            }
            if (params.despawn_rate > 0) {
                std::vector<Mover> kept;
                for (auto& m : movers)
                    if (unit(rng) >= params.despawn_rate) kept.push_back(m);
                movers = std::move(kept);
            }
            if (params.spawn_rate > 0 && unit(rng) < std::min(params.spawn_rate, 1.0))
                movers.push_back(spawn());
        }
        TraceFrame frame;
        for (const auto& m : movers) frame.objects.push_back(m.obj);
        trace.frames.push_back(std::move(frame));
    }
    return trace;
}

void save_trace(const Trace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open trace file for writing: " + path);
    out << "frame,id,class,x_min,y_min,x_max,y_max,importance\n";
    char buf[256];
    for (size_t f = 0; f < trace.frames.size(); ++f) {
        for (const auto& o : trace.frames[f].objects) {
            std::snprintf(buf, sizeof(buf), "%zu,%d,%d,%.4f,%.4f,%.4f,%.4f,%.4f\n", f, o.id,
                          o.cls, o.box.x_min, o.box.y_min, o.box.x_max, o.box.y_max,
                          o.importance);
            out << buf;
        }
    }
}

Trace load_trace(const std::string& path, double frame_period, double width, double height) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trace file: " + path);
    Trace trace;
    trace.frame_period = frame_period;
    trace.frame_width = width;
    trace.frame_height = height;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty trace file: " + path);
    std::map<long, std::vector<TraceObject>> by_frame;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 8)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected 8 fields, got " + std::to_string(cells.size()));
        try {
            const long frame = std::stol(cells[0]);
            TraceObject o;
            o.id = std::stoi(cells[1]);
            o.cls = std::stoi(cells[2]);
            o.box = {std::stod(cells[3]), std::stod(cells[4]), std::stod(cells[5]),
                     std::stod(cells[6])};
            o.importance = std::stod(cells[7]);
            by_frame[frame].push_back(o);
        } catch (const std::exception&) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unparsable row");
        }
    }
    if (by_frame.empty()) throw ConfigError("trace has no rows: " + path);
    const long first = by_frame.begin()->first;
    const long last = by_frame.rbegin()->first;
    trace.frames.resize(static_cast<size_t>(last - first + 1));
    for (auto& [frame, objs] : by_frame) {
        std::sort(objs.begin(), objs.end(),
                  [](const TraceObject& a, const TraceObject& b) { return a.id < b.id; });
        trace.frames[static_cast<size_t>(frame - first)].objects = std::move(objs);
    }
    return trace;
}

Trace drop_frames(const Trace& trace, double ratio, int horizon_len, uint64_t seed) {
    if (ratio < 0 || ratio >= 1) throw ConfigError("drop ratio must be in [0, 1)");
    if (horizon_len < 2) throw ConfigError("horizon_len must be >= 2");
    Trace out = trace;
    std::mt19937_64 rng(seed);
    const size_t n = out.frames.size();
    for (size_t h0 = 0; h0 < n; h0 += static_cast<size_t>(horizon_len)) {
        const size_t len = std::min(static_cast<size_t>(horizon_len), n - h0);
        const size_t drops = static_cast<size_t>(std::floor(ratio * static_cast<double>(len)));
        std::vector<size_t> idx(len);
        for (size_t i = 0; i < len; ++i) idx[i] = h0 + i;
        std::shuffle(idx.begin(), idx.end(), rng);
        for (size_t i = 0; i < drops && i < idx.size(); ++i) out.frames[idx[i]].dropped = true;
    }
    return out;
}

namespace {

struct SimTrack {
    TrackedObject obj;
    double s_full = 0;      // box area at the last full-frame detection
    double t_full_lat = 0;  // latency of that full inspection, seconds
};

struct SimState {
    std::map<int, SimTrack> tracks;
    std::mt19937_64 det_rng;
    std::mt19937_64 motion_rng;
    EpisodeResult result;
    double consumed = 0;
};

bool detection_success(SimState& st, const DetectorModel& det, double accuracy) {
    if (det.threshold_mode) return accuracy >= 0.5;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return unit(st.det_rng) < accuracy;
}

Rect noised(SimState& st, const DetectorModel& det, const Rect& box) {
    if (det.box_noise <= 0) return box;
    std::uniform_real_distribution<double> noise(-det.box_noise, det.box_noise);
    const double dx = noise(st.det_rng);
    const double dy = noise(st.det_rng);
    return box.translated(dx, dy);
}

// Full-frame inspection: every ground-truth object is detected independently
// with its full-frame accuracy; matched tracks snap to the detection and are
// re-keyed to the matched object's id, unmatched tracks die, unmatched
// detections found new tracks.
void full_inspect(SimState& st, const Trace& trace, int source_frame, double t_inspect,
                  int log_frame, const SimModels& models) {
    const auto& gt = trace.frames[static_cast<size_t>(source_frame)].objects;
    struct Det {
        const TraceObject* gt;
        Rect box;
        double accuracy;
    };
    std::vector<Det> dets;
    for (const auto& o : gt) {
        const double acc = full_frame_accuracy(models.profile, o.box.area());
        const bool hit = detection_success(st, models.detector, acc);
        st.result.inspections.push_back(
            {log_frame, t_inspect, o.id, models.profile.ratios.back(), acc, hit, true});
        if (hit) dets.push_back({&o, noised(st, models.detector, o.box), acc});
    }
    std::vector<Rect> track_boxes;
    std::vector<int> track_ids;
    for (const auto& [id, tr] : st.tracks) {
        track_boxes.push_back(tr.obj.box);
        track_ids.push_back(id);
    }
    std::vector<Rect> det_boxes;
    for (const auto& d : dets) det_boxes.push_back(d.box);
    const auto matches = associate(track_boxes, det_boxes, models.detector.iou_floor);

    std::map<int, SimTrack> next;
    std::vector<bool> det_used(dets.size(), false);
    for (const auto& [ti, di] : matches) {
        const Det& d = dets[static_cast<size_t>(di)];
        SimTrack tr = st.tracks.at(track_ids[static_cast<size_t>(ti)]);
        tr.obj.id = d.gt->id;
        tr.obj.box = d.box;
        tr.obj.expanded = d.box;
        tr.obj.size = d.box.area();
        tr.obj.last_inspect = t_inspect;
        tr.obj.last_accuracy = d.accuracy;
        tr.obj.importance = d.gt->importance;
        tr.obj.cls = d.gt->cls;
        tr.s_full = d.box.area();
        tr.t_full_lat = models.latency.full_frame_ms / 1000.0;
        next[tr.obj.id] = tr;
        det_used[static_cast<size_t>(di)] = true;
    }
    for (size_t di = 0; di < dets.size(); ++di) {
        if (det_used[di]) continue;
        const Det& d = dets[di];
        SimTrack tr;
        tr.obj.id = d.gt->id;
        tr.obj.box = d.box;
        tr.obj.expanded = d.box;
        tr.obj.size = d.box.area();
        tr.obj.importance = d.gt->importance;
        tr.obj.growth = 0;
        tr.obj.last_inspect = t_inspect;
        tr.obj.last_accuracy = d.accuracy;
        tr.obj.cls = d.gt->cls;
        tr.s_full = d.box.area();
        tr.t_full_lat = models.latency.full_frame_ms / 1000.0;
        next[tr.obj.id] = tr;
    }
    st.tracks = std::move(next);  // unmatched tracks are dropped
    st.result.latencies_ms.push_back(models.latency.full_frame_ms);
}

// Partial inspection of one plan: each item succeeds if the crop still covers
// the true box and the detector fires at the item's scheduled accuracy.
void execute_plan(SimState& st, const Trace& trace, const CanvasPlan& plan, int exec_frame,
                  int source_frame, double t_global, const SimModels& models) {
    switch (plan.kind) {
        case PlanKind::FullFrame:
            full_inspect(st, trace, source_frame, t_global, exec_frame, models);
            break;
        case PlanKind::Canvas:
        case PlanKind::Batch:
        case PlanKind::Region: {
            const auto& gt_objs = trace.frames[static_cast<size_t>(source_frame)].objects;
            for (const auto& item : plan.items) {
                auto it = st.tracks.find(item.object_id);
                const TraceObject* gt = nullptr;
                for (const auto& o : gt_objs)
                    if (o.id == item.object_id) {
                        gt = &o;
                        break;
                    }
                const bool fired = detection_success(st, models.detector, item.accuracy);
                bool covered = false;
                if (it != st.tracks.end() && gt != nullptr) {
                    Rect margin = it->second.obj.expanded;
                    margin.x_min -= kEps;
                    margin.y_min -= kEps;
                    margin.x_max += kEps;
                    margin.y_max += kEps;
                    covered = margin.contains(gt->box);
                }
                const bool success = fired && covered;
                st.result.inspections.push_back(
                    {exec_frame, t_global, item.object_id, item.ratio, item.accuracy, success,
                     false});
                if (!success) continue;
                SimTrack& tr = it->second;
                tr.obj.box = noised(st, models.detector, gt->box);
                tr.obj.expanded = tr.obj.box;
                tr.obj.size = tr.obj.box.area();
                tr.obj.last_inspect = t_global;
                tr.obj.last_accuracy = item.accuracy;
                tr.obj.importance = gt->importance;
                tr.obj.cls = gt->cls;
            }
            if (plan.kind == PlanKind::Batch)
                st.result.latencies_ms.push_back(
                    models.latency.batch_ms(plan.items.size(), plan.size));
            else
                st.result.latencies_ms.push_back(models.latency.canvas_ms(plan.size));
            break;
        }
    }
    st.consumed += plan.cost;
}

void advance_tracks(SimState& st, const Trace& trace, int frame, int prev_available,
                    const SimModels& models) {
    const auto& now_objs = trace.frames[static_cast<size_t>(frame)].objects;
    const auto& prev_objs = trace.frames[static_cast<size_t>(prev_available)].objects;
    std::uniform_real_distribution<double> drift_d(-models.motion.drift, models.motion.drift);
    std::uniform_real_distribution<double> jit_d(-models.motion.sample_jitter,
                                                 models.motion.sample_jitter);
    for (auto& [id, tr] : st.tracks) {
        const TraceObject* now = nullptr;
        const TraceObject* prev = nullptr;
        for (const auto& o : now_objs)
            if (o.id == id) now = &o;
        for (const auto& o : prev_objs)
            if (o.id == id) prev = &o;
        double dx = 0, dy = 0;
        if (now && prev) {
            dx = (now->box.x_min + now->box.x_max - prev->box.x_min - prev->box.x_max) / 2;
            dy = (now->box.y_min + now->box.y_max - prev->box.y_min - prev->box.y_max) / 2;
        }
        const double drift_x = models.motion.drift > 0 ? drift_d(st.motion_rng) : 0.0;
        const double drift_y = models.motion.drift > 0 ? drift_d(st.motion_rng) : 0.0;
        MotionEstimate flow;
        const int samples = std::max(1, models.motion.samples);
        flow.dx.reserve(static_cast<size_t>(samples));
        flow.dy.reserve(static_cast<size_t>(samples));
        for (int s = 0; s < samples; ++s) {
            double jx = 0, jy = 0;
            if (models.motion.sample_jitter > 0) {
                jx = jit_d(st.motion_rng);
                jy = jit_d(st.motion_rng);
            }
            flow.dx.push_back(dx + drift_x + jx);
            flow.dy.push_back(dy + drift_y + jy);
        }
        tr.obj.box = predict_box(tr.obj.box, flow);
        tr.obj.expanded = expand_region(tr.obj.expanded, flow);
        tr.obj.size = tr.obj.box.area();
    }
}

void log_frame(SimState& st, int frame, double t, bool dropped) {
    FrameLog log;
    log.frame = frame;
    log.time = t;
    log.dropped = dropped;
    for (const auto& [id, tr] : st.tracks) {
        ObjectFrameLog o;
        o.id = id;
        o.cls = tr.obj.cls;
        o.box = tr.obj.box;
        o.weight = tr.obj.weight();
        o.last_inspect = tr.obj.last_inspect;
        o.last_accuracy = tr.obj.last_accuracy;
        o.uncertainty = uncertainty(tr.obj, t);
        log.objects.push_back(o);
    }
    st.result.frames.push_back(std::move(log));
}

}  // namespace

EpisodeResult run_episode(const Trace& trace, Policy policy, const SimModels& models,
                          const HorizonConfig& cfg, uint64_t seed) {
    cfg.validate();
    models.resources.validate();
    SimState st;
    st.det_rng.seed(seed * 0x9E3779B97F4A7C15ull + 1);
    st.motion_rng.seed(seed * 0xC2B2AE3D27D4EB4Full + 2);

    const int n = static_cast<int>(trace.frames.size());
    const int H = cfg.horizon_len;
    const double P = cfg.frame_period;
    const double full_cost = models.resources.full_frame_cost();

    for (int h0 = 0; h0 < n; h0 += H) {
        const int window_end = std::min(h0 + H, n);
        int anchor = -1;
        for (int f = h0; f < window_end; ++f)
            if (!trace.frames[static_cast<size_t>(f)].dropped) {
                anchor = f;
                break;
            }
        st.consumed = 0;
        std::vector<CanvasPlan> pending;  // sorted by start; absolute exec frame = h0 + k - 1
        size_t next_plan = 0;
        bool scheduled = false;
        int prev_available = anchor;  // last frame the motion oracle could observe

        for (int f = h0; f < window_end; ++f) {
            const double t = f * P;
            const bool dropped = trace.frames[static_cast<size_t>(f)].dropped;
            if (f == anchor) {
                full_inspect(st, trace, f, t, f, models);
                if (models.resources.charge_full_inspection) st.consumed += full_cost;
                log_frame(st, f, t, dropped);
                continue;
            }
            if (anchor >= 0 && f > anchor && !dropped) {
                advance_tracks(st, trace, f, prev_available, models);
                prev_available = f;
                if (!scheduled) {
                    // First partial observation of the horizon: freeze growth
                    // rates and compute the schedule.
                    for (auto& [id, tr] : st.tracks) {
                        ExpansionRecord g{tr.obj.expanded.area(), tr.s_full, tr.t_full_lat};
                        tr.obj.growth = growth_rate(g);
                    }
                    std::vector<ObjectSpec> specs;
                    for (const auto& [id, tr] : st.tracks)
                        specs.push_back(
                            {id, tr.obj.box.width(), tr.obj.box.height(), tr.obj.weight()});
                    if (!specs.empty() || policy == Policy::FS) {
                        ResourceModel rm = models.resources;
                        if (rm.charge_full_inspection)
                            rm.budget = std::max(rm.budget - full_cost, 0.0);
                        if (rm.budget > kEps) {
                            Schedule sched =
                                make_schedule(policy, specs, models.canvas_sizes, models.profile,
                                              models.resize, rm, cfg, models.sched);
                            pending = sched.plans;
                            st.result.schedules.push_back(std::move(sched));
                        }
                    }
                    scheduled = true;
                }
            }
            log_frame(st, f, t, dropped);
            while (next_plan < pending.size() &&
                   h0 + pending[next_plan].frame_index - 1 <= f) {
                const CanvasPlan& plan = pending[next_plan];
                const int source = prev_available >= 0 ? prev_available : h0;
                execute_plan(st, trace, plan, f, source, t, models);
                ++next_plan;
            }
        }
        st.result.horizons.push_back({h0, models.resources.budget, st.consumed});
    }
    return st.result;
}

namespace {

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size());
    size_t idx = pos <= 1 ? 0 : static_cast<size_t>(std::ceil(pos)) - 1;
    idx = std::min(idx, v.size() - 1);
    return v[idx];
}

bool is_critical(const CriticalityConfig& crit, int cls, double width) {
    auto it = crit.width_thresholds.find(cls);
    const double thr = it != crit.width_thresholds.end() ? it->second : crit.default_threshold;
    return width > thr;
}

}  // namespace

Metrics evaluate(const EpisodeResult& episode, const Trace& trace,
                 const CriticalityConfig& crit) {
    Metrics m;
    long long gt_total = 0, matched_total = 0, pred_total = 0;
    long long crit_gt = 0, crit_matched = 0, crit_pred = 0, crit_pred_hit = 0;
    double gt_weight = 0, matched_weight = 0;
    double u_max = 0, u_sum = 0;
    long long u_count = 0;

    for (const auto& log : episode.frames) {
        if (log.frame < 0 || log.frame >= static_cast<int>(trace.frames.size())) continue;
        const auto& gt = trace.frames[static_cast<size_t>(log.frame)].objects;
        std::vector<Rect> preds;
        for (const auto& o : log.objects) {
            preds.push_back(o.box);
            u_max = std::max(u_max, o.uncertainty);
            u_sum += o.uncertainty;
            ++u_count;
        }
        std::vector<Rect> gt_boxes;
        for (const auto& o : gt) gt_boxes.push_back(o.box);
        const auto matches = associate(preds, gt_boxes, 0.5);

        gt_total += static_cast<long long>(gt.size());
        pred_total += static_cast<long long>(preds.size());
        matched_total += static_cast<long long>(matches.size());
        for (const auto& o : gt) {
            gt_weight += o.importance;
            if (is_critical(crit, o.cls, o.box.width())) ++crit_gt;
        }
        std::vector<bool> pred_crit(preds.size(), false);
        for (size_t i = 0; i < log.objects.size(); ++i) {
            if (is_critical(crit, log.objects[i].cls, log.objects[i].box.width())) {
                pred_crit[i] = true;
                ++crit_pred;
            }
        }
        for (const auto& [pi, gi] : matches) {
            const auto& g = gt[static_cast<size_t>(gi)];
            matched_weight += g.importance;
            const bool g_crit = is_critical(crit, g.cls, g.box.width());
            if (g_crit) ++crit_matched;
            if (pred_crit[static_cast<size_t>(pi)] && g_crit) ++crit_pred_hit;
        }
    }
    m.detection_rate = gt_total > 0 ? static_cast<double>(matched_total) / gt_total : 1.0;
    m.detection_precision =
        pred_total > 0 ? static_cast<double>(matched_total) / pred_total : 1.0;
    m.critical_detection_rate =
        crit_gt > 0 ? static_cast<double>(crit_matched) / crit_gt : 1.0;
    m.critical_detection_precision =
        crit_pred > 0 ? static_cast<double>(crit_pred_hit) / crit_pred : 1.0;
    m.weighted_recall = gt_weight > 0 ? matched_weight / gt_weight : 1.0;
    m.max_weighted_uncertainty = u_max;
    m.mean_weighted_uncertainty = u_count > 0 ? u_sum / static_cast<double>(u_count) : 0.0;
    m.latency_p50_ms = quantile(episode.latencies_ms, 0.50);
    m.latency_p95_ms = quantile(episode.latencies_ms, 0.95);
    m.latency_p99_ms = quantile(episode.latencies_ms, 0.99);
    double util = 0;
    for (const auto& h : episode.horizons)
        util += h.budget > 0 ? h.consumed / h.budget : 0.0;
    m.budget_utilization =
        episode.horizons.empty() ? 0.0 : util / static_cast<double>(episode.horizons.size());
    return m;
}

}  // namespace csrap
