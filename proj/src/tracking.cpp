#include "csrap/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csrap/errors.hpp"

namespace csrap {

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Classic O(n^3) assignment solver over potentials; rows <= cols required.
// Deterministic for a fixed input ordering.
std::vector<int> hungarian(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(a[0].size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0), v(m + 1, 0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> match(n, -1);
    for (int j = 1; j <= m; ++j)
        if (p[j] > 0) match[p[j] - 1] = j - 1;
    return match;
}

}  // namespace

Rect predict_box(const Rect& box, const MotionEstimate& m) {
    if (m.dx.empty() || m.dy.empty()) throw EmptyMotionError();
    return box.translated(median(m.dx), median(m.dy));
}

Rect expand_region(const Rect& region, const MotionEstimate& m) {
    if (m.dx.empty() || m.dy.empty()) throw EmptyMotionError();
    const auto [dx_min, dx_max] = std::minmax_element(m.dx.begin(), m.dx.end());
    const auto [dy_min, dy_max] = std::minmax_element(m.dy.begin(), m.dy.end());
    return {region.x_min + *dx_min, region.y_min + *dy_min,
            region.x_max + *dx_max, region.y_max + *dy_max};
}

double growth_rate(const ExpansionRecord& e) {
    if (e.full_area <= 0) throw DegenerateTrackError("full-frame box area is not positive");
    if (e.full_latency <= 0) throw DegenerateTrackError("full-frame latency is not positive");
    return std::sqrt(e.expanded_area / e.full_area) / e.full_latency;
}

double uncertainty(const TrackedObject& o, double t) {
    if (o.last_accuracy <= 0) throw ZeroAccuracyError();
    return o.weight() * (t - o.last_inspect) / o.last_accuracy;
}

std::vector<std::pair<int, int>> associate(const std::vector<Rect>& tracks,
                                           const std::vector<Rect>& detections,
                                           double iou_floor) {
    std::vector<std::pair<int, int>> out;
    if (tracks.empty() || detections.empty()) return out;

    const bool transposed = tracks.size() > detections.size();
    const auto& rows = transposed ? detections : tracks;
    const auto& cols = transposed ? tracks : detections;
    std::vector<std::vector<double>> cost(rows.size(), std::vector<double>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            cost[i][j] = 1.0 - iou(rows[i], cols[j]);

    const auto match = hungarian(cost);
    for (std::size_t i = 0; i < match.size(); ++i) {
        if (match[i] < 0) continue;
        const int t = transposed ? match[i] : static_cast<int>(i);
        const int d = transposed ? static_cast<int>(i) : match[i];
        if (iou(tracks[t], detections[d]) < iou_floor) continue;
        out.emplace_back(t, d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace csrap
