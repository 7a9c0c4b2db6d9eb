#include "csrap/accuracy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "csrap/errors.hpp"
#include "csrap/geometry.hpp"

namespace csrap {

namespace {
constexpr double kRatioTol = 1e-9;

std::size_t ratio_index(const AccuracyProfile& p, double ratio) {
    for (std::size_t i = 0; i < p.ratios.size(); ++i)
        if (std::abs(p.ratios[i] - ratio) <= kRatioTol) return i;
    throw UnknownRatioError(ratio);
}

std::size_t size_bin_index(const AccuracyProfile& p, double size) {
    // Round down to the nearest bin; clamp below the first and above the last.
    std::size_t idx = 0;
    for (std::size_t i = 0; i < p.size_bins.size(); ++i) {
        if (p.size_bins[i] <= size) idx = i;
    }
    return idx;
}
}  // namespace

double lookup(const AccuracyProfile& p, double size, double ratio) {
    if (p.size_bins.empty() || p.ratios.empty()) throw ConfigError("accuracy profile is empty");
    return p.table[size_bin_index(p, size)][ratio_index(p, ratio)];
}

std::vector<ProfileViolation> validate_profile(const AccuracyProfile& p) {
    std::vector<ProfileViolation> out;
    for (std::size_t b = 0; b < p.table.size(); ++b) {
        const auto& row = p.table[b];
        for (std::size_t r = 0; r < row.size(); ++r) {
            if (row[r] < 0.0 || row[r] > 1.0)
                out.push_back({b, r, "accuracy outside [0,1]"});
            if (r + 1 < row.size() && row[r + 1] < row[r] - 1e-12)
                out.push_back({b, r + 1, "accuracy not monotone in ratio"});
            if (r >= 1 && r + 1 < row.size()) {
                const double second_diff = (row[r + 1] - row[r]) - (row[r] - row[r - 1]);
                if (second_diff > 1e-12) out.push_back({b, r + 1, "accuracy not concave in ratio"});
            }
            if (b + 1 < p.table.size() && p.table[b + 1][r] < row[r] - 1e-12)
                out.push_back({b + 1, r, "larger size bin less accurate at same ratio"});
        }
    }
    return out;
}

SizeLadder build_ladder(const AccuracyProfile& p, const ResizePolicy& policy,
                        double native_width, double native_height, int quantum,
                        double max_side) {
    const double native_size = native_width * native_height;
    SizeLadder ladder;
    for (double r : policy.factors) {
        const double acc = lookup(p, native_size, r);
        if (acc < policy.acc_min || acc > policy.acc_max) continue;
        const double w = quantize_len(native_width * r, quantum);
        const double h = quantize_len(native_height * r, quantum);
        if (w <= 0 || h <= 0) continue;
        if (max_side > 0 && std::max(w, h) > max_side) continue;
        ladder.levels.push_back({r, acc, w, h, w * h});
    }
    std::sort(ladder.levels.begin(), ladder.levels.end(),
              [](const LadderLevel& a, const LadderLevel& b) {
                  if (a.area != b.area) return a.area < b.area;
                  return a.ratio < b.ratio;
              });
    // Equal quantized areas collapse to the best (largest) ratio at that cost.
    std::vector<LadderLevel> dedup;
    for (const auto& lv : ladder.levels) {
        if (!dedup.empty() && dedup.back().area == lv.area)
            dedup.back() = lv;
        else
            dedup.push_back(lv);
    }
    ladder.levels = std::move(dedup);
    return ladder;
}

EfficiencyEntry efficiency_terms(double weight, const SizeLadder& ladder, std::size_t level) {
    if (level >= ladder.levels.size()) throw ConfigError("ladder level out of range");
    const auto& cur = ladder.levels[level];
    EfficiencyEntry e;
    if (level == 0) {
        e.gain = cur.accuracy;
        e.area_delta = cur.area;
    } else {
        const auto& below = ladder.levels[level - 1];
        e.gain = cur.accuracy - below.accuracy;
        e.area_delta = cur.area - below.area;
    }
    if (e.area_delta <= 0) throw ConfigError("ladder areas must be strictly increasing");
    e.efficiency = weight * e.gain / e.area_delta;
    return e;
}

AccuracyProfile synthetic_profile(const SyntheticProfileParams& params) {
    AccuracyProfile p;
    p.size_bins = params.size_bins;
    p.ratios = params.ratios;
    p.table.resize(p.size_bins.size());
    for (std::size_t b = 0; b < p.size_bins.size(); ++b) {
        p.table[b].resize(p.ratios.size());
        for (std::size_t r = 0; r < p.ratios.size(); ++r) {
            const double x = params.k * p.ratios[r] * std::sqrt(p.size_bins[b]) / params.s_ref;
            const double a = params.a_max * (1.0 - std::exp(-x));
            p.table[b][r] = std::clamp(a, 0.0, 1.0);
        }
    }
    return p;
}

AccuracyProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open accuracy profile: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed accuracy profile " + path + ": " + e.what());
    }
    AccuracyProfile p;
    try {
        p.size_bins = j.at("size_bins").get<std::vector<double>>();
        p.ratios = j.at("ratios").get<std::vector<double>>();
        p.table = j.at("table").get<std::vector<std::vector<double>>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("accuracy profile " + path + " missing fields: " + e.what());
    }
    if (p.table.size() != p.size_bins.size())
        throw ConfigError("profile table row count does not match size_bins");
    for (const auto& row : p.table)
        if (row.size() != p.ratios.size())
            throw ConfigError("profile table column count does not match ratios");
    return p;
}

void save_profile(const AccuracyProfile& p, const std::string& path) {
    nlohmann::json j;
    j["size_bins"] = p.size_bins;
    j["ratios"] = p.ratios;
    j["table"] = p.table;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write accuracy profile: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace csrap
