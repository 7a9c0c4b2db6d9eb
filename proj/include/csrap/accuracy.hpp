#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "csrap/config.hpp"

namespace csrap {

// Detection accuracy as a function of native object size (pixel^2 bins,
// ascending) and resize ratio (ascending, exact match required on lookup).
struct AccuracyProfile {
    std::vector<double> size_bins;
    std::vector<double> ratios;
    std::vector<std::vector<double>> table;  // table[bin][ratio] in [0,1]
};

// Accuracy for (size, ratio): size rounds DOWN to the nearest bin and clamps at
// both ends; ratio must appear in the profile (throws UnknownRatioError).
double lookup(const AccuracyProfile& p, double size, double ratio);

struct ProfileViolation {
    std::size_t bin = 0;
    std::size_t ratio_index = 0;
    std::string what;
};

// Reports every cell where ratio-monotonicity, concavity (second difference of
// the row must be <= 0) or cross-size ordering (bigger bins never less accurate
// at the same ratio) fails. Empty result means the profile is valid.
std::vector<ProfileViolation> validate_profile(const AccuracyProfile& p);

// One candidate allocation level for an object: resize ratio, its accuracy,
// quantized resized sides and the resulting allocated area. Levels are kept
// strictly increasing in area.
struct LadderLevel {
    double ratio = 1.0;
    double accuracy = 0.0;
    double width = 0;
    double height = 0;
    double area = 0;
};

struct SizeLadder {
    std::vector<LadderLevel> levels;
};

// Builds the ladder for an object of native (width, height): one level per
// admissible ratio (accuracy inside [acc_min, acc_max], quantized sides fitting
// max_side when positive), deduplicated so areas are strictly increasing (equal
// areas keep the larger ratio, i.e. the better accuracy at the same cost).
SizeLadder build_ladder(const AccuracyProfile& p, const ResizePolicy& policy,
                        double native_width, double native_height, int quantum,
                        double max_side = 0);

// Marginal gain / marginal area / their ratio for upgrading an object to ladder
// level `level` (0-based). The lowest level pays its full area and yields its
// full accuracy; higher levels pay and yield the increment over the level below.
struct EfficiencyEntry {
    double gain = 0;        // accuracy increment bought at this level
    double area_delta = 0;  // allocated-area increment paid at this level
    double efficiency = 0;  // weight * gain / area_delta
};

EfficiencyEntry efficiency_terms(double weight, const SizeLadder& ladder, std::size_t level);

// Synthetic profile family: A(s, r) = clamp(a_max * (1 - exp(-k * r * sqrt(s) / s_ref)), 0, 1).
// Monotone and concave in r, ordered across sizes, so it always validates.
struct SyntheticProfileParams {
    double a_max = 0.97;
    double k = 2.0;
    double s_ref = 32.0;
    std::vector<double> size_bins = {256, 1024, 4096, 9216, 16384, 36864, 65536};
    std::vector<double> ratios = {0.25, 0.5, 0.75, 1.0};
};

AccuracyProfile synthetic_profile(const SyntheticProfileParams& params = {});

// File format: {"size_bins": [...], "ratios": [...], "table": [[...], ...]}.
AccuracyProfile load_profile(const std::string& path);
void save_profile(const AccuracyProfile& p, const std::string& path);

}  // namespace csrap
