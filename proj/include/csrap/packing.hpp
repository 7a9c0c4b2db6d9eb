#pragma once
#include <optional>
#include <vector>

#include "csrap/geometry.hpp"

namespace csrap {

enum class PackMode { General, Quantized };

// Quantized rectangle to place; sides are multiples of the quantum.
struct PackItem {
    int id = 0;
    double width = 0;
    double height = 0;
    bool rotatable = true;
};

struct Placement {
    int id = 0;
    Rect rect;
    bool rotated = false;
};

struct Layout {
    double canvas_width = 0;
    double canvas_height = 0;
    std::vector<Placement> placements;
};

// Square canvas side for a nominal area: sqrt rounded up to the quantum, so the
// actual canvas never under-provides the nominal area.
double canvas_side(double canvas_area, int quantum);

// Places items into a square canvas of the given nominal area.
//
// General mode: shelf next-fit-decreasing-height after rotating each item's
// longer side horizontal (ties by id); guaranteed to succeed whenever
// Σ item areas ≤ canvas_area / 2.
//
// Quantized mode: when every item is a power-of-two-sided square (side = q·2^k)
// and the canvas side is too, a quadtree placer guarantees success whenever
// Σ areas ≤ canvas_area. Non-conforming item sets silently fall back to the
// general shelf rule (success guaranteed only up to half capacity).
//
// Returns nullopt (Infeasible) when no placement is found.
std::optional<Layout> pack(const std::vector<PackItem>& items, double canvas_area,
                           PackMode mode, int quantum);

// True iff pack succeeds (sound by construction).
bool can_pack(const std::vector<PackItem>& items, double canvas_area, PackMode mode,
              int quantum);

// Geometric soundness: placements pairwise non-overlapping and inside bounds.
bool layout_valid(const Layout& l);

// True when the quantized-mode full-capacity guarantee applies to this item set.
bool quantized_guarantee_applies(const std::vector<PackItem>& items, double side,
                                 int quantum);

}  // namespace csrap
