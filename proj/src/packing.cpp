#include "csrap/packing.hpp"

#include <algorithm>
#include <cmath>

namespace csrap {

namespace {
constexpr double kEps = 1e-9;

bool is_power_of_two_multiple(double len, int quantum) {
    const double units = len / quantum;
    if (units < 1.0 - kEps) return false;
    const double rounded = std::round(units);
    if (std::abs(units - rounded) > kEps) return false;
    const auto u = static_cast<unsigned long long>(rounded);
    return (u & (u - 1)) == 0;
}

struct FreeCell {
    double side, x, y;
    bool operator<(const FreeCell& o) const {
        if (side != o.side) return side < o.side;
        if (y != o.y) return y < o.y;
        return x < o.x;
    }
};

// Quadtree placement for power-of-two squares. Items are placed in descending
// side order, so the free list only ever holds aligned cells with side ≥ the
// current square; free area ≥ the square's area therefore implies a fit exists.
std::optional<Layout> pack_quadtree(std::vector<PackItem> items, double side) {
    std::sort(items.begin(), items.end(), [](const PackItem& a, const PackItem& b) {
        if (a.width != b.width) return a.width > b.width;
        return a.id < b.id;
    });
    std::vector<FreeCell> free_cells = {{side, 0, 0}};
    Layout out{side, side, {}};
    for (const auto& it : items) {
        // Smallest adequate cell, lowest (y, x) among equals.
        std::size_t best = free_cells.size();
        for (std::size_t i = 0; i < free_cells.size(); ++i) {
            if (free_cells[i].side < it.width - kEps) continue;
            if (best == free_cells.size() || free_cells[i] < free_cells[best]) best = i;
        }
        if (best == free_cells.size()) return std::nullopt;
        FreeCell cell = free_cells[best];
        free_cells.erase(free_cells.begin() + best);
        while (cell.side > it.width + kEps) {
            const double h = cell.side / 2;
            free_cells.push_back({h, cell.x + h, cell.y});
            free_cells.push_back({h, cell.x, cell.y + h});
            free_cells.push_back({h, cell.x + h, cell.y + h});
            cell.side = h;
        }
        out.placements.push_back(
            {it.id, {cell.x, cell.y, cell.x + it.width, cell.y + it.height}, false});
    }
    return out;
}

// Shelf next-fit-decreasing-height with longer-side-horizontal rotation.
std::optional<Layout> pack_shelves(std::vector<PackItem> items, double side) {
    struct Oriented {
        int id;
        double w, h;
        bool rotated;
    };
    std::vector<Oriented> oriented;
    oriented.reserve(items.size());
    for (const auto& it : items) {
        if (it.rotatable && it.height > it.width)
            oriented.push_back({it.id, it.height, it.width, true});
        else
            oriented.push_back({it.id, it.width, it.height, false});
    }
    std::sort(oriented.begin(), oriented.end(), [](const Oriented& a, const Oriented& b) {
        if (a.h != b.h) return a.h > b.h;
        return a.id < b.id;
    });
    Layout out{side, side, {}};
    double shelf_y = 0, shelf_h = 0, cursor_x = 0;
    for (const auto& it : oriented) {
        if (it.w > side + kEps || it.h > side + kEps) return std::nullopt;
        if (cursor_x + it.w > side + kEps || shelf_h == 0) {
            shelf_y += shelf_h;
            shelf_h = it.h;
            cursor_x = 0;
        }
        if (shelf_y + it.h > side + kEps) return std::nullopt;
        out.placements.push_back(
            {it.id, {cursor_x, shelf_y, cursor_x + it.w, shelf_y + it.h}, it.rotated});
        cursor_x += it.w;
    }
    return out;
}

}  // namespace

double canvas_side(double canvas_area, int quantum) {
    return quantize_len(std::sqrt(canvas_area), quantum);
}

bool quantized_guarantee_applies(const std::vector<PackItem>& items, double side,
                                 int quantum) {
    if (!is_power_of_two_multiple(side, quantum)) return false;
    for (const auto& it : items) {
        if (std::abs(it.width - it.height) > kEps) return false;
        if (!is_power_of_two_multiple(it.width, quantum)) return false;
    }
    return true;
}

std::optional<Layout> pack(const std::vector<PackItem>& items, double canvas_area,
                           PackMode mode, int quantum) {
    const double side = canvas_side(canvas_area, quantum);
    if (items.empty()) return Layout{side, side, {}};
    for (const auto& it : items)
        if (it.width <= 0 || it.height <= 0) return std::nullopt;
    if (mode == PackMode::Quantized && quantized_guarantee_applies(items, side, quantum)) {
        double total = 0;
        for (const auto& it : items) total += it.width * it.height;
        if (total > side * side + kEps) return std::nullopt;
        return pack_quadtree(items, side);
    }
    return pack_shelves(items, side);
}

bool can_pack(const std::vector<PackItem>& items, double canvas_area, PackMode mode,
              int quantum) {
    return pack(items, canvas_area, mode, quantum).has_value();
}

bool layout_valid(const Layout& l) {
    const auto& ps = l.placements;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const Rect& a = ps[i].rect;
        if (a.x_min < -kEps || a.y_min < -kEps || a.x_max > l.canvas_width + kEps ||
            a.y_max > l.canvas_height + kEps || !a.valid())
            return false;
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            const Rect& b = ps[j].rect;
            const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
            const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
            if (ix > kEps && iy > kEps) return false;
        }
    }
    return true;
}

}  // namespace csrap
