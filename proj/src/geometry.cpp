#include "csrap/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace csrap {

double iou(const Rect& a, const Rect& b) {
    const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (ix <= 0 || iy <= 0) return 0.0;
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0) return 0.0;
    return inter / uni;
}

double quantize_len(double len, int q) {
    if (len <= 0) return 0.0;
    return std::ceil(len / q - 1e-12) * q;  // epsilon guards lengths already at a multiple
}

Rect quantize(const Rect& r, int q) {
    Rect out = r;
    out.x_max = r.x_min + quantize_len(r.width(), q);
    out.y_max = r.y_min + quantize_len(r.height(), q);
    return out;
}

}  // namespace csrap
