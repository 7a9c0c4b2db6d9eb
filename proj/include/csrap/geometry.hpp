#pragma once

namespace csrap {

// Axis-aligned box in frame coordinates. Coordinates are real-valued until
// quantization snaps the sides to multiples of the quantum.
struct Rect {
    double x_min = 0;
    double y_min = 0;
    double x_max = 0;
    double y_max = 0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
    bool valid() const { return x_min <= x_max && y_min <= y_max; }

    Rect translated(double dx, double dy) const {
        return {x_min + dx, y_min + dy, x_max + dx, y_max + dy};
    }
    bool contains(const Rect& o) const {
        return x_min <= o.x_min && y_min <= o.y_min && x_max >= o.x_max && y_max >= o.y_max;
    }
    bool operator==(const Rect& o) const = default;
};

// Intersection over union; 0 for disjoint or degenerate-union inputs.
double iou(const Rect& a, const Rect& b);

// Length rounded up to the next multiple of q (q >= 1).
double quantize_len(double len, int q);

// Both sides rounded up to multiples of q, anchored at (x_min, y_min).
// Idempotent; the output box covers the input dimensions.
Rect quantize(const Rect& r, int q);

}  // namespace csrap
