#pragma once

namespace eioutrack {

// Axis-aligned box in continuous pixel coordinates, corner form.
struct BBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;
    double confidence = 0.0;

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() * height(); }
    double center_x() const { return 0.5 * (x1 + x2); }
    double center_y() const { return 0.5 * (y1 + y2); }
};

// Finite coordinates, x2 >= x1, y2 >= y1, confidence in [0,1].
bool valid_box(const BBox& box);

// Grows both sides by (2e+1) times the original length, split evenly around
// the box so the center and aspect ratio stay fixed. e = -0.5 is the
// identity. Throws std::domain_error for e < -0.5 or an invalid box.
BBox expand(const BBox& box, double e);

// Intersection over union, in [0,1]. Disjoint or zero-area pairs give 0.
double iou(const BBox& a, const BBox& b);

// IoU after expanding both boxes by the same scale e.
double eiou(const BBox& a, const BBox& b, double e);

}  // namespace eioutrack
