#include <eioutrack/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eioutrack {

bool valid_box(const BBox& box) {
    return std::isfinite(box.x1) && std::isfinite(box.y1) && std::isfinite(box.x2) &&
           std::isfinite(box.y2) && std::isfinite(box.confidence) && box.x2 >= box.x1 &&
           box.y2 >= box.y1 && box.confidence >= 0.0 && box.confidence <= 1.0;
}

BBox expand(const BBox& box, double e) {
    if (!valid_box(box)) {
        throw std::domain_error("expand: invalid box");
    }
    if (!(e >= -0.5)) {
        throw std::domain_error("expand: expansion scale must be >= -0.5");
    }
    const double half_extra_w = 0.5 * (2.0 * e + 1.0) * box.width();
    const double half_extra_h = 0.5 * (2.0 * e + 1.0) * box.height();
    return BBox{box.x1 - half_extra_w, box.y1 - half_extra_h, box.x2 + half_extra_w,
                box.y2 + half_extra_h, box.confidence};
}

double iou(const BBox& a, const BBox& b) {
    const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    if (iw <= 0.0 || ih <= 0.0) {
        return 0.0;
    }
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) {
        return 0.0;
    }
    return inter / uni;
}

double eiou(const BBox& a, const BBox& b, double e) {
    return iou(expand(a, e), expand(b, e));
}

}  // namespace eioutrack
