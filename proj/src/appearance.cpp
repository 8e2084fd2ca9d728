#include <eioutrack/appearance.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eioutrack {

double norm(const Embedding& v) {
    double sq = 0.0;
    for (double x : v) {
        sq += x * x;
    }
    return std::sqrt(sq);
}

Embedding normalized(const Embedding& v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::domain_error("normalized: zero or non-finite vector");
    }
    Embedding out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = v[i] / n;
    }
    return out;
}

double cosine_cost(const Embedding& a, const Embedding& b) {
    if (a.size() != b.size()) {
        throw std::domain_error("cosine_cost: dimension mismatch");
    }
    const double na = norm(a);
    const double nb = norm(b);
    if (!(na > 0.0) || !(nb > 0.0) || !std::isfinite(na) || !std::isfinite(nb)) {
        throw std::domain_error("cosine_cost: zero or non-finite norm");
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
    }
    return std::clamp(1.0 - dot / (na * nb), 0.0, 2.0);
}

Embedding update_track_feature(const Embedding& current, const Embedding& observed, double alpha) {
    if (current.size() != observed.size()) {
        throw std::domain_error("update_track_feature: dimension mismatch");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::domain_error("update_track_feature: alpha must be in [0,1]");
    }
    Embedding blend(current.size());
    for (std::size_t i = 0; i < current.size(); ++i) {
        blend[i] = alpha * current[i] + (1.0 - alpha) * observed[i];
    }
    return normalized(blend);
}

}  // namespace eioutrack
