#include <eioutrack/interpolation.hpp>

#include <cstddef>
#include <stdexcept>

namespace eioutrack {

Trajectory interpolate(const Trajectory& traj, int max_gap) {
    if (max_gap < 1) {
        throw std::invalid_argument("interpolate: max_gap must be positive");
    }
    if (traj.entries.empty()) {
        throw std::invalid_argument("interpolate: empty trajectory");
    }
    for (std::size_t i = 1; i < traj.entries.size(); ++i) {
        if (traj.entries[i].first <= traj.entries[i - 1].first) {
            throw std::invalid_argument("interpolate: frames must strictly increase");
        }
    }

    Trajectory out;
    out.id = traj.id;
    out.entries.reserve(traj.entries.size());
    out.entries.push_back(traj.entries.front());
    for (std::size_t i = 1; i < traj.entries.size(); ++i) {
        const auto& [f0, b0] = traj.entries[i - 1];
        const auto& [f1, b1] = traj.entries[i];
        const int gap = f1 - f0 - 1;
        if (gap >= 1 && gap <= max_gap) {
            for (int f = f0 + 1; f < f1; ++f) {
                const double t = static_cast<double>(f - f0) / static_cast<double>(f1 - f0);
                BBox box;
                box.x1 = b0.x1 + (b1.x1 - b0.x1) * t;
                box.y1 = b0.y1 + (b1.y1 - b0.y1) * t;
                box.x2 = b0.x2 + (b1.x2 - b0.x2) * t;
                box.y2 = b0.y2 + (b1.y2 - b0.y2) * t;
                box.confidence = 0.5 * (b0.confidence + b1.confidence);
                out.entries.emplace_back(f, box);
            }
        }
        out.entries.push_back(traj.entries[i]);
    }
    return out;
}

std::vector<Trajectory> interpolate_all(const std::vector<Trajectory>& trajectories, int max_gap) {
    if (max_gap < 1) {
        throw std::invalid_argument("interpolate: max_gap must be positive");
    }
    // Validate before the parallel region so no exception crosses it.
    for (const Trajectory& traj : trajectories) {
        if (traj.entries.empty()) {
            throw std::invalid_argument("interpolate: empty trajectory");
        }
        for (std::size_t i = 1; i < traj.entries.size(); ++i) {
            if (traj.entries[i].first <= traj.entries[i - 1].first) {
                throw std::invalid_argument("interpolate: frames must strictly increase");
            }
        }
    }
    std::vector<Trajectory> out(trajectories.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(trajectories.size());
#pragma omp parallel for schedule(dynamic) if (n >= 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[i] = interpolate(trajectories[i], max_gap);
    }
    return out;
}

}  // namespace eioutrack
