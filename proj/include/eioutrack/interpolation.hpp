#pragma once

#include <utility>
#include <vector>

#include <eioutrack/geometry.hpp>

namespace eioutrack {

// One finished track: id plus its (frame, box) observations.
struct Trajectory {
    int id = 0;
    std::vector<std::pair<int, BBox>> entries;  // strictly increasing frames
};

// Fills interior gaps of up to max_gap missing frames with boxes whose corner
// coordinates are linear in the frame index; an inserted box's confidence is
// the mean of the two endpoints. Larger gaps stay untouched and nothing is
// extrapolated past the first or last observation.
Trajectory interpolate(const Trajectory& traj, int max_gap);

// interpolate over every trajectory; parallel across trajectories.
std::vector<Trajectory> interpolate_all(const std::vector<Trajectory>& trajectories, int max_gap);

}  // namespace eioutrack
