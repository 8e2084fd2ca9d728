#pragma once

#include <random>
#include <vector>

#include <eioutrack/appearance.hpp>
#include <eioutrack/geometry.hpp>

namespace testutil {

inline eioutrack::BBox random_box(std::mt19937_64& rng, double span = 200.0,
                                  double max_side = 80.0) {
    std::uniform_real_distribution<double> pos(-span, span);
    std::uniform_real_distribution<double> side(0.5, max_side);
    const double x = pos(rng);
    const double y = pos(rng);
    return {x, y, x + side(rng), y + side(rng), 1.0};
}

inline eioutrack::Embedding random_embedding(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    eioutrack::Embedding e(dim);
    for (double& v : e) {
        v = gauss(rng);
    }
    return eioutrack::normalized(e);
}

}  // namespace testutil
