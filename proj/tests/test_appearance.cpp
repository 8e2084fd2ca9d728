#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include <eioutrack/appearance.hpp>

#include "helpers.hpp"

using namespace eioutrack;

TEST_CASE("cosine_cost endpoints") {
    const Embedding a{1.0, 0.0, 2.0};
    CHECK(cosine_cost(a, a) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cosine_cost({1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine_cost({1.0, 2.0}, {-1.0, -2.0}) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("cosine_cost rejects bad input") {
    CHECK_THROWS_AS(cosine_cost({1.0, 0.0}, {1.0, 0.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(cosine_cost({0.0, 0.0}, {1.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(cosine_cost({1.0, 0.0}, {0.0, 0.0}), std::domain_error);
}

TEST_CASE("cosine_cost is symmetric and scale invariant") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> scale(0.01, 50.0);
    for (int i = 0; i < 300; ++i) {
        const Embedding a = testutil::random_embedding(rng, 8);
        const Embedding b = testutil::random_embedding(rng, 8);
        const double base = cosine_cost(a, b);
        CHECK(cosine_cost(b, a) == doctest::Approx(base).epsilon(1e-12));
        const double k = scale(rng);
        Embedding ka(a.size());
        for (std::size_t d = 0; d < a.size(); ++d) {
            ka[d] = k * a[d];
        }
        CHECK(cosine_cost(ka, b) == doctest::Approx(base).epsilon(1e-9));
        CHECK(base >= 0.0);
        CHECK(base <= 2.0);
    }
}

TEST_CASE("update_track_feature blends and renormalizes") {
    const Embedding current{1.0, 0.0};
    const Embedding observed{0.0, 1.0};

    const Embedding keep = update_track_feature(current, observed, 1.0);
    CHECK(keep[0] == doctest::Approx(1.0));
    CHECK(keep[1] == doctest::Approx(0.0));

    const Embedding replace = update_track_feature(current, observed, 0.0);
    CHECK(replace[0] == doctest::Approx(0.0));
    CHECK(replace[1] == doctest::Approx(1.0));

    const Embedding blend = update_track_feature(current, observed, 0.9);
    const double expected_norm = std::sqrt(0.9 * 0.9 + 0.1 * 0.1);
    CHECK(blend[0] == doctest::Approx(0.9 / expected_norm).epsilon(1e-12));
    CHECK(blend[1] == doctest::Approx(0.1 / expected_norm).epsilon(1e-12));
}

TEST_CASE("update_track_feature output has unit norm") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> alpha(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const Embedding current = testutil::random_embedding(rng, 16);
        const Embedding observed = testutil::random_embedding(rng, 16);
        const Embedding out = update_track_feature(current, observed, alpha(rng));
        CHECK(norm(out) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("update_track_feature rejects bad input") {
    CHECK_THROWS_AS(update_track_feature({1.0, 0.0}, {1.0, 0.0, 0.0}, 0.5), std::domain_error);
    CHECK_THROWS_AS(update_track_feature({1.0, 0.0}, {0.0, 1.0}, 1.5), std::domain_error);
    // exactly cancelling blend cannot be normalized
    CHECK_THROWS_AS(update_track_feature({1.0, 0.0}, {-1.0, 0.0}, 0.5), std::domain_error);
}
