#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include <eioutrack/geometry.hpp>

#include "helpers.hpp"

using namespace eioutrack;

TEST_CASE("expand follows the coordinate rule") {
    const BBox box{0, 0, 10, 10, 0.9};
    const BBox out = expand(box, 0.7);
    CHECK(out.x1 == doctest::Approx(-12.0).epsilon(1e-12));
    CHECK(out.y1 == doctest::Approx(-12.0).epsilon(1e-12));
    CHECK(out.x2 == doctest::Approx(22.0).epsilon(1e-12));
    CHECK(out.y2 == doctest::Approx(22.0).epsilon(1e-12));
    CHECK(out.confidence == 0.9);

    const BBox narrow = expand(BBox{2, 3, 4, 7, 1.0}, 0.5);
    CHECK(narrow.x1 == doctest::Approx(0.0));
    CHECK(narrow.y1 == doctest::Approx(-1.0));
    CHECK(narrow.x2 == doctest::Approx(6.0));
    CHECK(narrow.y2 == doctest::Approx(11.0));
}

TEST_CASE("expand at -0.5 is the identity") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        const BBox box = testutil::random_box(rng);
        const BBox same = expand(box, -0.5);
        CHECK(same.x1 == box.x1);
        CHECK(same.y1 == box.y1);
        CHECK(same.x2 == box.x2);
        CHECK(same.y2 == box.y2);
    }
}

TEST_CASE("expand rejects bad input") {
    CHECK_THROWS_AS(expand(BBox{0, 0, 10, 10, 1.0}, -0.6), std::domain_error);
    CHECK_THROWS_AS(expand(BBox{10, 0, 0, 10, 1.0}, 0.5), std::domain_error);  // x2 < x1
    CHECK_THROWS_AS(expand(BBox{0, 0, 10, 10, 1.5}, 0.5), std::domain_error);  // conf > 1
}

TEST_CASE("expand keeps center and aspect ratio") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> scale(-0.5, 2.5);
    for (int i = 0; i < 500; ++i) {
        const BBox box = testutil::random_box(rng);
        const double e = scale(rng);
        const BBox out = expand(box, e);
        CHECK(out.center_x() == doctest::Approx(box.center_x()).epsilon(1e-9));
        CHECK(out.center_y() == doctest::Approx(box.center_y()).epsilon(1e-9));
        if (box.height() > 1e-9 && out.height() > 1e-9) {
            CHECK(out.width() / out.height() ==
                  doctest::Approx(box.width() / box.height()).epsilon(1e-9));
        }
    }
}

TEST_CASE("iou basics") {
    const BBox a{0, 0, 10, 10, 1.0};
    CHECK(iou(a, a) == 1.0);
    CHECK(iou(a, BBox{20, 20, 30, 30, 1.0}) == 0.0);
    // inter 50, union 150
    CHECK(iou(a, BBox{5, 0, 15, 10, 1.0}) == doctest::Approx(50.0 / 150.0).epsilon(1e-12));
    // zero-area boxes are legal and score 0
    const BBox degenerate{5, 5, 5, 5, 1.0};
    CHECK(iou(degenerate, degenerate) == 0.0);
    CHECK(iou(a, degenerate) == 0.0);
}

TEST_CASE("eiou hand-geometry fixture") {
    const BBox a{0, 0, 10, 10, 1.0};
    const BBox b{15, 0, 25, 10, 1.0};
    // Expanded at 0.7: (-12,-12,22,22) and (3,-12,37,22); inter 19*34 = 646,
    // union 2*1156 - 646 = 1666.
    CHECK(eiou(a, b, 0.7) == doctest::Approx(646.0 / 1666.0).epsilon(1e-9));
    CHECK(eiou(a, a, 0.7) == 1.0);
    CHECK(eiou(a, a, 2.0) == 1.0);
}

TEST_CASE("eiou at -0.5 equals iou") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        const BBox a = testutil::random_box(rng);
        const BBox b = testutil::random_box(rng);
        CHECK(std::abs(eiou(a, b, -0.5) - iou(a, b)) <= 1e-9);
    }
}

TEST_CASE("eiou is symmetric and bounded") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> scale(-0.5, 2.0);
    for (int i = 0; i < 500; ++i) {
        const BBox a = testutil::random_box(rng);
        const BBox b = testutil::random_box(rng);
        const double e = scale(rng);
        const double ab = eiou(a, b, e);
        CHECK(ab == eiou(b, a, e));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        const double plain = iou(a, b);
        CHECK(plain >= 0.0);
        CHECK(plain <= 1.0);
    }
}

TEST_CASE("eiou of congruent boxes is nondecreasing in the scale") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> offset(-120.0, 120.0);
    for (int i = 0; i < 1000; ++i) {
        const BBox a = testutil::random_box(rng);
        const double dx = offset(rng);
        const double dy = offset(rng);
        const BBox b{a.x1 + dx, a.y1 + dy, a.x2 + dx, a.y2 + dy, 1.0};
        double prev = -1.0;
        for (double e = -0.5; e <= 2.0 + 1e-12; e += 0.125) {
            const double val = eiou(a, b, e);
            CHECK(val >= prev - 1e-12);
            prev = val;
        }
    }
}

TEST_CASE("some expansion recovers any disjoint pair at finite offset") {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 200; ++i) {
        const BBox a = testutil::random_box(rng);
        const double dx = a.width() * 1.5 + 5.0;
        const BBox b{a.x1 + dx, a.y1, a.x2 + dx, a.y2, 1.0};
        REQUIRE(iou(a, b) == 0.0);
        bool recovered = false;
        for (double e = -0.5; e <= 8.0; e += 0.25) {
            if (eiou(a, b, e) > 0.0) {
                recovered = true;
                break;
            }
        }
        CHECK(recovered);
    }
}
