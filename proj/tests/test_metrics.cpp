#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include <eioutrack/metrics.hpp>
#include <eioutrack/scenario.hpp>

using namespace eioutrack;

namespace {

BBox box_at(double x, double y) { return {x, y, x + 20.0, y + 40.0, 1.0}; }

// One target moving right, n frames, predictions copied from ground truth
// with a caller-controlled id per frame.
LabeledFrameSet single_target(int n, const std::vector<int>& pred_ids) {
    LabeledFrameSet data;
    for (int f = 1; f <= n; ++f) {
        const BBox b = box_at(5.0 * f, 10.0);
        data.ground_truth[f].push_back({1, b});
        if (f - 1 < static_cast<int>(pred_ids.size()) && pred_ids[f - 1] != 0) {
            data.predictions[f].push_back({pred_ids[f - 1], b});
        }
    }
    return data;
}

LabeledFrameSet random_tracking(std::mt19937_64& rng, int targets, int frames,
                                double miss_prob) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> pos(0.0, 800.0);
    LabeledFrameSet data;
    std::vector<std::pair<double, double>> at(targets);
    for (auto& [x, y] : at) {
        x = pos(rng);
        y = pos(rng);
    }
    for (int f = 1; f <= frames; ++f) {
        for (int t = 0; t < targets; ++t) {
            at[t].first += unit(rng) * 6.0 - 3.0;
            at[t].second += unit(rng) * 6.0 - 3.0;
            const BBox b = box_at(at[t].first, at[t].second);
            data.ground_truth[f].push_back({t + 1, b});
            if (unit(rng) >= miss_prob) {
                BBox jittered = b;
                jittered.x1 += unit(rng);
                jittered.x2 += unit(rng);
                data.predictions[f].push_back({t + 1, jittered});
            }
        }
    }
    return data;
}

}  // namespace

TEST_CASE("perfect tracking scores perfectly") {
    const LabeledFrameSet data = single_target(10, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
    const ClearResult clear = clear_metrics(data, 0.5);
    CHECK(clear.mota == 1.0);
    CHECK(clear.id_switches == 0);
    CHECK(clear.false_positives == 0);
    CHECK(clear.false_negatives == 0);
    CHECK(idf1(data, 0.5) == 1.0);
    const HotaResult h = hota(data);
    CHECK(h.hota == 1.0);
    CHECK(h.deta == 1.0);
    CHECK(h.assa == 1.0);
}

TEST_CASE("one miss in ten costs exactly a tenth of MOTA") {
    // 10 ground-truth boxes over two targets; one prediction dropped
    LabeledFrameSet data;
    for (int f = 1; f <= 5; ++f) {
        const BBox a = box_at(10.0 * f, 0.0);
        const BBox b = box_at(10.0 * f, 300.0);
        data.ground_truth[f].push_back({1, a});
        data.ground_truth[f].push_back({2, b});
        data.predictions[f].push_back({1, a});
        if (f != 3) {
            data.predictions[f].push_back({2, b});
        }
    }
    const ClearResult clear = clear_metrics(data, 0.5);
    CHECK(clear.ground_truth_total == 10);
    CHECK(clear.false_negatives == 1);
    CHECK(clear.id_switches == 0);
    CHECK(clear.mota == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(clear.fragmentations == 1);  // target 2 drops out once and returns
}

TEST_CASE("an id change mid-sequence is one switch") {
    const LabeledFrameSet data = single_target(10, {1, 1, 1, 1, 1, 2, 2, 2, 2, 2});
    const ClearResult clear = clear_metrics(data, 0.5);
    CHECK(clear.id_switches == 1);
    CHECK(clear.false_positives == 0);
    CHECK(clear.false_negatives == 0);
    CHECK(clear.mota == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(clear.fragmentations == 0);
}

TEST_CASE("idf1 of the 6/4 split is exactly 0.6") {
    const LabeledFrameSet data = single_target(10, {1, 1, 1, 1, 1, 1, 2, 2, 2, 2});
    CHECK(idf1(data, 0.5) == doctest::Approx(2.0 * 6.0 / (2.0 * 6.0 + 4.0 + 4.0)).epsilon(1e-12));
    CHECK(idf1(data, 0.5) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("fresh ids every frame keep detection but ruin association") {
    const LabeledFrameSet data = single_target(10, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    const HotaResult h = hota(data);
    CHECK(h.deta == doctest::Approx(1.0).epsilon(1e-12));
    // every matched pair covers 1 of the 10 gt frames: association 1/10
    CHECK(h.assa == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(h.hota == doctest::Approx(std::sqrt(0.1)).epsilon(1e-12));
}

TEST_CASE("empty predictions floor every metric") {
    const LabeledFrameSet data = single_target(10, {});
    CHECK(idf1(data, 0.5) == 0.0);
    const HotaResult h = hota(data);
    CHECK(h.hota == 0.0);
    const ClearResult clear = clear_metrics(data, 0.5);
    CHECK(clear.false_negatives == 10);
    CHECK(clear.mota == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("metrics ignore a bijective relabeling of predicted ids") {
    std::mt19937_64 rng(61);
    const LabeledFrameSet data = random_tracking(rng, 6, 40, 0.1);
    LabeledFrameSet renamed = data;
    const auto remap = [](int id) { return 1000 - id * 7; };
    for (auto& [frame, boxes] : renamed.predictions) {
        for (LabeledBox& lb : boxes) {
            lb.id = remap(lb.id);
        }
    }
    CHECK(clear_metrics(renamed, 0.5).mota == clear_metrics(data, 0.5).mota);
    CHECK(clear_metrics(renamed, 0.5).id_switches == clear_metrics(data, 0.5).id_switches);
    CHECK(idf1(renamed, 0.5) == idf1(data, 0.5));
    CHECK(hota(renamed).hota == doctest::Approx(hota(data).hota).epsilon(1e-12));
}

TEST_CASE("metrics ignore a uniform translation of the scene") {
    std::mt19937_64 rng(62);
    const LabeledFrameSet data = random_tracking(rng, 5, 30, 0.15);
    LabeledFrameSet moved = data;
    const auto shift = [](FrameLabels& labels) {
        for (auto& [frame, boxes] : labels) {
            for (LabeledBox& lb : boxes) {
                lb.box.x1 += 43.5;
                lb.box.x2 += 43.5;
                lb.box.y1 -= 17.25;
                lb.box.y2 -= 17.25;
            }
        }
    };
    shift(moved.ground_truth);
    shift(moved.predictions);
    CHECK(clear_metrics(moved, 0.5).mota == doctest::Approx(clear_metrics(data, 0.5).mota));
    CHECK(idf1(moved, 0.5) == doctest::Approx(idf1(data, 0.5)));
    CHECK(hota(moved).hota == doctest::Approx(hota(data).hota));
}

TEST_CASE("deleting a correct prediction never helps") {
    std::mt19937_64 rng(63);
    for (int rep = 0; rep < 10; ++rep) {
        const LabeledFrameSet data = random_tracking(rng, 4, 25, 0.0);
        const double mota_before = clear_metrics(data, 0.5).mota;
        const double idf1_before = idf1(data, 0.5);
        LabeledFrameSet pruned = data;
        auto it = pruned.predictions.begin();
        std::advance(it, rep % pruned.predictions.size());
        if (!it->second.empty()) {
            it->second.pop_back();
        }
        CHECK(clear_metrics(pruned, 0.5).mota <= mota_before + 1e-12);
        CHECK(idf1(pruned, 0.5) <= idf1_before + 1e-12);
    }
}

TEST_CASE("parallel hota equals the serial reference") {
    std::mt19937_64 rng(64);
    const LabeledFrameSet data = random_tracking(rng, 8, 60, 0.2);
    const HotaResult par = hota(data);
    const HotaResult ser = serial::hota(data);
    CHECK(par.hota == ser.hota);
    CHECK(par.deta == ser.deta);
    CHECK(par.assa == ser.assa);
}

TEST_CASE("duplicate ids within a frame are rejected") {
    LabeledFrameSet data;
    data.ground_truth[1].push_back({1, box_at(0, 0)});
    data.ground_truth[1].push_back({1, box_at(100, 0)});
    CHECK_THROWS_AS(clear_metrics(data, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(idf1(data, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(hota(data), std::invalid_argument);
    CHECK_THROWS_AS(clear_metrics(LabeledFrameSet{}, 1.5), std::invalid_argument);
}
