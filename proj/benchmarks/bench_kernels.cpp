// Compares the OpenMP kernels against their serial references on sized-up
// synthetic inputs. Build and run: ./bench_kernels [repeats]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <eioutrack/interpolation.hpp>
#include <eioutrack/kernels.hpp>
#include <eioutrack/metrics.hpp>
#include <eioutrack/scenario.hpp>

using namespace eioutrack;

namespace {

double time_ms(const std::function<void()>& fn, int repeats) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        const auto stop = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(stop - start).count());
    }
    return best;
}

void report(const std::string& name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.2f ms %10.2f ms %8.2fx\n", name.c_str(), serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

std::vector<BBox> random_boxes(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> pos(0.0, 1800.0);
    std::uniform_real_distribution<double> size(20.0, 120.0);
    std::vector<BBox> boxes;
    boxes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = pos(rng);
        const double y = pos(rng);
        boxes.push_back({x, y, x + size(rng), y + size(rng), 0.9});
    }
    return boxes;
}

std::vector<Embedding> random_embeddings(std::size_t n, int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Embedding> embs;
    embs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Embedding e(dim);
        for (double& v : e) {
            v = gauss(rng);
        }
        embs.push_back(normalized(e));
    }
    return embs;
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::stoi(argv[1]) : 3;
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    std::mt19937_64 rng(42);

    {
        const std::size_t n = 1500;
        const auto rows = random_boxes(n, rng);
        const auto cols = random_boxes(n, rng);
        Matrix sink;
        const double s = time_ms([&] { sink = serial::eiou_cost_matrix(rows, cols, 0.7); }, repeats);
        const double p = time_ms([&] { sink = eiou_cost_matrix(rows, cols, 0.7); }, repeats);
        report("eiou_cost_matrix 1500x1500", s, p);
    }

    {
        const std::size_t n = 700;
        const int dim = 128;
        const auto rows = random_boxes(n, rng);
        const auto cols = random_boxes(n, rng);
        const auto row_embs = random_embeddings(n, dim, rng);
        const auto col_embs = random_embeddings(n, dim, rng);
        std::vector<const Embedding*> row_ptrs;
        std::vector<const Embedding*> col_ptrs;
        for (const auto& e : row_embs) {
            row_ptrs.push_back(&e);
        }
        for (const auto& e : col_embs) {
            col_ptrs.push_back(&e);
        }
        Matrix sink;
        const double s = time_ms(
            [&] {
                sink = serial::fused_cost_matrix(rows, row_ptrs, cols, col_ptrs, 0.7, 0.25, 0.5);
            },
            repeats);
        const double p = time_ms(
            [&] { sink = fused_cost_matrix(rows, row_ptrs, cols, col_ptrs, 0.7, 0.25, 0.5); },
            repeats);
        report("fused_cost_matrix 700x700", s, p);
    }

    {
        ScenarioConfig cfg;
        cfg.n_targets = 24;
        cfg.n_frames = 1500;
        cfg.motion = MotionModel::Zigzag;
        cfg.jitter_sigma = 2.0;
        cfg.embedding_dim = 0;
        cfg.seed = 9;
        const Scenario scenario = generate(cfg);
        LabeledFrameSet data;
        data.ground_truth = scenario.ground_truth;
        data.predictions = scenario.ground_truth;
        HotaResult sink;
        const double s = time_ms([&] { sink = serial::hota(data); }, repeats);
        const double p = time_ms([&] { sink = hota(data); }, repeats);
        report("hota 24 ids x 1500 frames", s, p);
    }

    {
        std::uniform_int_distribution<int> gap(1, 6);
        std::vector<Trajectory> trajs(20000);
        for (std::size_t i = 0; i < trajs.size(); ++i) {
            trajs[i].id = static_cast<int>(i) + 1;
            int frame = 1;
            for (int k = 0; k < 40; ++k) {
                const double t = 10.0 * k;
                trajs[i].entries.emplace_back(frame, BBox{t, t, t + 30.0, t + 60.0, 0.9});
                frame += gap(rng) + 1;
            }
        }
        std::vector<Trajectory> sink;
        const double s = time_ms(
            [&] {
                std::vector<Trajectory> out;
                out.reserve(trajs.size());
                for (const Trajectory& t : trajs) {
                    out.push_back(interpolate(t, 20));
                }
                sink = std::move(out);
            },
            repeats);
        const double p = time_ms([&] { sink = interpolate_all(trajs, 20); }, repeats);
        report("interpolate_all 20k tracks", s, p);
    }

    return 0;
}
