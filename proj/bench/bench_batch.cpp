#include <random>

#include <benchmark/benchmark.h>

#include "rkhs_embed/analysis.hpp"
#include "rkhs_embed/batch.hpp"
#include "rkhs_embed/dynamics.hpp"
#include "rkhs_embed/manifold.hpp"

using namespace rkhs_embed;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::parallel : Exec::serial; }

PointSet random_points(Eigen::Index n) {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    PointSet p(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) p(i, 0) = u(rng), p(i, 1) = u(rng);
    return p;
}

const ManifoldPolyline& curve() {
    static const ManifoldPolyline m = trace_level_set(-0.1, level_seed(-0.1), 1e-3);
    return m;
}

void BM_Gram(benchmark::State& state) {
    const auto spec = make_matern(MaternOrder::five_halves, 0.5, 2);
    const PointSet pts = random_points(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(batch::gram(spec, pts, exec_of(state)));
    state.SetComplexityN(state.range(0));
}

void BM_ExpansionValues(benchmark::State& state) {
    const auto spec = make_matern(MaternOrder::five_halves, 0.5, 2);
    const PointSet centers = random_points(200);
    const PointSet pts = random_points(state.range(0));
    const Eigen::VectorXd a = Eigen::VectorXd::Ones(200);
    for (auto _ : state)
        benchmark::DoNotOptimize(batch::expansion_values(spec, centers, a, pts, exec_of(state)));
}

void BM_FillDistance(benchmark::State& state) {
    const auto& m = curve();
    const CenterSet samples = uniform_samples(m, state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(fill_distance(m, samples, exec_of(state)));
}

void BM_ErrorField(benchmark::State& state) {
    const auto spec = make_matern(MaternOrder::five_halves, 0.5, 2);
    const CenterSet centers = uniform_samples(curve(), 100);
    const RkhsFunction f(spec, centers, Eigen::VectorXd::Ones(100));
    for (auto _ : state)
        benchmark::DoNotOptimize(error_field(example_nonlinearity, f, BoundingBox{}, state.range(0), exec_of(state)));
}

}  // namespace

BENCHMARK(BM_Gram)->ArgsProduct({{100, 400, 1600}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ExpansionValues)->ArgsProduct({{1000, 10000}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FillDistance)->ArgsProduct({{50, 200}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ErrorField)->ArgsProduct({{51, 201}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
