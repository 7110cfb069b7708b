#include <benchmark/benchmark.h>

#include <thread>

#include "engine_detail.hpp"
#include "mdfs/discretization.hpp"
#include "mdfs/engine.hpp"
#include "mdfs/rng.hpp"

namespace {

using namespace mdfs;

Dataset synthetic_dataset(std::size_t n, std::size_t m) {
    CounterRng rng(1234);
    std::vector<double> features(n * m);
    for (double& x : features) x = rng.uniform(-1.0, 1.0);
    std::vector<std::uint8_t> decision(n);
    for (std::size_t o = 0; o < n; ++o) decision[o] = static_cast<std::uint8_t>(o & 1);
    return make_dataset(std::move(features), std::move(decision), n, m);
}

DiscretizedView make_view(const Dataset& ds, std::uint32_t divisions, std::uint32_t d) {
    DiscretizationParams params;
    params.divisions = divisions;
    params.discretizations = d;
    params.range = d == 1 ? 0.0 : 0.2;
    params.seed = 9;
    return discretize_all(ds, params, std::thread::hardware_concurrency());
}

void BM_discretize_all(benchmark::State& state) {
    const auto ds = synthetic_dataset(2000, static_cast<std::size_t>(state.range(0)));
    DiscretizationParams params;
    params.divisions = 1;
    params.discretizations = 8;
    params.range = 0.2;
    params.seed = 7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(discretize_all(ds, params, 1));
    }
}
BENCHMARK(BM_discretize_all)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_count_bits(benchmark::State& state) {
    const auto ds = synthetic_dataset(2000, 8);
    const auto view = make_view(ds, 1, 1);
    detail::BitPlanes bits;
    bits.build(view, ds.decision);
    const std::uint32_t k = static_cast<std::uint32_t>(state.range(0));
    const std::uint64_t* pos[5];
    const std::uint64_t* neg[5];
    for (std::uint32_t j = 0; j < k; ++j) {
        pos[j] = bits.pos(0, j, 8);
        neg[j] = bits.neg(0, j, 8);
    }
    std::uint32_t c1[32], tot[32];
    for (auto _ : state) {
        detail::count_bits(pos, neg, k, bits.class1.data(), bits.words, c1, tot);
        benchmark::DoNotOptimize(c1[0]);
    }
}
BENCHMARK(BM_count_bits)->Arg(2)->Arg(3)->Arg(4);

void BM_count_radix(benchmark::State& state) {
    const auto ds = synthetic_dataset(2000, 8);
    const auto view = make_view(ds, 1, 1);
    const std::uint32_t k = static_cast<std::uint32_t>(state.range(0));
    const std::uint8_t* levels[5];
    for (std::uint32_t j = 0; j < k; ++j) levels[j] = view.slice(0, j).data();
    std::uint32_t c1[32], tot[32];
    for (auto _ : state) {
        detail::count_radix(levels, k, 2, ds.decision, detail::int_pow(2, k), c1, tot);
        benchmark::DoNotOptimize(c1[0]);
    }
}
BENCHMARK(BM_count_radix)->Arg(2)->Arg(3)->Arg(4);

void BM_max_info_gains_2d(benchmark::State& state) {
    const auto ds = synthetic_dataset(2000, static_cast<std::size_t>(state.range(0)));
    const auto view = make_view(ds, 1, 1);
    EngineParams params;
    params.dimensions = 2;
    params.disc = view.params;
    params.workers = static_cast<unsigned>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_max_info_gains(view, ds.decision, params));
    }
}
BENCHMARK(BM_max_info_gains_2d)
    ->Args({100, 1})
    ->Args({100, 2})
    ->Args({500, 1})
    ->Args({500, 2})
    ->Unit(benchmark::kMillisecond);

void BM_max_info_gains_3d(benchmark::State& state) {
    const auto ds = synthetic_dataset(500, static_cast<std::size_t>(state.range(0)));
    const auto view = make_view(ds, 1, 1);
    EngineParams params;
    params.dimensions = 3;
    params.disc = view.params;
    params.workers = static_cast<unsigned>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_max_info_gains(view, ds.decision, params));
    }
}
BENCHMARK(BM_max_info_gains_3d)->Args({60, 1})->Args({60, 2})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
