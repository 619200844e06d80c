// Serial reference vs OpenMP kernels on shapes typical for the fusion network.
#include <benchmark/benchmark.h>

#include <vector>

#include "clickbait/adaboost.hpp"
#include "clickbait/kernels.hpp"
#include "clickbait/rng.hpp"

namespace k = clickbait::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
    clickbait::Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

template <bool Parallel>
void bm_matmul(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::size_t kk = 200, m = 224;  // batch x embed -> 4 LSTM gates of 56 units
    auto a = random_vec(n * kk, 1), b = random_vec(kk * m, 2);
    std::vector<double> c(n * m);
    for (auto _ : state) {
        if constexpr (Parallel) k::omp::matmul(a, b, c, n, kk, m, false);
        else k::serial::matmul(a, b, c, n, kk, m, false);
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * kk * m));
}

template <bool Parallel>
void bm_conv1d(benchmark::State& state) {
    k::Conv1dDims d{static_cast<std::size_t>(state.range(0)), 100, 200, 3, 64};
    auto x = random_vec(d.batch * d.length * d.channels, 3), w = random_vec(d.width * d.channels * d.filters, 4),
         bias = random_vec(d.filters, 5);
    std::vector<double> y(d.batch * d.out_length() * d.filters);
    for (auto _ : state) {
        if constexpr (Parallel) k::omp::conv1d_forward(x, w, bias, y, d);
        else k::serial::conv1d_forward(x, w, bias, y, d);
        benchmark::DoNotOptimize(y.data());
    }
}

template <bool Parallel>
void bm_stump_search(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const std::size_t cols = 5000;
    clickbait::Rng rng(6);
    clickbait::FeatureMatrix x;
    x.cols = cols;
    std::vector<double> y(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        clickbait::SparseVector v;
        for (std::size_t c = rng.below(50); c < cols; c += 1 + rng.below(400)) {
            v.index.push_back(static_cast<std::uint32_t>(c));
            v.value.push_back(rng.uniform());
        }
        x.rows.push_back(v);
        y[r] = rng.uniform();
    }
    clickbait::ColumnIndex index(x);
    std::vector<std::size_t> sample(rows);
    for (auto& s : sample) s = rng.below(rows);
    for (auto _ : state) {
        auto stump = Parallel ? clickbait::stump_search::omp(index, y, sample)
                              : clickbait::stump_search::serial(index, y, sample);
        benchmark::DoNotOptimize(stump);
    }
}

}  // namespace

BENCHMARK(bm_matmul<false>)->Name("matmul/serial")->Arg(32)->Arg(256);
BENCHMARK(bm_matmul<true>)->Name("matmul/omp")->Arg(32)->Arg(256);
BENCHMARK(bm_conv1d<false>)->Name("conv1d/serial")->Arg(8)->Arg(32);
BENCHMARK(bm_conv1d<true>)->Name("conv1d/omp")->Arg(8)->Arg(32);
BENCHMARK(bm_stump_search<false>)->Name("stump_search/serial")->Arg(2000);
BENCHMARK(bm_stump_search<true>)->Name("stump_search/omp")->Arg(2000);

BENCHMARK_MAIN();
