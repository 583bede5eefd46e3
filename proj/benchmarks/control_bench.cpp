#include <benchmark/benchmark.h>

#include <vector>

#include "agentctl/control/analysis.hpp"
#include "agentctl/control/design.hpp"
#include "agentctl/control/linear_system.hpp"
#include "agentctl/control/response.hpp"

namespace {

using namespace agentctl::control;

Matrix companion(int n) {
    Matrix a = Matrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
    for (int j = 0; j < n; ++j) a(n - 1, j) = -(j + 1.0);
    return a;
}

void BM_Acker(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Matrix a = companion(n);
    Matrix b = Matrix::Zero(n, 1);
    b(n - 1, 0) = 1.0;
    std::vector<Complex> p;
    for (int i = 0; i < n; ++i) p.emplace_back(-1.0 - i, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(acker(a, b, p));
}
BENCHMARK(BM_Acker)->Arg(2)->Arg(4)->Arg(8);

void BM_Lqr(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Matrix a = companion(n);
    Matrix b = Matrix::Zero(n, 1);
    b(n - 1, 0) = 1.0;
    const Matrix q = Matrix::Identity(n, n), r = Matrix::Identity(1, 1);
    for (auto _ : state) benchmark::DoNotOptimize(lqr(a, b, q, r));
}
BENCHMARK(BM_Lqr)->Arg(2)->Arg(4)->Arg(8);

void BM_StepResponse(benchmark::State& state) {
    const auto sys = make_tf({1, 3}, {1, 4.16, 3.16});
    TimeResponseOptions opt;
    opt.n_points = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(time_response(sys, TimeResponseKind::Step, opt));
}
BENCHMARK(BM_StepResponse)->Arg(500)->Arg(5000);

void BM_IsStable(benchmark::State& state) {
    const auto sys = make_tf({1, 7, 10}, {1, 3, 4, 20});
    for (auto _ : state) benchmark::DoNotOptimize(is_stable(sys));
}
BENCHMARK(BM_IsStable);

}  // namespace

BENCHMARK_MAIN();
