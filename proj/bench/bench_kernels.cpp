// Serial reference against OpenMP kernels on the transport operator.

#include <benchmark/benchmark.h>

#include <random>

#include "hypflow/elliptic.hpp"
#include "hypflow/kernels.hpp"

using namespace hypflow;

namespace {

struct Problem {
    FivePointOperator A;
    std::vector<double> x, b;
};

Problem make_problem(int n) {
    GridPtr g = PolarGrid::geodesic(1.0, 1.0, 8.0, n, n);
    Problem p{fv_laplacian(*g, 2.0).to_five_point(), std::vector<double>(g->size()), std::vector<double>(g->size())};
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& v : p.x) v = u(rng);
    for (double& v : p.b) v = u(rng);
    return p;
}

template <void (*Sweep)(const FivePointOperator&, std::vector<double>&, const std::vector<double>&, double)>
void bm_sweep(benchmark::State& state) {
    Problem p = make_problem(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        Sweep(p.A, p.x, p.b, 1.2);
        benchmark::DoNotOptimize(p.x.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.x.size()));
}

template <double (*Residual)(const FivePointOperator&, const std::vector<double>&, const std::vector<double>&)>
void bm_residual(benchmark::State& state) {
    Problem p = make_problem(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Residual(p.A, p.x, p.b));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.x.size()));
}

}  // namespace

BENCHMARK(bm_sweep<kernels::serial::rb_sor_sweep>)->Name("rb_sor/serial")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_sweep<kernels::omp::rb_sor_sweep>)->Name("rb_sor/omp")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_sweep<kernels::serial::zebra_line_sor_sweep>)->Name("zebra_line/serial")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_sweep<kernels::omp::zebra_line_sor_sweep>)->Name("zebra_line/omp")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_residual<kernels::serial::residual_max>)->Name("residual/serial")->Arg(256)->Arg(512);
BENCHMARK(bm_residual<kernels::omp::residual_max>)->Name("residual/omp")->Arg(256)->Arg(512);

BENCHMARK_MAIN();
