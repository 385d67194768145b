#include <benchmark/benchmark.h>

#include <random>

#include "qse/energetics.hpp"
#include "qse/models.hpp"
#include "qse/propagator.hpp"
#include "qse/schmidt.hpp"

namespace {

qse::StateVector random_state(const qse::BipartiteShape& shape, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    qse::Vector amps(shape.total());
    for (int i = 0; i < amps.size(); ++i)
        amps(i) = qse::Complex(gauss(rng), gauss(rng));
    amps /= amps.norm();
    return qse::make_state(std::move(amps), shape);
}

void bm_schmidt_decompose(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const qse::StateVector psi = random_state(qse::BipartiteShape(d, d), 11);
    for (auto _ : state) {
        auto frame = qse::schmidt_decompose(psi, 1e-8);
        benchmark::DoNotOptimize(frame.lambdas);
    }
}
BENCHMARK(bm_schmidt_decompose)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void bm_track_and_energetics(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const qse::ModelSpec spec = qse::preset_random_dense(2, 2, 1.0, 42);
    const qse::StateVector psi = random_state(spec.shape, 5);
    const qse::TimeGrid grid{0.0, 2.0, n, 2e-5};
    const qse::Trajectory traj = qse::sample_trajectory(spec, psi, grid);
    for (auto _ : state) {
        const qse::FrameSeries series = qse::track(traj);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto eff = qse::effective_hamiltonian(series, 1, i);
            acc += qse::local_energy(series.at[i], eff);
        }
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(bm_track_and_energetics)->Arg(21)->Arg(101);

}  // namespace

BENCHMARK_MAIN();
