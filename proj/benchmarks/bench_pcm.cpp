#include <benchmark/benchmark.h>

#include <random>

#include "rpcm/pcm.hpp"

using namespace rpcm;

namespace {

struct Fixture {
    RadarScan source;
    RadarScan target;
    AssociationSet assoc;
    PcmConfig cfg;

    explicit Fixture(int n, ScoreKind kind) {
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> coord(-50.0, 50.0);
        std::uniform_real_distribution<double> jitter(-0.2, 0.2);
        for (int i = 0; i < n; ++i) {
            const Vec3 p(coord(rng), coord(rng), coord(rng));
            target.points.push_back(p);
            source.points.push_back(p + Vec3(jitter(rng), jitter(rng), jitter(rng)));
            assoc.push_back({i, i, 0.0});
        }
        source.covariances.assign(n, 0.02 * Mat3::Identity());
        target.covariances.assign(n, 0.02 * Mat3::Identity());
        cfg.score_kind = kind;
        cfg.threshold = kind == ScoreKind::Raw ? 0.25 : 3.86;
    }
};

}  // namespace

static void BM_BuildGraphRaw(benchmark::State& state) {
    Fixture f(static_cast<int>(state.range(0)), ScoreKind::Raw);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_consistency_graph(f.assoc, f.source, f.target, f.cfg));
    }
}
BENCHMARK(BM_BuildGraphRaw)->Arg(100)->Arg(250)->Arg(500);

static void BM_BuildGraphNormalized(benchmark::State& state) {
    Fixture f(static_cast<int>(state.range(0)), ScoreKind::Normalized);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_consistency_graph(f.assoc, f.source, f.target, f.cfg));
    }
}
BENCHMARK(BM_BuildGraphNormalized)->Arg(100)->Arg(250)->Arg(500);

static void BM_SmallestLastOrdering(benchmark::State& state) {
    Fixture f(static_cast<int>(state.range(0)), ScoreKind::Raw);
    const ConsistencyGraph g = build_consistency_graph(f.assoc, f.source, f.target, f.cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(smallest_last_ordering(g));
    }
}
BENCHMARK(BM_SmallestLastOrdering)->Arg(100)->Arg(250)->Arg(500);

static void BM_GreedyClique(benchmark::State& state) {
    Fixture f(static_cast<int>(state.range(0)), ScoreKind::Raw);
    const ConsistencyGraph g = build_consistency_graph(f.assoc, f.source, f.target, f.cfg);
    const std::vector<int> order = smallest_last_ordering(g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(greedy_clique(g, order));
    }
}
BENCHMARK(BM_GreedyClique)->Arg(100)->Arg(250)->Arg(500);

static void BM_SelectInliers(benchmark::State& state) {
    Fixture f(static_cast<int>(state.range(0)), ScoreKind::Normalized);
    for (auto _ : state) {
        benchmark::DoNotOptimize(select_inliers(f.assoc, f.source, f.target, f.cfg));
    }
}
BENCHMARK(BM_SelectInliers)->Arg(100)->Arg(250)->Arg(500);

BENCHMARK_MAIN();
