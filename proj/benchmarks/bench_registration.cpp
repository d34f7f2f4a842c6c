#include <benchmark/benchmark.h>

#include "rpcm/association.hpp"
#include "rpcm/registration.hpp"
#include "rpcm/synth.hpp"

using namespace rpcm;

namespace {

SyntheticSequence make_pair(int landmarks) {
    SequenceParams params;
    params.frame_count = 2;
    params.landmark_count = landmarks;
    params.scene_extent = 90.0;
    params.step = 0.19;
    SensorParams sensor;
    sensor.max_range = 60.0;
    sensor.detections_per_scan = landmarks;
    ContaminationParams contamination;
    contamination.outlier_fraction = 0.25;
    contamination.ghost_fraction = 0.15;
    return generate_sequence(params, sensor, contamination, 7);
}

}  // namespace

static void BM_RegisterGicp(benchmark::State& state) {
    const SyntheticSequence seq = make_pair(static_cast<int>(state.range(0)));
    RegistrationConfig cfg;
    cfg.objective = Objective::Gicp;
    for (auto _ : state) {
        benchmark::DoNotOptimize(register_scans(seq.frames[1].scan, seq.frames[0].scan, cfg));
    }
}
BENCHMARK(BM_RegisterGicp)->Arg(120)->Arg(250);

static void BM_RegisterGicpPcm(benchmark::State& state) {
    const SyntheticSequence seq = make_pair(static_cast<int>(state.range(0)));
    RegistrationConfig cfg;
    cfg.objective = Objective::Gicp;
    cfg.pcm = PcmConfig{ScoreKind::Raw, 0.25, 1e-6};
    for (auto _ : state) {
        benchmark::DoNotOptimize(register_scans(seq.frames[1].scan, seq.frames[0].scan, cfg));
    }
}
BENCHMARK(BM_RegisterGicpPcm)->Arg(120)->Arg(250);

static void BM_KdTreeBuild(benchmark::State& state) {
    const SyntheticSequence seq = make_pair(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(KdTree(seq.frames[0].scan.points));
    }
}
BENCHMARK(BM_KdTreeBuild)->Arg(120)->Arg(500);

static void BM_NearestNeighborQueries(benchmark::State& state) {
    const SyntheticSequence seq = make_pair(static_cast<int>(state.range(0)));
    const KdTree tree(seq.frames[0].scan.points);
    for (auto _ : state) {
        for (const Vec3& p : seq.frames[1].scan.points) {
            benchmark::DoNotOptimize(tree.nearest(p));
        }
    }
}
BENCHMARK(BM_NearestNeighborQueries)->Arg(120)->Arg(500);

BENCHMARK_MAIN();
