#pragma once

#include <cstdint>
#include <vector>

#include "rpcm/evaluation.hpp"
#include "rpcm/radar_model.hpp"

namespace rpcm {

/// Sensor model for scan simulation. FOVs are full widths centered on the
/// +x boresight (azimuth_fov <= 2 pi, elevation_fov <= pi).
struct SensorParams {
    SphericalAccuracy accuracy;
    double max_range = 60.0;           // meters
    double azimuth_fov = 2.0 * 3.14159265358979323846;
    double elevation_fov = 3.14159265358979323846;
    int detections_per_scan = 120;     // cap, nearest landmarks win
};

/// Contamination of simulated scans: a fraction of detections replaced by
/// uniform draws in the sensing volume and a fraction replaced by ghost
/// detections (the true return mirrored through a random plane, a multipath
/// surrogate). Fractions must sum below 1.
struct ContaminationParams {
    double outlier_fraction = 0.0;
    double ghost_fraction = 0.0;
    std::uint64_t seed = 0;  // mixed into every per-scan stream
};

enum class DetectionLabel : unsigned char {
    True,
    Outlier,
    Ghost,
};

/// A simulated frame plus per-detection provenance for test-side
/// precision/recall bookkeeping.
struct SimulatedScan {
    RadarScan scan;
    std::vector<DetectionLabel> labels;
};

enum class TrajectoryShape {
    Line,      // straight along +x
    Arc,       // quarter-circle turn in the x-y plane
    RampLoop,  // full planar loop climbing a ramp in z
};

/// Deterministic pseudo-random landmarks, uniform in the axis-aligned cube
/// [-extent/2, extent/2]^3.
std::vector<Vec3> generate_scene(int landmark_count, double extent, std::uint64_t seed);

/// Simulates one radar frame from a sensor pose: landmarks inside range and
/// FOV become detections, spherical coordinates are perturbed by independent
/// zero-mean Gaussians, and each detection carries its propagated Euclidean
/// covariance. Deterministic per (params, seed).
/// Throws EmptyView when no landmark is visible.
SimulatedScan simulate_scan(const std::vector<Vec3>& scene, const RigidTransform& sensor_pose,
                            const SensorParams& sensor, const ContaminationParams& contamination,
                            std::uint64_t seed);

struct SequenceParams {
    int landmark_count = 500;
    double scene_extent = 120.0;  // meters
    TrajectoryShape shape = TrajectoryShape::Line;
    int frame_count = 100;
    double step = 0.19;       // meters between consecutive poses, along arc length
    double frame_rate = 20.0; // Hz, sets ground-truth timestamps
};

struct SyntheticSequence {
    std::vector<SimulatedScan> frames;
    Trajectory ground_truth;  // sensor poses in the world frame
};

/// Ground-truth poses along the requested shape (centered on the scene) with
/// one simulated scan per pose. Frame k's randomness derives only from
/// (seed, k), so frames may be generated in parallel.
SyntheticSequence generate_sequence(const SequenceParams& params, const SensorParams& sensor,
                                    const ContaminationParams& contamination, std::uint64_t seed);

}  // namespace rpcm
