#include "rpcm/synth.hpp"

#include <algorithm>
#include <cmath>

#include "rpcm/rng.hpp"

namespace rpcm {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_params(const SensorParams& sensor, const ContaminationParams& contamination) {
    if (!(sensor.max_range > 0.0) || sensor.detections_per_scan < 1) {
        throw InvariantViolation("sensor params must be positive");
    }
    if (sensor.azimuth_fov <= 0.0 || sensor.azimuth_fov > 2.0 * kPi ||
        sensor.elevation_fov <= 0.0 || sensor.elevation_fov > kPi) {
        throw InvariantViolation("sensor FOV outside (0, 2pi] x (0, pi]");
    }
    if (sensor.accuracy.sigma_range < 0.0 || sensor.accuracy.sigma_azimuth < 0.0 ||
        sensor.accuracy.sigma_elevation < 0.0) {
        throw InvariantViolation("simulation accuracies must be non-negative");
    }
    if (contamination.outlier_fraction < 0.0 || contamination.ghost_fraction < 0.0 ||
        contamination.outlier_fraction >= 1.0 ||
        contamination.outlier_fraction + contamination.ghost_fraction >= 1.0) {
        throw InvariantViolation("contamination fractions must be in [0, 1) and sum below 1");
    }
}

SphericalDetection perturb(const SphericalDetection& d, const SphericalAccuracy& acc,
                           CounterRng& rng) {
    SphericalDetection out;
    out.range = d.range + acc.sigma_range * rng.normal();
    out.azimuth = d.azimuth + acc.sigma_azimuth * rng.normal();
    out.elevation = d.elevation + acc.sigma_elevation * rng.normal();

    out.range = std::max(out.range, 1e-3);
    while (out.azimuth > kPi) out.azimuth -= 2.0 * kPi;
    while (out.azimuth <= -kPi) out.azimuth += 2.0 * kPi;
    out.elevation = std::clamp(out.elevation, -kPi / 2.0, kPi / 2.0);
    return out;
}

SphericalDetection uniform_in_sensing_volume(const SensorParams& sensor, CounterRng& rng) {
    SphericalDetection d;
    d.range = rng.uniform(1.0, sensor.max_range);
    d.azimuth = rng.uniform(-sensor.azimuth_fov / 2.0, sensor.azimuth_fov / 2.0);
    d.elevation = rng.uniform(-sensor.elevation_fov / 2.0, sensor.elevation_fov / 2.0);
    if (d.azimuth <= -kPi) d.azimuth = kPi;  // keep azimuth in (-pi, pi]
    d.elevation = std::clamp(d.elevation, -kPi / 2.0, kPi / 2.0);
    return d;
}

struct TrajectorySample {
    Vec3 position;
    double yaw = 0.0;
};

TrajectorySample sample_shape(TrajectoryShape shape, double s, double total_length) {
    TrajectorySample out;
    switch (shape) {
        case TrajectoryShape::Line: {
            out.position = Vec3(s, 0.0, 0.0);
            out.yaw = 0.0;
            break;
        }
        case TrajectoryShape::Arc: {
            // Quarter-circle left turn, arc-length parameterized.
            const double radius = total_length / (kPi / 2.0);
            const double phi = s / radius;
            out.position = Vec3(radius * std::sin(phi), radius * (1.0 - std::cos(phi)), 0.0);
            out.yaw = phi;
            break;
        }
        case TrajectoryShape::RampLoop: {
            // One full planar loop with a 5% climbing grade.
            const double grade = 0.05;
            const double kz = grade / std::sqrt(1.0 + grade * grade);
            const double horizontal = std::sqrt(1.0 - kz * kz);
            const double radius = total_length * horizontal / (2.0 * kPi);
            const double phi = s * horizontal / radius;
            out.position =
                Vec3(radius * std::cos(phi), radius * std::sin(phi), kz * s);
            out.yaw = phi + kPi / 2.0;
            break;
        }
    }
    return out;
}

}  // namespace

std::vector<Vec3> generate_scene(int landmark_count, double extent, std::uint64_t seed) {
    if (landmark_count < 1) {
        throw InvariantViolation("generate_scene: landmark count must be >= 1");
    }
    if (!(extent > 0.0)) {
        throw InvariantViolation("generate_scene: extent must be > 0");
    }
    CounterRng rng(seed, /*stream=*/0);
    std::vector<Vec3> scene;
    scene.reserve(landmark_count);
    const double half = extent / 2.0;
    for (int i = 0; i < landmark_count; ++i) {
        scene.emplace_back(rng.uniform(-half, half), rng.uniform(-half, half),
                           rng.uniform(-half, half));
    }
    return scene;
}

SimulatedScan simulate_scan(const std::vector<Vec3>& scene, const RigidTransform& sensor_pose,
                            const SensorParams& sensor, const ContaminationParams& contamination,
                            std::uint64_t seed) {
    validate_params(sensor, contamination);
    const std::uint64_t scan_seed = CounterRng::mix(seed) ^ CounterRng::mix(contamination.seed);
    const RigidTransform world_to_sensor = inverse(sensor_pose);

    // Visible landmarks in the sensor frame.
    struct Visible {
        int landmark = 0;
        SphericalDetection truth;
    };
    std::vector<Visible> visible;
    for (std::size_t i = 0; i < scene.size(); ++i) {
        const Vec3 q = apply(world_to_sensor, scene[i]);
        const double range = q.norm();
        if (range < 1e-3 || range > sensor.max_range) continue;
        const SphericalDetection truth = cartesian_to_spherical(q);
        if (std::abs(truth.azimuth) > sensor.azimuth_fov / 2.0) continue;
        if (std::abs(truth.elevation) > sensor.elevation_fov / 2.0) continue;
        visible.push_back({static_cast<int>(i), truth});
    }
    if (visible.empty()) {
        throw EmptyView("simulate_scan: no landmark visible from this pose");
    }

    if (visible.size() > static_cast<std::size_t>(sensor.detections_per_scan)) {
        std::sort(visible.begin(), visible.end(), [](const Visible& a, const Visible& b) {
            return a.truth.range < b.truth.range ||
                   (a.truth.range == b.truth.range && a.landmark < b.landmark);
        });
        visible.resize(sensor.detections_per_scan);
        std::sort(visible.begin(), visible.end(),
                  [](const Visible& a, const Visible& b) { return a.landmark < b.landmark; });
    }

    // One mirror plane per scan for ghost detections.
    CounterRng plane_rng(scan_seed, /*stream=*/1);
    Vec3 plane_normal;
    do {
        plane_normal =
            Vec3(plane_rng.normal(), plane_rng.normal(), plane_rng.normal());
    } while (plane_normal.norm() < 1e-9);
    plane_normal.normalize();
    const double plane_offset = plane_rng.uniform(2.0, std::max(4.0, sensor.max_range / 3.0));

    SimulatedScan out;
    out.scan.points.reserve(visible.size());
    out.scan.covariances.reserve(visible.size());
    out.scan.detections.reserve(visible.size());
    out.labels.reserve(visible.size());

    for (const Visible& v : visible) {
        // Stream keyed by landmark index: stable across visibility changes.
        CounterRng rng(scan_seed, /*stream=*/2 + static_cast<std::uint64_t>(v.landmark));
        const double u = rng.uniform01();

        DetectionLabel label = DetectionLabel::True;
        SphericalDetection measured;
        if (u < contamination.outlier_fraction) {
            label = DetectionLabel::Outlier;
            measured = uniform_in_sensing_volume(sensor, rng);
        } else if (u < contamination.outlier_fraction + contamination.ghost_fraction) {
            label = DetectionLabel::Ghost;
            const Vec3 q = spherical_to_cartesian(v.truth);
            const Vec3 mirrored = q - 2.0 * (plane_normal.dot(q) - plane_offset) * plane_normal;
            if (mirrored.norm() < 0.5) {
                measured = uniform_in_sensing_volume(sensor, rng);
            } else {
                measured = perturb(cartesian_to_spherical(mirrored), sensor.accuracy, rng);
            }
        } else {
            measured = perturb(v.truth, sensor.accuracy, rng);
        }

        out.scan.points.push_back(spherical_to_cartesian(measured));
        out.scan.covariances.push_back(propagate_covariance(measured, sensor.accuracy));
        out.scan.detections.push_back(measured);
        out.labels.push_back(label);
    }
    return out;
}

SyntheticSequence generate_sequence(const SequenceParams& params, const SensorParams& sensor,
                                    const ContaminationParams& contamination,
                                    std::uint64_t seed) {
    if (params.frame_count < 1) {
        throw InvariantViolation("generate_sequence: frame count must be >= 1");
    }
    if (!(params.step > 0.0) || !(params.frame_rate > 0.0)) {
        throw InvariantViolation("generate_sequence: step and frame rate must be > 0");
    }

    const std::vector<Vec3> scene = generate_scene(
        params.landmark_count, params.scene_extent, CounterRng::mix(seed ^ 0x5ce9eULL));

    const double total_length = params.frame_count * params.step;

    // Raw poses, then recenter on the scene.
    std::vector<TrajectorySample> samples(params.frame_count);
    Vec3 mean = Vec3::Zero();
    for (int k = 0; k < params.frame_count; ++k) {
        samples[k] = sample_shape(params.shape, k * params.step, total_length);
        mean += samples[k].position;
    }
    mean /= static_cast<double>(params.frame_count);

    SyntheticSequence out;
    out.ground_truth.reserve(params.frame_count);
    out.frames.reserve(params.frame_count);
    for (int k = 0; k < params.frame_count; ++k) {
        RigidTransform pose;
        pose.rotation = rot_z(samples[k].yaw);
        pose.translation = samples[k].position - mean;
        out.ground_truth.push_back({k / params.frame_rate, pose});

        const std::uint64_t frame_seed =
            CounterRng::mix(seed) ^ CounterRng::mix(0xf0a3ULL + static_cast<std::uint64_t>(k));
        out.frames.push_back(simulate_scan(scene, pose, sensor, contamination, frame_seed));
    }
    return out;
}

}  // namespace rpcm
