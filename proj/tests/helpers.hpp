#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rpcm/geometry.hpp"
#include "rpcm/radar_model.hpp"

namespace rpcm::test {

inline constexpr double kPi = 3.14159265358979323846;

/// Uniform random rotation axis, angle in [0, max_angle), translation in
/// [-max_translation, max_translation]^3.
inline RigidTransform random_transform(std::mt19937_64& rng, double max_angle = kPi,
                                       double max_translation = 10.0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec3 axis(gauss(rng), gauss(rng), gauss(rng));
    while (axis.norm() < 1e-6) {
        axis = Vec3(gauss(rng), gauss(rng), gauss(rng));
    }
    axis.normalize();
    std::uniform_real_distribution<double> angle_dist(0.0, max_angle);
    const double angle = angle_dist(rng);

    // Rodrigues
    Mat3 k;
    k << 0, -axis.z(), axis.y(),
         axis.z(), 0, -axis.x(),
         -axis.y(), axis.x(), 0;
    RigidTransform t;
    t.rotation = Mat3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k;

    std::uniform_real_distribution<double> trans_dist(-max_translation, max_translation);
    t.translation = Vec3(trans_dist(rng), trans_dist(rng), trans_dist(rng));
    return t;
}

inline std::vector<Vec3> random_points(std::mt19937_64& rng, std::size_t count,
                                       double half_extent = 10.0) {
    std::uniform_real_distribution<double> dist(-half_extent, half_extent);
    std::vector<Vec3> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        points.emplace_back(dist(rng), dist(rng), dist(rng));
    }
    return points;
}

/// Random symmetric positive-definite covariance with eigenvalues in
/// [min_ev, max_ev].
inline Mat3 random_covariance(std::mt19937_64& rng, double min_ev = 0.01, double max_ev = 1.0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat3 a;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = gauss(rng);
    Eigen::JacobiSVD<Mat3> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    std::uniform_real_distribution<double> ev_dist(min_ev, max_ev);
    const Vec3 ev(ev_dist(rng), ev_dist(rng), ev_dist(rng));
    const Mat3 cov = svd.matrixU() * ev.asDiagonal() * svd.matrixU().transpose();
    return 0.5 * (cov + cov.transpose());
}

/// Scan over the given points with constant isotropic covariance.
inline RadarScan make_scan(const std::vector<Vec3>& points, double iso_var = 0.25) {
    RadarScan scan;
    scan.points = points;
    scan.covariances.assign(points.size(), iso_var * Mat3::Identity());
    return scan;
}

inline double transform_distance(const RigidTransform& a, const RigidTransform& b) {
    return (a.translation - b.translation).norm() +
           (a.rotation - b.rotation).cwiseAbs().maxCoeff();
}

}  // namespace rpcm::test
