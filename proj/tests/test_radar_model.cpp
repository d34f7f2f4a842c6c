#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "rpcm/radar_model.hpp"
#include "rpcm/rng.hpp"

using namespace rpcm;
using test::kPi;

namespace {

SphericalDetection random_detection(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> range(0.5, 80.0);
    std::uniform_real_distribution<double> azimuth(-kPi * 0.99, kPi * 0.99);
    std::uniform_real_distribution<double> elevation(-kPi / 2 * 0.95, kPi / 2 * 0.95);
    return {range(rng), azimuth(rng), elevation(rng)};
}

}  // namespace

TEST_SUITE_BEGIN("radar_model");

TEST_CASE("spherical_to_cartesian axis cases") {
    CHECK((spherical_to_cartesian({1, 0, 0}) - Vec3(1, 0, 0)).norm() < 1e-15);
    CHECK((spherical_to_cartesian({2, kPi / 2, 0}) - Vec3(0, 2, 0)).norm() < 1e-15);
    CHECK((spherical_to_cartesian({1, 0, kPi / 2}) - Vec3(0, 0, 1)).norm() < 1e-15);
}

TEST_CASE("spherical round trip") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        const SphericalDetection d = random_detection(rng);
        const SphericalDetection back = cartesian_to_spherical(spherical_to_cartesian(d));
        CHECK(std::abs(back.range - d.range) < 1e-9);
        CHECK(std::abs(back.azimuth - d.azimuth) < 1e-9);
        CHECK(std::abs(back.elevation - d.elevation) < 1e-9);
    }
}

TEST_CASE("jacobian at boresight") {
    const double r = 7.5;
    const Mat3 j = spherical_jacobian({r, 0, 0});
    Mat3 expected;
    expected << 1, 0, 0,
                0, r, 0,
                0, 0, r;
    CHECK((j - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("jacobian range column is the unit ray") {
    const Mat3 j = spherical_jacobian({1, kPi / 2, 0});
    CHECK((j.col(0) - Vec3(0, 1, 0)).norm() < 1e-15);
}

TEST_CASE("jacobian matches central finite differences") {
    std::mt19937_64 rng(22);
    const double h = 1e-6;
    for (int i = 0; i < 50; ++i) {
        const SphericalDetection d = random_detection(rng);
        const Mat3 j = spherical_jacobian(d);
        for (int col = 0; col < 3; ++col) {
            SphericalDetection hi = d, lo = d;
            double* hi_fields[3] = {&hi.range, &hi.azimuth, &hi.elevation};
            double* lo_fields[3] = {&lo.range, &lo.azimuth, &lo.elevation};
            *hi_fields[col] += h;
            *lo_fields[col] -= h;
            const Vec3 fd = (spherical_to_cartesian(hi) - spherical_to_cartesian(lo)) / (2 * h);
            for (int row = 0; row < 3; ++row) {
                const double scale = std::max(std::abs(j(row, col)), 1.0);
                CHECK(std::abs(fd[row] - j(row, col)) / scale < 1e-6);
            }
        }
    }
}

TEST_CASE("jacobian determinant is the spherical volume element") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        const SphericalDetection d = random_detection(rng);
        const double expected = d.range * d.range * std::cos(d.elevation);
        CHECK(std::abs(spherical_jacobian(d).determinant() - expected) <
              1e-9 * std::max(expected, 1.0));
    }
}

TEST_CASE("propagate_covariance at boresight is diagonal") {
    const SphericalAccuracy acc{0.1, 0.01, 0.02};
    const Mat3 cov = propagate_covariance({10, 0, 0}, acc);
    CHECK(cov(0, 0) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(cov(1, 1) == doctest::Approx(100 * 1e-4).epsilon(1e-12));
    CHECK(cov(2, 2) == doctest::Approx(100 * 4e-4).epsilon(1e-12));
    CHECK(std::abs(cov(0, 1)) < 1e-15);
    CHECK(std::abs(cov(0, 2)) < 1e-15);
    CHECK(std::abs(cov(1, 2)) < 1e-15);
}

TEST_CASE("range-only accuracy gives a rank-1 covariance along the ray") {
    const SphericalDetection d{5, 0.7, -0.3};
    const SphericalAccuracy acc{0.2, 0.0, 0.0};
    const Mat3 cov = propagate_covariance(d, acc);
    const Vec3 ray = spherical_to_cartesian(d).normalized();
    const Mat3 expected = 0.04 * ray * ray.transpose();
    CHECK((cov - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("propagated covariance matches Monte-Carlo sampling") {
    std::mt19937_64 seeds(24);
    for (int config = 0; config < 3; ++config) {
        const SphericalDetection d = random_detection(seeds);
        const SphericalAccuracy acc{0.15, 0.004, 0.01};
        const Mat3 predicted = propagate_covariance(d, acc);

        const int n = 200000;
        CounterRng rng(900 + config);
        Vec3 mean = Vec3::Zero();
        Mat3 second = Mat3::Zero();
        for (int i = 0; i < n; ++i) {
            SphericalDetection s = d;
            s.range += acc.sigma_range * rng.normal();
            s.azimuth += acc.sigma_azimuth * rng.normal();
            s.elevation += acc.sigma_elevation * rng.normal();
            const Vec3 p = spherical_to_cartesian(s);
            mean += p;
            second += p * p.transpose();
        }
        mean /= n;
        const Mat3 sample = second / n - mean * mean.transpose();
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                if (std::abs(predicted(r, c)) > 1e-6) {
                    CHECK(std::abs(sample(r, c) - predicted(r, c)) / std::abs(predicted(r, c)) <
                          0.05);
                }
            }
        }
    }
}

TEST_CASE("propagated covariance is symmetric PSD") {
    std::mt19937_64 rng(25);
    std::uniform_real_distribution<double> sigma(1e-4, 0.5);
    for (int i = 0; i < 1000; ++i) {
        const SphericalDetection d = random_detection(rng);
        const SphericalAccuracy acc{sigma(rng), sigma(rng), sigma(rng)};
        const Mat3 cov = propagate_covariance(d, acc);
        CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() < 1e-12 * cov.trace());
        Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
        CHECK(eig.eigenvalues()[0] >= -1e-12 * cov.trace());
    }
}

TEST_CASE("chi_square_threshold sweep values") {
    CHECK(chi_square_threshold(0.90) == doctest::Approx(2.706).epsilon(0.001 / 2.706));
    CHECK(chi_square_threshold(0.99) == doctest::Approx(6.63).epsilon(0.01 / 6.63));
    CHECK(chi_square_threshold(0.999) == doctest::Approx(10.83).epsilon(0.01 / 10.83));
}

TEST_CASE("chi_square_threshold is strictly increasing") {
    double previous = 0.0;
    for (double c = 0.05; c < 1.0; c += 0.05) {
        const double value = chi_square_threshold(c);
        CHECK(value > previous);
        previous = value;
    }
}

TEST_CASE("chi_square_threshold domain") {
    CHECK_THROWS_AS(chi_square_threshold(0.0), DomainError);
    CHECK_THROWS_AS(chi_square_threshold(1.0), DomainError);
    CHECK_THROWS_AS(chi_square_threshold(-0.5), DomainError);
}

TEST_CASE("chi_square_threshold stays finite at extreme confidences") {
    const double near_one = chi_square_threshold(1.0 - 1e-15);
    CHECK(std::isfinite(near_one));
    CHECK(near_one > chi_square_threshold(0.999999));
    const double near_zero = chi_square_threshold(1e-15);
    CHECK(std::isfinite(near_zero));
    CHECK(near_zero > 0.0);
}

TEST_CASE("repair_covariance clamps drift-scale negatives and rejects worse") {
    Mat3 tiny_negative = Mat3::Identity();
    tiny_negative(2, 2) = -1e-14;
    const Mat3 repaired = repair_covariance(tiny_negative);
    Eigen::SelfAdjointEigenSolver<Mat3> eig(repaired);
    CHECK(eig.eigenvalues()[0] >= 0.0);

    Mat3 indefinite = Mat3::Identity();
    indefinite(2, 2) = -0.5;
    CHECK_THROWS_AS(repair_covariance(indefinite), InvariantViolation);

    Mat3 asymmetric = Mat3::Identity();
    asymmetric(0, 1) = 0.3;
    CHECK_THROWS_AS(repair_covariance(asymmetric), InvariantViolation);
}

TEST_CASE("transform_scan rotates covariances") {
    std::mt19937_64 rng(26);
    RadarScan scan;
    scan.points = {Vec3(1, 2, 3)};
    scan.covariances = {test::random_covariance(rng)};
    const RigidTransform t =
        RigidTransform::from_parts(rot_z(0.4) * rot_x(-0.2), Vec3(5, -1, 2));
    const RadarScan moved = transform_scan(scan, t);
    CHECK((moved.points[0] - apply(t, scan.points[0])).norm() < 1e-15);
    const Mat3 expected = t.rotation * scan.covariances[0] * t.rotation.transpose();
    CHECK((moved.covariances[0] - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("validate_detection enforces ranges") {
    CHECK_THROWS_AS(validate_detection({-1.0, 0, 0}), InvariantViolation);
    CHECK_THROWS_AS(validate_detection({1.0, 4.0, 0}), InvariantViolation);
    CHECK_THROWS_AS(validate_detection({1.0, 0, 2.0}), InvariantViolation);
    CHECK_NOTHROW(validate_detection({1.0, kPi, kPi / 2}));
}

TEST_SUITE_END();
