#pragma once

#include <vector>

#include "rpcm/geometry.hpp"

namespace rpcm {

/// One radar return in sensor-frame spherical coordinates.
///
/// Convention: azimuth is measured in the x-y plane from +x toward +y,
/// elevation from the x-y plane toward +z, so (azimuth 0, elevation 0)
/// is the boresight +x axis.
struct SphericalDetection {
    double range = 0.0;      // meters, > 0
    double azimuth = 0.0;    // radians in (-pi, pi]
    double elevation = 0.0;  // radians in [-pi/2, pi/2]
};

/// One-sigma measurement accuracies of a detection, all strictly positive.
/// Defaults are stand-ins for manufacturer-provided values and should be
/// overridden per sensor.
struct SphericalAccuracy {
    double sigma_range = 0.15;                          // meters
    double sigma_azimuth = 0.1 * 3.14159265358979323846 / 180.0;    // radians
    double sigma_elevation = 0.5 * 3.14159265358979323846 / 180.0;  // radians
};

/// A radar frame: Cartesian points with per-point 3x3 covariances.
/// `detections` optionally keeps the originating spherical measurements
/// (empty, or one per point).
struct RadarScan {
    std::vector<Vec3> points;
    std::vector<Mat3> covariances;
    std::vector<SphericalDetection> detections;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

/// Throws InvariantViolation if the detection fields are outside their ranges.
void validate_detection(const SphericalDetection& d);

/// Throws InvariantViolation if the accuracies are not strictly positive.
void validate_accuracy(const SphericalAccuracy& acc);

/// Symmetrizes and clamps eigenvalues that are negative by floating-point
/// drift only (|lambda| < 1e-12 * trace). Throws InvariantViolation when the
/// matrix is asymmetric beyond 1e-12 relative or genuinely indefinite.
Mat3 repair_covariance(const Mat3& cov);

/// Throws InvariantViolation on length mismatch or an invalid covariance.
void validate_scan(const RadarScan& scan);

Vec3 spherical_to_cartesian(const SphericalDetection& d);

/// Inverse of spherical_to_cartesian; the zero vector has no angles and
/// throws DomainError.
SphericalDetection cartesian_to_spherical(const Vec3& p);

/// Jacobian d(x,y,z)/d(range, azimuth, elevation) at the measured detection.
Mat3 spherical_jacobian(const SphericalDetection& d);

/// First-order propagation of the diagonal spherical covariance into
/// Euclidean space: J diag(sigma^2) J^T.
Mat3 propagate_covariance(const SphericalDetection& d, const SphericalAccuracy& acc);

/// Chi-square quantile with one degree of freedom, i.e. the square of the
/// standard-normal quantile at (1 + confidence) / 2.
/// Throws DomainError unless 0 < confidence < 1.
double chi_square_threshold(double confidence);

/// Applies a rigid transform to all points and conjugates the covariances
/// (R Sigma R^T). Spherical source detections are dropped: they are only
/// meaningful in the original sensor frame.
RadarScan transform_scan(const RadarScan& scan, const RigidTransform& t);

}  // namespace rpcm
