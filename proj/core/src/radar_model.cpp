#include "rpcm/radar_model.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace rpcm {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Standard-normal quantile: Acklam's rational approximation plus one Halley
// refinement step through erfc, accurate to close to machine precision.
double normal_quantile(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * kPi) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

}  // namespace

void validate_detection(const SphericalDetection& d) {
    if (!std::isfinite(d.range) || !std::isfinite(d.azimuth) || !std::isfinite(d.elevation)) {
        throw InvariantViolation("detection has non-finite component");
    }
    if (d.range <= 0.0) {
        throw InvariantViolation("detection range must be > 0, got " + std::to_string(d.range));
    }
    if (d.azimuth <= -kPi || d.azimuth > kPi) {
        throw InvariantViolation("detection azimuth outside (-pi, pi]");
    }
    if (d.elevation < -kPi / 2.0 || d.elevation > kPi / 2.0) {
        throw InvariantViolation("detection elevation outside [-pi/2, pi/2]");
    }
}

void validate_accuracy(const SphericalAccuracy& acc) {
    if (!(acc.sigma_range > 0.0) || !(acc.sigma_azimuth > 0.0) || !(acc.sigma_elevation > 0.0)) {
        throw InvariantViolation("spherical accuracies must be strictly positive");
    }
}

Mat3 repair_covariance(const Mat3& cov) {
    if (!cov.allFinite()) {
        throw InvariantViolation("covariance has non-finite entries");
    }
    const double scale = std::max(cov.cwiseAbs().maxCoeff(), 1e-300);
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw InvariantViolation("covariance is not symmetric");
    }
    const Mat3 sym = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<Mat3> eig(sym);
    Vec3 ev = eig.eigenvalues();
    if (ev[0] >= 0.0) {
        return sym;
    }
    const double tol = 1e-12 * std::max(sym.trace(), 0.0);
    if (-ev[0] > tol) {
        throw InvariantViolation("covariance is not positive semidefinite (min eigenvalue " +
                                 std::to_string(ev[0]) + ")");
    }
    // Drift-scale negativity only: clamp to zero.
    for (int i = 0; i < 3; ++i) ev[i] = std::max(ev[i], 0.0);
    return eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
}

void validate_scan(const RadarScan& scan) {
    if (scan.points.size() != scan.covariances.size()) {
        throw InvariantViolation("scan points/covariances length mismatch");
    }
    if (!scan.detections.empty() && scan.detections.size() != scan.points.size()) {
        throw InvariantViolation("scan detections length mismatch");
    }
    for (const Vec3& p : scan.points) {
        if (!p.allFinite()) throw InvariantViolation("scan point has non-finite component");
    }
    for (const Mat3& c : scan.covariances) {
        repair_covariance(c);
    }
}

Vec3 spherical_to_cartesian(const SphericalDetection& d) {
    const double ce = std::cos(d.elevation);
    return {d.range * ce * std::cos(d.azimuth),
            d.range * ce * std::sin(d.azimuth),
            d.range * std::sin(d.elevation)};
}

SphericalDetection cartesian_to_spherical(const Vec3& p) {
    const double r = p.norm();
    if (r <= 0.0) {
        throw DomainError("cartesian_to_spherical: zero vector has no direction");
    }
    SphericalDetection d;
    d.range = r;
    d.azimuth = std::atan2(p.y(), p.x());
    d.elevation = std::asin(std::clamp(p.z() / r, -1.0, 1.0));
    if (d.azimuth <= -kPi) d.azimuth = kPi;  // atan2 may return -pi exactly
    return d;
}

Mat3 spherical_jacobian(const SphericalDetection& d) {
    const double ct = std::cos(d.azimuth), st = std::sin(d.azimuth);
    const double ce = std::cos(d.elevation), se = std::sin(d.elevation);
    const double r = d.range;
    Mat3 j;
    j << ce * ct, -r * ce * st, -r * se * ct,
         ce * st,  r * ce * ct, -r * se * st,
         se,       0.0,          r * ce;
    return j;
}

Mat3 propagate_covariance(const SphericalDetection& d, const SphericalAccuracy& acc) {
    const Mat3 j = spherical_jacobian(d);
    const Vec3 diag(acc.sigma_range * acc.sigma_range,
                    acc.sigma_azimuth * acc.sigma_azimuth,
                    acc.sigma_elevation * acc.sigma_elevation);
    const Mat3 cov = j * diag.asDiagonal() * j.transpose();
    return 0.5 * (cov + cov.transpose());
}

double chi_square_threshold(double confidence) {
    if (!(confidence > 0.0) || !(confidence < 1.0)) {
        throw DomainError("chi_square_threshold: confidence must lie in (0, 1)");
    }
    // Quantile of |Z| at (1+confidence)/2, evaluated through the lower tail
    // (1-confidence)/2: the tail stays representable for confidence near 1,
    // where (1+confidence)/2 would round to exactly 1.
    const double tail = (1.0 - confidence) / 2.0;
    const double z = -normal_quantile(tail);
    return z * z;
}

RadarScan transform_scan(const RadarScan& scan, const RigidTransform& t) {
    RadarScan out;
    out.points.reserve(scan.points.size());
    out.covariances.reserve(scan.covariances.size());
    for (const Vec3& p : scan.points) {
        out.points.push_back(apply(t, p));
    }
    for (const Mat3& c : scan.covariances) {
        out.covariances.push_back(t.rotation * c * t.rotation.transpose());
    }
    return out;
}

}  // namespace rpcm
