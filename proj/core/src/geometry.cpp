#include "rpcm/geometry.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace rpcm {

Eigen::Matrix4d RigidTransform::matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation;
    m.topRightCorner<3, 1>() = translation;
    return m;
}

Mat3 rot_x(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 r;
    r << 1, 0, 0,
         0, c, -s,
         0, s, c;
    return r;
}

Mat3 rot_y(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 r;
    r << c, 0, s,
         0, 1, 0,
         -s, 0, c;
    return r;
}

Mat3 rot_z(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 r;
    r << c, -s, 0,
         s, c, 0,
         0, 0, 1;
    return r;
}

bool is_rotation(const Mat3& r, double tol) {
    const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
    return ortho <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

Mat3 orthonormalize(const Mat3& r) {
    Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 out = svd.matrixU() * svd.matrixV().transpose();
    if (out.determinant() < 0.0) {
        Mat3 flip = Mat3::Identity();
        flip(2, 2) = -1.0;
        out = svd.matrixU() * flip * svd.matrixV().transpose();
    }
    return out;
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
    RigidTransform out;
    out.rotation = a.rotation * b.rotation;
    out.translation = a.rotation * b.translation + a.translation;
    if (!is_rotation(out.rotation)) {
        out.rotation = orthonormalize(out.rotation);
    }
    return out;
}

RigidTransform inverse(const RigidTransform& t) {
    RigidTransform out;
    out.rotation = t.rotation.transpose();
    out.translation = -(out.rotation * t.translation);
    return out;
}

Vec3 apply(const RigidTransform& t, const Vec3& p) {
    return t.rotation * p + t.translation;
}

double rotation_angle(const RigidTransform& t) {
    // acos((trace - 1) / 2), evaluated as atan2(sin, cos): identical on [0, pi]
    // but well-conditioned near zero, where acos loses half the digits.
    const Mat3& r = t.rotation;
    const Vec3 twice_sin_axis(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
    const double sin_angle = 0.5 * twice_sin_axis.norm();
    const double cos_angle = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
    return std::atan2(sin_angle, cos_angle);
}

RigidTransform estimate_rigid_pt2pt(std::span<const Vec3> source,
                                    std::span<const Vec3> target) {
    if (source.size() != target.size()) {
        throw DegenerateConfiguration("estimate_rigid_pt2pt: size mismatch");
    }
    const std::size_t n = source.size();
    if (n < 3) {
        throw DegenerateConfiguration("estimate_rigid_pt2pt: need at least 3 pairs, got " +
                                      std::to_string(n));
    }

    Vec3 centroid_src = Vec3::Zero();
    Vec3 centroid_tgt = Vec3::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        centroid_src += source[i];
        centroid_tgt += target[i];
    }
    centroid_src /= static_cast<double>(n);
    centroid_tgt /= static_cast<double>(n);

    // Cross-covariance H and source scatter (for the rank test).
    Mat3 cross = Mat3::Zero();
    Mat3 scatter = Mat3::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 ps = source[i] - centroid_src;
        const Vec3 pt = target[i] - centroid_tgt;
        cross += ps * pt.transpose();
        scatter += ps * ps.transpose();
    }

    Eigen::SelfAdjointEigenSolver<Mat3> eig(scatter);
    const Vec3 ev = eig.eigenvalues();  // ascending
    if (!(ev[1] > 1e-12 * std::max(ev[2], 0.0)) || ev[2] <= 0.0) {
        throw DegenerateConfiguration(
            "estimate_rigid_pt2pt: centered source points have rank < 2");
    }

    Eigen::JacobiSVD<Mat3> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 flip = Mat3::Identity();
    if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) {
        flip(2, 2) = -1.0;
    }
    RigidTransform out;
    out.rotation = svd.matrixV() * flip * svd.matrixU().transpose();
    out.translation = centroid_tgt - out.rotation * centroid_src;
    return out;
}

}  // namespace rpcm
