#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "rpcm/errors.hpp"

namespace rpcm {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Rigid-body transform in SE(3). Applies as x' = R x + t.
struct RigidTransform {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    static RigidTransform identity() { return {}; }

    static RigidTransform from_translation(const Vec3& t) {
        RigidTransform out;
        out.translation = t;
        return out;
    }

    static RigidTransform from_parts(const Mat3& r, const Vec3& t) {
        RigidTransform out;
        out.rotation = r;
        out.translation = t;
        return out;
    }

    /// Homogeneous 4x4 representation.
    Eigen::Matrix4d matrix() const;
};

// Elementary rotations about the coordinate axes, angle in radians.
Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);

/// True iff RᵀR = I and det(R) = 1, both within tol.
bool is_rotation(const Mat3& r, double tol = 1e-9);

/// Nearest rotation matrix (polar decomposition via SVD, reflection-corrected).
Mat3 orthonormalize(const Mat3& r);

/// Composition: result applies b first, then a.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

RigidTransform inverse(const RigidTransform& t);

Vec3 apply(const RigidTransform& t, const Vec3& p);

/// Geodesic rotation angle in [0, pi], radians.
double rotation_angle(const RigidTransform& t);

/// Closed-form least-squares rigid alignment (centroid + SVD of the
/// cross-covariance, reflection-corrected). Minimizes sum ||T p_i - r_i||^2.
///
/// Throws DegenerateConfiguration for fewer than 3 pairs or when the
/// centered source points have rank < 2 (collinear or coincident).
RigidTransform estimate_rigid_pt2pt(std::span<const Vec3> source,
                                    std::span<const Vec3> target);

}  // namespace rpcm
