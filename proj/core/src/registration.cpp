#include "rpcm/registration.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace rpcm {

namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

Mat3 skew(const Vec3& v) {
    Mat3 m;
    m << 0, -v.z(), v.y(),
         v.z(), 0, -v.x(),
         -v.y(), v.x(), 0;
    return m;
}

// Rodrigues' formula; exact for any angle, used on small GN increments.
Mat3 rotation_from_axis_angle(const Vec3& omega) {
    const double angle = omega.norm();
    if (angle < 1e-12) {
        return Mat3::Identity() + skew(omega);
    }
    const Vec3 axis = omega / angle;
    const Mat3 k = skew(axis);
    return Mat3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k;
}

// Minimum-norm solve of H x = g via SVD, truncating singular values below
// 1e-12 of the largest. Unconstrained directions stay at zero, so e.g. a
// single-plane point-to-plane instance still yields its normal-direction
// correction. Throws when H constrains nothing.
Vec6 solve_normal_equations(const Mat6& h, const Vec6& g) {
    Eigen::JacobiSVD<Mat6> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double max_sv = sv[0];
    if (!(max_sv > 0.0) || !h.allFinite()) {
        throw DegenerateConfiguration("normal equations constrain no direction");
    }
    Vec6 inv_sv = Vec6::Zero();
    for (int i = 0; i < 6; ++i) {
        if (sv[i] > 1e-12 * max_sv) inv_sv[i] = 1.0 / sv[i];
    }
    return svd.matrixV() * inv_sv.asDiagonal() * (svd.matrixU().transpose() * g);
}

RigidTransform delta_from_twist(const Vec6& x) {
    RigidTransform delta;
    delta.rotation = rotation_from_axis_angle(x.head<3>());
    if (!is_rotation(delta.rotation)) {
        delta.rotation = orthonormalize(delta.rotation);
    }
    delta.translation = x.tail<3>();
    return delta;
}

RigidTransform solve_step(Objective objective, const AssociationSet& inliers,
                          const RadarScan& source, const RadarScan& target,
                          const std::vector<Vec3>& normals, double regularization) {
    switch (objective) {
        case Objective::PointToPoint: {
            std::vector<Vec3> src, tgt;
            src.reserve(inliers.size());
            tgt.reserve(inliers.size());
            for (const Association& a : inliers) {
                src.push_back(source.points[a.source_index]);
                tgt.push_back(target.points[a.target_index]);
            }
            return estimate_rigid_pt2pt(src, tgt);
        }
        case Objective::PointToPlane:
            return icp_step_pt2plane(inliers, source, target, normals);
        case Objective::Gicp:
            return gicp_step(inliers, source, target, regularization);
    }
    throw Error("unknown objective");
}

}  // namespace

std::vector<Vec3> estimate_normals(const RadarScan& scan, int k) {
    const KdTree index(scan.points);
    std::vector<Vec3> normals(scan.size());
    for (std::size_t i = 0; i < scan.size(); ++i) {
        const auto hits = index.knn(scan.points[i], k);
        Vec3 mean = Vec3::Zero();
        for (const auto& h : hits) mean += scan.points[h.index];
        mean /= static_cast<double>(hits.size());
        Mat3 cov = Mat3::Zero();
        for (const auto& h : hits) {
            const Vec3 d = scan.points[h.index] - mean;
            cov += d * d.transpose();
        }
        Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
        normals[i] = eig.eigenvectors().col(0);  // smallest eigenvalue
        normals[i].normalize();
    }
    return normals;
}

RigidTransform icp_step_pt2pt_gn(const AssociationSet& inliers, const RadarScan& source,
                                 const RadarScan& target) {
    Mat6 h = Mat6::Zero();
    Vec6 g = Vec6::Zero();
    for (const Association& a : inliers) {
        const Vec3& p = source.points[a.source_index];
        const Vec3& r = target.points[a.target_index];
        Eigen::Matrix<double, 3, 6> jac;
        jac.leftCols<3>() = -skew(p);
        jac.rightCols<3>() = Mat3::Identity();
        const Vec3 residual = p - r;
        h += jac.transpose() * jac;
        g -= jac.transpose() * residual;
    }
    return delta_from_twist(solve_normal_equations(h, g));
}

RigidTransform icp_step_pt2plane(const AssociationSet& inliers, const RadarScan& source,
                                 const RadarScan& target, const std::vector<Vec3>& normals) {
    Mat6 h = Mat6::Zero();
    Vec6 g = Vec6::Zero();
    for (const Association& a : inliers) {
        const Vec3& p = source.points[a.source_index];
        const Vec3& r = target.points[a.target_index];
        const Vec3& n = normals[a.target_index];
        Vec6 jac;
        jac.head<3>() = p.cross(n);
        jac.tail<3>() = n;
        const double residual = n.dot(p - r);
        h += jac * jac.transpose();
        g -= jac * residual;
    }
    return delta_from_twist(solve_normal_equations(h, g));
}

RigidTransform gicp_step(const AssociationSet& inliers, const RadarScan& source,
                         const RadarScan& target, double regularization) {
    Mat6 h = Mat6::Zero();
    Vec6 g = Vec6::Zero();
    const Mat3 reg = regularization * Mat3::Identity();
    for (const Association& a : inliers) {
        const Vec3& p = source.points[a.source_index];
        const Vec3& r = target.points[a.target_index];
        const Mat3 combined = source.covariances[a.source_index] + reg +
                              target.covariances[a.target_index] + reg;
        Eigen::LDLT<Mat3> ldlt(combined);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
            ldlt.vectorD().minCoeff() <= 0.0) {
            throw SingularCovariance("gicp_step: combined covariance not invertible");
        }
        Eigen::Matrix<double, 3, 6> jac;
        jac.leftCols<3>() = -skew(p);
        jac.rightCols<3>() = Mat3::Identity();
        const Vec3 residual = p - r;
        const Eigen::Matrix<double, 3, 6> weighted = ldlt.solve(jac);
        h += jac.transpose() * weighted;
        g -= weighted.transpose() * residual;
    }
    h = 0.5 * (h + h.transpose());
    return delta_from_twist(solve_normal_equations(h, g));
}

namespace {

void validate_config(const RegistrationConfig& cfg) {
    if (cfg.min_inliers < 3) {
        throw InvariantViolation("register_scans: min_inliers must be >= 3");
    }
    if (!(cfg.max_association_distance > 0.0) || cfg.max_iterations < 1 ||
        !(cfg.translation_epsilon > 0.0) || !(cfg.rotation_epsilon > 0.0) ||
        cfg.normal_k < 1 || cfg.gicp_regularization < 0.0) {
        throw InvariantViolation("register_scans: config fields must be positive");
    }
    if (cfg.pcm.has_value() &&
        (!(cfg.pcm->threshold > 0.0) || !(cfg.pcm->min_pair_separation > 0.0))) {
        throw InvariantViolation("register_scans: PCM threshold and separation must be > 0");
    }
}

}  // namespace

RegistrationResult register_scans(const RadarScan& source, const RadarScan& target,
                                  const RegistrationConfig& cfg, const RigidTransform& initial) {
    validate_config(cfg);
    if (source.size() < static_cast<std::size_t>(cfg.min_inliers) ||
        target.size() < static_cast<std::size_t>(cfg.min_inliers)) {
        throw InsufficientPoints("register_scans: scans must have at least " +
                                 std::to_string(cfg.min_inliers) + " points");
    }

    const KdTree target_index(target.points);
    std::vector<Vec3> normals;
    if (cfg.objective == Objective::PointToPlane) {
        normals = estimate_normals(target, cfg.normal_k);
    }

    RegistrationResult result;
    result.transform = initial;

    for (int k = 0; k < cfg.max_iterations; ++k) {
        const RadarScan current = transform_scan(source, result.transform);
        const AssociationSet associations =
            putative_correspondences(current, target_index, cfg.max_association_distance);

        AssociationSet inliers;
        bool fallback = false;
        if (cfg.pcm.has_value()) {
            inliers = select_inliers(associations, current, target, *cfg.pcm);
            if (inliers.size() < static_cast<std::size_t>(cfg.min_inliers)) {
                inliers = associations;
                fallback = true;
            }
        } else {
            inliers = associations;
        }

        RigidTransform delta;
        try {
            delta = solve_step(cfg.objective, inliers, current, target, normals,
                               cfg.gicp_regularization);
        } catch (const SingularCovariance& e) {
            throw SingularCovariance("iteration " + std::to_string(k) + ": " + e.what());
        } catch (const Error& e) {
            throw DegenerateConfiguration("iteration " + std::to_string(k) + ": " + e.what());
        }

        result.transform = compose(delta, result.transform);
        if (!is_rotation(result.transform.rotation)) {
            result.transform.rotation = orthonormalize(result.transform.rotation);
        }

        IterationTrace trace;
        trace.association_count = associations.size();
        trace.inlier_count = inliers.size();
        trace.delta_translation = delta.translation.norm();
        trace.delta_rotation = rotation_angle(delta);
        trace.pcm_fallback = fallback;
        result.per_iteration_trace.push_back(trace);
        result.final_inlier_count = inliers.size();
        result.iterations = k + 1;

        if (trace.delta_translation < cfg.translation_epsilon &&
            trace.delta_rotation < cfg.rotation_epsilon) {
            result.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace rpcm
