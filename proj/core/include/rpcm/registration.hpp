#pragma once

#include <optional>
#include <vector>

#include "rpcm/pcm.hpp"

namespace rpcm {

enum class Objective {
    PointToPoint,
    PointToPlane,
    Gicp,
};

struct RegistrationConfig {
    Objective objective = Objective::PointToPoint;
    /// When set, PCM inlier selection runs on every iteration's associations.
    std::optional<PcmConfig> pcm;
    double max_association_distance = 10.0;  // meters
    int max_iterations = 50;
    double translation_epsilon = 1e-4;  // meters
    double rotation_epsilon = 1e-5;     // radians
    int min_inliers = 5;
    int normal_k = 10;                  // neighbors for plane-normal estimation
    double gicp_regularization = 1e-6;  // meters^2, added to covariance diagonals
};

struct IterationTrace {
    std::size_t association_count = 0;
    std::size_t inlier_count = 0;
    double delta_translation = 0.0;  // meters
    double delta_rotation = 0.0;     // radians
    /// True when the clique was below min_inliers and the full association
    /// set was used instead.
    bool pcm_fallback = false;
};

struct RegistrationResult {
    RigidTransform transform;
    int iterations = 0;
    bool converged = false;
    std::size_t final_inlier_count = 0;
    std::vector<IterationTrace> per_iteration_trace;
};

/// Unit plane normals per scan point from PCA over the k nearest neighbors.
std::vector<Vec3> estimate_normals(const RadarScan& scan, int k);

/// One Gauss-Newton step of the point-to-point objective with small-angle
/// rotation parameterization. Used as the isotropic reference for gicp_step.
RigidTransform icp_step_pt2pt_gn(const AssociationSet& inliers, const RadarScan& source,
                                 const RadarScan& target);

/// One Gauss-Newton step of the point-to-plane objective
/// sum (n_j . (p_i - r_j))^2 with small-angle rotation parameterization.
/// Rank-deficient normal equations are solved minimum-norm: unconstrained
/// directions (e.g. in-plane shift for a single plane) stay at zero.
/// Throws DegenerateConfiguration when no direction is constrained at all.
RigidTransform icp_step_pt2plane(const AssociationSet& inliers, const RadarScan& source,
                                 const RadarScan& target, const std::vector<Vec3>& normals);

/// One Gauss-Newton step of the GICP objective
/// sum d^T (Sigma_r + Sigma_p + 2 reg I)^-1 d, d = p_i - r_j, where the
/// source covariances are already expressed in the current frame.
/// Throws SingularCovariance when a combined covariance cannot be inverted.
RigidTransform gicp_step(const AssociationSet& inliers, const RadarScan& source,
                         const RadarScan& target, double regularization);

/// ICP loop: associate (1-NN, gated), optionally select a mutually consistent
/// inlier subset via PCM, solve an incremental transform per the configured
/// objective, and accumulate until both translation and rotation increments
/// fall below their epsilons or max_iterations is reached.
///
/// PCM scores and the GICP objective see the source points and covariances
/// transformed by the current estimate (covariances conjugated R Sigma R^T).
RegistrationResult register_scans(const RadarScan& source, const RadarScan& target,
                                  const RegistrationConfig& cfg,
                                  const RigidTransform& initial = RigidTransform{});

}  // namespace rpcm
