#pragma once

#include <vector>

#include "rpcm/geometry.hpp"

namespace rpcm {

struct TimedPose {
    double timestamp = 0.0;  // seconds
    RigidTransform pose;
};

/// Ordered poses with strictly increasing timestamps.
using Trajectory = std::vector<TimedPose>;

/// Throws InvariantViolation unless timestamps are strictly increasing.
void validate_trajectory(const Trajectory& trajectory);

struct SegmentErrorStats {
    double segment_length = 0.0;  // meters
    double rpe_mean = 0.0;        // meters
    double rpe_std = 0.0;
    double rre_mean = 0.0;  // degrees
    double rre_std = 0.0;
    std::size_t segment_count = 0;
};

/// Chains relative transforms into absolute poses: pose_0 = identity,
/// pose_{k+1} = pose_k * relative_k, where relative_k maps frame k+1 into
/// frame k. Timestamps default to the frame index.
Trajectory integrate_odometry(const std::vector<RigidTransform>& relatives);
Trajectory integrate_odometry(const std::vector<RigidTransform>& relatives,
                              const std::vector<double>& timestamps);

/// Segment-level relative pose/rotation error over fixed path lengths.
/// Trajectories must be paired 1:1 by index. For every start index, the end
/// index is the first whose ground-truth path length reaches the segment
/// length; the error transform is E = (gt_i^-1 gt_j)^-1 (est_i^-1 est_j).
/// Throws TooShort when a requested length fits nowhere.
std::vector<SegmentErrorStats> segment_rpe_rre(const Trajectory& est, const Trajectory& gt,
                                               const std::vector<double>& lengths);

struct KittiDrift {
    double t_rel_percent = 0.0;
    double r_rel_deg_per_100m = 0.0;
};

/// KITTI-style average drift over segments of 100..800 m (step 100), all
/// start indices, skipping lengths that do not fit.
/// Throws TooShort when the ground-truth path is under 100 m.
KittiDrift kitti_drift(const Trajectory& est, const Trajectory& gt);

struct MatchedTrajectories {
    Trajectory est;
    Trajectory gt;
};

/// Pairs every estimate pose with the nearest ground-truth timestamp within
/// max_dt. The pairing is monotone and injective. Throws NoOverlap when
/// nothing matches.
MatchedTrajectories associate_by_timestamp(const Trajectory& est, const Trajectory& gt,
                                           double max_dt);

}  // namespace rpcm
