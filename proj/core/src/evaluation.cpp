#include "rpcm/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace rpcm {

namespace {

constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;

// Cumulative ground-truth path length; cum[i] is the driven distance up to
// pose i.
std::vector<double> cumulative_path(const Trajectory& t) {
    std::vector<double> cum(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) {
        cum[i] = cum[i - 1] + (t[i].pose.translation - t[i - 1].pose.translation).norm();
    }
    return cum;
}

struct SegmentError {
    double rpe_m = 0.0;
    double rre_deg = 0.0;
};

SegmentError segment_error(const Trajectory& est, const Trajectory& gt, std::size_t i,
                           std::size_t j) {
    const RigidTransform delta_gt = compose(inverse(gt[i].pose), gt[j].pose);
    const RigidTransform delta_est = compose(inverse(est[i].pose), est[j].pose);
    const RigidTransform error = compose(inverse(delta_gt), delta_est);
    return {error.translation.norm(), rotation_angle(error) * kRadToDeg};
}

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd out;
    if (values.empty()) return out;
    for (double v : values) out.mean += v;
    out.mean /= static_cast<double>(values.size());
    double acc = 0.0;
    for (double v : values) acc += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(acc / static_cast<double>(values.size()));
    return out;
}

void check_paired(const Trajectory& est, const Trajectory& gt) {
    if (est.size() != gt.size()) {
        throw InvariantViolation("trajectories must be paired 1:1 by index");
    }
    if (est.size() < 2) {
        throw TooShort("need at least 2 poses");
    }
}

}  // namespace

void validate_trajectory(const Trajectory& trajectory) {
    for (std::size_t i = 1; i < trajectory.size(); ++i) {
        if (!(trajectory[i].timestamp > trajectory[i - 1].timestamp)) {
            throw InvariantViolation("trajectory timestamps must be strictly increasing");
        }
    }
}

Trajectory integrate_odometry(const std::vector<RigidTransform>& relatives) {
    std::vector<double> timestamps(relatives.size() + 1);
    for (std::size_t i = 0; i < timestamps.size(); ++i) {
        timestamps[i] = static_cast<double>(i);
    }
    return integrate_odometry(relatives, timestamps);
}

Trajectory integrate_odometry(const std::vector<RigidTransform>& relatives,
                              const std::vector<double>& timestamps) {
    if (relatives.empty()) {
        throw EmptyInput("integrate_odometry: no relative transforms");
    }
    if (timestamps.size() != relatives.size() + 1) {
        throw InvariantViolation("integrate_odometry: need one timestamp per pose");
    }
    Trajectory out;
    out.reserve(relatives.size() + 1);
    out.push_back({timestamps[0], RigidTransform{}});
    for (std::size_t k = 0; k < relatives.size(); ++k) {
        out.push_back({timestamps[k + 1], compose(out.back().pose, relatives[k])});
    }
    validate_trajectory(out);
    return out;
}

std::vector<SegmentErrorStats> segment_rpe_rre(const Trajectory& est, const Trajectory& gt,
                                               const std::vector<double>& lengths) {
    check_paired(est, gt);
    const std::vector<double> cum = cumulative_path(gt);

    std::vector<SegmentErrorStats> out;
    out.reserve(lengths.size());
    for (double length : lengths) {
        if (!(length > 0.0)) {
            throw DomainError("segment length must be > 0");
        }
        std::vector<double> rpe, rre;
        for (std::size_t i = 0; i + 1 < gt.size(); ++i) {
            // First index whose driven distance from i reaches the length.
            const auto it = std::lower_bound(cum.begin() + i + 1, cum.end(), cum[i] + length);
            if (it == cum.end()) break;
            const std::size_t j = static_cast<std::size_t>(it - cum.begin());
            const SegmentError err = segment_error(est, gt, i, j);
            rpe.push_back(err.rpe_m);
            rre.push_back(err.rre_deg);
        }
        if (rpe.empty()) {
            throw TooShort("no segment of length " + std::to_string(length) +
                           " m fits the trajectory");
        }
        const MeanStd rpe_stats = mean_std(rpe);
        const MeanStd rre_stats = mean_std(rre);
        out.push_back({length, rpe_stats.mean, rpe_stats.std, rre_stats.mean, rre_stats.std,
                       rpe.size()});
    }
    return out;
}

KittiDrift kitti_drift(const Trajectory& est, const Trajectory& gt) {
    check_paired(est, gt);
    const std::vector<double> cum = cumulative_path(gt);
    if (cum.back() < 100.0) {
        throw TooShort("kitti_drift: ground-truth path under 100 m");
    }

    double t_sum = 0.0, r_sum = 0.0;
    std::size_t count = 0;
    for (double length = 100.0; length <= 800.0; length += 100.0) {
        for (std::size_t i = 0; i + 1 < gt.size(); ++i) {
            const auto it = std::lower_bound(cum.begin() + i + 1, cum.end(), cum[i] + length);
            if (it == cum.end()) break;
            const std::size_t j = static_cast<std::size_t>(it - cum.begin());
            const SegmentError err = segment_error(est, gt, i, j);
            t_sum += err.rpe_m / length;
            r_sum += err.rre_deg / length;
            ++count;
        }
    }
    KittiDrift drift;
    drift.t_rel_percent = 100.0 * t_sum / static_cast<double>(count);
    drift.r_rel_deg_per_100m = 100.0 * r_sum / static_cast<double>(count);
    return drift;
}

MatchedTrajectories associate_by_timestamp(const Trajectory& est, const Trajectory& gt,
                                           double max_dt) {
    if (est.empty() || gt.empty()) {
        throw EmptyInput("associate_by_timestamp: empty trajectory");
    }
    MatchedTrajectories out;
    std::size_t next_free = 0;
    for (const TimedPose& e : est) {
        if (next_free >= gt.size()) break;
        // Nearest not-yet-used ground-truth timestamp; candidates bracket the
        // insertion point.
        std::size_t lo = next_free;
        std::size_t hi = gt.size();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (gt[mid].timestamp < e.timestamp) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        std::size_t best;
        if (lo == gt.size()) {
            best = lo - 1;
        } else if (lo == next_free) {
            best = lo;
        } else {
            best = std::abs(gt[lo - 1].timestamp - e.timestamp) <=
                           std::abs(gt[lo].timestamp - e.timestamp)
                       ? lo - 1
                       : lo;
        }
        if (std::abs(gt[best].timestamp - e.timestamp) <= max_dt) {
            out.est.push_back(e);
            out.gt.push_back(gt[best]);
            next_free = best + 1;
        }
    }
    if (out.est.empty()) {
        throw NoOverlap("associate_by_timestamp: no pose pair within max_dt");
    }
    return out;
}

}  // namespace rpcm
