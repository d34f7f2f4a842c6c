#pragma once

#include <map>
#include <string>

#include "rpcm/evaluation.hpp"
#include "rpcm/radar_model.hpp"

namespace rpcm {

/// On-disk scan schemas (CSV, header line required, angles in radians):
///   Spherical: range_m,azimuth_rad,elevation_rad[,sigma_r,sigma_theta,sigma_phi]
///   Cartesian: x,y,z[,cov_xx,cov_xy,cov_xz,cov_yy,cov_yz,cov_zz]
enum class ScanSchema {
    Spherical,
    Cartesian,
};

/// Reads a scan file. Spherical rows are converted to Cartesian points with
/// covariances propagated from the per-row accuracies when present, else from
/// default_accuracy. Cartesian rows are taken verbatim; rows without
/// covariance columns get covariances from the spherical measurement model at
/// the point's position using default_accuracy.
/// Throws ParseError (with line number) or InvariantViolation.
RadarScan read_scan(const std::string& path, ScanSchema schema,
                    const SphericalAccuracy& default_accuracy = {});

/// Writes a scan atomically. Cartesian is lossless (full covariances);
/// Spherical requires the scan to carry source detections and stores only
/// range/azimuth/elevation.
void write_scan(const std::string& path, const RadarScan& scan, ScanSchema schema);

/// Trajectory file: one pose per line, "timestamp_s tx ty tz qx qy qz qw",
/// quaternion normalized within 1e-6.
Trajectory read_trajectory(const std::string& path);

void write_trajectory(const std::string& path, const Trajectory& trajectory);

/// key=value configuration text; '#' starts a comment, blank lines ignored.
std::map<std::string, std::string> read_config(const std::string& path);

/// Writes content to a temporary file in the target directory and renames it
/// into place.
void atomic_write(const std::string& path, const std::string& content);

/// CSV rows "length,rpe_mean,rpe_std,rre_mean,rre_std,count" with header.
std::string segment_stats_csv(const std::vector<SegmentErrorStats>& stats);

}  // namespace rpcm
