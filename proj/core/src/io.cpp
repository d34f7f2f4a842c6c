#include "rpcm/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/Geometry>

namespace rpcm {

namespace {

std::string parse_context(const std::string& path, std::size_t line) {
    return path + ":" + std::to_string(line);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

double parse_double(const std::string& field, const std::string& context) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || begin == end) {
        throw ParseError(context + ": not a number: '" + field + "'");
    }
    if (!std::isfinite(value)) {
        throw ParseError(context + ": non-finite value");
    }
    return value;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path + ": cannot open for reading");
    }
    return in;
}

}  // namespace

RadarScan read_scan(const std::string& path, ScanSchema schema,
                    const SphericalAccuracy& default_accuracy) {
    std::ifstream in = open_for_read(path);
    RadarScan scan;
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) {
        throw ParseError(path + ": missing header line");
    }
    line_no = 1;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::string context = parse_context(path, line_no);
        const std::vector<std::string> fields = split(line, ',');

        if (schema == ScanSchema::Spherical) {
            if (fields.size() != 3 && fields.size() != 6) {
                throw ParseError(context + ": expected 3 or 6 columns, got " +
                                 std::to_string(fields.size()));
            }
            SphericalDetection d;
            d.range = parse_double(fields[0], context);
            d.azimuth = parse_double(fields[1], context);
            d.elevation = parse_double(fields[2], context);
            validate_detection(d);

            SphericalAccuracy acc = default_accuracy;
            if (fields.size() == 6) {
                acc.sigma_range = parse_double(fields[3], context);
                acc.sigma_azimuth = parse_double(fields[4], context);
                acc.sigma_elevation = parse_double(fields[5], context);
            }
            validate_accuracy(acc);

            scan.points.push_back(spherical_to_cartesian(d));
            scan.covariances.push_back(propagate_covariance(d, acc));
            scan.detections.push_back(d);
        } else {
            if (fields.size() != 3 && fields.size() != 9) {
                throw ParseError(context + ": expected 3 or 9 columns, got " +
                                 std::to_string(fields.size()));
            }
            const Vec3 p(parse_double(fields[0], context), parse_double(fields[1], context),
                         parse_double(fields[2], context));
            Mat3 cov;
            if (fields.size() == 9) {
                const double xx = parse_double(fields[3], context);
                const double xy = parse_double(fields[4], context);
                const double xz = parse_double(fields[5], context);
                const double yy = parse_double(fields[6], context);
                const double yz = parse_double(fields[7], context);
                const double zz = parse_double(fields[8], context);
                cov << xx, xy, xz,
                       xy, yy, yz,
                       xz, yz, zz;
                try {
                    cov = repair_covariance(cov);
                } catch (const InvariantViolation& e) {
                    throw InvariantViolation(context + ": " + e.what());
                }
            } else {
                // No covariance columns: derive one from the measurement
                // model at this position.
                validate_accuracy(default_accuracy);
                cov = propagate_covariance(cartesian_to_spherical(p), default_accuracy);
            }
            scan.points.push_back(p);
            scan.covariances.push_back(cov);
        }
    }

    if (scan.empty()) {
        throw ParseError(path + ": no data rows");
    }
    return scan;
}

void write_scan(const std::string& path, const RadarScan& scan, ScanSchema schema) {
    std::ostringstream out;
    if (schema == ScanSchema::Spherical) {
        if (scan.detections.size() != scan.points.size()) {
            throw InvariantViolation("write_scan: spherical schema needs source detections");
        }
        out << "range_m,azimuth_rad,elevation_rad\n";
        for (const SphericalDetection& d : scan.detections) {
            out << format_double(d.range) << ',' << format_double(d.azimuth) << ','
                << format_double(d.elevation) << '\n';
        }
    } else {
        if (scan.covariances.size() != scan.points.size()) {
            throw InvariantViolation("write_scan: points/covariances length mismatch");
        }
        out << "x,y,z,cov_xx,cov_xy,cov_xz,cov_yy,cov_yz,cov_zz\n";
        for (std::size_t i = 0; i < scan.points.size(); ++i) {
            const Vec3& p = scan.points[i];
            const Mat3& c = scan.covariances[i];
            out << format_double(p.x()) << ',' << format_double(p.y()) << ','
                << format_double(p.z()) << ',' << format_double(c(0, 0)) << ','
                << format_double(c(0, 1)) << ',' << format_double(c(0, 2)) << ','
                << format_double(c(1, 1)) << ',' << format_double(c(1, 2)) << ','
                << format_double(c(2, 2)) << '\n';
        }
    }
    atomic_write(path, out.str());
}

Trajectory read_trajectory(const std::string& path) {
    std::ifstream in = open_for_read(path);
    Trajectory trajectory;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        const std::string context = parse_context(path, line_no);

        std::istringstream fields(trimmed);
        std::vector<std::string> tokens;
        std::string token;
        while (fields >> token) tokens.push_back(token);
        if (tokens.size() != 8) {
            throw ParseError(context + ": expected 8 fields, got " +
                             std::to_string(tokens.size()));
        }
        double v[8];
        for (int i = 0; i < 8; ++i) v[i] = parse_double(tokens[i], context);

        Eigen::Quaterniond q(v[7], v[4], v[5], v[6]);  // w, x, y, z
        if (std::abs(q.norm() - 1.0) > 1e-6) {
            throw InvariantViolation(context + ": quaternion norm deviates from 1 by more than 1e-6");
        }
        TimedPose pose;
        pose.timestamp = v[0];
        pose.pose.rotation = q.normalized().toRotationMatrix();
        pose.pose.translation = Vec3(v[1], v[2], v[3]);
        trajectory.push_back(pose);
    }
    if (trajectory.empty()) {
        throw ParseError(path + ": no poses");
    }
    validate_trajectory(trajectory);
    return trajectory;
}

void write_trajectory(const std::string& path, const Trajectory& trajectory) {
    std::ostringstream out;
    for (const TimedPose& tp : trajectory) {
        Eigen::Quaterniond q(tp.pose.rotation);
        q.normalize();
        out << format_double(tp.timestamp) << ' ' << format_double(tp.pose.translation.x()) << ' '
            << format_double(tp.pose.translation.y()) << ' '
            << format_double(tp.pose.translation.z()) << ' ' << format_double(q.x()) << ' '
            << format_double(q.y()) << ' ' << format_double(q.z()) << ' ' << format_double(q.w())
            << '\n';
    }
    atomic_write(path, out.str());
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in = open_for_read(path);
    std::map<std::string, std::string> config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ParseError(parse_context(path, line_no) + ": expected key=value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ParseError(parse_context(path, line_no) + ": empty key");
        }
        config[key] = value;
    }
    return config;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
    const fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw Error("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("rename failed: " + tmp.string() + " -> " + path + ": " + ec.message());
    }
}

std::string segment_stats_csv(const std::vector<SegmentErrorStats>& stats) {
    std::ostringstream out;
    out << "length,rpe_mean,rpe_std,rre_mean,rre_std,count\n";
    char buf[160];
    for (const SegmentErrorStats& s : stats) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g,%.9g,%zu\n", s.segment_length,
                      s.rpe_mean, s.rpe_std, s.rre_mean, s.rre_std, s.segment_count);
        out << buf;
    }
    return out.str();
}

}  // namespace rpcm
