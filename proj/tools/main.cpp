// rpcm command-line tool: registration, odometry, evaluation, threshold
// sweeps, and synthetic data generation for sparse radar point clouds.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rpcm/evaluation.hpp"
#include "rpcm/io.hpp"
#include "rpcm/registration.hpp"
#include "rpcm/synth.hpp"

namespace {

using namespace rpcm;

struct CommonOptions {
    std::string objective = "pt2pt";
    std::string pcm = "off";
    double tau = 0.25;
    double alpha = 3.86;
    double confidence = -1.0;  // maps to alpha via the chi-square quantile
    double max_assoc_dist = 10.0;
    int max_iterations = 50;
    int min_inliers = 5;
    std::string schema = "spherical";
    double sigma_r = SphericalAccuracy{}.sigma_range;
    double sigma_theta = SphericalAccuracy{}.sigma_azimuth;
    double sigma_phi = SphericalAccuracy{}.sigma_elevation;
    std::string config_path;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--objective", objective, "Registration objective")
            ->check(CLI::IsMember({"pt2pt", "pt2plane", "gicp"}));
        cmd->add_option("--pcm", pcm, "PCM inlier selection: off, raw or norm")
            ->check(CLI::IsMember({"off", "raw", "norm"}));
        cmd->add_option("--tau", tau, "Raw-score edge threshold, meters");
        cmd->add_option("--alpha", alpha, "Normalized-score edge threshold, unitless");
        cmd->add_option("--confidence", confidence,
                        "Chi-square confidence in (0,1); overrides --alpha");
        cmd->add_option("--max-assoc-dist", max_assoc_dist,
                        "Maximum association distance, meters");
        cmd->add_option("--max-iterations", max_iterations, "ICP iteration cap");
        cmd->add_option("--min-inliers", min_inliers, "Minimum usable inlier count");
        cmd->add_option("--schema", schema, "Scan file schema")
            ->check(CLI::IsMember({"spherical", "cartesian"}));
        cmd->add_option("--sigma-r", sigma_r, "Default range accuracy, meters");
        cmd->add_option("--sigma-theta", sigma_theta, "Default azimuth accuracy, radians");
        cmd->add_option("--sigma-phi", sigma_phi, "Default elevation accuracy, radians");
        cmd->add_option("--config", config_path, "key=value config file; flags override it");
    }

    // Config file values fill in whatever was not set explicitly on the line.
    void apply_config(const CLI::App* cmd) {
        if (config_path.empty()) return;
        const auto config = read_config(config_path);
        auto maybe = [&](const char* flag, const char* key, auto& value) {
            const auto it = config.find(key);
            if (it == config.end() || cmd->count(flag) > 0) return;
            std::istringstream stream(it->second);
            stream >> value;
            if (stream.fail()) {
                throw ParseError(config_path + ": bad value for " + key + ": " + it->second);
            }
        };
        maybe("--objective", "objective", objective);
        maybe("--pcm", "pcm", pcm);
        maybe("--tau", "tau", tau);
        maybe("--alpha", "alpha", alpha);
        maybe("--confidence", "confidence", confidence);
        maybe("--max-assoc-dist", "max_assoc_dist", max_assoc_dist);
        maybe("--max-iterations", "max_iterations", max_iterations);
        maybe("--min-inliers", "min_inliers", min_inliers);
        maybe("--schema", "schema", schema);
        maybe("--sigma-r", "sigma_r", sigma_r);
        maybe("--sigma-theta", "sigma_theta", sigma_theta);
        maybe("--sigma-phi", "sigma_phi", sigma_phi);
    }

    SphericalAccuracy accuracy() const {
        SphericalAccuracy acc;
        acc.sigma_range = sigma_r;
        acc.sigma_azimuth = sigma_theta;
        acc.sigma_elevation = sigma_phi;
        return acc;
    }

    ScanSchema scan_schema() const {
        return schema == "cartesian" ? ScanSchema::Cartesian : ScanSchema::Spherical;
    }

    RegistrationConfig registration_config() const {
        RegistrationConfig cfg;
        if (objective == "pt2plane") {
            cfg.objective = Objective::PointToPlane;
        } else if (objective == "gicp") {
            cfg.objective = Objective::Gicp;
        } else {
            cfg.objective = Objective::PointToPoint;
        }
        cfg.max_association_distance = max_assoc_dist;
        cfg.max_iterations = max_iterations;
        cfg.min_inliers = min_inliers;
        if (pcm == "raw") {
            cfg.pcm = PcmConfig{ScoreKind::Raw, tau, 1e-6};
        } else if (pcm == "norm") {
            const double threshold =
                confidence > 0.0 ? chi_square_threshold(confidence) : alpha;
            cfg.pcm = PcmConfig{ScoreKind::Normalized, threshold, 1e-6};
        }
        return cfg;
    }
};

std::vector<std::string> list_scan_files(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    if (!fs::is_directory(dir)) {
        throw ParseError(dir + ": not a directory");
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw ParseError(dir + ": no .csv scan files");
    }
    return files;
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void print_transform(const RigidTransform& t) {
    const Eigen::Matrix4d m = t.matrix();
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            std::cout << format_value(m(r, c)) << (c == 3 ? "\n" : " ");
        }
    }
}

// Registers consecutive scans (each frame onto its predecessor) and
// integrates the relative transforms into a trajectory.
Trajectory run_odometry(const std::vector<RadarScan>& scans, const RegistrationConfig& cfg,
                        double frame_rate) {
    std::vector<RigidTransform> relatives;
    relatives.reserve(scans.size() - 1);
    for (std::size_t k = 0; k + 1 < scans.size(); ++k) {
        relatives.push_back(register_scans(scans[k + 1], scans[k], cfg).transform);
    }
    std::vector<double> timestamps(scans.size());
    for (std::size_t i = 0; i < timestamps.size(); ++i) {
        timestamps[i] = static_cast<double>(i) / frame_rate;
    }
    return integrate_odometry(relatives, timestamps);
}

std::vector<double> lengths_that_fit(const Trajectory& gt, const std::vector<double>& wanted) {
    double path = 0.0;
    for (std::size_t i = 1; i < gt.size(); ++i) {
        path += (gt[i].pose.translation - gt[i - 1].pose.translation).norm();
    }
    std::vector<double> kept;
    for (double length : wanted) {
        if (length <= path) kept.push_back(length);
    }
    return kept;
}

int cmd_register(const CommonOptions& opts, const std::string& source_path,
                 const std::string& target_path) {
    const RadarScan source = read_scan(source_path, opts.scan_schema(), opts.accuracy());
    const RadarScan target = read_scan(target_path, opts.scan_schema(), opts.accuracy());
    const RegistrationResult result =
        register_scans(source, target, opts.registration_config());
    print_transform(result.transform);
    const IterationTrace& last = result.per_iteration_trace.back();
    std::cout << "iterations " << result.iterations << " converged " << result.converged
              << " associations " << last.association_count << " inliers "
              << last.inlier_count << "\n";
    return 0;
}

int cmd_odometry(const CommonOptions& opts, const std::string& scan_dir,
                 const std::string& out_path, double frame_rate) {
    const auto files = list_scan_files(scan_dir);
    if (files.size() < 2) {
        throw ParseError(scan_dir + ": need at least two scans");
    }
    std::vector<RadarScan> scans;
    scans.reserve(files.size());
    for (const auto& file : files) {
        scans.push_back(read_scan(file, opts.scan_schema(), opts.accuracy()));
    }
    const Trajectory trajectory =
        run_odometry(scans, opts.registration_config(), frame_rate);
    write_trajectory(out_path, trajectory);
    std::cout << "wrote " << trajectory.size() << " poses to " << out_path << "\n";
    return 0;
}

int cmd_evaluate(const std::string& est_path, const std::string& gt_path,
                 const std::string& segments_path, const std::string& kitti_path,
                 double max_dt, std::vector<double> lengths) {
    const Trajectory est = read_trajectory(est_path);
    const Trajectory gt = read_trajectory(gt_path);
    const MatchedTrajectories matched = associate_by_timestamp(est, gt, max_dt);

    const std::vector<double> kept = lengths_that_fit(matched.gt, lengths);
    if (kept.empty()) {
        throw TooShort("ground-truth path shorter than every requested segment length");
    }
    if (kept.size() < lengths.size()) {
        std::cerr << "note: dropped " << lengths.size() - kept.size()
                  << " segment length(s) longer than the driven path\n";
    }
    const auto stats = segment_rpe_rre(matched.est, matched.gt, kept);
    atomic_write(segments_path, segment_stats_csv(stats));
    std::cout << "wrote " << segments_path << "\n";

    if (!kitti_path.empty()) {
        try {
            const KittiDrift drift = kitti_drift(matched.est, matched.gt);
            std::ostringstream out;
            out << "t_rel_percent,r_rel_deg_per_100m\n"
                << format_value(drift.t_rel_percent) << ','
                << format_value(drift.r_rel_deg_per_100m) << '\n';
            atomic_write(kitti_path, out.str());
            std::cout << "wrote " << kitti_path << "\n";
        } catch (const TooShort&) {
            std::cerr << "note: path under 100 m, skipping KITTI drift output\n";
        }
    }
    return 0;
}

int cmd_sweep(const CommonOptions& opts, const std::string& scan_dir,
              const std::string& gt_path, const std::string& out_path, double frame_rate,
              double max_dt, std::vector<double> taus, std::vector<double> alphas,
              bool include_baseline) {
    const auto files = list_scan_files(scan_dir);
    std::vector<RadarScan> scans;
    scans.reserve(files.size());
    for (const auto& file : files) {
        scans.push_back(read_scan(file, opts.scan_schema(), opts.accuracy()));
    }
    const Trajectory gt = read_trajectory(gt_path);

    std::sort(taus.begin(), taus.end());
    std::sort(alphas.begin(), alphas.end());

    struct Row {
        std::string invariant;
        double threshold;
        std::optional<PcmConfig> pcm;
    };
    std::vector<Row> rows;
    if (include_baseline) {
        rows.push_back({"none", 0.0, std::nullopt});
    }
    for (double tau : taus) {
        rows.push_back({"euclidean", tau, PcmConfig{ScoreKind::Raw, tau, 1e-6}});
    }
    for (double alpha : alphas) {
        rows.push_back({"mahalanobis", alpha, PcmConfig{ScoreKind::Normalized, alpha, 1e-6}});
    }
    if (rows.empty()) {
        throw ParseError("sweep: nothing to run (no thresholds, no baseline)");
    }

    const std::vector<double> wanted = {1, 5, 10, 20, 50, 100};
    std::vector<double> kept;

    std::ostringstream csv;
    bool header_written = false;
    for (const Row& row : rows) {
        RegistrationConfig cfg = opts.registration_config();
        cfg.pcm = row.pcm;
        const Trajectory est = run_odometry(scans, cfg, frame_rate);
        const MatchedTrajectories matched = associate_by_timestamp(est, gt, max_dt);
        if (!header_written) {
            kept = lengths_that_fit(matched.gt, wanted);
            csv << "objective,pcm,threshold,t_rel_percent,r_rel_deg_per_100m";
            for (double length : kept) {
                csv << ",rpe_" << length << "m,rre_" << length << "m";
            }
            csv << "\n";
            header_written = true;
        }

        csv << opts.objective << ',' << row.invariant << ',' << format_value(row.threshold);
        try {
            const KittiDrift drift = kitti_drift(matched.est, matched.gt);
            csv << ',' << format_value(drift.t_rel_percent) << ','
                << format_value(drift.r_rel_deg_per_100m);
        } catch (const TooShort&) {
            csv << ",nan,nan";
        }
        for (const auto& s : segment_rpe_rre(matched.est, matched.gt, kept)) {
            csv << ',' << format_value(s.rpe_mean) << ',' << format_value(s.rre_mean);
        }
        csv << "\n";
    }
    atomic_write(out_path, csv.str());
    std::cout << "wrote " << rows.size() << " sweep rows to " << out_path << "\n";
    return 0;
}

int cmd_synth(const CommonOptions& opts, const std::string& out_dir, int frames,
              const std::string& shape, double step, int landmarks, double extent,
              double outlier_fraction, double ghost_fraction, double max_range,
              int detections_per_scan, std::uint64_t seed, double frame_rate) {
    namespace fs = std::filesystem;
    SequenceParams params;
    params.frame_count = frames;
    params.step = step;
    params.landmark_count = landmarks;
    params.scene_extent = extent;
    params.frame_rate = frame_rate;
    if (shape == "arc") {
        params.shape = TrajectoryShape::Arc;
    } else if (shape == "ramploop") {
        params.shape = TrajectoryShape::RampLoop;
    } else {
        params.shape = TrajectoryShape::Line;
    }

    SensorParams sensor;
    sensor.accuracy = opts.accuracy();
    sensor.max_range = max_range;
    sensor.detections_per_scan = detections_per_scan;

    ContaminationParams contamination;
    contamination.outlier_fraction = outlier_fraction;
    contamination.ghost_fraction = ghost_fraction;
    contamination.seed = seed;

    const SyntheticSequence seq = generate_sequence(params, sensor, contamination, seed);

    fs::create_directories(out_dir);
    char name[32];
    for (std::size_t k = 0; k < seq.frames.size(); ++k) {
        std::snprintf(name, sizeof(name), "scan_%06zu.csv", k);
        write_scan((fs::path(out_dir) / name).string(), seq.frames[k].scan,
                   ScanSchema::Cartesian);
    }
    write_trajectory((fs::path(out_dir) / "gt.txt").string(), seq.ground_truth);
    std::cout << "wrote " << seq.frames.size() << " scans and gt.txt to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radar point-cloud registration with pairwise-consistency maximization"};
    app.require_subcommand(1);

    CommonOptions opts;

    // register
    auto* reg = app.add_subcommand("register", "Register a source scan onto a target scan");
    std::string source_path, target_path;
    reg->add_option("source", source_path, "Source scan file")->required();
    reg->add_option("target", target_path, "Target scan file")->required();
    opts.add_flags(reg);

    // odometry
    auto* odo = app.add_subcommand("odometry",
                                   "Register consecutive scans in a directory and integrate");
    std::string scan_dir, odo_out;
    double frame_rate = 20.0;
    odo->add_option("scans", scan_dir, "Directory of scan .csv files")->required();
    odo->add_option("--out", odo_out, "Output trajectory file")->required();
    odo->add_option("--rate", frame_rate, "Frame rate in Hz for timestamps");
    opts.add_flags(odo);

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "Segment RPE/RRE and KITTI-style drift");
    std::string est_path, gt_path, segments_path, kitti_path;
    double max_dt = 0.025;
    std::vector<double> lengths = {1, 5, 10, 20, 50, 100};
    eval->add_option("--est", est_path, "Estimated trajectory")->required();
    eval->add_option("--gt", gt_path, "Ground-truth trajectory")->required();
    eval->add_option("--out-segments", segments_path, "Segment stats CSV")->required();
    eval->add_option("--out-kitti", kitti_path, "KITTI drift CSV");
    eval->add_option("--max-dt", max_dt, "Timestamp association tolerance, seconds");
    eval->add_option("--lengths", lengths, "Segment lengths in meters");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Threshold sweep over a scan sequence");
    std::string sweep_dir, sweep_gt, sweep_out;
    double sweep_rate = 20.0, sweep_dt = 0.025;
    std::vector<double> taus, alphas;
    bool include_baseline = false;
    sweep->add_option("scans", sweep_dir, "Directory of scan .csv files")->required();
    sweep->add_option("--gt", sweep_gt, "Ground-truth trajectory")->required();
    sweep->add_option("--out", sweep_out, "Output CSV")->required();
    sweep->add_option("--taus", taus, "Raw-score thresholds to sweep, meters");
    sweep->add_option("--alphas", alphas, "Normalized-score thresholds to sweep");
    sweep->add_flag("--include-baseline", include_baseline, "Add a PCM-off row");
    sweep->add_option("--rate", sweep_rate, "Frame rate in Hz");
    sweep->add_option("--max-dt", sweep_dt, "Timestamp association tolerance, seconds");
    opts.add_flags(sweep);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic scan sequence");
    std::string synth_out, synth_shape = "line";
    int synth_frames = 100, synth_landmarks = 500, synth_cap = 120;
    double synth_step = 0.19, synth_extent = 120.0, synth_range = 60.0;
    double outlier_fraction = 0.0, ghost_fraction = 0.0;
    double synth_rate = 20.0;
    std::uint64_t seed = 0;
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--frames", synth_frames, "Number of frames");
    synth->add_option("--shape", synth_shape, "Trajectory shape")
        ->check(CLI::IsMember({"line", "arc", "ramploop"}));
    synth->add_option("--step", synth_step, "Inter-frame translation, meters");
    synth->add_option("--landmarks", synth_landmarks, "Landmark count");
    synth->add_option("--extent", synth_extent, "Scene extent, meters");
    synth->add_option("--max-range", synth_range, "Sensor range, meters");
    synth->add_option("--detections-per-scan", synth_cap, "Detection cap per scan");
    synth->add_option("--outlier-fraction", outlier_fraction, "Uniform outlier fraction");
    synth->add_option("--ghost-fraction", ghost_fraction, "Mirrored ghost fraction");
    synth->add_option("--seed", seed, "Random seed");
    synth->add_option("--rate", synth_rate, "Frame rate in Hz for timestamps");
    opts.add_flags(synth);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (reg->parsed()) {
            opts.apply_config(reg);
            return cmd_register(opts, source_path, target_path);
        }
        if (odo->parsed()) {
            opts.apply_config(odo);
            return cmd_odometry(opts, scan_dir, odo_out, frame_rate);
        }
        if (eval->parsed()) {
            return cmd_evaluate(est_path, gt_path, segments_path, kitti_path, max_dt, lengths);
        }
        if (sweep->parsed()) {
            opts.apply_config(sweep);
            return cmd_sweep(opts, sweep_dir, sweep_gt, sweep_out, sweep_rate, sweep_dt, taus,
                             alphas, include_baseline);
        }
        if (synth->parsed()) {
            opts.apply_config(synth);
            return cmd_synth(opts, synth_out, synth_frames, synth_shape, synth_step,
                             synth_landmarks, synth_extent, outlier_fraction, ghost_fraction,
                             synth_range, synth_cap, seed, synth_rate);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
