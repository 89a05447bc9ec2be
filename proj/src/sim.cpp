#include "wifidop/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace wifidop {

namespace {

constexpr double kMinRange = 1e-9;

void validate_trajectory(const Trajectory& trajectory) {
    if (trajectory.waypoints.empty()) {
        throw ValidationError("waypoints", "at least one waypoint is required");
    }
    if (!(trajectory.speed > 0.0)) {
        throw ValidationError("speed", "must be > 0 m/s");
    }
    if (!(trajectory.sample_period > 0.0)) {
        throw ValidationError("sample_period", "must be > 0 s");
    }
}

Vec3 position_at_arclength(const Trajectory& trajectory, double s) {
    double walked = 0.0;
    for (std::size_t k = 0; k + 1 < trajectory.waypoints.size(); ++k) {
        const Vec3& a = trajectory.waypoints[k];
        const Vec3& b = trajectory.waypoints[k + 1];
        const double len = (b - a).norm();
        if (len <= 0.0) {
            continue;
        }
        if (s <= walked + len) {
            return a + (s - walked) / len * (b - a);
        }
        walked += len;
    }
    return trajectory.waypoints.back();
}

/// Average ranks, ties averaged.
std::vector<double> ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> out(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            out[order[k]] = rank;
        }
        i = j + 1;
    }
    return out;
}

}  // namespace

std::vector<TrajectorySample> sample_trajectory(const Trajectory& trajectory) {
    validate_trajectory(trajectory);

    double length = 0.0;
    for (std::size_t k = 0; k + 1 < trajectory.waypoints.size(); ++k) {
        length += (trajectory.waypoints[k + 1] - trajectory.waypoints[k]).norm();
    }
    const double duration = length / trajectory.speed;

    std::vector<TrajectorySample> samples;
    const auto steps = static_cast<std::size_t>(duration / trajectory.sample_period + 1e-9);
    samples.reserve(steps + 2);
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * trajectory.sample_period;
        samples.push_back({t, position_at_arclength(trajectory, t * trajectory.speed)});
    }
    if (duration - samples.back().time > 1e-9 * std::max(1.0, duration)) {
        samples.push_back({duration, trajectory.waypoints.back()});
    }
    return samples;
}

namespace detail {

RssScan synthesize_scan_stream(const Environment& env, const Vec3& truth,
                               const NoiseModel& noise, const PropagationModel& model,
                               std::uint64_t stream) {
    if (!(noise.sigma_db >= 0.0)) {
        throw ValidationError("sigma_db", "must be >= 0");
    }
    std::seed_seq seq{noise.seed, stream};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> shadowing(0.0, std::max(noise.sigma_db, 1e-300));

    RssScan scan;
    scan.truth = truth;
    for (const auto& ap : env.aps) {
        const double d = (truth - ap.position).norm();
        if (d < kMinRange) {
            throw DegenerateRange("truth position coincides with access point '" + ap.id + "'");
        }
        double power = forward_rss(model, ap, env.receiver, d);
        if (noise.sigma_db > 0.0) {
            power *= std::pow(10.0, shadowing(rng) / 10.0);
        }
        scan.readings[ap.id] = power >= noise.dropout_below ? power : 0.0;
    }
    return scan;
}

}  // namespace detail

RssScan synthesize_scan(const Environment& env, const Vec3& truth,
                        const NoiseModel& noise, const PropagationModel& model) {
    return detail::synthesize_scan_stream(env, truth, noise, model, 0);
}

double spearman_rank_correlation(const std::vector<double>& xs,
                                 const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const auto rx = ranks(xs);
    const auto ry = ranks(ys);
    const double n = static_cast<double>(xs.size());
    const double mean = (n + 1.0) / 2.0;
    double cov = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double dx = rx[k] - mean;
        const double dy = ry[k] - mean;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x <= 0.0 || var_y <= 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return cov / std::sqrt(var_x * var_y);
}

ReportSummary summarize(const std::vector<SampleRecord>& records) {
    ReportSummary summary;
    for (std::size_t b = 0; b < summary.bins.size(); ++b) {
        summary.bins[b].lo = kDopBinEdges[b];
        summary.bins[b].hi = kDopBinEdges[b + 1];
    }

    std::vector<double> dops;
    std::vector<double> errors;
    double infinite_sum = 0.0;
    for (const auto& record : records) {
        if (!std::isfinite(record.dop)) {
            ++summary.infinite_count;
            infinite_sum += record.error_m;
            summary.infinite_max_error = std::max(summary.infinite_max_error, record.error_m);
            continue;
        }
        dops.push_back(record.dop);
        errors.push_back(record.error_m);
        for (auto& bin : summary.bins) {
            if (record.dop >= bin.lo && record.dop < bin.hi) {
                ++bin.count;
                bin.mean_error += record.error_m;
                bin.max_error = std::max(bin.max_error, record.error_m);
                break;
            }
        }
    }
    for (auto& bin : summary.bins) {
        if (bin.count > 0) {
            bin.mean_error /= bin.count;
        }
    }
    if (summary.infinite_count > 0) {
        summary.infinite_mean_error = infinite_sum / summary.infinite_count;
    }
    summary.spearman = spearman_rank_correlation(dops, errors);
    return summary;
}

EvaluationReport run_experiment(const Environment& env, const Trajectory& trajectory,
                                const NoiseModel& noise, const PropagationModel& model,
                                const SolverConfig& solver_cfg,
                                const ExperimentOptions& options) {
    const auto samples = sample_trajectory(trajectory);

    std::vector<RssScan> scans;
    scans.reserve(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        RssScan scan =
            detail::synthesize_scan_stream(env, samples[k].position, noise, model, k);
        scan.timestamp = samples[k].time;
        scans.push_back(std::move(scan));
    }

    const auto fixes = solve_trajectory(env, scans, solver_cfg);

    EvaluationReport report;
    report.records.reserve(fixes.size());
    for (std::size_t k = 0; k < fixes.size(); ++k) {
        const PositionFix& fix = fixes[k];
        DopAssessment assessment = fix.assessment;
        if (options.dop_at_truth) {
            AssessOptions assess_opts;
            assess_opts.good_dop_max = solver_cfg.good_dop_max;
            assess_opts.dimension = solver_cfg.dimension;
            assessment =
                detail::assess_skip_degenerate(env, scans[k], samples[k].position, assess_opts);
        }
        SampleRecord record;
        record.time = samples[k].time;
        record.truth = samples[k].position;
        record.estimate = fix.position;
        record.error_m = (fix.position - samples[k].position).norm();
        record.dop = assessment.dop;
        record.visible = assessment.visible_count;
        record.qualified = assessment.qualified_count;
        record.classification = assessment.classification;
        record.converged = fix.converged;
        report.records.push_back(record);
    }
    report.summary = summarize(report.records);
    return report;
}

}  // namespace wifidop
