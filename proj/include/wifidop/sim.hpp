#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "wifidop/solver.hpp"

namespace wifidop {

/// Log-normal shadowing: the forward-model power is perturbed by 10^(e/10)
/// with e ~ Normal(0, sigma_db). Readings under dropout_below are recorded
/// as 0 ("not received").
struct NoiseModel {
    double sigma_db = 2.0;
    double dropout_below = 0.0;  // milliwatts
    std::uint64_t seed = 0;
};

struct Trajectory {
    std::vector<Vec3> waypoints;  // at least one
    double speed = 1.0;           // m/s, > 0
    double sample_period = 1.0;   // seconds, > 0
};

struct TrajectorySample {
    double time = 0.0;
    Vec3 position = Vec3::Zero();
};

struct SampleRecord {
    double time = 0.0;
    Vec3 truth = Vec3::Zero();
    Vec3 estimate = Vec3::Zero();
    double error_m = 0.0;
    double dop = std::numeric_limits<double>::infinity();
    int visible = 0;
    int qualified = 0;
    Classification classification = Classification::Insufficient;
    bool converged = false;
};

struct DopBin {
    double lo = 0.0;
    double hi = 0.0;  // exclusive; infinity for the last bin
    int count = 0;
    double mean_error = 0.0;
    double max_error = 0.0;
};

/// DOP bin edges mirroring the [1,5) / [5,10) / [10,15) / [15,inf) analysis
/// ranges; the first bin starts at 0 so the bins partition [0, inf).
inline constexpr std::array<double, 5> kDopBinEdges = {0.0, 5.0, 10.0, 15.0,
                                                       std::numeric_limits<double>::infinity()};

struct ReportSummary {
    std::array<DopBin, 4> bins{};
    int infinite_count = 0;       // samples whose DOP is infinite
    double infinite_mean_error = 0.0;
    double infinite_max_error = 0.0;
    /// Spearman rank correlation between DOP and error over finite-DOP
    /// samples; NaN when fewer than two such samples exist.
    double spearman = std::numeric_limits<double>::quiet_NaN();
};

struct EvaluationReport {
    std::vector<SampleRecord> records;
    ReportSummary summary;
};

struct ExperimentOptions {
    /// Evaluate the reported DOP at the ground-truth position instead of at
    /// the estimate (methodology studies; a live system only has the estimate).
    bool dop_at_truth = false;
};

/// Constant-speed samples along the waypoint polyline every sample_period
/// seconds, both endpoints included. Throws ValidationError on an invalid
/// trajectory.
std::vector<TrajectorySample> sample_trajectory(const Trajectory& trajectory);

/// Forward-models every AP at the truth position and applies shadowing noise
/// and the dropout floor. Deterministic under a fixed seed. Throws
/// DegenerateRange when the truth coincides with an AP.
RssScan synthesize_scan(const Environment& env, const Vec3& truth,
                        const NoiseModel& noise, const PropagationModel& model);

/// Spearman rank correlation (average ranks on ties). NaN when undefined.
double spearman_rank_correlation(const std::vector<double>& xs,
                                 const std::vector<double>& ys);

/// Bins, infinite-DOP bucket and rank correlation for a set of records.
ReportSummary summarize(const std::vector<SampleRecord>& records);

/// End-to-end experiment: sample the trajectory, synthesize noisy scans,
/// solve them with warm starts, and assemble the per-sample records and the
/// summary. The per-sample noise streams are split from the seed by sample
/// index, so the report is bit-reproducible.
EvaluationReport run_experiment(const Environment& env, const Trajectory& trajectory,
                                const NoiseModel& noise, const PropagationModel& model,
                                const SolverConfig& solver_cfg,
                                const ExperimentOptions& options = {});

namespace detail {
/// synthesize_scan with an explicit per-sample stream index mixed into the seed.
RssScan synthesize_scan_stream(const Environment& env, const Vec3& truth,
                               const NoiseModel& noise, const PropagationModel& model,
                               std::uint64_t stream);
}  // namespace detail

}  // namespace wifidop
