#include "wifidop/solver.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace wifidop {

namespace {

constexpr double kMinRange = 1e-9;         // iterate-on-AP guard, meters
constexpr double kSingularRelDet = 1e-10;  // same scale-aware test as the dop module
constexpr int kMaxHalvings = 8;

struct Observation {
    Vec3 ap_position = Vec3::Zero();
    double range = 0.0;  // model-inverted measurement, meters
};

double residual_sq(const std::vector<Observation>& observations, const Vec3& position) {
    double sum = 0.0;
    for (const auto& obs : observations) {
        const double r = obs.range - (position - obs.ap_position).norm();
        sum += r * r;
    }
    return sum;
}

Vec3 qualified_centroid(const Environment& env, const std::vector<std::string>& ids) {
    Vec3 sum = Vec3::Zero();
    for (const auto& id : ids) {
        sum += env.ap(id).position;
    }
    return sum / static_cast<double>(ids.size());
}

Vec3 all_aps_centroid(const Environment& env) {
    Vec3 sum = Vec3::Zero();
    for (const auto& ap : env.aps) {
        sum += ap.position;
    }
    return sum / static_cast<double>(env.aps.size());
}

bool is_singular(const Eigen::MatrixXd& normal, int dimension) {
    const double trace = normal.trace();
    if (!(trace > 0.0)) {
        return true;
    }
    return normal.determinant() < kSingularRelDet * std::pow(trace / dimension, dimension);
}

/// Closed-form linear trilateration from pairwise-differenced sphere
/// equations (2*(p_j - p_i) . x = |p_j|^2 - |p_i|^2 + d_i^2 - d_j^2). Exact on
/// noise-free ranges; used as a second Gauss-Newton start because the range
/// residual has mirror-image local minima that can capture a centroid start.
/// Returns nothing when the anchors are rank-deficient (e.g. coplanar in 3-D).
std::optional<Vec3> linear_fit(const std::vector<Observation>& observations, int dimension,
                               double fixed_z) {
    const std::size_t n = observations.size();
    const std::size_t pairs = n * (n - 1) / 2;
    Eigen::MatrixXd a(pairs, dimension);
    Eigen::VectorXd b(pairs);
    std::size_t row = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            Eigen::VectorXd pi = observations[i].ap_position.head(dimension);
            Eigen::VectorXd pj = observations[j].ap_position.head(dimension);
            double di_sq = observations[i].range * observations[i].range;
            double dj_sq = observations[j].range * observations[j].range;
            if (dimension == 2) {
                // Slant ranges reduced to the horizontal plane at the pinned z.
                const double zi = fixed_z - observations[i].ap_position.z();
                const double zj = fixed_z - observations[j].ap_position.z();
                di_sq = std::max(di_sq - zi * zi, 0.0);
                dj_sq = std::max(dj_sq - zj * zj, 0.0);
            }
            a.row(row) = 2.0 * (pj - pi).transpose();
            b(row) = pj.squaredNorm() - pi.squaredNorm() + di_sq - dj_sq;
            ++row;
        }
    }
    const Eigen::MatrixXd normal = a.transpose() * a;
    if (is_singular(normal, dimension)) {
        return std::nullopt;
    }
    const Eigen::VectorXd x = normal.ldlt().solve(a.transpose() * b);
    Vec3 out{x(0), x(1), dimension == 3 ? x(2) : fixed_z};
    if (!out.allFinite()) {
        return std::nullopt;
    }
    return out;
}

struct GaussNewtonResult {
    Vec3 estimate = Vec3::Zero();
    double residual_sq = 0.0;
    int iterations = 0;
    bool converged = false;
};

}  // namespace

std::vector<std::pair<std::string, double>>
ranges_from_scan(const Environment& env, const RssScan& scan,
                 const PropagationModel& model) {
    const auto visible = visible_aps(env, scan);
    const auto [qualified, excluded] = qualify_aps(env, visible, scan);
    if (qualified.empty()) {
        throw InsufficientObservations("no access point qualifies above the threshold");
    }
    std::vector<std::pair<std::string, double>> out;
    out.reserve(qualified.size());
    for (const auto& id : qualified) {
        out.emplace_back(id, invert_distance(model, env.ap(id), env.receiver,
                                             scan.readings.at(id)));
    }
    return out;
}

Vec3 range_jacobian_row(const Vec3& ap_position, const Vec3& estimate) {
    const Vec3 diff = estimate - ap_position;
    const double range = diff.norm();
    if (range < kMinRange) {
        throw DegenerateRange("estimate coincides with the access point");
    }
    return diff / range;
}

PositionFix solve(const Environment& env, const RssScan& scan, const SolverConfig& cfg) {
    const int dim = cfg.dimension;
    if (dim != 2 && dim != 3) {
        throw ValidationError("dimension", "must be 2 or 3");
    }
    if (cfg.max_iterations < 1) {
        throw ValidationError("max_iterations", "must be >= 1");
    }
    if (!(cfg.step_tolerance > 0.0)) {
        throw ValidationError("step_tolerance", "must be > 0");
    }

    const auto ranges = ranges_from_scan(env, scan, cfg.model);
    if (ranges.size() < static_cast<std::size_t>(dim) + 1) {
        throw InsufficientObservations("need at least " + std::to_string(dim + 1) +
                                       " qualified access points, have " +
                                       std::to_string(ranges.size()));
    }

    std::vector<Observation> observations;
    std::vector<std::string> qualified_ids;
    observations.reserve(ranges.size());
    for (const auto& [id, range] : ranges) {
        observations.push_back({env.ap(id).position, range});
        qualified_ids.push_back(id);
    }

    auto gauss_newton = [&](const Vec3& start) {
        GaussNewtonResult result;
        result.estimate = start;
        result.residual_sq = residual_sq(observations, start);

        for (int it = 0; it < cfg.max_iterations; ++it) {
            ++result.iterations;

            // Linearize at the current estimate; rows whose range collapses are skipped.
            Eigen::MatrixXd jacobian(observations.size(), dim);
            Eigen::VectorXd delta_d(observations.size());
            Eigen::Index used = 0;
            for (const auto& obs : observations) {
                const Vec3 diff = result.estimate - obs.ap_position;
                const double predicted = diff.norm();
                if (predicted < kMinRange) {
                    continue;
                }
                const Vec3 grad = diff / predicted;
                jacobian.row(used) = grad.head(dim).transpose();
                delta_d(used) = obs.range - predicted;
                ++used;
            }
            if (used < dim + 1) {
                throw SingularGeometry("fewer than dimension+1 usable ranges at the iterate");
            }

            const Eigen::MatrixXd normal =
                jacobian.topRows(used).transpose() * jacobian.topRows(used);
            if (is_singular(normal, dim)) {
                throw SingularGeometry("normal matrix of the linearized system is singular");
            }
            const Eigen::VectorXd step =
                normal.ldlt().solve(jacobian.topRows(used).transpose() * delta_d.head(used));

            auto apply = [&](double scale) {
                Vec3 candidate = result.estimate;
                candidate.head(dim) += scale * step;
                return candidate;
            };

            // Full Gauss-Newton step, falling back to up to 8 halvings; the best
            // improving candidate is accepted, otherwise the iteration stops.
            double accepted_scale = 1.0;
            Vec3 candidate = apply(1.0);
            double candidate_sq = residual_sq(observations, candidate);
            if (!(candidate_sq < result.residual_sq)) {
                double best_sq = candidate_sq;
                double best_scale = 1.0;
                double scale = 1.0;
                for (int k = 0; k < kMaxHalvings; ++k) {
                    scale *= 0.5;
                    const double sq = residual_sq(observations, apply(scale));
                    if (sq < best_sq) {
                        best_sq = sq;
                        best_scale = scale;
                    }
                }
                if (!(best_sq < result.residual_sq)) {
                    break;  // no step improves; keep the current estimate
                }
                accepted_scale = best_scale;
                candidate = apply(best_scale);
                candidate_sq = best_sq;
            }

            result.estimate = candidate;
            result.residual_sq = candidate_sq;
            if ((accepted_scale * step).norm() < cfg.step_tolerance) {
                result.converged = true;
                break;
            }
        }
        return result;
    };

    const Vec3 start =
        cfg.initial_guess ? *cfg.initial_guess : qualified_centroid(env, qualified_ids);
    GaussNewtonResult best = gauss_newton(start);
    if (const auto lin = linear_fit(observations, dim, start.z())) {
        if ((*lin - start).norm() > cfg.step_tolerance) {
            const GaussNewtonResult alt = gauss_newton(*lin);
            if (alt.residual_sq < best.residual_sq) {
                best = alt;
            }
        }
    }

    PositionFix fix;
    fix.position = best.estimate;
    fix.residual_norm = std::sqrt(best.residual_sq);
    fix.iterations = best.iterations;
    fix.converged = best.converged;
    AssessOptions assess_opts;
    assess_opts.good_dop_max = cfg.good_dop_max;
    assess_opts.dimension = dim;
    fix.assessment = detail::assess_skip_degenerate(env, scan, fix.position, assess_opts);
    return fix;
}

std::vector<PositionFix> solve_trajectory(const Environment& env,
                                          const std::vector<RssScan>& scans,
                                          const SolverConfig& cfg) {
    std::vector<PositionFix> out;
    out.reserve(scans.size());
    const PositionFix* previous = nullptr;

    for (const auto& scan : scans) {
        SolverConfig warm = cfg;
        if (previous) {
            warm.initial_guess = previous->position;
        }
        bool failed = false;
        try {
            out.push_back(solve(env, scan, warm));
        } catch (const InsufficientObservations&) {
            failed = true;
        } catch (const SingularGeometry&) {
            failed = true;
        }
        if (failed) {
            // Embedded failure: carry the previous position (or the AP centroid).
            PositionFix fix;
            fix.position = previous ? previous->position : all_aps_centroid(env);
            fix.residual_norm = std::numeric_limits<double>::infinity();
            fix.iterations = 0;
            fix.converged = false;
            AssessOptions assess_opts;
            assess_opts.good_dop_max = cfg.good_dop_max;
            assess_opts.dimension = cfg.dimension;
            fix.assessment = detail::assess_skip_degenerate(env, scan, fix.position, assess_opts);
            fix.assessment.dop = std::numeric_limits<double>::infinity();
            if (fix.assessment.classification == Classification::Good) {
                fix.assessment.classification = Classification::Degraded;
            }
            out.push_back(std::move(fix));
        }
        previous = &out.back();
    }
    return out;
}

}  // namespace wifidop
