#include "wifidop/dop.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace wifidop {

namespace {

constexpr double kMinRange = 1e-9;         // meters; below this a row is degenerate
constexpr double kSingularRelDet = 1e-10;  // scale-aware singularity threshold

double trace_dop(const Eigen::MatrixXd& normal, int dimension) {
    const double trace = normal.trace();
    if (!(trace > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    const double scale = std::pow(trace / dimension, dimension);
    if (normal.determinant() < kSingularRelDet * scale) {
        return std::numeric_limits<double>::infinity();
    }
    return std::sqrt(normal.inverse().trace());
}

/// Accumulates H^T W H, projecting and re-normalizing rows to the x,y plane in
/// 2-D mode. Rows with no horizontal component carry no 2-D information and
/// are dropped. Returns the number of rows that entered the normal matrix.
std::size_t accumulate_normal(const GeometryMatrix& geometry,
                              const std::vector<double>* weights, int dimension,
                              Eigen::MatrixXd& normal) {
    normal = Eigen::MatrixXd::Zero(dimension, dimension);
    std::size_t used = 0;
    for (std::size_t k = 0; k < geometry.rows.size(); ++k) {
        const double w = weights ? (*weights)[k] : 1.0;
        if (dimension == 3) {
            normal += w * (geometry.rows[k] * geometry.rows[k].transpose());
            ++used;
        } else {
            Eigen::Vector2d b = geometry.rows[k].head<2>();
            const double norm = b.norm();
            if (norm < 1e-12) {
                continue;
            }
            b /= norm;
            normal += w * (b * b.transpose());
            ++used;
        }
    }
    return used;
}

double dop_impl(const GeometryMatrix& geometry, const std::vector<double>* weights,
                int dimension) {
    if (dimension != 2 && dimension != 3) {
        throw ValidationError("dimension", "must be 2 or 3");
    }
    if (weights && weights->size() != geometry.rows.size()) {
        throw ValidationError("weights", "need exactly one weight per geometry row");
    }
    Eigen::MatrixXd normal;
    const std::size_t used = accumulate_normal(geometry, weights, dimension, normal);
    if (used < static_cast<std::size_t>(dimension) + 1) {
        return std::numeric_limits<double>::infinity();
    }
    return trace_dop(normal, dimension);
}

DopAssessment assess_impl(const Environment& env, const RssScan& scan, const Vec3& user,
                          const AssessOptions& options, bool skip_degenerate) {
    const int dimension = options.dimension.value_or(env.dimension);
    if (dimension != 2 && dimension != 3) {
        throw ValidationError("dimension", "must be 2 or 3");
    }

    DopAssessment out;
    const auto visible = visible_aps(env, scan);
    auto [qualified, excluded] = qualify_aps(env, visible, scan);
    out.visible_count = static_cast<int>(visible.size());
    out.qualified_count = static_cast<int>(qualified.size());
    out.excluded_aps = std::move(excluded);

    if (out.qualified_count < dimension + 1) {
        out.dop = std::numeric_limits<double>::infinity();
        out.classification = Classification::Insufficient;
        return out;
    }

    GeometryMatrix geometry;
    std::vector<std::string> used_aps;
    used_aps.reserve(qualified.size());
    if (skip_degenerate) {
        for (const auto& id : qualified) {
            const Vec3 diff = env.ap(id).position - user;
            if (diff.norm() < kMinRange) {
                continue;
            }
            used_aps.push_back(id);
        }
        geometry = build_geometry(env, user, used_aps);
    } else {
        used_aps = qualified;
        geometry = build_geometry(env, user, used_aps);
    }

    if (options.weighting_model) {
        std::vector<double> weights;
        weights.reserve(used_aps.size());
        for (const auto& id : used_aps) {
            const double reading = scan.readings.at(id);
            const double signal =
                options.weighting_model->variant == PropagationModel::Variant::SnapWps
                    ? -mw_to_dbm(reading)
                    : reading;
            const double c =
                range_sensitivity(*options.weighting_model, env.ap(id), env.receiver, signal);
            weights.push_back(1.0 / (c * c));
        }
        out.dop = compute_weighted_dop(geometry, weights, dimension);
    } else {
        out.dop = compute_dop(geometry, dimension);
    }

    if (!std::isfinite(out.dop)) {
        out.classification = Classification::Degraded;  // enough APs but singular geometry
    } else if (out.dop <= options.good_dop_max) {
        out.classification = Classification::Good;
    } else {
        out.classification = Classification::Degraded;
    }
    return out;
}

}  // namespace

std::string to_string(Classification c) {
    switch (c) {
        case Classification::Good:
            return "Good";
        case Classification::Degraded:
            return "Degraded";
        case Classification::Insufficient:
            return "Insufficient";
    }
    return "?";
}

Classification classification_from_string(const std::string& s) {
    if (s == "Good") {
        return Classification::Good;
    }
    if (s == "Degraded") {
        return Classification::Degraded;
    }
    if (s == "Insufficient") {
        return Classification::Insufficient;
    }
    throw ValidationError("classification", "unknown value '" + s + "'");
}

std::vector<std::string> visible_aps(const Environment& env, const RssScan& scan) {
    std::vector<std::string> out;
    // std::map keeps readings ordered by id, which fixes the output order.
    for (const auto& [id, reading] : scan.readings) {
        if (!env.find(id)) {
            throw UnknownAp("scan references unknown access point '" + id + "'");
        }
        if (reading > 0.0) {
            out.push_back(id);
        }
    }
    return out;
}

std::pair<std::vector<std::string>, std::vector<ExcludedAp>>
qualify_aps(const Environment& env, const std::vector<std::string>& visible,
            const RssScan& scan) {
    std::vector<std::string> qualified;
    std::vector<ExcludedAp> excluded;
    for (const auto& id : visible) {
        if (scan.readings.at(id) >= env.ss_threshold) {
            qualified.push_back(id);
        } else {
            excluded.push_back({id, ExclusionReason::BelowThreshold});
        }
    }
    return {std::move(qualified), std::move(excluded)};
}

GeometryMatrix build_geometry(const Environment& env, const Vec3& user,
                              const std::vector<std::string>& aps) {
    GeometryMatrix geometry;
    geometry.rows.reserve(aps.size());
    geometry.ranges.reserve(aps.size());
    for (const auto& id : aps) {
        const Vec3 diff = env.ap(id).position - user;
        const double range = diff.norm();
        if (range < kMinRange) {
            throw DegenerateRange("user position coincides with access point '" + id + "'");
        }
        geometry.rows.push_back(diff / range);
        geometry.ranges.push_back(range);
    }
    return geometry;
}

double compute_dop(const GeometryMatrix& geometry, int dimension) {
    return dop_impl(geometry, nullptr, dimension);
}

double compute_weighted_dop(const GeometryMatrix& geometry,
                            const std::vector<double>& weights, int dimension) {
    return dop_impl(geometry, &weights, dimension);
}

DopAssessment assess(const Environment& env, const RssScan& scan, const Vec3& user,
                     const AssessOptions& options) {
    return assess_impl(env, scan, user, options, false);
}

namespace detail {

DopAssessment assess_skip_degenerate(const Environment& env, const RssScan& scan,
                                     const Vec3& user, const AssessOptions& options) {
    return assess_impl(env, scan, user, options, true);
}

}  // namespace detail

}  // namespace wifidop
