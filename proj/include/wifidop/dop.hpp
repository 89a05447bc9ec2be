#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wifidop/propagation.hpp"
#include "wifidop/radio.hpp"

namespace wifidop {

/// Stacked unit direction vectors from the user towards each AP, with the
/// corresponding ranges. Rows span three columns; no clock-bias column exists
/// because RSS ranging has no receiver-clock unknown.
struct GeometryMatrix {
    std::vector<Vec3> rows;      // unit vectors (ap - user) / r
    std::vector<double> ranges;  // r_i > 0, meters

    std::size_t size() const { return rows.size(); }
};

enum class Classification { Good, Degraded, Insufficient };

std::string to_string(Classification c);
Classification classification_from_string(const std::string& s);

enum class ExclusionReason { BelowThreshold };

struct ExcludedAp {
    std::string id;
    ExclusionReason reason = ExclusionReason::BelowThreshold;
};

/// Outcome of the three-step qualifier: visibility census, threshold filter,
/// geometric DOP.
struct DopAssessment {
    int visible_count = 0;
    int qualified_count = 0;
    double dop = std::numeric_limits<double>::infinity();
    Classification classification = Classification::Insufficient;
    std::vector<ExcludedAp> excluded_aps;
};

struct AssessOptions {
    /// Largest DOP still classified Good.
    double good_dop_max = 5.0;
    /// Overrides the environment's dimension when set.
    std::optional<int> dimension;
    /// When set, the DOP is the signal-weighted variant
    /// sqrt(Tr((H^T W H)^-1)) with W = diag(1/c_i^2) from range_sensitivity.
    /// This is an extension; the default DOP is purely geometric.
    std::optional<PropagationModel> weighting_model;
};

/// APs with a reading > 0 mW, ordered by id. Throws UnknownAp for readings
/// that reference APs absent from the environment.
std::vector<std::string> visible_aps(const Environment& env, const RssScan& scan);

/// Splits the visible set by the environment's signal-strength threshold.
std::pair<std::vector<std::string>, std::vector<ExcludedAp>>
qualify_aps(const Environment& env, const std::vector<std::string>& visible,
            const RssScan& scan);

/// One unit row per AP, in input order. Throws DegenerateRange when the user
/// coincides with an AP.
GeometryMatrix build_geometry(const Environment& env, const Vec3& user,
                              const std::vector<std::string>& aps);

/// DOP = sqrt(Tr((H^T H)^-1)) over the 3x3 normal matrix, or the 2x2 one built
/// from re-normalized x,y row projections when dimension == 2. Returns
/// infinity when there are fewer than dimension+1 rows or the normal matrix is
/// singular (det(N) < 1e-10 * (Tr(N)/dim)^dim).
double compute_dop(const GeometryMatrix& geometry, int dimension);

/// Signal-weighted DOP sqrt(Tr((H^T W H)^-1)); one weight per row.
double compute_weighted_dop(const GeometryMatrix& geometry,
                            const std::vector<double>& weights, int dimension);

/// Runs the full qualifier chain at the given user position:
/// visible_aps -> qualify_aps -> build_geometry -> compute_dop.
/// Classification: Insufficient when fewer than dimension+1 APs qualify,
/// Good when the DOP is finite and at most good_dop_max, Degraded otherwise.
DopAssessment assess(const Environment& env, const RssScan& scan, const Vec3& user,
                     const AssessOptions& options = {});

namespace detail {
/// assess() variant that drops rows whose range to the user is below 1e-9 m
/// instead of throwing DegenerateRange; used by the solver, whose iterate may
/// land on an AP.
DopAssessment assess_skip_degenerate(const Environment& env, const RssScan& scan,
                                     const Vec3& user, const AssessOptions& options);
}  // namespace detail

}  // namespace wifidop
