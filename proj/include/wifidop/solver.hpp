#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wifidop/dop.hpp"

namespace wifidop {

struct SolverConfig {
    int max_iterations = 50;
    double step_tolerance = 1e-6;  // meters
    /// Explicit starting point; when unset the centroid of the qualified APs is used.
    std::optional<Vec3> initial_guess;
    PropagationModel model = PropagationModel::friis();
    int dimension = 3;  // 2 solves for x,y with z fixed at the initial guess
    /// Largest DOP still classified Good in the attached assessment.
    double good_dop_max = 5.0;
};

struct PositionFix {
    Vec3 position = Vec3::Zero();
    double residual_norm = 0.0;  // Euclidean norm of the range residuals, meters
    int iterations = 0;
    bool converged = false;
    DopAssessment assessment;
};

/// One model-inverted range per qualified AP, in qualified (id) order.
/// Throws InsufficientObservations when no AP qualifies.
std::vector<std::pair<std::string, double>>
ranges_from_scan(const Environment& env, const RssScan& scan,
                 const PropagationModel& model);

/// Gradient of the predicted range d(p) = ||p - ap|| with respect to p.
/// This is the Jacobian row the solver iterates with (the negation of the
/// user->AP unit vector stored in GeometryMatrix).
Vec3 range_jacobian_row(const Vec3& ap_position, const Vec3& estimate);

/// Gauss-Newton trilateration: repeatedly linearizes the range system at the
/// current estimate and solves the normal equations, halving the step up to
/// 8 times whenever the full step would increase the residual norm. The range
/// residual has mirror-image local minima, so the iteration is run both from
/// the configured start and from a closed-form linear trilateration estimate;
/// the lower-residual result wins. Returns the fix with a DopAssessment
/// evaluated at the final estimate.
/// Throws InsufficientObservations (fewer than dimension+1 qualified APs) and
/// SingularGeometry (singular normal matrix, e.g. collinear APs).
/// Non-convergence is not an error: the best iterate is returned with
/// converged = false.
PositionFix solve(const Environment& env, const RssScan& scan, const SolverConfig& cfg);

/// Per-scan solve with warm starts: from the second scan onward the initial
/// guess is the previous fix. Scans failing the solver's preconditions yield
/// an embedded fix (converged = false, infinite DOP, position carried over
/// from the previous fix or the AP centroid when there is none).
std::vector<PositionFix> solve_trajectory(const Environment& env,
                                          const std::vector<RssScan>& scans,
                                          const SolverConfig& cfg);

}  // namespace wifidop
