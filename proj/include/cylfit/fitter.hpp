#pragma once

// Minimization of the reduced quartic objective over the unit sphere of axis
// directions, closed-form back-substitution to the full cylinder, and the
// end-to-end fit pipeline.

#include <optional>
#include <string>
#include <vector>

#include "cylfit/moments.hpp"

namespace cylfit {

struct FitConfig {
    int grid_count = 2000;          // hemisphere seed directions
    int multistart_count = 8;       // best seeds refined
    double tol_stationarity = 1e-12; // relative, see stationarity_residual
    int max_refine_iters = 100;
    double rank_eps = kDefaultRankEps;
    bool emit_residuals = false;
    int threads = 1;                // parallel seed evaluation; result is
                                    // identical for every thread count
};

struct RefineResult {
    UnitVec3 direction;
    double objective;
    double stationarity;
    int iterations;
    bool converged;
    std::vector<double> objective_trace; // non-increasing by construction
};

struct FitDiagnostics {
    double stationarity_residual = 0.0;
    int refine_iterations = 0;
    int seeds_evaluated = 0;
    double objective_at_solution = 0.0;
    // refined minimizers whose objective is within 1e-9 relative of the best;
    // the winner is always the first entry
    std::vector<Vec3> tied_candidates;
};

struct CylinderFit {
    std::optional<Cylinder> cylinder;   // absent on degenerate refusal
    double dbar2 = 0.0;                 // length^4
    double rms_distance = 0.0;          // length
    std::optional<std::vector<double>> residuals; // per-point surface distances
    DegeneracyClass degeneracy = DegeneracyClass::kNonDegenerate;
    std::string message;                // refusal/warning explanation
    FitDiagnostics diagnostics;
};

/// The reduced objective F(a) for a unit direction, via tensor contraction.
double reduced_objective(const QuarticObjective& q, const UnitVec3& a);

/// Euclidean gradient of the homogeneous extension of F.
Vec3 objective_gradient(const QuarticObjective& q, const Vec3& a);

/// |[grad F(a), a]| normalized by the largest tensor component. Zero exactly
/// at constrained stationary points of F on the sphere.
double stationarity_residual(const QuarticObjective& q, const UnitVec3& a);

/// Solves 2 Q c = L for a non-degenerate form: c = sum_k (e_k, L) e_k / (2 lambda_k).
Vec3 optimal_c(const NonFlatnessForm& form, const Vec3& l, double rank_eps = kDefaultRankEps);

/// rho^2 = mean of squared axis distances. Throws DegenerateInputError when
/// every point lies on the axis.
double optimal_radius(const PointCloud& cloud, const AxisLine& axis);

/// The biquadratic deflection (1/n) sum (rho_i^2 - rho^2)^2 of the cylinder
/// (axis, rho); minimal over rho at the optimal_radius value.
double dbar2_direct(const PointCloud& cloud, const AxisLine& axis, double rho);

/// Deterministic near-uniform covering of one hemisphere by a Fibonacci
/// spiral, every direction canonical-sign. count >= 8.
std::vector<UnitVec3> sphere_seeds(int count);

/// Projected-gradient descent on the sphere (Barzilai-Borwein step, Armijo
/// halving line search) followed by a tangent-plane curvature polish; both
/// phases are certified by the stationarity residual and never increase the
/// objective.
RefineResult refine_on_sphere(const QuarticObjective& q, const UnitVec3& a0,
                              const FitConfig& cfg);

/// Full pipeline: moments, degeneracy gate, seeded quartic minimization,
/// back-substitution a -> c -> b -> rho, error evaluation.
CylinderFit fit_cylinder(const PointCloud& cloud, const FitConfig& cfg = {});

} // namespace cylfit
