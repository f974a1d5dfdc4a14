#pragma once

// Independent brute-force and finite-difference verifiers. These evaluate the
// definitional (unreduced) error formulas straight from the points and share
// no objective-evaluation code with the fitter's tensor path.

#include "cylfit/fitter.hpp"

namespace cylfit {

struct GridSearchResult {
    UnitVec3 best_direction;
    double best_value;
    int resolution;
};

/// The biquadratic deflection evaluated by definition: (1/n) sum of
/// d_i^2 (2 rho + d_i)^2 for exterior points and d_i^2 (2 rho - d_i)^2 for
/// interior points.
double biquadratic_error_by_definition(const PointCloud& cloud, const Cylinder& cyl);

/// Root mean square surface distance, sqrt((1/n) sum d_i^2).
double rms_error(const PointCloud& cloud, const Cylinder& cyl);

/// The reduced objective evaluated directly from raw point sums (uncentered
/// L and M) followed by the eigenvalue elimination. Intentionally a separate
/// evaluation path from QuarticObjective::contract.
double direct_reduced_objective(const PointCloud& cloud, const NonFlatnessForm& form,
                                const UnitVec3& a);

/// Exhaustive minimization of the reduced objective over a deterministic
/// hemisphere grid. resolution >= 100. Throws DegenerateInputError on
/// degenerate clouds.
GridSearchResult grid_best_axis(const PointCloud& cloud, int resolution);

/// Central finite differences of the homogeneous objective extension.
Vec3 finite_difference_gradient(const QuarticObjective& q, const Vec3& a, double h);

} // namespace cylfit
