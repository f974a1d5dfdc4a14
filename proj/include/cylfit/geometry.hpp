#pragma once

// Moment representation of lines in 3D and point/cylinder distances.
//
// A line is stored as a unit direction a plus its moment b about the origin,
// the pair satisfying [r, a] = b for every point r of the line (square
// brackets denote the cross product). The moment is independent of which
// point of the line produced it, so the representation is parameter-free.

#include <vector>

#include "cylfit/vec3.hpp"

namespace cylfit {

class AxisLine {
public:
    // Builds the line from a direction and a moment. The direction is
    // normalized, b is re-orthogonalized against a (the component along a is
    // removed), and the sign ambiguity of (a, b) vs (-a, -b) is resolved by
    // making the largest-magnitude component of a positive.
    AxisLine(const Vec3& direction, const Vec3& moment);

    const UnitVec3& direction() const { return a_; }
    const Vec3& moment() const { return b_; }

private:
    UnitVec3 a_;
    Vec3 b_;
};

struct Cylinder {
    Cylinder(const AxisLine& axis_, double rho_) : axis(axis_), rho(rho_) {
        if (!(rho_ > 0.0) || !std::isfinite(rho_))
            throw std::invalid_argument("Cylinder: radius must be positive and finite");
    }

    AxisLine axis;
    double rho;
};

struct PointCloud {
    std::vector<Vec3> points;

    std::size_t size() const { return points.size(); }
};

/// Throws std::invalid_argument unless the cloud has n >= 1 finite points.
void validate_cloud(const PointCloud& cloud);

/// Line through r0 with the given direction; the moment is [r0, a].
AxisLine line_from_point_direction(const Vec3& r0, const Vec3& dir);

/// The point of the line closest to the origin, [a, b].
Vec3 axis_point_nearest_origin(const AxisLine& axis);

/// Distance from r to the line, |[r, a] - b|.
double distance_to_axis(const AxisLine& axis, const Vec3& r);

/// Distance from r to the cylinder surface, |rho_i - rho|.
double surface_distance(const Cylinder& cyl, const Vec3& r);

/// Inverse of c = [a, b] on the subspace c ⊥ a: returns b = -[a, c].
Vec3 moment_from_c(const UnitVec3& a, const Vec3& c);

/// Returns the same geometric line with the canonical sign of a. AxisLine
/// construction already canonicalizes, so this is idempotent.
AxisLine canonicalize_axis(const AxisLine& axis);

} // namespace cylfit
