#include "cylfit/geometry.hpp"

namespace cylfit {

AxisLine::AxisLine(const Vec3& direction, const Vec3& moment) : a_(direction), b_(moment) {
    if (!is_finite(moment)) throw std::invalid_argument("AxisLine: non-finite moment");
    // Remove any component of b along a so the line equation [r, a] = b has
    // solutions. Exact inputs pass through unchanged up to rounding.
    b_ -= a_.vec() * dot(a_.vec(), b_);
    if (a_.vec()[dominant_component(a_.vec())] < 0.0) {
        a_ = UnitVec3(-a_.vec());
        b_ = -b_;
    }
}

void validate_cloud(const PointCloud& cloud) {
    if (cloud.points.empty()) throw std::invalid_argument("point cloud is empty");
    for (const Vec3& p : cloud.points)
        if (!is_finite(p)) throw std::invalid_argument("point cloud contains non-finite points");
}

AxisLine line_from_point_direction(const Vec3& r0, const Vec3& dir) {
    if (!is_finite(r0)) throw std::invalid_argument("line_from_point_direction: non-finite point");
    const UnitVec3 a(dir); // rejects zero-length and non-finite directions
    return AxisLine(a.vec(), cross(r0, a.vec()));
}

Vec3 axis_point_nearest_origin(const AxisLine& axis) {
    return cross(axis.direction().vec(), axis.moment());
}

double distance_to_axis(const AxisLine& axis, const Vec3& r) {
    return norm(cross(r, axis.direction().vec()) - axis.moment());
}

double surface_distance(const Cylinder& cyl, const Vec3& r) {
    return std::fabs(distance_to_axis(cyl.axis, r) - cyl.rho);
}

Vec3 moment_from_c(const UnitVec3& a, const Vec3& c) {
    return -cross(a.vec(), c);
}

AxisLine canonicalize_axis(const AxisLine& axis) {
    return AxisLine(axis.direction().vec(), axis.moment());
}

} // namespace cylfit
