#pragma once

#include <cmath>
#include <stdexcept>

namespace cylfit {

struct Vec3 {
    double x{0.0}, y{0.0}, z{0.0};

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }

    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y,
            a.z * b.x - a.x * b.z,
            a.x * b.y - a.y * b.x};
}

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

inline bool is_finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Index of the largest-magnitude component; ties resolved to the first one.
inline int dominant_component(const Vec3& v) {
    const double ax = std::fabs(v.x), ay = std::fabs(v.y), az = std::fabs(v.z);
    if (ax >= ay && ax >= az) return 0;
    if (ay >= az) return 1;
    return 2;
}

/// Flips the sign so the largest-magnitude component is positive.
inline Vec3 canonical_sign(const Vec3& v) {
    return v[dominant_component(v)] < 0.0 ? -v : v;
}

inline bool lexicographically_less(const Vec3& a, const Vec3& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
}

// A Vec3 constrained to unit length. Construction renormalizes, so the
// invariant | |v| - 1 | <= 1e-12 holds for every live instance.
class UnitVec3 {
public:
    explicit UnitVec3(const Vec3& v) {
        if (!is_finite(v)) throw std::invalid_argument("UnitVec3: non-finite components");
        const double n = norm(v);
        if (n <= 0.0) throw std::invalid_argument("UnitVec3: zero-length vector");
        v_ = v / n;
        // one more pass kills the last ulp when |v| is far from 1
        v_ = v_ / norm(v_);
    }

    const Vec3& vec() const { return v_; }
    operator const Vec3&() const { return v_; }

    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double z() const { return v_.z; }

private:
    Vec3 v_;
};

} // namespace cylfit
