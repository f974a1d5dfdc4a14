#pragma once

#include <array>

#include "cylfit/vec3.hpp"

namespace cylfit {

// Symmetric 3x3 matrix stored as its six independent entries.
struct SymMat3 {
    double xx{0.0}, xy{0.0}, xz{0.0}, yy{0.0}, yz{0.0}, zz{0.0};

    double operator()(int i, int j) const {
        static constexpr int map[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
        const double* e = &xx;
        return e[map[i][j]];
    }

    Vec3 apply(const Vec3& v) const {
        return {xx * v.x + xy * v.y + xz * v.z,
                xy * v.x + yy * v.y + yz * v.z,
                xz * v.x + yz * v.y + zz * v.z};
    }

    /// Quadratic form value v^T M v.
    double quad(const Vec3& v) const { return dot(v, apply(v)); }

    double trace() const { return xx + yy + zz; }

    SymMat3& operator+=(const SymMat3& o) {
        xx += o.xx; xy += o.xy; xz += o.xz;
        yy += o.yy; yz += o.yz; zz += o.zz;
        return *this;
    }

    SymMat3 operator*(double s) const { return {xx * s, xy * s, xz * s, yy * s, yz * s, zz * s}; }
};

/// vv^T scaled outer product is not needed; this is |v|^2 I - v v^T, the
/// matrix with a^T S a = |[v, a]|^2 for every a (Lagrange identity).
inline SymMat3 cross_norm_form(const Vec3& v) {
    const double n2 = norm2(v);
    return {n2 - v.x * v.x, -v.x * v.y, -v.x * v.z,
            n2 - v.y * v.y, -v.y * v.z,
            n2 - v.z * v.z};
}

struct EigenDecomposition3 {
    std::array<double, 3> values{};   // ascending
    std::array<Vec3, 3> vectors{};    // orthonormal, canonical signs
};

/// Eigenvalues and eigenvectors of a symmetric 3x3 matrix by cyclic Jacobi
/// rotations. Deterministic: fixed sweep order, ascending sort (stable under
/// ties), canonical eigenvector signs.
EigenDecomposition3 eigen_symmetric3(const SymMat3& m);

} // namespace cylfit
