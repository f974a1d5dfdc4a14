#pragma once

// Statistical moments of a point cloud: center of mass, the non-flatness
// operator Q with its eigensystem, the axis-dependent quantities L(a) and
// M(a), and the rank-4 coefficient tensor of the reduced quartic objective.

#include <array>

#include "cylfit/errors.hpp"
#include "cylfit/geometry.hpp"
#include "cylfit/sym_mat3.hpp"

namespace cylfit {

inline constexpr double kDefaultRankEps = 1e-9;

// Above this size the moment accumulations switch to compensated summation;
// the quartic sums square the condition number of the data.
inline constexpr std::size_t kCompensatedSummationThreshold = 100000;

enum class DegeneracyClass {
    kNonDegenerate,
    kSimpleDegenerate,   // coplanar cloud
    kDoubleDegenerate,   // collinear cloud
    kTripleDegenerate,   // coincident points
};

const char* to_string(DegeneracyClass c);

// Covariance-like operator Q of the cloud with its eigensystem. Null
// directions of Q are normals of planes containing the whole cloud.
struct NonFlatnessForm {
    SymMat3 q;                                // length^2 units
    std::array<double, 3> eigenvalues;        // ascending
    std::array<UnitVec3, 3> eigenvectors;     // orthonormal, canonical signs
    Vec3 center;                              // center of mass of the cloud
    double spread_squared;                    // trace of q
};

/// Arithmetic mean of the points. Throws std::invalid_argument when empty.
Vec3 center_of_mass(const PointCloud& cloud);

/// Q = (1/n) sum (r_i - r_cm)(r_i - r_cm)^T with sorted eigenpairs.
NonFlatnessForm nonflatness_operator(const PointCloud& cloud);

/// Counts eigenvalues below rank_eps * max(lambda3, 1e-30 * spread^2) and
/// maps the count 0/1/2/3 onto the four degeneracy classes.
DegeneracyClass classify_degeneracy(const NonFlatnessForm& form, double rank_eps);

/// L(a) = (1/n) sum (r_i - r_cm) |[r_i, a]|^2. Quadratic and homogeneous in
/// the direction argument, which therefore need not be unit length.
Vec3 l_vector(const PointCloud& cloud, const Vec3& axis_dir);

/// M(a) = (1/n) sum |[r_i, a]|^4 - ((1/n) sum |[r_i, a]|^2)^2, the variance
/// of the squared axis distances about the origin line. Quartic in a.
double m_scalar(const PointCloud& cloud, const Vec3& axis_dir);

// --- quartic coefficient tensor -------------------------------------------

struct TensorIndex {
    int i, j, k, q;
};

// Independent components of a fully symmetric rank-4 tensor over 3 indices,
// with the multiplicity each carries in the full contraction.
inline constexpr std::array<TensorIndex, 15> kIndependentIndices{{
    {0, 0, 0, 0}, {1, 1, 1, 1}, {2, 2, 2, 2},
    {0, 0, 0, 1}, {0, 0, 0, 2}, {0, 1, 1, 1},
    {1, 1, 1, 2}, {0, 2, 2, 2}, {1, 2, 2, 2},
    {0, 0, 1, 1}, {0, 0, 2, 2}, {1, 1, 2, 2},
    {0, 0, 1, 2}, {0, 1, 1, 2}, {0, 1, 2, 2},
}};

inline constexpr std::array<int, 15> kTensorMultiplicity{1, 1, 1, 4, 4, 4,
                                                         4, 4, 4, 6, 6, 6,
                                                         12, 12, 12};

namespace detail {
constexpr std::array<int, 81> make_component_lookup() {
    std::array<int, 81> table{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int q = 0; q < 3; ++q) {
                    int s[4] = {i, j, k, q};
                    for (int m = 0; m < 3; ++m)
                        for (int n = m + 1; n < 4; ++n)
                            if (s[n] < s[m]) {
                                const int t = s[m];
                                s[m] = s[n];
                                s[n] = t;
                            }
                    int pos = 0;
                    for (int c = 0; c < 15; ++c) {
                        const TensorIndex& t = kIndependentIndices[c];
                        if (t.i == s[0] && t.j == s[1] && t.k == s[2] && t.q == s[3]) pos = c;
                    }
                    table[((i * 3 + j) * 3 + k) * 3 + q] = pos;
                }
    return table;
}
inline constexpr std::array<int, 81> kComponentLookup = make_component_lookup();
} // namespace detail

/// Position of D_{ijkq} among the 15 independent components.
constexpr int tensor_component_index(int i, int j, int k, int q) {
    return detail::kComponentLookup[((i * 3 + j) * 3 + k) * 3 + q];
}

// The reduced objective F(a) as a fully symmetric rank-4 tensor expressed in
// the eigenbasis of the non-flatness operator. Contracting with a unit
// vector four times yields F(a); the homogeneous extension is defined for
// every vector.
class QuarticObjective {
public:
    QuarticObjective(const std::array<double, 15>& components, const NonFlatnessForm& form);

    /// F extended homogeneously: the full contraction D v^4, v in world frame.
    double contract(const Vec3& v) const;

    /// Euclidean gradient of the homogeneous extension, 4 D v^3 (world frame).
    Vec3 gradient(const Vec3& v) const;

    /// Hessian of the homogeneous extension, 12 D v^2 (world frame).
    SymMat3 hessian(const Vec3& v) const;

    const std::array<double, 15>& components() const { return d_; }
    const std::array<UnitVec3, 3>& basis() const { return form_.eigenvectors; }
    const NonFlatnessForm& form() const { return form_; }

    /// Largest |D_ijkq|; the natural length^4 scale for residual tests.
    double max_abs_component() const { return max_abs_; }

private:
    Vec3 to_basis(const Vec3& v) const;
    Vec3 from_basis(const Vec3& v) const;

    std::array<double, 15> d_;
    NonFlatnessForm form_;
    double max_abs_;
};

/// Assembles the quartic tensor of the cloud in the eigenbasis of `form`.
/// Throws DegenerateInputError unless the form is non-degenerate (the
/// eliminations divide by every eigenvalue).
QuarticObjective quartic_tensor(const PointCloud& cloud, const NonFlatnessForm& form,
                                double rank_eps = kDefaultRankEps);

} // namespace cylfit
