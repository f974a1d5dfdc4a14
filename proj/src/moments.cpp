#include "cylfit/moments.hpp"

#include <algorithm>
#include <cmath>

namespace cylfit {

namespace {

// Plain sum for small clouds, Neumaier compensation for large ones.
class RunningSum {
public:
    explicit RunningSum(bool compensated = false) : compensated_(compensated) {}

    void add(double x) {
        if (!compensated_) {
            sum_ += x;
            return;
        }
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
    bool compensated_;
};

// D += weight * sym(A (x) A) restricted to the 15 independent components.
void accumulate_symmetric_square(std::array<RunningSum, 15>& d, const SymMat3& a, double weight) {
    for (int n = 0; n < 15; ++n) {
        const TensorIndex& t = kIndependentIndices[n];
        const double term = a(t.i, t.j) * a(t.k, t.q) + a(t.i, t.k) * a(t.j, t.q) +
                            a(t.i, t.q) * a(t.j, t.k);
        d[n].add(weight * term / 3.0);
    }
}

} // namespace

const char* to_string(DegeneracyClass c) {
    switch (c) {
        case DegeneracyClass::kNonDegenerate: return "none";
        case DegeneracyClass::kSimpleDegenerate: return "simple";
        case DegeneracyClass::kDoubleDegenerate: return "double";
        case DegeneracyClass::kTripleDegenerate: return "triple";
    }
    return "unknown";
}

Vec3 center_of_mass(const PointCloud& cloud) {
    validate_cloud(cloud);
    const bool comp = cloud.size() > kCompensatedSummationThreshold;
    RunningSum sx(comp), sy(comp), sz(comp);
    for (const Vec3& p : cloud.points) {
        sx.add(p.x);
        sy.add(p.y);
        sz.add(p.z);
    }
    const double n = static_cast<double>(cloud.size());
    return {sx.value() / n, sy.value() / n, sz.value() / n};
}

NonFlatnessForm nonflatness_operator(const PointCloud& cloud) {
    const Vec3 cm = center_of_mass(cloud);
    const bool comp = cloud.size() > kCompensatedSummationThreshold;
    std::array<RunningSum, 6> s{RunningSum(comp), RunningSum(comp), RunningSum(comp),
                                RunningSum(comp), RunningSum(comp), RunningSum(comp)};
    for (const Vec3& p : cloud.points) {
        const Vec3 z = p - cm;
        s[0].add(z.x * z.x);
        s[1].add(z.x * z.y);
        s[2].add(z.x * z.z);
        s[3].add(z.y * z.y);
        s[4].add(z.y * z.z);
        s[5].add(z.z * z.z);
    }
    const double n = static_cast<double>(cloud.size());
    const SymMat3 q{s[0].value() / n, s[1].value() / n, s[2].value() / n,
                    s[3].value() / n, s[4].value() / n, s[5].value() / n};

    const EigenDecomposition3 eig = eigen_symmetric3(q);
    return NonFlatnessForm{q,
                           eig.values,
                           {UnitVec3(eig.vectors[0]), UnitVec3(eig.vectors[1]),
                            UnitVec3(eig.vectors[2])},
                           cm,
                           q.trace()};
}

DegeneracyClass classify_degeneracy(const NonFlatnessForm& form, double rank_eps) {
    if (!(rank_eps > 0.0)) throw std::invalid_argument("classify_degeneracy: rank_eps must be > 0");
    const double eps_abs = 1e-30 * form.spread_squared;
    const double threshold = rank_eps * std::max(form.eigenvalues[2], eps_abs);
    int zeros = 0;
    for (double lambda : form.eigenvalues)
        if (lambda <= threshold) ++zeros;
    switch (zeros) {
        case 0: return DegeneracyClass::kNonDegenerate;
        case 1: return DegeneracyClass::kSimpleDegenerate;
        case 2: return DegeneracyClass::kDoubleDegenerate;
        default: return DegeneracyClass::kTripleDegenerate;
    }
}

Vec3 l_vector(const PointCloud& cloud, const Vec3& axis_dir) {
    const Vec3 cm = center_of_mass(cloud);
    const bool comp = cloud.size() > kCompensatedSummationThreshold;
    RunningSum sx(comp), sy(comp), sz(comp);
    for (const Vec3& p : cloud.points) {
        const double w = norm2(cross(p, axis_dir));
        const Vec3 z = p - cm;
        sx.add(z.x * w);
        sy.add(z.y * w);
        sz.add(z.z * w);
    }
    const double n = static_cast<double>(cloud.size());
    return {sx.value() / n, sy.value() / n, sz.value() / n};
}

double m_scalar(const PointCloud& cloud, const Vec3& axis_dir) {
    validate_cloud(cloud);
    const bool comp = cloud.size() > kCompensatedSummationThreshold;
    RunningSum sw(comp);
    for (const Vec3& p : cloud.points) sw.add(norm2(cross(p, axis_dir)));
    const double n = static_cast<double>(cloud.size());
    const double mean_w = sw.value() / n;

    RunningSum svar(comp);
    for (const Vec3& p : cloud.points) {
        const double d = norm2(cross(p, axis_dir)) - mean_w;
        svar.add(d * d);
    }
    return svar.value() / n;
}

QuarticObjective::QuarticObjective(const std::array<double, 15>& components,
                                   const NonFlatnessForm& form)
    : d_(components), form_(form) {
    max_abs_ = 0.0;
    for (double c : d_) max_abs_ = std::max(max_abs_, std::fabs(c));
}

Vec3 QuarticObjective::to_basis(const Vec3& v) const {
    return {dot(form_.eigenvectors[0].vec(), v), dot(form_.eigenvectors[1].vec(), v),
            dot(form_.eigenvectors[2].vec(), v)};
}

Vec3 QuarticObjective::from_basis(const Vec3& v) const {
    return form_.eigenvectors[0].vec() * v.x + form_.eigenvectors[1].vec() * v.y +
           form_.eigenvectors[2].vec() * v.z;
}

double QuarticObjective::contract(const Vec3& v) const {
    const Vec3 al = to_basis(v);
    const double a1 = al.x, a2 = al.y, a3 = al.z;
    const std::array<double, 15>& d = d_;
    return d[0] * a1 * a1 * a1 * a1 + d[1] * a2 * a2 * a2 * a2 + d[2] * a3 * a3 * a3 * a3 +
           4.0 * (d[3] * a1 * a1 * a1 * a2 + d[4] * a1 * a1 * a1 * a3 +
                  d[5] * a1 * a2 * a2 * a2 + d[6] * a2 * a2 * a2 * a3 +
                  d[7] * a1 * a3 * a3 * a3 + d[8] * a2 * a3 * a3 * a3) +
           6.0 * (d[9] * a1 * a1 * a2 * a2 + d[10] * a1 * a1 * a3 * a3 +
                  d[11] * a2 * a2 * a3 * a3) +
           12.0 * (d[12] * a1 * a1 * a2 * a3 + d[13] * a1 * a2 * a2 * a3 +
                   d[14] * a1 * a2 * a3 * a3);
}

Vec3 QuarticObjective::gradient(const Vec3& v) const {
    const Vec3 al = to_basis(v);
    const double c[3] = {al.x, al.y, al.z};
    double g[3] = {0.0, 0.0, 0.0};
    for (int m = 0; m < 3; ++m) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int q = 0; q < 3; ++q)
                    s += d_[tensor_component_index(m, j, k, q)] * c[j] * c[k] * c[q];
        g[m] = 4.0 * s;
    }
    return from_basis({g[0], g[1], g[2]});
}

SymMat3 QuarticObjective::hessian(const Vec3& v) const {
    const Vec3 al = to_basis(v);
    const double c[3] = {al.x, al.y, al.z};
    double hb[3][3];
    for (int m = 0; m < 3; ++m)
        for (int n = m; n < 3; ++n) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
                for (int q = 0; q < 3; ++q)
                    s += d_[tensor_component_index(m, n, k, q)] * c[k] * c[q];
            hb[m][n] = hb[n][m] = 12.0 * s;
        }
    // rotate back to the world frame: H = E Hb E^T
    const Vec3 e[3] = {form_.eigenvectors[0].vec(), form_.eigenvectors[1].vec(),
                       form_.eigenvectors[2].vec()};
    double hw[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) {
            const double h = hb[m][n];
            if (h == 0.0) continue;
            for (int r = 0; r < 3; ++r)
                for (int s2 = 0; s2 < 3; ++s2) hw[r][s2] += h * e[m][r] * e[n][s2];
        }
    return {hw[0][0], hw[0][1], hw[0][2], hw[1][1], hw[1][2], hw[2][2]};
}

QuarticObjective quartic_tensor(const PointCloud& cloud, const NonFlatnessForm& form,
                                double rank_eps) {
    validate_cloud(cloud);
    if (classify_degeneracy(form, rank_eps) != DegeneracyClass::kNonDegenerate)
        throw DegenerateInputError(
            "quartic_tensor: degenerate cloud (the elimination divides by every eigenvalue)");

    const Vec3 e[3] = {form.eigenvectors[0].vec(), form.eigenvectors[1].vec(),
                       form.eigenvectors[2].vec()};
    const double n = static_cast<double>(cloud.size());
    const double inv_n = 1.0 / n;
    const bool comp = cloud.size() > kCompensatedSummationThreshold;

    // All sums run over centered points expressed in the eigenbasis. The
    // reduced objective is invariant under translating the cloud, and the
    // centered sums avoid the cancellation that raw fourth-order moments
    // suffer for clouds far from the origin.
    std::array<RunningSum, 15> d;
    d.fill(RunningSum(comp));
    std::array<RunningSum, 6> sbar_acc;
    sbar_acc.fill(RunningSum(comp));
    std::array<std::array<RunningSum, 6>, 3> g_acc;
    for (auto& row : g_acc) row.fill(RunningSum(comp));

    for (const Vec3& p : cloud.points) {
        const Vec3 z = p - form.center;
        const Vec3 y{dot(e[0], z), dot(e[1], z), dot(e[2], z)};
        const SymMat3 s = cross_norm_form(y);
        accumulate_symmetric_square(d, s, inv_n);
        const double entries[6] = {s.xx, s.xy, s.xz, s.yy, s.yz, s.zz};
        for (int m = 0; m < 6; ++m) {
            sbar_acc[m].add(entries[m] * inv_n);
            for (int k = 0; k < 3; ++k) g_acc[k][m].add(y[k] * entries[m] * inv_n);
        }
    }

    std::array<double, 15> components{};
    for (int m = 0; m < 15; ++m) components[m] = d[m].value();

    const auto to_sym = [](const std::array<RunningSum, 6>& a) {
        return SymMat3{a[0].value(), a[1].value(), a[2].value(),
                       a[3].value(), a[4].value(), a[5].value()};
    };

    // subtract sym(S̄ (x) S̄) and sym(G_k (x) G_k) / lambda_k
    const SymMat3 sbar = to_sym(sbar_acc);
    std::array<SymMat3, 4> subtract{sbar, to_sym(g_acc[0]), to_sym(g_acc[1]), to_sym(g_acc[2])};
    const std::array<double, 4> weight{-1.0, -1.0 / form.eigenvalues[0],
                                       -1.0 / form.eigenvalues[1], -1.0 / form.eigenvalues[2]};
    for (int t = 0; t < 4; ++t) {
        const SymMat3& a = subtract[t];
        for (int m = 0; m < 15; ++m) {
            const TensorIndex& ti = kIndependentIndices[m];
            const double term = a(ti.i, ti.j) * a(ti.k, ti.q) + a(ti.i, ti.k) * a(ti.j, ti.q) +
                                a(ti.i, ti.q) * a(ti.j, ti.k);
            components[m] += weight[t] * term / 3.0;
        }
    }

    return QuarticObjective(components, form);
}

} // namespace cylfit
