#include "cylfit/sym_mat3.hpp"

#include <algorithm>
#include <cmath>

namespace cylfit {

namespace {

double off_diagonal_norm(const double a[3][3]) {
    return std::sqrt(a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]);
}

} // namespace

EigenDecomposition3 eigen_symmetric3(const SymMat3& m) {
    double a[3][3] = {{m.xx, m.xy, m.xz}, {m.xy, m.yy, m.yz}, {m.xz, m.yz, m.zz}};
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    const double scale = std::fabs(m.xx) + std::fabs(m.yy) + std::fabs(m.zz) +
                         2.0 * (std::fabs(m.xy) + std::fabs(m.xz) + std::fabs(m.yz));
    const double threshold = 1e-14 * scale;

    for (int sweep = 0; sweep < 64 && off_diagonal_norm(a) > threshold; ++sweep) {
        for (int p = 0; p < 3; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                const double apq = a[p][q];
                if (std::fabs(apq) <= 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a[p][p], aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = a[q][p] = 0.0;
                for (int r = 0; r < 3; ++r) {
                    if (r != p && r != q) {
                        const double arp = a[r][p], arq = a[r][q];
                        a[r][p] = a[p][r] = arp - s * (arq + tau * arp);
                        a[r][q] = a[q][r] = arq + s * (arp - tau * arq);
                    }
                    const double vrp = v[r][p], vrq = v[r][q];
                    v[r][p] = vrp - s * (vrq + tau * vrp);
                    v[r][q] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a[i][i] < a[j][j]; });

    EigenDecomposition3 out;
    for (int k = 0; k < 3; ++k) {
        const int c = order[k];
        out.values[k] = a[c][c];
        out.vectors[k] = canonical_sign(Vec3{v[0][c], v[1][c], v[2][c]});
    }
    return out;
}

} // namespace cylfit
