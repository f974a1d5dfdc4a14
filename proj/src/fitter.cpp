#include "cylfit/fitter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace cylfit {

namespace {

constexpr double kArmijoConstant = 1e-4;
constexpr int kMaxHalvings = 60;
constexpr int kPolishIterations = 30;
constexpr double kTieRelTolerance = 1e-12;   // candidates considered equal
constexpr double kNearTieRelTolerance = 1e-9; // reported in diagnostics
constexpr double kZeroRadiusFactor = 1e-12;  // of the cloud spread

void validate_config(const FitConfig& cfg) {
    if (cfg.grid_count < 8) throw std::invalid_argument("FitConfig: grid_count must be >= 8");
    if (cfg.multistart_count < 1)
        throw std::invalid_argument("FitConfig: multistart_count must be >= 1");
    if (!(cfg.tol_stationarity > 0.0))
        throw std::invalid_argument("FitConfig: tol_stationarity must be > 0");
    if (cfg.max_refine_iters < 1)
        throw std::invalid_argument("FitConfig: max_refine_iters must be >= 1");
    if (!(cfg.rank_eps > 0.0)) throw std::invalid_argument("FitConfig: rank_eps must be > 0");
    if (cfg.threads < 1) throw std::invalid_argument("FitConfig: threads must be >= 1");
}

bool nearly_equal_rel(double a, double b, double rel) {
    return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b));
}

Vec3 normalized(const Vec3& v) { return v / norm(v); }

/// Deterministic orthonormal tangent basis at a unit vector.
void tangent_basis(const Vec3& a, Vec3& u, Vec3& v) {
    int smallest = 0;
    double best = std::fabs(a.x);
    if (std::fabs(a.y) < best) { smallest = 1; best = std::fabs(a.y); }
    if (std::fabs(a.z) < best) smallest = 2;
    Vec3 pick{0, 0, 0};
    if (smallest == 0) pick.x = 1.0;
    else if (smallest == 1) pick.y = 1.0;
    else pick.z = 1.0;
    u = normalized(cross(a, pick));
    v = cross(a, u);
}

struct Candidate {
    Vec3 direction;   // canonical sign
    double objective;
    double stationarity;
    int iterations;
};

std::string refusal_message(DegeneracyClass deg) {
    switch (deg) {
        case DegeneracyClass::kTripleDegenerate:
            return "all points coincide; every cylinder through the common point fits "
                   "equally well";
        case DegeneracyClass::kDoubleDegenerate:
            return "points are collinear; every cylinder whose surface contains the line "
                   "fits equally well";
        case DegeneracyClass::kSimpleDegenerate:
            return "warning: points are coplanar; the best-fitting cylinder is not unique";
        default:
            return "";
    }
}

} // namespace

double reduced_objective(const QuarticObjective& q, const UnitVec3& a) {
    return q.contract(a.vec());
}

Vec3 objective_gradient(const QuarticObjective& q, const Vec3& a) { return q.gradient(a); }

double stationarity_residual(const QuarticObjective& q, const UnitVec3& a) {
    const double scale = std::max(q.max_abs_component(), std::numeric_limits<double>::min());
    return norm(cross(q.gradient(a.vec()), a.vec())) / scale;
}

Vec3 optimal_c(const NonFlatnessForm& form, const Vec3& l, double rank_eps) {
    if (classify_degeneracy(form, rank_eps) != DegeneracyClass::kNonDegenerate)
        throw DegenerateInputError("optimal_c: degenerate form, 2Qc = L is not solvable");
    Vec3 c{0, 0, 0};
    for (int k = 0; k < 3; ++k) {
        const Vec3& e = form.eigenvectors[k].vec();
        c += e * (dot(e, l) / (2.0 * form.eigenvalues[k]));
    }
    return c;
}

double optimal_radius(const PointCloud& cloud, const AxisLine& axis) {
    validate_cloud(cloud);
    double sum = 0.0;
    for (const Vec3& p : cloud.points) {
        const double d = distance_to_axis(axis, p);
        sum += d * d;
    }
    const double mean = sum / static_cast<double>(cloud.size());
    if (mean <= 0.0)
        throw DegenerateInputError("optimal_radius: every point lies on the axis (zero radius)");
    return std::sqrt(mean);
}

double dbar2_direct(const PointCloud& cloud, const AxisLine& axis, double rho) {
    validate_cloud(cloud);
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw std::invalid_argument("dbar2_direct: rho must be finite and >= 0");
    const double rho2 = rho * rho;
    double sum = 0.0;
    for (const Vec3& p : cloud.points) {
        const double di = distance_to_axis(axis, p);
        const double delta = di * di - rho2;
        sum += delta * delta;
    }
    return sum / static_cast<double>(cloud.size());
}

std::vector<UnitVec3> sphere_seeds(int count) {
    if (count < 8) throw std::invalid_argument("sphere_seeds: count must be >= 8");
    const double golden_angle = M_PI * (1.0 + std::sqrt(5.0));
    std::vector<UnitVec3> seeds;
    seeds.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double z = (i + 0.5) / static_cast<double>(count); // one hemisphere
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double theta = golden_angle * static_cast<double>(i);
        const Vec3 v{r * std::cos(theta), r * std::sin(theta), z};
        seeds.emplace_back(canonical_sign(v));
    }
    return seeds;
}

RefineResult refine_on_sphere(const QuarticObjective& q, const UnitVec3& a0,
                              const FitConfig& cfg) {
    validate_config(cfg);
    const double scale = std::max(q.max_abs_component(), std::numeric_limits<double>::min());
    const double curvature_scale = 12.0 * scale;

    Vec3 a = a0.vec();
    double f = q.contract(a);
    if (!std::isfinite(f)) throw NumericFailureError("refine_on_sphere: non-finite objective");

    RefineResult out{UnitVec3(a), f, 0.0, 0, false, {f}};

    const double phase1_tol = std::max(cfg.tol_stationarity, 1e-7);
    double gamma = 1.0 / curvature_scale;
    Vec3 prev_a{}, prev_gt{};
    bool have_prev = false;

    auto residual_of = [&](const Vec3& dir, const Vec3& grad) {
        return norm(cross(grad, dir)) / scale;
    };

    // Phase 1: projected gradient with Barzilai-Borwein step and Armijo halving.
    double res = 0.0;
    for (int it = 0; it < cfg.max_refine_iters; ++it) {
        const Vec3 g = q.gradient(a);
        if (!is_finite(g)) throw NumericFailureError("refine_on_sphere: non-finite gradient");
        const Vec3 gt = g - a * dot(g, a);
        res = residual_of(a, g);
        if (res <= phase1_tol) break;

        if (have_prev) {
            const Vec3 s = a - prev_a;
            const Vec3 y = gt - prev_gt;
            const double sy = dot(s, y);
            if (sy > 0.0) gamma = dot(s, s) / sy;
        }
        gamma = std::clamp(gamma, 1e-6 / curvature_scale, 1e6 / curvature_scale);

        double step = gamma;
        bool accepted = false;
        Vec3 cand{};
        double fc = 0.0;
        const double gt2 = dot(gt, gt);
        for (int h = 0; h < kMaxHalvings; ++h) {
            cand = normalized(a - gt * step);
            fc = q.contract(cand);
            if (!std::isfinite(fc))
                throw NumericFailureError("refine_on_sphere: non-finite objective");
            if (fc <= f - kArmijoConstant * step * gt2) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // no descent step left at this scale

        prev_a = a;
        prev_gt = gt;
        have_prev = true;
        a = cand;
        f = fc;
        out.objective_trace.push_back(f);
        ++out.iterations;
    }

    // Phase 2: tangent-plane curvature polish. Steps are accepted only when
    // they shrink the stationarity residual without increasing the objective,
    // so the monotonicity and certificate contracts both survive.
    for (int it = 0; it < kPolishIterations; ++it) {
        const Vec3 g = q.gradient(a);
        res = residual_of(a, g);
        if (res <= cfg.tol_stationarity) break;

        Vec3 u, v;
        tangent_basis(a, u, v);
        const SymMat3 h = q.hessian(a);
        const double ga = dot(g, a);
        const Vec3 hu = h.apply(u), hv = h.apply(v);
        const double h11 = dot(u, hu) - ga;
        const double h12 = dot(u, hv);
        const double h22 = dot(v, hv) - ga;
        const double det = h11 * h22 - h12 * h12;
        if (std::fabs(det) <= 1e-300) break;
        const double g1 = dot(g, u), g2 = dot(g, v);
        const double d1 = (-g1 * h22 + g2 * h12) / det;
        const double d2 = (-g2 * h11 + g1 * h12) / det;

        const Vec3 cand = normalized(a + u * d1 + v * d2);
        const double fc = q.contract(cand);
        const Vec3 gc = q.gradient(cand);
        if (!std::isfinite(fc) || !is_finite(gc))
            throw NumericFailureError("refine_on_sphere: non-finite objective");
        const double resc = residual_of(cand, gc);
        if (resc < res && fc <= f) {
            a = cand;
            f = fc;
            res = resc;
            out.objective_trace.push_back(f);
            ++out.iterations;
        } else {
            break;
        }
    }

    out.direction = UnitVec3(a);
    out.objective = f;
    out.stationarity = res;
    out.converged = res <= cfg.tol_stationarity;
    return out;
}

CylinderFit fit_cylinder(const PointCloud& cloud, const FitConfig& cfg) {
    validate_config(cfg);
    validate_cloud(cloud);

    CylinderFit fit;
    const NonFlatnessForm form = nonflatness_operator(cloud);
    fit.degeneracy = classify_degeneracy(form, cfg.rank_eps);
    if (fit.degeneracy != DegeneracyClass::kNonDegenerate) {
        fit.message = refusal_message(fit.degeneracy);
        return fit;
    }

    const QuarticObjective q = quartic_tensor(cloud, form, cfg.rank_eps);

    // Seed stage: evaluate F on the hemisphere grid. The value array is
    // identical for every thread count, so the selection below is too.
    const std::vector<UnitVec3> seeds = sphere_seeds(cfg.grid_count);
    std::vector<double> values(seeds.size());
    const int threads = std::min<int>(cfg.threads, static_cast<int>(seeds.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < seeds.size(); ++i) values[i] = q.contract(seeds[i].vec());
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        const std::size_t chunk = (seeds.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(seeds.size(), lo + chunk);
            pool.emplace_back([&, lo, hi] {
                for (std::size_t i = lo; i < hi; ++i) values[i] = q.contract(seeds[i].vec());
            });
        }
        for (std::thread& t : pool) t.join();
    }

    std::vector<std::size_t> order(seeds.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });

    const int starts = std::min<int>(cfg.multistart_count, static_cast<int>(seeds.size()));
    std::vector<Candidate> candidates;
    candidates.reserve(static_cast<std::size_t>(starts));
    for (int s = 0; s < starts; ++s) {
        const RefineResult r = refine_on_sphere(q, seeds[order[s]], cfg);
        candidates.push_back(Candidate{canonical_sign(r.direction.vec()), r.objective,
                                       r.stationarity, r.iterations});
    }

    // Deterministic selection: minimal objective; among candidates equal
    // within 1e-12 relative, the lexicographically largest canonical a.
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const Candidate& c = candidates[i];
        const Candidate& b = candidates[best];
        if (nearly_equal_rel(c.objective, b.objective, kTieRelTolerance)) {
            if (lexicographically_less(b.direction, c.direction)) best = i;
        } else if (c.objective < b.objective) {
            best = i;
        }
    }

    const UnitVec3 a(candidates[best].direction);
    const Vec3 l = l_vector(cloud, a.vec());
    const Vec3 c = optimal_c(form, l, cfg.rank_eps);
    const AxisLine axis(a.vec(), moment_from_c(a, c));

    const double spread = std::sqrt(std::max(form.spread_squared, 0.0));
    double rho = 0.0;
    try {
        rho = optimal_radius(cloud, axis);
    } catch (const DegenerateInputError&) {
        rho = 0.0;
    }
    if (rho <= kZeroRadiusFactor * spread) {
        fit.degeneracy = DegeneracyClass::kDoubleDegenerate;
        fit.message =
            "fitted radius is zero to machine precision; the points lie on a line through "
            "the fitted axis";
        return fit;
    }

    fit.cylinder = Cylinder(axis, rho);
    fit.dbar2 = dbar2_direct(cloud, axis, rho);
    double sum_d2 = 0.0;
    std::vector<double> residuals;
    if (cfg.emit_residuals) residuals.reserve(cloud.size());
    for (const Vec3& p : cloud.points) {
        const double d = surface_distance(*fit.cylinder, p);
        sum_d2 += d * d;
        if (cfg.emit_residuals) residuals.push_back(d);
    }
    fit.rms_distance = std::sqrt(sum_d2 / static_cast<double>(cloud.size()));
    if (cfg.emit_residuals) fit.residuals = std::move(residuals);

    fit.diagnostics.stationarity_residual = candidates[best].stationarity;
    fit.diagnostics.refine_iterations = candidates[best].iterations;
    fit.diagnostics.seeds_evaluated = static_cast<int>(seeds.size());
    fit.diagnostics.objective_at_solution = candidates[best].objective;
    fit.diagnostics.tied_candidates.push_back(candidates[best].direction);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (i == best) continue;
        if (nearly_equal_rel(candidates[i].objective, candidates[best].objective,
                             kNearTieRelTolerance))
            fit.diagnostics.tied_candidates.push_back(candidates[i].direction);
    }
    return fit;
}

} // namespace cylfit
