// Diffusive displacements solve delta = sqrt(2*dt*nu(x +/- delta)) per node;
// advective displacements come from the classic velocity fixed point. Both
// define the feet of the semi-Lagrangian update.
#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "sldiff/grid.hpp"
#include "sldiff/interpolation.hpp"

namespace sldiff {

/// Scalar diffusivity frozen at t^n: either analytic nu(x) or P1 interpolation
/// of nodal samples (the only information available when nu depends on the
/// solution). Also used along rays by the 2D tensor scheme.
struct DiffusivitySampler {
    std::function<double(double)> fn;

    static DiffusivitySampler analytic(std::function<double(double)> f) {
        return DiffusivitySampler{std::move(f)};
    }

    static DiffusivitySampler nodal(GridFunction nu) {
        return DiffusivitySampler{
            [nu = std::move(nu)](double x) { return interp_eval(nu, x, 1); }};
    }

    double operator()(double x) const { return fn(x); }
};

/// Largest nodal sample, used to size the bisection bracket.
inline double nodal_sup(const DiffusivitySampler& nu, const Grid1D& g) {
    double m = 0.0;
    for (int i = 0; i < g.n_nodes; ++i) m = std::max(m, nu(g.node(i)));
    return m;
}

enum class RootMethod { FixedPoint, Bisection, FixedPointWithFallback };
enum class RootInit { Local, Large };

struct DisplacementPolicy {
    RootMethod method = RootMethod::FixedPointWithFallback;
    int fixed_point_iters = 3;  // enough for an O(dt^2) displacement error
    int bisection_iters = 60;
    int bisection_scan_points = 64;
    double tol_abs = -1.0;  // < 0: resolved to 1e-12 * max(1, L)
    RootInit init = RootInit::Local;
};

inline double resolved_tol(const DisplacementPolicy& p, double domain_length) {
    return p.tol_abs >= 0.0 ? p.tol_abs : 1e-12 * std::max(1.0, domain_length);
}

struct RootResult {
    double delta = 0.0;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

inline double sample_nonnegative(const DiffusivitySampler& nu, double x) {
    const double v = nu(x);
    if (!(v >= 0.0))
        throw std::domain_error("displacement: diffusivity sample negative or non-finite at x=" +
                                std::to_string(x));
    return v;
}

}  // namespace detail

/// Fixed-point iteration delta_k = sqrt(2*dt*nu(x + dir*delta_{k-1})).
/// Runs exactly max_iters updates; converged when the final residual is below
/// tol or the residual history never grew.
inline RootResult diffusive_fixed_point(const DiffusivitySampler& nu, double x, double dt,
                                        int direction, const DisplacementPolicy& policy,
                                        double bracket_hi, double tol) {
    auto map = [&](double d) {
        return std::sqrt(2.0 * dt * detail::sample_nonnegative(nu, x + direction * d));
    };
    double delta = policy.init == RootInit::Local ? map(0.0) : bracket_hi;
    double prev_residual = -1.0;
    bool monotone = true;
    double residual = 0.0;
    for (int k = 0; k < policy.fixed_point_iters; ++k) {
        const double next = map(delta);
        residual = std::abs(next - delta);
        if (prev_residual >= 0.0 && residual > prev_residual) monotone = false;
        prev_residual = residual;
        delta = next;
    }
    residual = std::abs(map(delta) - delta);
    if (prev_residual >= 0.0 && residual > prev_residual) monotone = false;
    return {delta, policy.fixed_point_iters, residual <= tol || monotone};
}

/// Bisection on g(delta) = delta - sqrt(2*dt*nu(x + dir*delta)) over
/// [0, bracket_hi]. A downward scan locates the highest sign change first, so
/// the largest root is selected and the spurious delta = 0 fixed point of
/// degenerate diffusivities is avoided.
inline RootResult diffusive_bisection(const DiffusivitySampler& nu, double x, double dt,
                                      int direction, double bracket_hi, double tol,
                                      int max_iters = 60, int scan_points = 64) {
    auto g = [&](double d) {
        return d - std::sqrt(2.0 * dt * detail::sample_nonnegative(nu, x + direction * d));
    };
    if (bracket_hi <= 0.0) return {0.0, 0, detail::sample_nonnegative(nu, x) == 0.0};

    int evals = 0;
    double lo = -1.0, hi = -1.0;
    for (int j = 0; j <= scan_points; ++j) {
        const double d = bracket_hi * (scan_points - j) / scan_points;
        const double gd = g(d);
        ++evals;
        if (gd < 0.0) {
            if (j == 0) {
                // sup underestimated: no valid upper end
                if (detail::sample_nonnegative(nu, x) == 0.0) return {0.0, evals, false};
                throw std::runtime_error("diffusive_bisection: bracket endpoints have equal sign");
            }
            lo = d;
            hi = bracket_hi * (scan_points - (j - 1)) / scan_points;
            break;
        }
    }
    if (lo < 0.0) {
        // g >= 0 on the whole ray, hence nu(x) = 0 and delta = 0 is the root
        return {0.0, evals, true};
    }
    for (int k = 0; k < max_iters && (hi - lo) > tol; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double gmid = g(mid);
        ++evals;
        if (gmid == 0.0) return {mid, evals, true};
        if (gmid < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return {0.5 * (lo + hi), evals, (hi - lo) <= tol};
}

/// Advective displacement alpha solving alpha = dt*f(x - alpha) by fixed
/// point; f is the velocity frozen at t^n. The foot is z = x - alpha.
inline double advective_displacement(const std::function<double(double)>& f, double x, double dt,
                                     int iters = 3) {
    require(iters >= 1, "advective_displacement: need at least one iteration");
    double alpha = dt * f(x);
    for (int k = 0; k < iters; ++k) alpha = dt * f(x - alpha);
    return alpha;
}

/// Both diffusive displacements of one node (alpha is filled by the caller
/// when the problem has advection).
struct DisplacementPair {
    double delta_plus = 0.0;
    double delta_minus = 0.0;
    double alpha = 0.0;
    int iterations_used = 0;
    bool converged = false;
};

inline RootResult solve_diffusive_root(const DiffusivitySampler& nu, double x, double dt,
                                       int direction, const DisplacementPolicy& policy,
                                       double bracket_hi, double tol) {
    switch (policy.method) {
        case RootMethod::FixedPoint:
            return diffusive_fixed_point(nu, x, dt, direction, policy, bracket_hi, tol);
        case RootMethod::Bisection:
            return diffusive_bisection(nu, x, dt, direction, bracket_hi, tol,
                                       policy.bisection_iters, policy.bisection_scan_points);
        case RootMethod::FixedPointWithFallback: {
            // accept the fixed point only when its residual history is clean
            auto fp = diffusive_fixed_point(nu, x, dt, direction, policy, bracket_hi, tol);
            auto g = [&](double d) {
                return std::abs(d - std::sqrt(2.0 * dt * detail::sample_nonnegative(
                                                              nu, x + direction * d)));
            };
            if (fp.converged && g(fp.delta) <= tol) return fp;
            auto bi = diffusive_bisection(nu, x, dt, direction, bracket_hi, tol,
                                          policy.bisection_iters, policy.bisection_scan_points);
            bi.iterations += fp.iterations;
            return bi;
        }
    }
    return {};
}

inline DisplacementPair solve_displacement_pair(const DiffusivitySampler& nu, double x, double dt,
                                                const DisplacementPolicy& policy,
                                                double bracket_hi, double tol) {
    const RootResult plus = solve_diffusive_root(nu, x, dt, +1, policy, bracket_hi, tol);
    const RootResult minus = solve_diffusive_root(nu, x, dt, -1, policy, bracket_hi, tol);
    DisplacementPair pair;
    pair.delta_plus = plus.delta;
    pair.delta_minus = minus.delta;
    pair.iterations_used = plus.iterations + minus.iterations;
    pair.converged = plus.converged && minus.converged;
    return pair;
}

}  // namespace sldiff
