// Semi-Lagrangian time steppers for u_t + f u_x = (nu u_x)_x in one space
// dimension, the nonlinear freezing wrapper, and the consistency-condition
// diagnostic. Every stepper is a pure function V^n -> V^{n+1}; direction
// weights are hard-fixed at 1/2 per displacement pair.
#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "sldiff/displacement.hpp"
#include "sldiff/grid.hpp"
#include "sldiff/interpolation.hpp"

namespace sldiff {

/// Velocity field f(x, t).
using Velocity1D = std::function<double(double, double)>;

struct SchemeConfig {
    int interp_order = 3;  // 1 or 3
    DisplacementPolicy displacement{};
    int advection_iterations = 3;
};

namespace detail {

inline double displacement_bracket(const DiffusivitySampler& nu, const Grid1D& g, double dt) {
    return std::sqrt(2.0 * dt * nodal_sup(nu, g)) + g.spacing();
}

}  // namespace detail

/// Diffusive displacements of every node, exposed for diagnostics and tests.
inline std::vector<DisplacementPair> compute_displacement_field(const GridFunction& v,
                                                                const DiffusivitySampler& nu,
                                                                double dt,
                                                                const SchemeConfig& cfg) {
    const Grid1D& g = v.grid;
    const double hi = detail::displacement_bracket(nu, g, dt);
    const double tol = resolved_tol(cfg.displacement, g.length);
    std::vector<DisplacementPair> out(static_cast<size_t>(g.n_nodes));
    for (int i = 0; i < g.n_nodes; ++i)
        out[i] = solve_displacement_pair(nu, g.node(i), dt, cfg.displacement, hi, tol);
    return out;
}

inline GridFunction step_diffusion_1d(const GridFunction& v, const DiffusivitySampler& nu,
                                      double dt, const SchemeConfig& cfg, double t_next = 0.0) {
    const Grid1D& g = v.grid;
    const double hi = detail::displacement_bracket(nu, g, dt);
    const double tol = resolved_tol(cfg.displacement, g.length);
    GridFunction out = GridFunction::zeros(g);
    const bool dirichlet = g.bc == Boundary::Dirichlet;
    const int begin = dirichlet ? 1 : 0;
    const int end = dirichlet ? g.n_nodes - 1 : g.n_nodes;
    for (int i = begin; i < end; ++i) {
        const double x = g.node(i);
        DisplacementPair d;
        try {
            d = solve_displacement_pair(nu, x, dt, cfg.displacement, hi, tol);
        } catch (const std::exception& e) {
            throw std::runtime_error("step_diffusion_1d: node " + std::to_string(i) + ": " +
                                     e.what());
        }
        out.values[i] = 0.5 * interp_eval(v, x + d.delta_plus, cfg.interp_order) +
                        0.5 * interp_eval(v, x - d.delta_minus, cfg.interp_order);
    }
    if (dirichlet) {
        out.values[0] = g.left(t_next);
        out.values[g.n_nodes - 1] = g.right(t_next);
    }
    return out;
}

/// Pure advective SL step v_i = I[V](z_i).
inline GridFunction step_advection_1d(const GridFunction& v, const Velocity1D& f, double t_n,
                                      double dt, const SchemeConfig& cfg) {
    const Grid1D& g = v.grid;
    auto f_n = [&](double x) { return f(x, t_n); };
    GridFunction out = GridFunction::zeros(g);
    const bool dirichlet = g.bc == Boundary::Dirichlet;
    const int begin = dirichlet ? 1 : 0;
    const int end = dirichlet ? g.n_nodes - 1 : g.n_nodes;
    for (int i = begin; i < end; ++i) {
        const double x = g.node(i);
        const double alpha = advective_displacement(f_n, x, dt, cfg.advection_iterations);
        out.values[i] = interp_eval(v, x - alpha, cfg.interp_order);
    }
    if (dirichlet) {
        out.values[0] = g.left(t_n + dt);
        out.values[g.n_nodes - 1] = g.right(t_n + dt);
    }
    return out;
}

/// Advection-diffusion step: the advective and diffusive displacements are
/// computed independently and added, v_i = 1/2 I(z_i+d+) + 1/2 I(z_i-d-).
/// The diffusivity is sampled around x_i, not around the advected foot.
inline GridFunction step_advdiff_1d(const GridFunction& v, const Velocity1D& f,
                                    const DiffusivitySampler& nu, double t_n, double dt,
                                    const SchemeConfig& cfg) {
    const Grid1D& g = v.grid;
    auto f_n = [&](double x) { return f(x, t_n); };
    const double hi = detail::displacement_bracket(nu, g, dt);
    const double tol = resolved_tol(cfg.displacement, g.length);
    GridFunction out = GridFunction::zeros(g);
    const bool dirichlet = g.bc == Boundary::Dirichlet;
    const int begin = dirichlet ? 1 : 0;
    const int end = dirichlet ? g.n_nodes - 1 : g.n_nodes;
    for (int i = begin; i < end; ++i) {
        const double x = g.node(i);
        DisplacementPair d;
        try {
            d = solve_displacement_pair(nu, x, dt, cfg.displacement, hi, tol);
        } catch (const std::exception& e) {
            throw std::runtime_error("step_advdiff_1d: node " + std::to_string(i) + ": " +
                                     e.what());
        }
        const double alpha = advective_displacement(f_n, x, dt, cfg.advection_iterations);
        const double z = x - alpha;
        out.values[i] = 0.5 * interp_eval(v, z + d.delta_plus, cfg.interp_order) +
                        0.5 * interp_eval(v, z - d.delta_minus, cfg.interp_order);
    }
    if (dirichlet) {
        out.values[0] = g.left(t_n + dt);
        out.values[g.n_nodes - 1] = g.right(t_n + dt);
    }
    return out;
}

/// Second-order nodal gradient: centered in the interior, one-sided at
/// Dirichlet walls, wrapped on periodic grids.
inline GridFunction nodal_gradient(const GridFunction& v) {
    const Grid1D& g = v.grid;
    const int n = g.n_nodes;
    const double dx = g.spacing();
    GridFunction out = GridFunction::zeros(g);
    if (g.bc == Boundary::Periodic) {
        for (int i = 0; i < n; ++i) {
            const int ip = detail::wrap_index(i + 1, n);
            const int im = detail::wrap_index(i - 1, n);
            out.values[i] = (v.values[ip] - v.values[im]) / (2.0 * dx);
        }
        return out;
    }
    for (int i = 1; i < n - 1; ++i)
        out.values[i] = (v.values[i + 1] - v.values[i - 1]) / (2.0 * dx);
    out.values[0] = (-3.0 * v.values[0] + 4.0 * v.values[1] - v.values[2]) / (2.0 * dx);
    out.values[n - 1] =
        (3.0 * v.values[n - 1] - 4.0 * v.values[n - 2] + v.values[n - 3]) / (2.0 * dx);
    return out;
}

/// Builds the frozen nodal diffusivity from the step-n fields and their nodal
/// gradients. Coupled fields share the result within one step.
using DiffusivityBuilder =
    std::function<GridFunction(const std::vector<GridFunction>&, const std::vector<GridFunction>&)>;

/// One linearized step of u_t = (nu(u, u_x) u_x)_x for one or several coupled
/// fields: the diffusivity is frozen from the step-n data, interpolated with
/// P1 between nodes, and each field is advanced with the linear scheme.
inline std::vector<GridFunction> step_nonlinear(const std::vector<GridFunction>& fields,
                                                const DiffusivityBuilder& builder, double dt,
                                                const SchemeConfig& cfg, double t_next = 0.0) {
    require(!fields.empty(), "step_nonlinear: no fields");
    std::vector<GridFunction> grads;
    grads.reserve(fields.size());
    for (const auto& f : fields) grads.push_back(nodal_gradient(f));
    GridFunction nu = builder(fields, grads);
    for (int i = 0; i < nu.size(); ++i) {
        if (!std::isfinite(nu.values[i]) || nu.values[i] < 0.0)
            throw std::runtime_error("step_nonlinear: builder returned invalid diffusivity at node " +
                                     std::to_string(i));
    }
    DiffusivitySampler sampler = DiffusivitySampler::nodal(std::move(nu));
    std::vector<GridFunction> out;
    out.reserve(fields.size());
    for (const auto& f : fields) {
        GridFunction next = step_diffusion_1d(f, sampler, dt, cfg, t_next);
        // boundary values differ per field
        if (f.grid.bc == Boundary::Dirichlet) {
            next.values[0] = f.grid.left(t_next);
            next.values[f.grid.n_nodes - 1] = f.grid.right(t_next);
        }
        out.push_back(std::move(next));
    }
    return out;
}

/// Residuals of the four consistency conditions on (A+, A-, delta+, delta-)
/// with the scheme's weights A+ = A- = 1/2 and bisection-exact displacements.
struct ConsistencyResiduals {
    double r1;  // (A+ + A-) - 1
    double r2;  // (A+ d+ - A- d-) - dt*nu_x
    double r3;  // (A+ d+^2 + A- d-^2) - 2*dt*nu
    double r4;  // A+ d+^3 - A- d-^3
};

inline ConsistencyResiduals consistency_residual(double x, double dt,
                                                 const std::function<double(double)>& nu,
                                                 const std::function<double(double)>& nu_x,
                                                 double nu_sup) {
    const DiffusivitySampler sampler = DiffusivitySampler::analytic(nu);
    const double hi = std::sqrt(2.0 * dt * nu_sup) * 1.5 + 1e-6;
    const double tol = 1e-15;
    const RootResult plus = diffusive_bisection(sampler, x, dt, +1, hi, tol, 80, 64);
    const RootResult minus = diffusive_bisection(sampler, x, dt, -1, hi, tol, 80, 64);
    const double dp = plus.delta, dm = minus.delta;
    ConsistencyResiduals r;
    r.r1 = (0.5 + 0.5) - 1.0;
    r.r2 = 0.5 * (dp - dm) - dt * nu_x(x);
    r.r3 = 0.5 * (dp * dp + dm * dm) - 2.0 * dt * nu(x);
    r.r4 = 0.5 * (dp * dp * dp - dm * dm * dm);
    return r;
}

}  // namespace sldiff
