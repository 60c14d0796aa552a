// Two-dimensional steppers: the diagonal-tensor scheme (each axis carries a
// factor-2 scaled displacement equation), and the symmetric-tensor scheme that
// diagonalizes A(x, t^n) per node and solves displacements along the frozen
// eigenvector directions.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sldiff/displacement.hpp"
#include "sldiff/grid.hpp"
#include "sldiff/interpolation.hpp"
#include "sldiff/step.hpp"

namespace sldiff {

struct SymmetricTensor2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;
};

/// Eigenpairs of a symmetric 2x2 tensor; e2 is e1 rotated by 90 degrees.
struct EigenFrame2 {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::array<double, 2> e1{1.0, 0.0};
    std::array<double, 2> e2{0.0, 1.0};
};

/// Closed-form symmetric 2x2 eigendecomposition. Nearly diagonal tensors
/// (|a12| < 1e-14 * max entry) keep the axis frame so the scheme degenerates
/// exactly to the diagonal case.
inline EigenFrame2 eigen_sym_2x2(const SymmetricTensor2& a) {
    EigenFrame2 out;
    const double scale = std::max({std::abs(a.a11), std::abs(a.a22), std::abs(a.a12)});
    if (scale == 0.0 || std::abs(a.a12) < 1e-14 * scale) {
        out.lambda1 = a.a11;
        out.lambda2 = a.a22;
        return out;
    }
    const double tr = a.a11 + a.a22;
    const double disc = std::sqrt((a.a11 - a.a22) * (a.a11 - a.a22) + 4.0 * a.a12 * a.a12);
    double l1 = tr >= 0.0 ? 0.5 * (tr + disc) : 0.5 * (tr - disc);
    double l2 = (a.a11 * a.a22 - a.a12 * a.a12) / l1;

    // eigenvector of l1, picking the better conditioned formula
    double vx, vy;
    if (std::abs(a.a11 - l1) > std::abs(a.a22 - l1)) {
        const double f = std::hypot(a.a12, l1 - a.a11);
        vx = a.a12 / f;
        vy = (l1 - a.a11) / f;
    } else {
        const double f = std::hypot(l1 - a.a22, a.a12);
        vx = (l1 - a.a22) / f;
        vy = a.a12 / f;
    }
    if (l1 < l2) {
        std::swap(l1, l2);
        const double tx = vx;
        vx = -vy;
        vy = tx;
    }
    out.lambda1 = l1;
    out.lambda2 = l2;
    out.e1 = {vx, vy};
    out.e2 = {-vy, vx};
    return out;
}

/// Symmetric diffusivity tensor frozen at t^n.
using TensorField2D = std::function<SymmetricTensor2(double, double)>;
/// Scalar field, e.g. one diagonal diffusivity entry, frozen at t^n.
using ScalarField2D = std::function<double(double, double)>;
/// Velocity field ((x1, x2), t) -> (f1, f2).
using Velocity2D = std::function<std::array<double, 2>(double, double, double)>;

inline std::array<double, 2> advective_displacement_2d(
    const std::function<std::array<double, 2>(double, double)>& f, double x1, double x2, double dt,
    int iters = 3) {
    std::array<double, 2> a = f(x1, x2);
    a[0] *= dt;
    a[1] *= dt;
    for (int k = 0; k < iters; ++k) {
        std::array<double, 2> v = f(x1 - a[0], x2 - a[1]);
        a = {dt * v[0], dt * v[1]};
    }
    return a;
}

namespace detail {

inline void apply_dirichlet_edges_2d(GridFunction2D& v, double t) {
    const Grid2D& g = v.grid;
    if (g.axis1.bc == Boundary::Dirichlet) {
        for (int i2 = 0; i2 < g.n2(); ++i2) {
            v.at(0, i2) = g.axis1.left(t);
            v.at(g.n1() - 1, i2) = g.axis1.right(t);
        }
    }
    if (g.axis2.bc == Boundary::Dirichlet) {
        for (int i1 = 0; i1 < g.n1(); ++i1) {
            v.at(i1, 0) = g.axis2.left(t);
            v.at(i1, g.n2() - 1) = g.axis2.right(t);
        }
    }
}

inline bool is_boundary_node_2d(const Grid2D& g, int i1, int i2) {
    const bool d1 = g.axis1.bc == Boundary::Dirichlet && (i1 == 0 || i1 == g.n1() - 1);
    const bool d2 = g.axis2.bc == Boundary::Dirichlet && (i2 == 0 || i2 == g.n2() - 1);
    return d1 || d2;
}

}  // namespace detail

/// Diagonal-tensor scheme: four feet along the axes, each with weight 1/4 and
/// displacement equation delta = sqrt(4*dt*nu_j(...)) (diffusivity scaled by
/// the dimension d = 2).
inline GridFunction2D step_diag_2d(const GridFunction2D& v, const ScalarField2D& nu1,
                                   const ScalarField2D& nu2, double dt, const SchemeConfig& cfg,
                                   double t_next = 0.0) {
    const Grid2D& g = v.grid;
    double sup1 = 0.0, sup2 = 0.0;
    for (int i1 = 0; i1 < g.n1(); ++i1)
        for (int i2 = 0; i2 < g.n2(); ++i2) {
            sup1 = std::max(sup1, nu1(g.axis1.node(i1), g.axis2.node(i2)));
            sup2 = std::max(sup2, nu2(g.axis1.node(i1), g.axis2.node(i2)));
        }
    const double dx_pad = std::max(g.axis1.spacing(), g.axis2.spacing());
    const double hi1 = std::sqrt(4.0 * dt * sup1) + dx_pad;
    const double hi2 = std::sqrt(4.0 * dt * sup2) + dx_pad;
    const double tol = resolved_tol(cfg.displacement, std::max(g.axis1.length, g.axis2.length));

    GridFunction2D out = GridFunction2D::zeros(g);
    for (int i1 = 0; i1 < g.n1(); ++i1) {
        for (int i2 = 0; i2 < g.n2(); ++i2) {
            if (detail::is_boundary_node_2d(g, i1, i2)) continue;
            const double x1 = g.axis1.node(i1);
            const double x2 = g.axis2.node(i2);
            DiffusivitySampler ray1{[&](double s) { return 2.0 * nu1(x1 + s, x2); }};
            DiffusivitySampler ray2{[&](double s) { return 2.0 * nu2(x1, x2 + s); }};
            DisplacementPair d1, d2;
            try {
                d1 = solve_displacement_pair(ray1, 0.0, dt, cfg.displacement, hi1, tol);
                d2 = solve_displacement_pair(ray2, 0.0, dt, cfg.displacement, hi2, tol);
            } catch (const std::exception& e) {
                throw std::runtime_error("step_diag_2d: node (" + std::to_string(i1) + "," +
                                         std::to_string(i2) + "): " + e.what());
            }
            out.at(i1, i2) = 0.25 * (interp_eval(v, x1 + d1.delta_plus, x2, cfg.interp_order) +
                                     interp_eval(v, x1 - d1.delta_minus, x2, cfg.interp_order) +
                                     interp_eval(v, x1, x2 + d2.delta_plus, cfg.interp_order) +
                                     interp_eval(v, x1, x2 - d2.delta_minus, cfg.interp_order));
        }
    }
    detail::apply_dirichlet_edges_2d(out, t_next);
    return out;
}

/// General symmetric-tensor scheme. Per node: closed-form eigendecomposition
/// of A(x_i, t^n), displacement solves along the frozen eigenvector rays with
/// the directional diffusivity q_j' A(x_i + s q_j) q_j, advective foot offset
/// added first when a velocity is present.
inline GridFunction2D step_tensor_2d(const GridFunction2D& v, const TensorField2D& a,
                                     const Velocity2D* f, double t_n, double dt,
                                     const SchemeConfig& cfg) {
    const Grid2D& g = v.grid;
    double sup = 0.0;
    for (int i1 = 0; i1 < g.n1(); ++i1)
        for (int i2 = 0; i2 < g.n2(); ++i2) {
            const EigenFrame2 e = eigen_sym_2x2(a(g.axis1.node(i1), g.axis2.node(i2)));
            sup = std::max(sup, std::max(e.lambda1, e.lambda2));
        }
    const double dx_pad = std::max(g.axis1.spacing(), g.axis2.spacing());
    const double hi = std::sqrt(4.0 * dt * sup) + dx_pad;
    const double tol = resolved_tol(cfg.displacement, std::max(g.axis1.length, g.axis2.length));

    GridFunction2D out = GridFunction2D::zeros(g);
    for (int i1 = 0; i1 < g.n1(); ++i1) {
        for (int i2 = 0; i2 < g.n2(); ++i2) {
            if (detail::is_boundary_node_2d(g, i1, i2)) continue;
            const double x1 = g.axis1.node(i1);
            const double x2 = g.axis2.node(i2);

            EigenFrame2 frame = eigen_sym_2x2(a(x1, x2));
            const double lmin = std::min(frame.lambda1, frame.lambda2);
            if (lmin < -1e-12)
                throw std::runtime_error("step_tensor_2d: tensor not positive semidefinite at node (" +
                                         std::to_string(i1) + "," + std::to_string(i2) + ")");
            frame.lambda1 = std::max(frame.lambda1, 0.0);
            frame.lambda2 = std::max(frame.lambda2, 0.0);

            double z1 = x1, z2 = x2;
            if (f) {
                auto fn = [&](double y1, double y2) { return (*f)(y1, y2, t_n); };
                const auto alpha =
                    advective_displacement_2d(fn, x1, x2, dt, cfg.advection_iterations);
                z1 -= alpha[0];
                z2 -= alpha[1];
            }

            auto directional = [&](const std::array<double, 2>& q) {
                return DiffusivitySampler{[&, q](double s) {
                    const SymmetricTensor2 t = a(x1 + s * q[0], x2 + s * q[1]);
                    const double r =
                        q[0] * (t.a11 * q[0] + t.a12 * q[1]) + q[1] * (t.a12 * q[0] + t.a22 * q[1]);
                    return std::max(2.0 * r, 0.0);
                }};
            };
            DisplacementPair d1, d2;
            try {
                d1 = solve_displacement_pair(directional(frame.e1), 0.0, dt, cfg.displacement, hi,
                                             tol);
                d2 = solve_displacement_pair(directional(frame.e2), 0.0, dt, cfg.displacement, hi,
                                             tol);
            } catch (const std::exception& e) {
                throw std::runtime_error("step_tensor_2d: node (" + std::to_string(i1) + "," +
                                         std::to_string(i2) + "): " + e.what());
            }

            const double p = cfg.interp_order;
            (void)p;
            out.at(i1, i2) =
                0.25 *
                (interp_eval(v, z1 + d1.delta_plus * frame.e1[0], z2 + d1.delta_plus * frame.e1[1],
                             cfg.interp_order) +
                 interp_eval(v, z1 - d1.delta_minus * frame.e1[0],
                             z2 - d1.delta_minus * frame.e1[1], cfg.interp_order) +
                 interp_eval(v, z1 + d2.delta_plus * frame.e2[0], z2 + d2.delta_plus * frame.e2[1],
                             cfg.interp_order) +
                 interp_eval(v, z1 - d2.delta_minus * frame.e2[0],
                             z2 - d2.delta_minus * frame.e2[1], cfg.interp_order));
        }
    }
    detail::apply_dirichlet_edges_2d(out, t_n + dt);
    return out;
}

/// Nodal diffusivity built from the step-n fields (isotropic nonlinear case).
using DiffusivityBuilder2D = std::function<GridFunction2D(const std::vector<GridFunction2D>&)>;

/// Linearized nonlinear step on a 2D grid: freeze the nodal diffusivity from
/// the current fields, interpolate it with P1, and take one diagonal-scheme
/// step per field with nu1 = nu2 = frozen nu.
inline std::vector<GridFunction2D> step_nonlinear_diag_2d(const std::vector<GridFunction2D>& fields,
                                                          const DiffusivityBuilder2D& builder,
                                                          double dt, const SchemeConfig& cfg,
                                                          double t_next = 0.0) {
    require(!fields.empty(), "step_nonlinear_diag_2d: no fields");
    GridFunction2D nu = builder(fields);
    for (size_t i = 0; i < nu.values.size(); ++i) {
        if (!std::isfinite(nu.values[i]) || nu.values[i] < 0.0)
            throw std::runtime_error(
                "step_nonlinear_diag_2d: builder returned invalid diffusivity at node " +
                std::to_string(i));
    }
    ScalarField2D sampler = [nu](double x1, double x2) { return interp_eval(nu, x1, x2, 1); };
    std::vector<GridFunction2D> out;
    out.reserve(fields.size());
    for (const auto& field : fields)
        out.push_back(step_diag_2d(field, sampler, sampler, dt, cfg, t_next));
    return out;
}

}  // namespace sldiff
