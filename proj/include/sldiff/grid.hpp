// Uniform 1D/2D grids, time grids and grid functions shared by all solvers.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sldiff {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

enum class Boundary { Periodic, Dirichlet };

/// Time-dependent boundary value, t -> u.
using BoundaryValue = std::function<double(double)>;

inline BoundaryValue constant_bc(double value) {
    return [value](double) { return value; };
}

/// Uniform 1D grid. Periodic grids carry N nodes on [origin, origin+L) with
/// spacing L/N; Dirichlet grids carry N nodes on [origin, origin+L] with
/// spacing L/(N-1) and the first/last node pinned to boundary data.
struct Grid1D {
    double origin = 0.0;
    double length = 0.0;
    int n_nodes = 0;
    Boundary bc = Boundary::Periodic;
    BoundaryValue left;   // Dirichlet only
    BoundaryValue right;  // Dirichlet only

    static Grid1D periodic(double length, int n_nodes, double origin = 0.0) {
        require(length > 0.0, "Grid1D: length must be positive");
        require(n_nodes >= 4, "Grid1D: need at least 4 nodes");
        Grid1D g;
        g.origin = origin;
        g.length = length;
        g.n_nodes = n_nodes;
        g.bc = Boundary::Periodic;
        return g;
    }

    static Grid1D dirichlet(double length, int n_nodes, BoundaryValue left,
                            BoundaryValue right, double origin = 0.0) {
        require(length > 0.0, "Grid1D: length must be positive");
        require(n_nodes >= 4, "Grid1D: need at least 4 nodes");
        Grid1D g;
        g.origin = origin;
        g.length = length;
        g.n_nodes = n_nodes;
        g.bc = Boundary::Dirichlet;
        g.left = std::move(left);
        g.right = std::move(right);
        return g;
    }

    double spacing() const {
        return bc == Boundary::Periodic ? length / n_nodes : length / (n_nodes - 1);
    }
    double node(int i) const { return origin + i * spacing(); }
    double xmin() const { return origin; }
    double xmax() const { return origin + length; }

    bool same_layout(const Grid1D& o) const {
        return n_nodes == o.n_nodes && bc == o.bc && origin == o.origin && length == o.length;
    }
};

/// Tensor product of two axes; node (i1, i2) is stored at index i1*n2 + i2
/// (row-major by the axis-1 index, which is also the CSV flattening order).
struct Grid2D {
    Grid1D axis1;
    Grid1D axis2;

    int n1() const { return axis1.n_nodes; }
    int n2() const { return axis2.n_nodes; }
    int node_count() const { return n1() * n2(); }
    int index(int i1, int i2) const { return i1 * n2() + i2; }
};

struct TimeGrid {
    double horizon = 0.0;
    int step_count = 0;

    TimeGrid() = default;
    TimeGrid(double horizon_, int step_count_) : horizon(horizon_), step_count(step_count_) {
        require(horizon > 0.0 && step_count >= 1, "TimeGrid: horizon and step count must be positive");
    }
    double dt() const { return horizon / step_count; }
    double t(int n) const { return n == step_count ? horizon : n * dt(); }
};

/// Nodal values of the unknown on a Grid1D.
struct GridFunction {
    Grid1D grid;
    std::vector<double> values;

    static GridFunction zeros(const Grid1D& g) {
        GridFunction f;
        f.grid = g;
        f.values.assign(static_cast<size_t>(g.n_nodes), 0.0);
        return f;
    }

    template <class Fn>
    static GridFunction sample(const Grid1D& g, Fn fn) {
        GridFunction f = zeros(g);
        for (int i = 0; i < g.n_nodes; ++i) f.values[i] = fn(g.node(i));
        return f;
    }

    int size() const { return grid.n_nodes; }
    double& operator[](int i) { return values[i]; }
    double operator[](int i) const { return values[i]; }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

struct GridFunction2D {
    Grid2D grid;
    std::vector<double> values;

    static GridFunction2D zeros(const Grid2D& g) {
        GridFunction2D f;
        f.grid = g;
        f.values.assign(static_cast<size_t>(g.node_count()), 0.0);
        return f;
    }

    template <class Fn>
    static GridFunction2D sample(const Grid2D& g, Fn fn) {
        GridFunction2D f = zeros(g);
        for (int i1 = 0; i1 < g.n1(); ++i1)
            for (int i2 = 0; i2 < g.n2(); ++i2)
                f.values[g.index(i1, i2)] = fn(g.axis1.node(i1), g.axis2.node(i2));
        return f;
    }

    double& at(int i1, int i2) { return values[grid.index(i1, i2)]; }
    double at(int i1, int i2) const { return values[grid.index(i1, i2)]; }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

// Norms use a fixed ascending-index summation so outputs are reproducible.

inline double l2_norm(const GridFunction& w) {
    double s = 0.0;
    for (double v : w.values) s += v * v;
    return std::sqrt(w.grid.spacing() * s);
}

inline double l2_norm(const GridFunction2D& w) {
    double s = 0.0;
    for (double v : w.values) s += v * v;
    return std::sqrt(w.grid.axis1.spacing() * w.grid.axis2.spacing() * s);
}

inline double linf_norm(const GridFunction& w) {
    double m = 0.0;
    for (double v : w.values) m = std::max(m, std::abs(v));
    return m;
}

inline double linf_norm(const GridFunction2D& w) {
    double m = 0.0;
    for (double v : w.values) m = std::max(m, std::abs(v));
    return m;
}

enum class Norm { L2, Linf };

inline double relative_error(const GridFunction& w, const GridFunction& ref, Norm norm) {
    require(w.grid.same_layout(ref.grid), "relative_error: grids differ");
    GridFunction diff = w;
    for (int i = 0; i < w.size(); ++i) diff.values[i] -= ref.values[i];
    const double den = norm == Norm::L2 ? l2_norm(ref) : linf_norm(ref);
    if (den == 0.0) throw std::domain_error("relative_error: reference norm is zero");
    const double num = norm == Norm::L2 ? l2_norm(diff) : linf_norm(diff);
    return num / den;
}

inline double relative_error(const GridFunction2D& w, const GridFunction2D& ref, Norm norm) {
    require(w.values.size() == ref.values.size(), "relative_error: grids differ");
    GridFunction2D diff = w;
    for (size_t i = 0; i < w.values.size(); ++i) diff.values[i] -= ref.values[i];
    const double den = norm == Norm::L2 ? l2_norm(ref) : linf_norm(ref);
    if (den == 0.0) throw std::domain_error("relative_error: reference norm is zero");
    const double num = norm == Norm::L2 ? l2_norm(diff) : linf_norm(diff);
    return num / den;
}

/// Courant number C = a*dt/dx and diffusion number mu = nu*dt/(2*dx^2),
/// reported as resolution metadata alongside error tables.
struct StabilityNumbers {
    double courant;
    double mu;
};

inline StabilityNumbers stability_numbers(double a, double nu, double dt, double dx) {
    require(dt > 0.0 && dx > 0.0, "stability_numbers: dt and dx must be positive");
    return {a * dt / dx, nu * dt / (2.0 * dx * dx)};
}

}  // namespace sldiff
