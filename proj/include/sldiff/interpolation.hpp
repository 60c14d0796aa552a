// Lagrange interpolation operators on uniform grids: p = 1 (linear) and
// p = 3 (cubic, centered 4-point stencil shifted inward at Dirichlet walls).
#pragma once

#include <array>
#include <cmath>

#include "sldiff/grid.hpp"

namespace sldiff {

namespace detail {

inline int wrap_index(int i, int n) {
    int r = i % n;
    return r < 0 ? r + n : r;
}

struct CellCoord {
    int cell;       // index of the left node of the containing cell
    double lambda;  // local coordinate in [0, 1]
};

// Locate the cell containing x. Periodic coordinates are reduced modulo L;
// Dirichlet queries are clamped to [origin, origin+L]. lambda is snapped to
// the nearest node when within 1e-13 of it so nodal queries are exact.
inline CellCoord locate(const Grid1D& g, double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("interp: query point is not finite");
    const double dx = g.spacing();
    double r = x - g.origin;
    int max_cell;
    if (g.bc == Boundary::Periodic) {
        r = std::fmod(r, g.length);
        if (r < 0.0) r += g.length;
        if (r >= g.length) r = 0.0;
        max_cell = g.n_nodes - 1;
    } else {
        if (r < 0.0) r = 0.0;
        if (r > g.length) r = g.length;
        max_cell = g.n_nodes - 2;
    }
    double s = r / dx;
    int cell = static_cast<int>(std::floor(s));
    if (cell < 0) cell = 0;
    if (cell > max_cell) cell = max_cell;
    double lambda = s - cell;
    if (lambda < 1e-13) {
        lambda = 0.0;
    } else if (lambda > 1.0 - 1e-13) {
        if (cell < max_cell) {
            ++cell;
            lambda = 0.0;
        } else if (g.bc == Boundary::Periodic) {
            cell = 0;  // wraps to node 0
            lambda = 0.0;
        } else {
            lambda = 1.0;
        }
    }
    return {cell, lambda};
}

// 4-point Lagrange basis on equispaced nodes {0,1,2,3} evaluated at s in [0,3].
inline std::array<double, 4> cubic_basis(double s) {
    const double s1 = s - 1.0, s2 = s - 2.0, s3 = s - 3.0;
    return {
        -s1 * s2 * s3 / 6.0,
        s * s2 * s3 / 2.0,
        -s * s1 * s3 / 2.0,
        s * s1 * s2 / 6.0,
    };
}

}  // namespace detail

inline double interp_eval(const GridFunction& v, double x, int order) {
    const Grid1D& g = v.grid;
    const auto [cell, lambda] = detail::locate(g, x);
    if (order == 1) {
        int i0 = cell, i1 = cell + 1;
        if (g.bc == Boundary::Periodic) i1 = detail::wrap_index(i1, g.n_nodes);
        return (1.0 - lambda) * v.values[i0] + lambda * v.values[i1];
    }
    require(order == 3, "interp: order must be 1 or 3");
    if (g.bc == Boundary::Periodic) {
        const auto w = detail::cubic_basis(lambda + 1.0);
        double acc = 0.0;
        for (int k = 0; k < 4; ++k)
            acc += w[k] * v.values[detail::wrap_index(cell - 1 + k, g.n_nodes)];
        return acc;
    }
    int base = cell - 1;
    if (base < 0) base = 0;
    if (base > g.n_nodes - 4) base = g.n_nodes - 4;
    const auto w = detail::cubic_basis((cell - base) + lambda);
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) acc += w[k] * v.values[base + k];
    return acc;
}

/// Tensor-product evaluation; the same order is used along both axes.
inline double interp_eval(const GridFunction2D& v, double x1, double x2, int order) {
    const Grid2D& g = v.grid;
    const auto c1 = detail::locate(g.axis1, x1);
    const auto c2 = detail::locate(g.axis2, x2);

    const int width = order == 1 ? 2 : 4;
    std::array<int, 4> idx1{}, idx2{};
    std::array<double, 4> w1{}, w2{};

    auto fill_axis = [&](const Grid1D& ax, const detail::CellCoord& c, std::array<int, 4>& idx,
                         std::array<double, 4>& w) {
        if (order == 1) {
            idx[0] = c.cell;
            idx[1] = c.cell + 1;
            if (ax.bc == Boundary::Periodic) idx[1] = detail::wrap_index(idx[1], ax.n_nodes);
            w[0] = 1.0 - c.lambda;
            w[1] = c.lambda;
            return;
        }
        require(order == 3, "interp: order must be 1 or 3");
        if (ax.bc == Boundary::Periodic) {
            const auto b = detail::cubic_basis(c.lambda + 1.0);
            for (int k = 0; k < 4; ++k) {
                idx[k] = detail::wrap_index(c.cell - 1 + k, ax.n_nodes);
                w[k] = b[k];
            }
        } else {
            int base = c.cell - 1;
            if (base < 0) base = 0;
            if (base > ax.n_nodes - 4) base = ax.n_nodes - 4;
            const auto b = detail::cubic_basis((c.cell - base) + c.lambda);
            for (int k = 0; k < 4; ++k) {
                idx[k] = base + k;
                w[k] = b[k];
            }
        }
    };
    fill_axis(g.axis1, c1, idx1, w1);
    fill_axis(g.axis2, c2, idx2, w2);

    double acc = 0.0;
    for (int k1 = 0; k1 < width; ++k1) {
        double row = 0.0;
        for (int k2 = 0; k2 < width; ++k2) row += w2[k2] * v.values[g.index(idx1[k1], idx2[k2])];
        acc += w1[k1] * row;
    }
    return acc;
}

}  // namespace sldiff
