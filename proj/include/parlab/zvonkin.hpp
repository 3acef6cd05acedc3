#pragma once

#include "parlab/grid.hpp"
#include "parlab/kolmogorov.hpp"

namespace parlab {

// One-dimensional drift-removing change of variables built from a Kolmogorov
// solution U: with V(t,x) = U(T-t,x) and Phi(t,x) = x + V(t,x), the process
// Y = Phi(t,X) solves an SDE with bounded coefficients
//   drift(t,y) = lambda V(t, Psi(t,y)),  sigma(t,y) = 1 + V_x(t, Psi(t,y)),
// where Psi(t, .) is the spatial inverse of Phi(t, .). Fields are linearly
// interpolated in time and space with constant extension outside the box.
struct ZvonkinMap {
    GridField U, gradU;  // forward-time fields on the solver grid
    double lambda = 0.0;
    double T = 0.0;
    double grad_bound = 0.0;  // sup |V_x| < 1 certifies Phi is bi-Lipschitz

    double eval_V(double t, double x) const;
    double eval_gradV(double t, double x) const;
    double phi(double t, double x) const;
    // fixed point x <- y - V(t,x); warm start x0 (default: y); residual 1e-10
    double psi(double t, double y, double x0) const;
    double psi(double t, double y) const { return psi(t, y, y); }
    double drift(double t, double y) const;
    double sigma(double t, double y) const;
};

// Certifies sup |grad U| < 1 and packages the map. The gradient bound should
// be <= 1/2 in practice (lambda chosen by select_lambda).
ZvonkinMap build_transform(const PicardResult& picard, double lambda);

}  // namespace parlab
