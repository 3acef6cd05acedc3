#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "parlab/grid.hpp"
#include "parlab/heat_kernel.hpp"
#include "parlab/modulus.hpp"

namespace parlab {

// u(t,x) = int_0^t e^{-lambda (t-r)} (K(r,t,.) * f(r,.))(x) dr, computed by
// FFT convolution on the periodic box per (r,t) pair, composite Simpson in
// time with a graded-endpoint panel near r=t. With linear_growth=true the
// per-slice affine part of f is split off and mapped through the closed-form
// affine image (the kernel preserves affine functions).
GridField solve_g_lambda(const GridField& f, const DiffusionSpec& spec, double lambda,
                         bool linear_growth = false);

// Hessian of u via the subtracted kernel representation
//   int_0^t e^{-lambda(t-r)} int hess K(r,t,x-z) [f(r,z) - f(r,x)] dz dr
// with a graded (midpoint in s, r = t(1-s^2)) time mesh resolving the
// (t-r)^{alpha/2-1} endpoint. Components: n=1 -> 1, n=2 -> (xx,xy,yy).
GridField second_derivative_field(const GridField& f, const DiffusionSpec& spec, double lambda,
                                  bool linear_growth = false, int graded_nodes = 128);

// Centered periodic finite differences: gradient (comps = n) and Hessian
// components (n=1 -> 1, n=2 -> 3) of a scalar field.
GridField gradient_field(const GridField& u);
GridField hessian_field_fd(const GridField& u);

// Per-time pieces of the Lebesgue–Hölder–Dini norm of order 2+alpha: weighted
// (theta='l') or plain (theta='b') sup of u, sup |grad u|, sup |hess u| and
// the (alpha,rho)-seminorm of the Hessian components.
struct SliceNorm {
    double base = 0.0, grad = 0.0, hess = 0.0, hess_semi = 0.0;
    double total() const { return base + grad + hess + hess_semi; }
};

std::vector<SliceNorm> class_norms(const GridField& u, const GridField& grad,
                                   const GridField& hess, const ClassLabel& label,
                                   const ModulusSpec& rho, const SeminormOptions& opt = {});

// Zeroth-order norm of a source: base + (alpha,rho)-seminorm per time slice.
std::vector<double> source_norms(const GridField& f, const ClassLabel& label,
                                 const ModulusSpec& rho, const SeminormOptions& opt = {});

// p-mean in time by composite trapezoid (max for p = +inf).
double lp_time_aggregate(const std::vector<double>& per_time, double p, double T);

struct RegularityReport {
    std::vector<double> times;
    std::vector<double> source_norm_t, solution_norm_t;  // per-time, fine grid
    double source_agg = 0.0, solution_agg = 0.0;
    double ratio_coarse = 0.0, ratio_fine = 0.0;  // grid-refinement pair
    std::uint64_t seed = 0;
};

// Ratio ||G_lambda f||_{L^p C^{2+alpha,rho}} / ||f||_{L^p C^{alpha,rho}} at
// the given grid and at the N-doubled grid. Seminorm pair sampling uses a
// common separation floor so the two resolutions measure the same quantity.
RegularityReport verify_maximal_regularity(
    const std::function<double(double, const double*)>& f_fn, const DiffusionSpec& spec,
    double lambda, const GridSpec& grid, const ClassLabel& label, const ModulusSpec& rho,
    std::uint64_t seed = 1);

struct EmbeddingReport {
    double ratio_coarse = 0.0, ratio_fine = 0.0;  // sup-in-time rho_hat seminorm of hess u
    double source_agg = 0.0;
    double empirical_constant = 0.0;  // ratio_fine / source norm
};

// Embedding check at the exponent boundary alpha = 2/p for Dini moduli:
// sampled sup |hess u(x) - hess u(y)| / rho_hat(|x-y|) at two resolutions.
EmbeddingReport verify_embedding(const std::function<double(double, const double*)>& f_fn,
                                 const DiffusionSpec& spec, double lambda, const GridSpec& grid,
                                 const ClassLabel& label, const ModulusSpec& rho,
                                 std::uint64_t seed = 1);

struct DriftedResult {
    GridField u;
    std::vector<double> tau_grid;
    std::vector<double> contraction;  // measured per Picard stage
    double residual = 0.0;            // discrete-operator residual, interior nodes
};

// Fixed point of T v = G_lambda[ 1/2 (a(t,x)-a(t)) : hess v + g . grad v + f ]
// by Picard iteration with homotopy continuation in tau over [0,1]: 8 equal
// steps initially, step halved whenever the measured contraction is >= 0.8.
DriftedResult solve_drifted(const GridField& f, const GridField& g_drift,
                            const DiffusionSpec& spec, double lambda, double tol = 1e-8);

}  // namespace parlab
