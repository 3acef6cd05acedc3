#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "parlab/zvonkin.hpp"

namespace parlab {

// Scalar drift b(t,x) for one-dimensional simulations.
using DriftFn = std::function<double(double, double)>;

struct SimConfig {
    double T = 1.0;
    double dt = 1.0 / 256.0;
    int paths = 1000;
    double x0 = 0.0;
    double t0 = 0.0;  // integration start (singular-in-time drifts use t0 = dt)
    std::uint64_t seed = 42;
};

// Reproducible per-path Gaussian increments: mt19937_64 keyed by
// splitmix64(seed, path), uniforms drawn by explicit bit manipulation and
// converted by Box-Muller, so tapes are identical across platforms.
namespace tape {
std::uint64_t mix(std::uint64_t seed, std::uint64_t path);
// fills `out` with `steps` N(0, dt) increments for the given path
void fill(std::uint64_t seed, std::uint64_t path, int steps, double dt,
          std::vector<double>& out);
}  // namespace tape

struct PathEnsemble {
    std::vector<double> terminal;  // X_T per path
    double mean = 0.0;
    double variance = 0.0;
};

PathEnsemble euler_direct(const DriftFn& b, const SimConfig& cfg);

// Euler-Maruyama in the transformed coordinates: Y is stepped with the
// trapezoidal-in-time drift lambda*(V(t_k,X_k)+V(t_{k+1},X_k))/2*dt and
// diffusion (1+V_x(t_k,X_k)) dW, and X = Psi(t,Y) is recovered each step with
// a warm-started inversion. Returns the terminal X ensemble.
PathEnsemble euler_transformed(const ZvonkinMap& map, const SimConfig& cfg);

struct FlowReport {
    std::vector<double> seps;     // initial separations
    std::vector<double> moments;  // E |X_T(x0+sep) - X_T(x0)|^q
    double exponent = 0.0;        // log-log least-squares slope
    double q = 2.0;
    long order_violations = 0;    // comonotone-start order breaks, all steps
};

// Flow regularity: paths from x0 and x0+sep share the Brownian tape; the
// moment exponent should track q for a Lipschitz-like flow and the pathwise
// order of solutions should never invert (1-D comparison principle).
FlowReport flow_stats(const DriftFn& b, const SimConfig& cfg, double q,
                      const std::vector<double>& seps);

struct ConvergenceReport {
    std::vector<double> dts;
    std::vector<double> rms;  // RMS terminal gap vs the dt_ref reference
    double order = 0.0;       // log-log least-squares slope
};

// Strong convergence of the transformed scheme: all levels and the reference
// share one fine Brownian tape (coarse increments are block sums).
ConvergenceReport strong_convergence(const ZvonkinMap& map, const SimConfig& cfg,
                                     const std::vector<double>& dts, double dt_ref);

struct SupercriticalReport {
    std::vector<double> eps;      // regularization levels
    std::vector<double> spreads;  // E |X_T^{eps_j} - X_T^{eps_{j+1}}|, shared tape
};

// Sensitivity of the regularized model drift
//   b_eps(t,x) = t^{-1/p} x (x^2 + eps^2)^{(alpha-1)/2}
// to the regularization level, paths started at x0 = 0.
SupercriticalReport supercritical_demo(double p, double alpha, const SimConfig& cfg,
                                       const std::vector<double>& eps_levels);

// Extremal (Peano) solution check for dx/dt = sign(x) |x|^alpha: RK4 from the
// closed-form value at t0 = 1e-3 to T, returning the terminal offset from
// ((1-alpha) t)^{1/(1-alpha)}.
double peano_extremal_error(double alpha, double T);

}  // namespace parlab
