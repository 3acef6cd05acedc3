#pragma once

#include <functional>
#include <vector>

#include "parlab/grid.hpp"
#include "parlab/modulus.hpp"

namespace parlab {

// Drift field b(t,x) for the Kolmogorov equation
//   lambda U - dU/dt - (1/2) Lap U - b . grad U = b.
struct DriftSpec {
    int n = 1;
    std::function<void(double, const double*, double*)> b;

    void eval(double t, const double* x, double* out) const { b(t, x, out); }

    static DriftSpec constant(int n, const std::vector<double>& c);
    static DriftSpec sinusoidal(int n, double amp, double freq);
    // Rough one-dimensional drift with modulus-of-continuity profile:
    //   b(x) = scale * sign(x) * rho(min(|x|, cutoff)),
    // tapered smoothly to zero on taper_radius <= |x| <= 2*taper_radius so it
    // fits a periodic box. scale is chosen so the measured (0,rho)-seminorm
    // of b equals target_seminorm (deterministic dyadic-pair sweep on a fine
    // reference grid).
    static DriftSpec rough(const ModulusSpec& rho, double target_seminorm,
                           double taper_radius = 2.0);
    // Scaling-supercritical model drift b(t,x) = t^{-1/p} x (x^2+eps^2)^{(alpha-1)/2}
    // (1-D; eps > 0 regularizes the |x|^alpha singularity at the origin).
    static DriftSpec supercritical(double p, double alpha, double eps);
};

// Mollification levels: time width 1/m (m = 0: off), space width 1/k
// (k = 0: off), smooth radial cutoff supported on |x| <= 2R (R = 0: off).
struct MollificationSpec {
    int m = 0;
    int k = 0;
    double R = 0.0;
};

DriftSpec mollify_drift(const DriftSpec& b, const MollificationSpec& mol);

struct PicardResult {
    GridField U;      // scalar solution field
    GridField gradU;  // centered-difference gradient, comps = n
    std::vector<double> diffs;  // sup-norm Picard increments
    double contraction = 0.0;   // max ratio of consecutive increments
    double grad_sup = 0.0;      // sup_t sup_x |grad U|
    int iterations = 0;
    bool converged = false;
};

// U^{j+1} = G_lambda[ b . (e + grad U^j) ] started from U^0 = 0.
PicardResult picard_solve_U(const DriftSpec& b, const GridSpec& g, double lambda,
                            double tol = 1e-10, int max_iter = 60);

struct LambdaSelection {
    double lambda = 0.0;
    double contraction = 0.0;
    double grad_sup = 0.0;
    double certificate = 0.0;  // smallness integral at the accepted lambda
    std::vector<double> tried;
    PicardResult picard;
};

// Doubles lambda from lambda0 until the Picard iteration contracts with
// factor <= 1/2 and sup |grad U| <= 1/2 (at most 20 doublings). Also reports
//   int_0^{sqrt(T)} e^{-lambda p r^2/(p-1)} [ r + rho(r)^{2p/(5p-2)} / r ] dr,
// the analytic smallness certificate, at the accepted lambda.
LambdaSelection select_lambda(const DriftSpec& b, const GridSpec& g, const ModulusSpec& rho,
                              double p, double lambda0 = 1.0);

double lambda_certificate(const ModulusSpec& rho, double p, double lambda, double T);

struct MollificationStudy {
    std::vector<MollificationSpec> levels;
    std::vector<double> gaps;  // sup |U_{l+1} - U_l| between consecutive levels
    GridField U_limit;         // solution at the finest level
};

// Solves the equation for each mollified drift and measures the sup-norm
// gaps between consecutive levels (Cauchy behavior of the limit solution).
MollificationStudy limit_solution(const DriftSpec& b, const GridSpec& g, double lambda,
                                  const std::vector<MollificationSpec>& levels);

}  // namespace parlab
