#pragma once

#include <array>
#include <functional>

namespace parlab {

// Symmetric n-by-n matrix for n in {1,2}; entries stored as (xx, xy, yy).
struct SymMat {
    int n = 1;
    std::array<double, 3> e{0.0, 0.0, 0.0};

    static SymMat identity(int n);
    static SymMat scalar(int n, double v);

    double det() const;
    SymMat inverse() const;  // throws on near-singular input
    double quad(const double* x) const;  // x^T M x
    void mul(const double* x, double* out) const;
    double cond() const;  // eigenvalue ratio (symmetric PSD assumed)
};

// Time-dependent (optionally space-dependent) uniformly elliptic diffusion
// coefficient a with ellipticity constant Gamma:
//   Gamma^{-1} |xi|^2 <= xi^T a xi <= Gamma |xi|^2.
struct DiffusionSpec {
    int n = 1;
    double gamma = 1.0;
    std::function<SymMat(double)> a_time;                       // a(t)
    std::function<SymMat(double, const double*)> a_space = {};  // a(t,x), optional

    static DiffusionSpec identity(int n);
    static DiffusionSpec scalar_time(int n, std::function<double(double)> a, double gamma);

    bool space_dependent() const { return bool(a_space); }
};

// A_{r,t} = int_r^t a(tau) dtau and its inverse B.
struct CovariancePair {
    SymMat A, B;
    double r = 0.0, t = 0.0;
};

// Composite Simpson accumulation of A over [r,t]; throws on t <= r or when A
// is ill-conditioned (condition number > 1e12).
CovariancePair accumulate(const DiffusionSpec& spec, double r, double t);

// K(r,t,x) = 1_{t>r} (2*pi)^{-n/2} det(B)^{1/2} exp(-(Bx,x)/2).
double kernel(const DiffusionSpec& spec, double r, double t, const double* x);
double kernel(const CovariancePair& cov, int n, const double* x);

// grad K = -K * Bx (order 1); hess K = K * (Bx (Bx)^T - B) (order 2).
void kernel_gradient(const CovariancePair& cov, int n, const double* x, double* grad);
void kernel_hessian(const CovariancePair& cov, int n, const double* x, SymMat* hess);

// Numerical mass of the kernel over [-L,L]^n on an N-per-axis grid; 1 up to
// box truncation + quadrature error when the box is large enough.
double kernel_mass(const DiffusionSpec& spec, double r, double t, double L, int N);

}  // namespace parlab
