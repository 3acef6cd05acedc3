#include "parlab/heat_kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace parlab {

SymMat SymMat::identity(int n) { return scalar(n, 1.0); }

SymMat SymMat::scalar(int n, double v) {
    if (n != 1 && n != 2) throw std::invalid_argument("SymMat: n must be 1 or 2");
    SymMat m;
    m.n = n;
    m.e = {v, 0.0, n == 2 ? v : 0.0};
    return m;
}

double SymMat::det() const { return n == 1 ? e[0] : e[0] * e[2] - e[1] * e[1]; }

SymMat SymMat::inverse() const {
    const double d = det();
    if (!(std::abs(d) > 0.0)) throw std::runtime_error("SymMat: singular matrix");
    SymMat m;
    m.n = n;
    if (n == 1) {
        m.e = {1.0 / e[0], 0.0, 0.0};
    } else {
        m.e = {e[2] / d, -e[1] / d, e[0] / d};
    }
    return m;
}

double SymMat::quad(const double* x) const {
    if (n == 1) return e[0] * x[0] * x[0];
    return e[0] * x[0] * x[0] + 2.0 * e[1] * x[0] * x[1] + e[2] * x[1] * x[1];
}

void SymMat::mul(const double* x, double* out) const {
    if (n == 1) {
        out[0] = e[0] * x[0];
    } else {
        out[0] = e[0] * x[0] + e[1] * x[1];
        out[1] = e[1] * x[0] + e[2] * x[1];
    }
}

double SymMat::cond() const {
    if (n == 1) return 1.0;
    const double tr = e[0] + e[2];
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det()));
    const double lo = tr / 2.0 - disc, hi = tr / 2.0 + disc;
    if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

DiffusionSpec DiffusionSpec::identity(int n) {
    DiffusionSpec s;
    s.n = n;
    s.gamma = 1.0;
    s.a_time = [n](double) { return SymMat::identity(n); };
    return s;
}

DiffusionSpec DiffusionSpec::scalar_time(int n, std::function<double(double)> a, double gamma) {
    DiffusionSpec s;
    s.n = n;
    s.gamma = gamma;
    s.a_time = [n, a = std::move(a)](double t) { return SymMat::scalar(n, a(t)); };
    return s;
}

CovariancePair accumulate(const DiffusionSpec& spec, double r, double t) {
    if (!(t > r)) throw std::invalid_argument("accumulate: need r < t");
    // composite Simpson with panel count scaled to the gap
    const int panels = std::max(8, int(std::ceil(64.0 * (t - r))) & ~1);
    const double h = (t - r) / (2 * panels);
    SymMat A;
    A.n = spec.n;
    auto add = [&](double tau, double w) {
        const SymMat a = spec.a_time(tau);
        for (int k = 0; k < 3; ++k) A.e[k] += w * a.e[k];
    };
    add(r, 1.0);
    add(t, 1.0);
    for (int i = 1; i < 2 * panels; ++i) add(r + i * h, (i % 2 == 1) ? 4.0 : 2.0);
    for (int k = 0; k < 3; ++k) A.e[k] *= h / 3.0;
    if (A.cond() > 1e12)
        throw std::runtime_error("accumulate: covariance matrix is ill-conditioned");
    return CovariancePair{A, A.inverse(), r, t};
}

double kernel(const CovariancePair& cov, int n, const double* x) {
    const double norm =
        std::pow(2.0 * std::numbers::pi, -0.5 * n) * std::sqrt(cov.B.det());
    return norm * std::exp(-0.5 * cov.B.quad(x));
}

double kernel(const DiffusionSpec& spec, double r, double t, const double* x) {
    if (t <= r) return 0.0;  // the indicator 1_{t>r}
    return kernel(accumulate(spec, r, t), spec.n, x);
}

void kernel_gradient(const CovariancePair& cov, int n, const double* x, double* grad) {
    const double k = kernel(cov, n, x);
    double bx[2];
    cov.B.mul(x, bx);
    for (int i = 0; i < n; ++i) grad[i] = -k * bx[i];
}

void kernel_hessian(const CovariancePair& cov, int n, const double* x, SymMat* hess) {
    const double k = kernel(cov, n, x);
    double bx[2];
    cov.B.mul(x, bx);
    hess->n = n;
    hess->e[0] = k * (bx[0] * bx[0] - cov.B.e[0]);
    if (n == 2) {
        hess->e[1] = k * (bx[0] * bx[1] - cov.B.e[1]);
        hess->e[2] = k * (bx[1] * bx[1] - cov.B.e[2]);
    }
}

double kernel_mass(const DiffusionSpec& spec, double r, double t, double L, int N) {
    if (t <= r) return 0.0;
    const CovariancePair cov = accumulate(spec, r, t);
    const double dx = 2.0 * L / N;
    double mass = 0.0;
    if (spec.n == 1) {
        for (int i = 0; i < N; ++i) {
            const double x = -L + i * dx;
            mass += kernel(cov, 1, &x);
        }
        mass *= dx;
    } else {
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) {
                const double x[2] = {-L + i * dx, -L + j * dx};
                mass += kernel(cov, 2, x);
            }
        }
        mass *= dx * dx;
    }
    return mass;
}

}  // namespace parlab
