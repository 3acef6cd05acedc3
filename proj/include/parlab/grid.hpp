#pragma once

#include <functional>
#include <string>
#include <vector>

namespace parlab {

// Space-time discretization of [0,T] x [-L,L]^n. The spatial grid is the
// periodic lattice x_i = -L + i*dx, i = 0..N-1, dx = 2L/N (fast convolution
// needs the power-of-two periodic layout).
struct GridSpec {
    int n = 1;       // dimension (1 or 2)
    double L = 8.0;  // box half-width
    int N = 256;     // points per axis (power of two, >= 16)
    double T = 1.0;  // time horizon
    int M = 64;      // time steps
    double p = 2.0;  // time-integrability exponent (may be +inf)

    double dx() const { return 2.0 * L / N; }
    double dt() const { return T / M; }
    int cells() const { return n == 1 ? N : N * N; }
    double time(int j) const { return T * double(j) / double(M); }
    // coordinates of a flattened cell index
    void coords(int cell, double* x) const {
        if (n == 1) {
            x[0] = -L + cell * dx();
        } else {
            x[0] = -L + (cell / N) * dx();
            x[1] = -L + (cell % N) * dx();
        }
    }
    void validate() const;  // throws std::invalid_argument on violations
};

// Sampled space-time field with `comps` components per cell.
struct GridField {
    GridSpec g;
    int comps = 1;
    std::string role;
    std::vector<double> v;  // [(M+1) * cells * comps], slice-major

    GridField() = default;
    GridField(const GridSpec& spec, int comps_, std::string role_);

    size_t slice_size() const { return size_t(g.cells()) * comps; }
    double* slice(int j) { return v.data() + slice_size() * j; }
    const double* slice(int j) const { return v.data() + slice_size() * j; }
    double& at(int j, int cell, int c) { return v[slice_size() * j + size_t(cell) * comps + c]; }
    double at(int j, int cell, int c) const {
        return v[slice_size() * j + size_t(cell) * comps + c];
    }
    bool all_finite() const;

    static GridField sample(const GridSpec& spec, int comps,
                            const std::function<void(double, const double*, double*)>& fn,
                            std::string role);
    static GridField sample_scalar(const GridSpec& spec,
                                   const std::function<double(double, const double*)>& fn,
                                   std::string role);
};

}  // namespace parlab
