#include "parlab/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "parlab/fft.hpp"

namespace parlab {

namespace {

using fft::cvec;

// Frequencies of the periodic box [-L,L): k_m = (pi/L) * signed(m).
std::vector<double> freqs(int N, double L) {
    std::vector<double> k(N);
    for (int m = 0; m < N; ++m) {
        const int s = (m <= N / 2) ? m : m - N;
        k[m] = std::numbers::pi / L * double(s);
    }
    return k;
}

// Exact Fourier symbol of the periodized kernel: exp(-(k,Ak)/2). Evaluating
// the symbol (rather than sampling K in real space) keeps sharp kernels
// (t - r << dx^2) exact: the k=0 mass is 1 identically and the convolution is
// the trigonometric interpolation of f.
struct SymbolTable {
    const GridSpec& g;
    std::vector<double> k;

    explicit SymbolTable(const GridSpec& grid) : g(grid), k(freqs(grid.N, grid.L)) {}

    // multiply acc += w * symbol(A) (x) fhat, optionally with the Hessian
    // factor -k_a k_b (comp < 0 means plain kernel)
    void accumulate(cvec& acc, const cvec& fhat, const SymMat& A, double w, int comp) const {
        if (g.n == 1) {
            for (int m = 0; m < g.N; ++m) {
                double s = std::exp(-0.5 * A.e[0] * k[m] * k[m]);
                if (comp == 0) s *= -k[m] * k[m];
                acc[m] += w * s * fhat[m];
            }
        } else {
            for (int m1 = 0; m1 < g.N; ++m1) {
                for (int m2 = 0; m2 < g.N; ++m2) {
                    const double k1 = k[m1], k2 = k[m2];
                    double s = std::exp(-0.5 * (A.e[0] * k1 * k1 + 2.0 * A.e[1] * k1 * k2 +
                                                A.e[2] * k2 * k2));
                    if (comp == 0) s *= -k1 * k1;
                    else if (comp == 1) s *= -k1 * k2;
                    else if (comp == 2) s *= -k2 * k2;
                    acc[size_t(m1) * g.N + m2] += w * s * fhat[size_t(m1) * g.N + m2];
                }
            }
        }
    }
};

cvec forward(const GridSpec& g, const double* slice) {
    std::vector<double> tmp(slice, slice + g.cells());
    return g.n == 1 ? fft::forward_real(tmp) : fft::forward_real_2d(tmp, g.N);
}

std::vector<double> inverse(const GridSpec& g, cvec a) {
    return g.n == 1 ? fft::inverse_to_real(std::move(a))
                    : fft::inverse_to_real_2d(std::move(a), g.N);
}

// Composite Newton–Cotes weights for int_0^{m dt} with nodes 0..m: Simpson
// for even m, Simpson + 3/8 tail for odd m, trapezoid for m = 1.
std::vector<double> composite_weights(int m, double dt) {
    std::vector<double> w(size_t(m) + 1, 0.0);
    if (m == 0) return w;
    if (m == 1) {
        w[0] = w[1] = dt / 2.0;
        return w;
    }
    const int even_end = (m % 2 == 0) ? m : m - 3;
    if (even_end >= 2) {
        w[0] += dt / 3.0;
        w[even_end] += dt / 3.0;
        for (int i = 1; i < even_end; ++i) w[i] += (i % 2 == 1 ? 4.0 : 2.0) * dt / 3.0;
    }
    if (m % 2 == 1) {
        const double c = 3.0 * dt / 8.0;
        w[m - 3] += c;
        w[m - 2] += 3.0 * c;
        w[m - 1] += 3.0 * c;
        w[m] += c;
    }
    return w;
}

SymMat cov_between(const DiffusionSpec& spec, double r, double t) {
    if (t - r < 1e-12) return SymMat::scalar(spec.n, 0.0);  // point mass
    return accumulate(spec, r, t).A;
}

void check_box(const DiffusionSpec& spec, const GridSpec& g) {
    // mass of the (non-periodized) kernel escaping the box at the widest gap
    const double sigma = std::sqrt(spec.gamma * g.T);
    const double deficit = std::erfc(g.L / (sigma * std::sqrt(2.0)));
    if (deficit > 1e-3)
        throw std::runtime_error("solve_g_lambda: box too small (kernel mass deficit > 1e-3)");
}

struct AffineFit {
    // per time slice: f(x) ~ c0 + c . x  (least squares over the box)
    std::vector<double> c0;                   // [M+1]
    std::vector<std::array<double, 2>> c1;    // [M+1]
};

AffineFit split_affine(GridField& f) {
    const GridSpec& g = f.g;
    AffineFit fit;
    fit.c0.assign(g.M + 1, 0.0);
    fit.c1.assign(g.M + 1, {0.0, 0.0});
    if (f.comps != 1)
        throw std::invalid_argument("linear-growth split supports scalar sources only");
    const double xbar = -g.dx() / 2.0;  // mean of the grid coordinates
    double sxx = 0.0;
    for (int i = 0; i < g.N; ++i) {
        const double x = -g.L + i * g.dx();
        sxx += (x - xbar) * (x - xbar);
    }
    double x[2];
    for (int j = 0; j <= g.M; ++j) {
        double* s = f.slice(j);
        const int cells = g.cells();
        double fbar = 0.0;
        for (int c = 0; c < cells; ++c) fbar += s[c];
        fbar /= cells;
        double sxy[2] = {0.0, 0.0};
        for (int c = 0; c < cells; ++c) {
            g.coords(c, x);
            sxy[0] += (x[0] - xbar) * (s[c] - fbar);
            if (g.n == 2) sxy[1] += (x[1] - xbar) * (s[c] - fbar);
        }
        const double denom = sxx * (g.n == 1 ? 1.0 : g.N);
        fit.c1[j][0] = sxy[0] / denom;
        fit.c1[j][1] = g.n == 2 ? sxy[1] / denom : 0.0;
        fit.c0[j] = fbar - fit.c1[j][0] * xbar - (g.n == 2 ? fit.c1[j][1] * xbar : 0.0);
        for (int c = 0; c < cells; ++c) {
            g.coords(c, x);
            s[c] -= fit.c0[j] + fit.c1[j][0] * x[0] + (g.n == 2 ? fit.c1[j][1] * x[1] : 0.0);
        }
    }
    return fit;
}

// int_0^{t_j} e^{-lambda (t_j - r)} c(r) dr with the solver's quadrature
// (composite weights + graded endpoint panel, linear interpolation of c).
double time_integral(const std::vector<double>& c, int j, double dt, double lambda) {
    if (j == 0) return 0.0;
    const double tj = j * dt;
    auto w = composite_weights(j - 1, dt);
    double acc = 0.0;
    for (int i = 0; i + 1 <= j; ++i)
        acc += w[i] * std::exp(-lambda * (tj - i * dt)) * c[i];
    const int S = 8;  // Simpson in s on [0,1]; the s = 0 node vanishes
    for (int q = 1; q <= S; ++q) {
        const double s = double(q) / S;
        const double r = tj - dt * s * s;
        const double theta = 1.0 - s * s;  // position in [t_{j-1}, t_j]
        const double cr = (1.0 - theta) * c[j - 1] + theta * c[j];
        const double sw = (q == S) ? 1.0 : (q % 2 == 1 ? 4.0 : 2.0);
        acc += sw / (3.0 * S) * 2.0 * dt * s * std::exp(-lambda * (tj - r)) * cr;
    }
    return acc;
}

}  // namespace

GridField solve_g_lambda(const GridField& f_in, const DiffusionSpec& spec, double lambda,
                         bool linear_growth) {
    const GridSpec& g = f_in.g;
    g.validate();
    if (spec.n != g.n) throw std::invalid_argument("solve_g_lambda: dimension mismatch");
    if (lambda < 0.0) throw std::invalid_argument("solve_g_lambda: lambda >= 0 required");
    if (!f_in.all_finite()) throw std::invalid_argument("solve_g_lambda: source not finite");
    check_box(spec, g);

    GridField f = f_in;
    AffineFit fit;
    if (linear_growth) fit = split_affine(f);

    const int comps = f.comps;
    const double dt = g.dt();
    SymbolTable sym(g);

    std::vector<std::vector<cvec>> fhat(g.M + 1, std::vector<cvec>(comps));
    std::vector<double> tmp(g.cells());
    for (int j = 0; j <= g.M; ++j) {
        for (int c = 0; c < comps; ++c) {
            for (int cell = 0; cell < g.cells(); ++cell) tmp[cell] = f.at(j, cell, c);
            fhat[j][c] = forward(g, tmp.data());
        }
    }

    GridField u(g, comps, "solution");
    for (int j = 1; j <= g.M; ++j) {
        const double tj = g.time(j);
        auto w = composite_weights(j - 1, dt);
        for (int c = 0; c < comps; ++c) {
            cvec acc(size_t(g.cells()), {0.0, 0.0});
            for (int i = 0; i + 1 <= j; ++i) {
                if (w[i] == 0.0) continue;
                const SymMat A = cov_between(spec, g.time(i), tj);
                sym.accumulate(acc, fhat[i][c], A, w[i] * std::exp(-lambda * (tj - g.time(i))),
                               -1);
            }
            // graded endpoint panel on [t_{j-1}, t_j]: r = t_j - dt s^2,
            // Simpson in s (the s = 0 node vanishes)
            const int S = 8;
            for (int q = 1; q <= S; ++q) {
                const double s = double(q) / S;
                const double r = tj - dt * s * s;
                const double theta = 1.0 - s * s;
                const SymMat A = cov_between(spec, r, tj);
                const double sw = (q == S) ? 1.0 : (q % 2 == 1 ? 4.0 : 2.0);
                const double wq =
                    sw / (3.0 * S) * 2.0 * dt * s * std::exp(-lambda * (tj - r));
                cvec mix(size_t(g.cells()));
                for (size_t m = 0; m < mix.size(); ++m)
                    mix[m] = (1.0 - theta) * fhat[j - 1][c][m] + theta * fhat[j][c][m];
                sym.accumulate(acc, mix, A, wq, -1);
            }
            auto real = inverse(g, std::move(acc));
            for (int cell = 0; cell < g.cells(); ++cell) u.at(j, cell, c) = real[cell];
        }
        if (linear_growth) {
            // the kernel preserves affine functions; closed-form image
            const double q0 = time_integral(fit.c0, j, dt, lambda);
            std::vector<double> c1x(g.M + 1), c1y(g.M + 1);
            for (int i = 0; i <= g.M; ++i) {
                c1x[i] = fit.c1[i][0];
                c1y[i] = fit.c1[i][1];
            }
            const double q1 = time_integral(c1x, j, dt, lambda);
            const double q2 = g.n == 2 ? time_integral(c1y, j, dt, lambda) : 0.0;
            double x[2];
            for (int cell = 0; cell < g.cells(); ++cell) {
                g.coords(cell, x);
                u.at(j, cell, 0) += q0 + q1 * x[0] + (g.n == 2 ? q2 * x[1] : 0.0);
            }
        }
    }
    return u;
}

GridField second_derivative_field(const GridField& f_in, const DiffusionSpec& spec,
                                  double lambda, bool linear_growth, int graded_nodes) {
    const GridSpec& g = f_in.g;
    g.validate();
    if (spec.n != g.n) throw std::invalid_argument("second_derivative_field: dimension mismatch");
    check_box(spec, g);

    GridField f = f_in;
    if (linear_growth) split_affine(f);  // affine part has identically zero Hessian image
    if (f.comps != 1)
        throw std::invalid_argument("second_derivative_field: scalar sources only");

    const int hcomps = g.n == 1 ? 1 : 3;
    const double dt = g.dt();
    SymbolTable sym(g);

    std::vector<cvec> fhat(g.M + 1);
    for (int j = 0; j <= g.M; ++j) fhat[j] = forward(g, f.slice(j));

    // The Hessian symbol -k_a k_b exp(-(k,Ak)/2) vanishes at k=0, so the
    // subtraction of f(r,x) (which only carries the k=0 mass of hess K) is
    // exact and implicit in the spectral form; the graded mesh in
    // s = sqrt(1 - r/t) resolves the (t-r)^{alpha/2 - 1} endpoint.
    GridField hess(g, hcomps, "hessian");
    const int Mq = graded_nodes;
    for (int j = 1; j <= g.M; ++j) {
        const double tj = g.time(j);
        std::vector<cvec> acc(hcomps, cvec(size_t(g.cells()), {0.0, 0.0}));
        for (int q = 0; q < Mq; ++q) {
            const double s = (q + 0.5) / Mq;
            const double r = tj * (1.0 - s * s);
            const SymMat A = cov_between(spec, r, tj);
            const double w = (2.0 * tj * s / Mq) * std::exp(-lambda * (tj - r));
            // linear interpolation of fhat at time r
            const double pos = r / dt;
            const int i0 = std::min(int(pos), g.M - 1);
            const double th = pos - i0;
            cvec mix(size_t(g.cells()));
            for (size_t m = 0; m < mix.size(); ++m)
                mix[m] = (1.0 - th) * fhat[i0][m] + th * fhat[i0 + 1][m];
            for (int c = 0; c < hcomps; ++c) sym.accumulate(acc[c], mix, A, w, c);
        }
        for (int c = 0; c < hcomps; ++c) {
            auto real = inverse(g, std::move(acc[c]));
            for (int cell = 0; cell < g.cells(); ++cell) hess.at(j, cell, c) = real[cell];
        }
    }
    return hess;
}

GridField gradient_field(const GridField& u) {
    const GridSpec& g = u.g;
    if (u.comps != 1) throw std::invalid_argument("gradient_field: scalar fields only");
    GridField out(g, g.n, "gradient");
    const double inv2dx = 1.0 / (2.0 * g.dx());
    for (int j = 0; j <= g.M; ++j) {
        const double* s = u.slice(j);
        if (g.n == 1) {
            for (int i = 0; i < g.N; ++i)
                out.at(j, i, 0) = (s[(i + 1) % g.N] - s[(i + g.N - 1) % g.N]) * inv2dx;
        } else {
            for (int r = 0; r < g.N; ++r) {
                for (int c = 0; c < g.N; ++c) {
                    auto idx = [&](int rr, int cc) {
                        return size_t((rr + g.N) % g.N) * g.N + (cc + g.N) % g.N;
                    };
                    out.at(j, r * g.N + c, 0) = (s[idx(r + 1, c)] - s[idx(r - 1, c)]) * inv2dx;
                    out.at(j, r * g.N + c, 1) = (s[idx(r, c + 1)] - s[idx(r, c - 1)]) * inv2dx;
                }
            }
        }
    }
    return out;
}

GridField hessian_field_fd(const GridField& u) {
    const GridSpec& g = u.g;
    if (u.comps != 1) throw std::invalid_argument("hessian_field_fd: scalar fields only");
    GridField out(g, g.n == 1 ? 1 : 3, "hessian_fd");
    const double invdx2 = 1.0 / (g.dx() * g.dx());
    for (int j = 0; j <= g.M; ++j) {
        const double* s = u.slice(j);
        if (g.n == 1) {
            for (int i = 0; i < g.N; ++i)
                out.at(j, i, 0) =
                    (s[(i + 1) % g.N] - 2.0 * s[i] + s[(i + g.N - 1) % g.N]) * invdx2;
        } else {
            auto idx = [&](int rr, int cc) {
                return size_t((rr + g.N) % g.N) * g.N + (cc + g.N) % g.N;
            };
            for (int r = 0; r < g.N; ++r) {
                for (int c = 0; c < g.N; ++c) {
                    const int cell = r * g.N + c;
                    out.at(j, cell, 0) =
                        (s[idx(r + 1, c)] - 2.0 * s[idx(r, c)] + s[idx(r - 1, c)]) * invdx2;
                    out.at(j, cell, 2) =
                        (s[idx(r, c + 1)] - 2.0 * s[idx(r, c)] + s[idx(r, c - 1)]) * invdx2;
                    out.at(j, cell, 1) = (s[idx(r + 1, c + 1)] - s[idx(r + 1, c - 1)] -
                                          s[idx(r - 1, c + 1)] + s[idx(r - 1, c - 1)]) *
                                         invdx2 / 4.0;
                }
            }
        }
    }
    return out;
}

namespace {

double slice_seminorm(const GridField& h, int j, int comp, double alpha, const ModulusSpec& rho,
                      const SeminormOptions& opt) {
    const GridSpec& g = h.g;
    std::vector<double> vals(g.cells());
    for (int cell = 0; cell < g.cells(); ++cell) vals[cell] = h.at(j, cell, comp);
    return g.n == 1 ? holder_seminorm_1d(vals.data(), g.N, g.dx(), alpha, rho, opt)
                    : holder_seminorm_2d(vals.data(), g.N, g.dx(), alpha, rho, opt);
}

double weighted_base(const GridField& u, int j, char theta) {
    const GridSpec& g = u.g;
    double x[2], best = 0.0;
    for (int cell = 0; cell < g.cells(); ++cell) {
        double mag = 0.0;
        for (int c = 0; c < u.comps; ++c) mag += u.at(j, cell, c) * u.at(j, cell, c);
        mag = std::sqrt(mag);
        if (theta == 'l') {
            g.coords(cell, x);
            mag /= 1.0 + (g.n == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]));
        }
        best = std::max(best, mag);
    }
    return best;
}

}  // namespace

std::vector<SliceNorm> class_norms(const GridField& u, const GridField& grad,
                                   const GridField& hess, const ClassLabel& label,
                                   const ModulusSpec& rho, const SeminormOptions& opt) {
    const GridSpec& g = u.g;
    if (grad.g.N != g.N || hess.g.N != g.N || grad.g.M != g.M || hess.g.M != g.M)
        throw std::invalid_argument("class_norms: mismatched grids");
    std::vector<SliceNorm> out(g.M + 1);
    for (int j = 0; j <= g.M; ++j) {
        SliceNorm sn;
        sn.base = weighted_base(u, j, label.theta);
        sn.grad = weighted_base(grad, j, 'b');
        sn.hess = weighted_base(hess, j, 'b');
        for (int c = 0; c < hess.comps; ++c)
            sn.hess_semi = std::max(sn.hess_semi, slice_seminorm(hess, j, c, label.alpha, rho, opt));
        out[j] = sn;
    }
    return out;
}

std::vector<double> source_norms(const GridField& f, const ClassLabel& label,
                                 const ModulusSpec& rho, const SeminormOptions& opt) {
    std::vector<double> out(f.g.M + 1);
    for (int j = 0; j <= f.g.M; ++j)
        out[j] = weighted_base(f, j, label.theta) + slice_seminorm(f, j, 0, label.alpha, rho, opt);
    return out;
}

double lp_time_aggregate(const std::vector<double>& per_time, double p, double T) {
    if (per_time.empty()) return 0.0;
    if (std::isinf(p)) return *std::max_element(per_time.begin(), per_time.end());
    const int M = int(per_time.size()) - 1;
    const double dt = T / M;
    double acc = 0.0;
    for (int j = 0; j <= M; ++j) {
        const double w = (j == 0 || j == M) ? 0.5 : 1.0;
        acc += w * std::pow(per_time[j], p) * dt;
    }
    return std::pow(acc, 1.0 / p);
}

namespace {

struct NormedRun {
    double source = 0.0, solution = 0.0;
    std::vector<double> source_t, solution_t, times;
};

NormedRun run_norms(const std::function<double(double, const double*)>& f_fn,
                    const DiffusionSpec& spec, double lambda, const GridSpec& gs,
                    const ClassLabel& label, const ModulusSpec& rho,
                    const SeminormOptions& opt) {
    GridField f = GridField::sample_scalar(gs, f_fn, "source");
    const bool lin = label.theta == 'l';
    GridField u = solve_g_lambda(f, spec, lambda, lin);
    GridField grad = gradient_field(u);
    GridField hess = second_derivative_field(f, spec, lambda, lin);
    auto un = class_norms(u, grad, hess, label, rho, opt);
    auto fn = source_norms(f, label, rho, opt);
    NormedRun out;
    for (int j = 0; j <= gs.M; ++j) {
        out.times.push_back(gs.time(j));
        out.source_t.push_back(fn[j]);
        out.solution_t.push_back(un[j].total());
    }
    out.source = lp_time_aggregate(out.source_t, gs.p, gs.T);
    out.solution = lp_time_aggregate(out.solution_t, gs.p, gs.T);
    return out;
}

}  // namespace

RegularityReport verify_maximal_regularity(
    const std::function<double(double, const double*)>& f_fn, const DiffusionSpec& spec,
    double lambda, const GridSpec& grid, const ClassLabel& label, const ModulusSpec& rho,
    std::uint64_t seed) {
    if (rho.increasing() && !is_slowly_varying(rho))
        throw std::runtime_error(
            "verify_maximal_regularity: increasing rho must be slowly varying");
    SeminormOptions opt;
    opt.seed = seed;
    opt.min_sep = 2.0 * grid.dx();  // common floor across both resolutions
    NormedRun coarse = run_norms(f_fn, spec, lambda, grid, label, rho, opt);
    GridSpec fine = grid;
    fine.N *= 2;
    NormedRun fres = run_norms(f_fn, spec, lambda, fine, label, rho, opt);

    RegularityReport rep;
    rep.seed = seed;
    rep.times = fres.times;
    rep.source_norm_t = fres.source_t;
    rep.solution_norm_t = fres.solution_t;
    rep.source_agg = fres.source;
    rep.solution_agg = fres.solution;
    rep.ratio_coarse = coarse.source > 0.0 ? coarse.solution / coarse.source : 0.0;
    rep.ratio_fine = fres.source > 0.0 ? fres.solution / fres.source : 0.0;
    return rep;
}

EmbeddingReport verify_embedding(const std::function<double(double, const double*)>& f_fn,
                                 const DiffusionSpec& spec, double lambda, const GridSpec& grid,
                                 const ClassLabel& label, const ModulusSpec& rho,
                                 std::uint64_t seed) {
    const double two_over_p = std::isinf(label.p) ? 0.0 : 2.0 / label.p;
    if (label.alpha < two_over_p - 1.0 - 1e-12)
        throw std::runtime_error("verify_embedding: hypothesis alpha >= 2/p - 1 violated");

    SeminormOptions opt;
    opt.seed = seed;
    opt.min_sep = 2.0 * grid.dx();

    const bool boundary_two = std::abs(label.alpha - two_over_p) < 1e-12;
    const bool boundary_one = std::abs(label.alpha - (two_over_p - 1.0)) < 1e-12;

    // modulus used for the output seminorm: rho_hat at the exponent
    // boundaries (Dini case), plain rho with the shifted exponent otherwise
    ModulusSpec out_mod = rho;
    double out_alpha = label.alpha - two_over_p;
    if (boundary_two || boundary_one) {
        std::vector<double> rs, vals;
        for (double r = 1.0; r >= opt.min_sep / 4.0; r /= 1.1) rs.push_back(r);
        std::reverse(rs.begin(), rs.end());
        for (double r : rs) vals.push_back(rho_hat_at(rho, r));
        out_mod = ModulusSpec::tabulated(rs, vals);
        out_alpha = 0.0;
    }

    auto run = [&](const GridSpec& gs) {
        GridField f = GridField::sample_scalar(gs, f_fn, "source");
        const bool lin = label.theta == 'l';
        double best = 0.0;
        if (boundary_one) {
            GridField u = solve_g_lambda(f, spec, lambda, lin);
            GridField grad = gradient_field(u);
            for (int j = 0; j <= gs.M; ++j)
                for (int c = 0; c < grad.comps; ++c)
                    best = std::max(best, slice_seminorm(grad, j, c, out_alpha, out_mod, opt));
        } else {
            GridField hess = second_derivative_field(f, spec, lambda, lin);
            for (int j = 0; j <= gs.M; ++j)
                for (int c = 0; c < hess.comps; ++c)
                    best = std::max(best, slice_seminorm(hess, j, c, out_alpha, out_mod, opt));
        }
        return best;
    };

    EmbeddingReport rep;
    rep.ratio_coarse = run(grid);
    GridSpec fine = grid;
    fine.N *= 2;
    rep.ratio_fine = run(fine);
    GridField f = GridField::sample_scalar(grid, f_fn, "source");
    rep.source_agg = lp_time_aggregate(source_norms(f, label, rho, opt), grid.p, grid.T);
    rep.empirical_constant = rep.source_agg > 0.0 ? rep.ratio_fine / rep.source_agg : 0.0;
    return rep;
}

DriftedResult solve_drifted(const GridField& f, const GridField& g_drift,
                            const DiffusionSpec& spec, double lambda, double tol) {
    const GridSpec& g = f.g;
    g.validate();
    if (f.comps != 1) throw std::invalid_argument("solve_drifted: scalar sources only");
    if (g_drift.comps != g.n) throw std::invalid_argument("solve_drifted: drift comps != n");

    // oscillation a(t,x) - a(t), identically zero without a space-dependent a
    auto osc = [&](double t, const double* x) -> SymMat {
        if (!spec.space_dependent()) return SymMat::scalar(spec.n, 0.0);
        SymMat s = spec.a_space(t, x);
        const SymMat base = spec.a_time(t);
        for (int k = 0; k < 3; ++k) s.e[k] -= base.e[k];
        return s;
    };

    auto apply_T = [&](const GridField& v, double tau) {
        GridField grad = gradient_field(v);
        GridField hess = hessian_field_fd(v);
        GridField src(g, 1, "inner-source");
        double x[2];
        for (int j = 0; j <= g.M; ++j) {
            const double t = g.time(j);
            for (int cell = 0; cell < g.cells(); ++cell) {
                g.coords(cell, x);
                const SymMat o = osc(t, x);
                double hterm = o.e[0] * hess.at(j, cell, 0);
                if (g.n == 2)
                    hterm += 2.0 * o.e[1] * hess.at(j, cell, 1) + o.e[2] * hess.at(j, cell, 2);
                double gterm = g_drift.at(j, cell, 0) * grad.at(j, cell, 0);
                if (g.n == 2) gterm += g_drift.at(j, cell, 1) * grad.at(j, cell, 1);
                src.at(j, cell, 0) =
                    tau * (0.5 * hterm + gterm) + f.at(j, cell, 0);
            }
        }
        return solve_g_lambda(src, spec, lambda, false);
    };

    auto sup_diff = [&](const GridField& a, const GridField& b) {
        double m = 0.0;
        for (size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
        return m;
    };

    DriftedResult res{GridField(g, 1, "solution"), {}, {}, 0.0};
    GridField v(g, 1, "iterate");
    double tau = 0.0, step = 1.0 / 8.0;
    int halvings = 0;
    while (tau < 1.0 - 1e-12) {
        const double tau_next = std::min(1.0, tau + step);
        GridField cur = v;
        double prev_diff = -1.0;
        bool ok = false;
        double worst_factor = 0.0;
        for (int it = 0; it < 80; ++it) {
            GridField nxt = apply_T(cur, tau_next);
            const double d = sup_diff(nxt, cur);
            if (prev_diff > 0.0) worst_factor = std::max(worst_factor, d / prev_diff);
            cur = std::move(nxt);
            if (d <= tol) {
                ok = true;  // converged; the factor still gates the tau step below
                break;
            }
            prev_diff = d;
        }
        if (!ok || worst_factor >= 0.8) {
            if (++halvings > 6)
                throw std::runtime_error(
                    "solve_drifted: contraction factor >= 0.8 after tau-step halving limit "
                    "(lambda too small)");
            step /= 2.0;
            continue;
        }
        res.tau_grid.push_back(tau_next);
        res.contraction.push_back(worst_factor);
        v = std::move(cur);
        tau = tau_next;
    }
    res.u = v;

    // discrete residual of the drifted equation on interior time nodes
    GridField grad = gradient_field(v);
    GridField hess = hessian_field_fd(v);
    const double dt = g.dt();
    double worst = 0.0;
    double x[2];
    for (int j = std::max(1, g.M / 10); j < g.M; ++j) {
        const double t = g.time(j);
        for (int cell = 0; cell < g.cells(); ++cell) {
            g.coords(cell, x);
            const SymMat a = spec.space_dependent() ? spec.a_space(t, x) : spec.a_time(t);
            const double ut = (v.at(j + 1, cell, 0) - v.at(j - 1, cell, 0)) / (2.0 * dt);
            double hterm = a.e[0] * hess.at(j, cell, 0);
            if (g.n == 2)
                hterm += 2.0 * a.e[1] * hess.at(j, cell, 1) + a.e[2] * hess.at(j, cell, 2);
            double gterm = g_drift.at(j, cell, 0) * grad.at(j, cell, 0);
            if (g.n == 2) gterm += g_drift.at(j, cell, 1) * grad.at(j, cell, 1);
            const double r =
                ut - 0.5 * hterm - gterm + lambda * v.at(j, cell, 0) - f.at(j, cell, 0);
            worst = std::max(worst, std::abs(r));
        }
    }
    res.residual = worst;
    return res;
}

}  // namespace parlab
