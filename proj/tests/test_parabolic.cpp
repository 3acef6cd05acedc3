#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "parlab/parabolic.hpp"

using namespace parlab;

namespace {

GridSpec grid1d(int N, int M, double L = 8.0) {
    GridSpec g;
    g.n = 1;
    g.L = L;
    g.N = N;
    g.T = 1.0;
    g.M = M;
    g.p = 2.0;
    return g;
}

double sup_err(const GridField& u, int j,
               const std::function<double(const double*)>& exact, int comp = 0) {
    double x[2], worst = 0.0;
    for (int cell = 0; cell < u.g.cells(); ++cell) {
        u.g.coords(cell, x);
        worst = std::max(worst, std::abs(u.at(j, cell, comp) - exact(x)));
    }
    return worst;
}

}  // namespace

TEST_CASE("constant source: u(t) = (1 - e^{-lambda t}) / lambda") {
    auto g = grid1d(32, 64);
    auto f = GridField::sample_scalar(g, [](double, const double*) { return 1.0; }, "source");
    const double lambda = 2.0;
    auto u = solve_g_lambda(f, DiffusionSpec::identity(1), lambda);
    // frozen: (1 - e^{-2}) / 2
    const double expected = 0.43233235838169365;
    CHECK(std::abs(u.at(g.M, 0, 0) - expected) < 1e-6);
    // intermediate time as well
    const double t = g.time(g.M / 2);
    CHECK(std::abs(u.at(g.M / 2, 5, 0) - (1.0 - std::exp(-lambda * t)) / lambda) < 1e-6);
    // space-constant data is unaffected by a time-dependent diffusion
    auto spec = DiffusionSpec::scalar_time(1, [](double t_) { return 1.0 + 0.5 * t_; }, 1.5);
    auto u2 = solve_g_lambda(f, spec, lambda);
    CHECK(std::abs(u2.at(g.M, 7, 0) - expected) < 1e-6);
}

TEST_CASE("sin eigenfunction: u = 2 (1 - e^{-t/2}) sin x") {
    auto g = grid1d(64, 64, 4.0 * std::numbers::pi);
    auto f = GridField::sample_scalar(g, [](double, const double* x) { return std::sin(x[0]); },
                                      "source");
    auto u = solve_g_lambda(f, DiffusionSpec::identity(1), 0.0);
    for (int j : {8, 32, 64}) {
        const double amp = 2.0 * (1.0 - std::exp(-0.5 * g.time(j)));
        CHECK(sup_err(u, j, [&](const double* x) { return amp * std::sin(x[0]); }) < 1e-5);
    }
}

TEST_CASE("second_derivative_field matches the eigenfunction Hessian") {
    auto g = grid1d(64, 64, 4.0 * std::numbers::pi);
    auto f = GridField::sample_scalar(g, [](double, const double* x) { return std::sin(x[0]); },
                                      "source");
    auto h = second_derivative_field(f, DiffusionSpec::identity(1), 0.0);
    const double amp = -2.0 * (1.0 - std::exp(-0.5));
    CHECK(sup_err(h, g.M, [&](const double* x) { return amp * std::sin(x[0]); }) < 1e-3);
}

TEST_CASE("second_derivative_field cross-validates the FD Hessian of the solution") {
    auto g = grid1d(128, 32, 4.0 * std::numbers::pi);
    auto f = GridField::sample_scalar(
        g, [](double t, const double* x) { return std::sin(x[0]) + 0.3 * std::cos(2.0 * x[0]) * t; },
        "source");
    auto spec = DiffusionSpec::identity(1);
    auto u = solve_g_lambda(f, spec, 1.0);
    auto h_direct = second_derivative_field(f, spec, 1.0);
    auto h_fd = hessian_field_fd(u);
    double worst = 0.0;
    for (int j = 1; j <= g.M; ++j)
        for (int cell = 0; cell < g.cells(); ++cell)
            worst = std::max(worst, std::abs(h_direct.at(j, cell, 0) - h_fd.at(j, cell, 0)));
    CHECK(worst < 1e-2);
}

TEST_CASE("linear growth: affine data maps to affine solutions with zero Hessian") {
    auto g = grid1d(32, 32);
    auto f = GridField::sample_scalar(g, [](double, const double* x) { return x[0]; }, "source");
    const double lambda = 1.0;
    auto u = solve_g_lambda(f, DiffusionSpec::identity(1), lambda, /*linear_growth=*/true);
    const double fac = (1.0 - std::exp(-lambda)) / lambda;
    CHECK(sup_err(u, g.M, [&](const double* x) { return fac * x[0]; }) < 1e-6);
    auto h = second_derivative_field(f, DiffusionSpec::identity(1), lambda, true);
    for (int cell = 0; cell < g.cells(); ++cell) CHECK(std::abs(h.at(g.M, cell, 0)) < 1e-10);
}

TEST_CASE("linearity, positivity, lambda-monotonicity") {
    auto g = grid1d(32, 16);
    auto f1 = GridField::sample_scalar(
        g, [](double t, const double* x) { return std::exp(-x[0] * x[0]) * (1.0 + t); }, "f1");
    auto f2 = GridField::sample_scalar(
        g, [](double, const double* x) { return std::cos(x[0] / 2.0); }, "f2");
    auto spec = DiffusionSpec::identity(1);
    auto u1 = solve_g_lambda(f1, spec, 1.0);
    auto u2 = solve_g_lambda(f2, spec, 1.0);
    GridField fsum = f1;
    for (size_t i = 0; i < fsum.v.size(); ++i) fsum.v[i] += f2.v[i];
    auto usum = solve_g_lambda(fsum, spec, 1.0);
    double lin = 0.0, umin = 0.0;
    for (size_t i = 0; i < usum.v.size(); ++i) {
        lin = std::max(lin, std::abs(usum.v[i] - u1.v[i] - u2.v[i]));
        umin = std::min(umin, u1.v[i]);  // f1 >= 0 so u1 should be too
    }
    CHECK(lin < 1e-12);
    // the spectral tail of the sampled Gaussian rings at the 1e-8 scale
    CHECK(umin > -1e-6);
    auto u1b = solve_g_lambda(f1, spec, 3.0);
    double mono = 0.0;
    for (size_t i = 0; i < u1.v.size(); ++i) mono = std::max(mono, u1b.v[i] - u1.v[i]);
    CHECK(mono < 1e-6);
}

TEST_CASE("2-D eigenfunction and Hessian components") {
    GridSpec g;
    g.n = 2;
    g.L = 4.0 * std::numbers::pi;
    g.N = 32;
    g.T = 1.0;
    g.M = 32;
    auto f = GridField::sample_scalar(
        g, [](double, const double* x) { return std::sin(x[0]) * std::sin(x[1]); }, "source");
    auto u = solve_g_lambda(f, DiffusionSpec::identity(2), 0.0);
    const double amp = 1.0 - std::exp(-1.0);  // eigenvalue of -Delta/2 is 1
    CHECK(sup_err(u, g.M, [&](const double* x) {
              return amp * std::sin(x[0]) * std::sin(x[1]);
          }) < 1e-5);
    auto h = second_derivative_field(f, DiffusionSpec::identity(2), 0.0);
    CHECK(sup_err(h, g.M, [&](const double* x) {
              return -amp * std::sin(x[0]) * std::sin(x[1]);
          }, 0) < 1e-3);
    CHECK(sup_err(h, g.M, [&](const double* x) {
              return amp * std::cos(x[0]) * std::cos(x[1]);
          }, 1) < 1e-3);
}

TEST_CASE("box too small raises") {
    GridSpec g;
    g.n = 1;
    g.L = 1.0;
    g.N = 16;
    g.T = 1.0;
    g.M = 8;
    auto f = GridField::sample_scalar(g, [](double, const double*) { return 1.0; }, "source");
    CHECK_THROWS_AS(solve_g_lambda(f, DiffusionSpec::identity(1), 1.0), std::runtime_error);
}

TEST_CASE("lp_time_aggregate") {
    std::vector<double> ones{1.0, 1.0, 1.0, 1.0, 1.0};
    CHECK(lp_time_aggregate(ones, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> ramp{0.0, 1.0, 2.0, 3.0};
    CHECK(lp_time_aggregate(ramp, std::numeric_limits<double>::infinity(), 1.0) == 3.0);
}

TEST_CASE("drifted solver: constant drift, single Fourier mode oracle") {
    auto g = grid1d(128, 64, 4.0 * std::numbers::pi);
    auto f = GridField::sample_scalar(g, [](double, const double* x) { return std::sin(x[0]); },
                                      "source");
    const double c = 0.5, lambda = 1.0;
    GridField drift(g, 1, "drift");
    for (double& v : drift.v) v = c;
    auto res = solve_drifted(f, drift, DiffusionSpec::identity(1), lambda);
    // mode ODE: Z' = (-mu + i c) Z + 1, Z(0) = 0, mu = lambda + 1/2,
    // u = Re(Z) sin x + Im(Z) cos x
    const double mu = lambda + 0.5;
    const std::complex<double> zc =
        (1.0 - std::exp(std::complex<double>(-mu, c))) / std::complex<double>(mu, -c);
    CHECK(sup_err(res.u, g.M, [&](const double* x) {
              return zc.real() * std::sin(x[0]) + zc.imag() * std::cos(x[0]);
          }) < 3e-3);
    for (double fac : res.contraction) CHECK(fac < 0.8);
    CHECK(res.residual < 0.02);
}

TEST_CASE("drifted solver: space-dependent diffusion keeps a small residual") {
    auto g = grid1d(128, 64, 4.0 * std::numbers::pi);
    auto f = GridField::sample_scalar(g, [](double, const double* x) { return std::sin(x[0]); },
                                      "source");
    DiffusionSpec spec = DiffusionSpec::identity(1);
    spec.gamma = 1.3;
    spec.a_space = [](double, const double* x) {
        return SymMat::scalar(1, 1.0 + 0.2 * std::sin(x[0]));
    };
    GridField drift(g, 1, "drift");
    for (int j = 0; j <= g.M; ++j)
        for (int cell = 0; cell < g.cells(); ++cell) {
            double x[2];
            g.coords(cell, x);
            drift.at(j, cell, 0) = 0.3 * std::cos(x[0]);
        }
    auto res = solve_drifted(f, drift, spec, 2.0);
    CHECK(res.residual < 0.02);
    CHECK(res.u.all_finite());
}

TEST_CASE("maximal-regularity report is finite and refinement-stable") {
    auto g = grid1d(64, 16);
    auto rho = ModulusSpec::log_power(-2.0);
    ClassLabel label = classify_modulus(rho, 0.0, 2.0, 'b');
    auto f_fn = [](double t, const double* x) {
        return std::sin(3.0 * x[0]) + 0.5 * std::cos(7.0 * x[0]) * (1.0 + t);
    };
    auto rep = verify_maximal_regularity(f_fn, DiffusionSpec::identity(1), 2.0, g, label, rho, 7);
    CHECK(rep.ratio_coarse > 0.0);
    CHECK(rep.ratio_fine > 0.0);
    CHECK(std::isfinite(rep.ratio_fine));
    CHECK(std::abs(rep.ratio_fine - rep.ratio_coarse) / rep.ratio_coarse < 0.5);
}

TEST_CASE("embedding report at the exponent boundary") {
    auto g = grid1d(64, 16);
    auto rho = ModulusSpec::log_power(-2.0);
    ClassLabel label = classify_modulus(rho, 0.5, 4.0, 'b');  // alpha = 2/p
    auto f_fn = [](double, const double* x) { return std::sin(2.0 * x[0]); };
    auto rep = verify_embedding(f_fn, DiffusionSpec::identity(1), 2.0, g, label, rho, 7);
    CHECK(rep.ratio_fine > 0.0);
    CHECK(std::isfinite(rep.empirical_constant));
    CHECK(rep.source_agg > 0.0);
}
