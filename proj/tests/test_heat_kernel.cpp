#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "parlab/heat_kernel.hpp"

using namespace parlab;

TEST_CASE("accumulate: closed-form covariances") {
    auto id = DiffusionSpec::identity(1);
    auto c = accumulate(id, 0.0, 2.0);
    CHECK(c.A.e[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c.B.e[0] == doctest::Approx(0.5).epsilon(1e-14));

    auto lin = DiffusionSpec::scalar_time(1, [](double t) { return 1.0 + t / 2.0; }, 2.0);
    auto cl = accumulate(lin, 0.0, 1.0);
    CHECK(cl.A.e[0] == doctest::Approx(1.25).epsilon(1e-14));  // Simpson exact on linears
    CHECK(cl.B.e[0] == doctest::Approx(0.8).epsilon(1e-14));

    // ellipticity bounds with Gamma = 1: equality case
    auto c1 = accumulate(id, 0.0, 1.0);
    const double xi = 1.0;
    CHECK(c1.A.quad(&xi) == doctest::Approx(1.0));
    CHECK_THROWS_AS(accumulate(id, 1.0, 1.0), std::invalid_argument);

    auto id2 = DiffusionSpec::identity(2);
    auto c2 = accumulate(id2, 0.0, 2.0);
    CHECK(c2.A.e[0] == doctest::Approx(2.0));
    CHECK(c2.A.e[2] == doctest::Approx(2.0));
    CHECK(c2.A.e[1] == doctest::Approx(0.0));
}

TEST_CASE("kernel: Gaussian values and indicator") {
    auto id = DiffusionSpec::identity(1);
    const double x0 = 0.0, x1 = 1.0;
    CHECK(kernel(id, 0.0, 1.0, &x0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
    CHECK(kernel(id, 0.0, 1.0, &x1) ==
          doctest::Approx(0.3989422804014327 * std::exp(-0.5)).epsilon(1e-12));
    CHECK(kernel(id, 1.0, 0.5, &x1) == 0.0);
    CHECK(kernel(id, 1.0, 1.0, &x1) == 0.0);
}

TEST_CASE("kernel scaling identity for a == I") {
    auto id = DiffusionSpec::identity(1);
    for (double t : {0.25, 0.5, 2.0}) {
        for (double x : {0.0, 0.3, 1.7}) {
            const double xs = x / std::sqrt(t);
            CHECK(kernel(id, 0.0, t, &x) ==
                  doctest::Approx(kernel(id, 0.0, 1.0, &xs) / std::sqrt(t)).epsilon(1e-13));
        }
    }
}

TEST_CASE("kernel derivatives: closed forms and finite differences") {
    auto id = DiffusionSpec::identity(1);
    auto cov = accumulate(id, 0.0, 1.0);
    double x = 0.0, g = 1.0;
    kernel_gradient(cov, 1, &x, &g);
    CHECK(g == doctest::Approx(0.0));
    SymMat h;
    kernel_hessian(cov, 1, &x, &h);
    CHECK(h.e[0] == doctest::Approx(-0.3989422804014327).epsilon(1e-12));

    auto id2 = DiffusionSpec::identity(2);
    auto cov2 = accumulate(id2, 0.0, 1.0);
    double x2[2] = {0.0, 0.0};
    SymMat h2;
    kernel_hessian(cov2, 2, x2, &h2);
    const double k0 = kernel(cov2, 2, x2);
    CHECK(h2.e[0] + h2.e[2] == doctest::Approx(-2.0 * k0).epsilon(1e-12));

    // centered finite-difference cross-check at well-scaled points
    const double eps = 1e-5;
    for (double xv : {0.2, 1.0, 3.5}) {
        double xp = xv + eps, xm = xv - eps;
        double grad;
        kernel_gradient(cov, 1, &xv, &grad);
        const double fd = (kernel(cov, 1, &xp) - kernel(cov, 1, &xm)) / (2 * eps);
        CHECK(grad == doctest::Approx(fd).epsilon(1e-5));
        SymMat hh;
        kernel_hessian(cov, 1, &xv, &hh);
        const double fd2 =
            (kernel(cov, 1, &xp) - 2 * kernel(cov, 1, &xv) + kernel(cov, 1, &xm)) / (eps * eps);
        CHECK(hh.e[0] == doctest::Approx(fd2).epsilon(1e-5));
    }
}

TEST_CASE("kernel_mass: box quadrature") {
    auto id = DiffusionSpec::identity(1);
    CHECK(kernel_mass(id, 0.0, 1.0, 8.0, 512) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(kernel_mass(id, 0.0, 1e-4, 8.0, 8192) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(kernel_mass(id, 1.0, 1.0, 8.0, 512) == 0.0);
    auto id2 = DiffusionSpec::identity(2);
    CHECK(kernel_mass(id2, 0.0, 0.5, 6.0, 256) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("Chapman-Kolmogorov at desk scale") {
    auto id = DiffusionSpec::identity(1);
    auto c1 = accumulate(id, 0.0, 0.5);
    auto c2 = accumulate(id, 0.5, 1.0);
    auto c = accumulate(id, 0.0, 1.0);
    const int N = 2048;
    const double L = 10.0, dz = 2 * L / N;
    for (double d : {0.0, 0.7, 1.9}) {  // d = x - y
        double conv = 0.0;
        for (int i = 0; i < N; ++i) {
            const double z = -L + i * dz;
            const double a = d - z;
            conv += kernel(c1, 1, &a) * kernel(c2, 1, &z);
        }
        conv *= dz;
        CHECK(conv == doctest::Approx(kernel(c, 1, &d)).epsilon(1e-6));
    }
}
