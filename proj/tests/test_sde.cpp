#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "parlab/sde.hpp"

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

}  // namespace

TEST_CASE("tape: reproducible, path-independent, correct moments") {
    std::vector<double> a, b, c;
    tape::fill(7, 3, 64, 0.01, a);
    tape::fill(7, 3, 64, 0.01, b);
    tape::fill(7, 4, 64, 0.01, c);
    CHECK(a == b);
    CHECK(a != c);

    const double dt = 1.0 / 256.0;
    double sum = 0.0, sq = 0.0;
    long n = 0;
    std::vector<double> w;
    for (int path = 0; path < 200; ++path) {
        tape::fill(99, path, 256, dt, w);
        for (double x : w) {
            sum += x;
            sq += x * x;
            ++n;
        }
    }
    const double mean = sum / n, var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 1.5e-3);
    CHECK(std::abs(var - dt) / dt < 0.03);
}

TEST_CASE("euler_direct: zero and constant drifts are exact") {
    SimConfig cfg;
    cfg.dt = 1.0 / 256.0;
    cfg.paths = 50;
    cfg.x0 = 0.3;
    cfg.seed = 11;
    auto zero = euler_direct([](double, double) { return 0.0; }, cfg);
    auto cdrift = euler_direct([](double, double) { return 0.7; }, cfg);
    std::vector<double> w;
    for (int path = 0; path < cfg.paths; ++path) {
        tape::fill(cfg.seed, path, 256, cfg.dt, w);
        double wT = 0.0;
        for (double x : w) wT += x;
        CHECK(std::abs(zero.terminal[path] - (cfg.x0 + wT)) < 1e-14);
        CHECK(std::abs(cdrift.terminal[path] - (cfg.x0 + 0.7 + wT)) < 1e-12);
    }
}

TEST_CASE("euler_direct: Ornstein-Uhlenbeck terminal variance") {
    SimConfig cfg;
    cfg.dt = 1.0 / 512.0;
    cfg.paths = 20000;
    cfg.x0 = 0.0;
    cfg.seed = 5;
    auto e = euler_direct([](double, double x) { return -x; }, cfg);
    const double expected = (1.0 - std::exp(-2.0)) / 2.0;
    CHECK(std::abs(e.variance - expected) / expected < 0.04);
    CHECK(std::abs(e.mean) < 0.02);
}

TEST_CASE("euler_transformed: constant drift is exact to 1e-8") {
    auto g = grid1d(32, 1024);
    const double c = 0.1, lambda = 1.0;
    auto pic = picard_solve_U(DriftSpec::constant(1, {c}), g, lambda);
    auto map = build_transform(pic, lambda);
    SimConfig cfg;
    cfg.dt = g.dt();
    cfg.paths = 100;
    cfg.x0 = 0.3;
    cfg.seed = 21;
    auto e = euler_transformed(map, cfg);
    std::vector<double> w;
    double worst = 0.0;
    for (int path = 0; path < cfg.paths; ++path) {
        tape::fill(cfg.seed, path, g.M, cfg.dt, w);
        double wT = 0.0;
        for (double x : w) wT += x;
        worst = std::max(worst, std::abs(e.terminal[path] - (cfg.x0 + c + wT)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("flow_stats: Lipschitz drift keeps order and q-scaling") {
    SimConfig cfg;
    cfg.dt = 1.0 / 256.0;
    cfg.paths = 2000;
    cfg.x0 = 0.2;
    cfg.seed = 31;
    auto rep = flow_stats([](double, double x) { return 0.6 * std::sin(x); }, cfg, 2.0,
                          {0.01, 0.02, 0.04, 0.08});
    CHECK(rep.order_violations == 0);
    CHECK(rep.exponent > 1.8);
    CHECK(rep.exponent < 2.2);
}

TEST_CASE("strong_convergence: transformed scheme has order >= 0.4") {
    auto g = grid1d(256, 256, 4.0 * std::numbers::pi);
    const double lambda = 4.0;
    auto pic = picard_solve_U(DriftSpec::sinusoidal(1, 0.8, 1.0), g, lambda);
    auto map = build_transform(pic, lambda);
    SimConfig cfg;
    cfg.paths = 200;
    cfg.x0 = 0.5;
    cfg.seed = 77;
    auto rep = strong_convergence(map, cfg, {1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0},
                                  1.0 / 1024.0);
    CHECK(rep.rms[0] > rep.rms[2]);
    CHECK(rep.order >= 0.4);
}

TEST_CASE("supercritical demo: regularization sensitivity and Peano limit") {
    SimConfig cfg;
    cfg.dt = 1.0 / 1024.0;
    cfg.t0 = cfg.dt;
    cfg.paths = 500;
    cfg.x0 = 0.0;
    cfg.seed = 123;
    auto super = supercritical_demo(2.5, -0.5, cfg, {1e-1, 1e-2, 1e-3});
    auto contrast = supercritical_demo(2.5, 0.5, cfg, {1e-1, 1e-2, 1e-3});
    CHECK(super.spreads.back() > 0.0);
    CHECK(super.spreads.back() >= 2.0 * contrast.spreads.back());
    auto again = supercritical_demo(2.5, -0.5, cfg, {1e-1, 1e-2, 1e-3});
    CHECK(super.spreads == again.spreads);
    CHECK(peano_extremal_error(-0.5, 1.0) < 1e-3);
}
