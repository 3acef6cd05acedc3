// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. All tolerances are pinned here as named constants.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "parlab/config.hpp"
#include "parlab/heat_kernel.hpp"
#include "parlab/kolmogorov.hpp"
#include "parlab/modulus.hpp"
#include "parlab/parabolic.hpp"
#include "parlab/sde.hpp"
#include "parlab/zvonkin.hpp"

using namespace parlab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const char* what, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, what,
                detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

GridSpec grid1d(int N, int M, double L, double p = 2.0) {
    GridSpec g;
    g.n = 1;
    g.L = L;
    g.N = N;
    g.T = 1.0;
    g.M = M;
    g.p = p;
    return g;
}

// 1: analytic Dini integral of the log-power modulus
void criterion1() {
    constexpr double kTol = 1e-6;
    const auto rho = ModulusSpec::log_power(-2.0);
    const auto res = dini_integral(rho, 1e-16, 0.5);
    const double expected = 1.0 / std::log(2.0);
    const auto div = dini_integral(ModulusSpec::log_power(-1.0), 1e-16, 0.5);
    const bool pass = res.finite && std::abs(res.value - expected) <= kTol && !div.finite;
    report(1, "Dini integral analytic value and divergence detection", pass,
           "value=" + fmt(res.value) + " expected=" + fmt(expected) +
               " divergent_flagged=" + (div.finite ? "no" : "yes"));
}

// 2: small-parameter limit ratios approach 1/alpha and 1/(1-alpha)
void criterion2() {
    constexpr double kRelTol = 0.15;
    constexpr double kDelta = 1e-15;
    const double alpha = 0.5;
    const auto rho = ModulusSpec::log_power(-2.0);
    const auto rows = limit_checks(alpha, rho, {kDelta});
    const double e1 = std::abs(rows[0].r1 * alpha - 1.0);
    const double e2 = std::abs(rows[0].r2 * (1.0 - alpha) - 1.0);
    const bool pass = e1 <= kRelTol && e2 <= kRelTol;
    report(2, "integral limit ratios at delta=1e-15 within 15%", pass,
           "r1=" + fmt(rows[0].r1) + " r2=" + fmt(rows[0].r2) + " rel_err=" + fmt(e1) + "/" +
               fmt(e2));
}

// 3: heat-kernel oracles: normalization, point value, eigenfunction solve
void criterion3() {
    constexpr double kMassTol = 1e-8;
    constexpr double kPointTol = 1e-12;
    constexpr double kSolveTol = 1e-4;
    const auto spec = DiffusionSpec::identity(1);
    const double mass = kernel_mass(spec, 0.0, 1.0, 8.0, 512);
    const double x0[1] = {0.0};
    const double kval = kernel(spec, 0.0, 1.0, x0);
    const double kexp = 0.39894228040143268;  // (2 pi)^{-1/2}

    auto g = grid1d(512, 256, 4.0 * std::numbers::pi);
    auto f = GridField::sample_scalar(g, [](double, const double* x) { return std::sin(x[0]); },
                                      "source");
    auto u = solve_g_lambda(f, spec, 0.0);
    double solve_err = 0.0;
    for (int j : {128, 256}) {
        const double amp = 2.0 * (1.0 - std::exp(-0.5 * g.time(j)));
        for (int cell = 0; cell < g.cells(); ++cell) {
            double x[2];
            g.coords(cell, x);
            solve_err = std::max(solve_err,
                                 std::abs(u.at(j, cell, 0) - amp * std::sin(x[0])));
        }
    }
    const bool pass = std::abs(mass - 1.0) <= kMassTol && std::abs(kval - kexp) <= kPointTol &&
                      solve_err <= kSolveTol;
    report(3, "kernel mass, point value and eigenfunction solve oracles", pass,
           "|mass-1|=" + fmt(std::abs(mass - 1.0)) + " |K-K*|=" + fmt(std::abs(kval - kexp)) +
               " solve_err=" + fmt(solve_err));
}

// 4: maximal-regularity ratio stable under grid refinement (N=256 -> 512)
void criterion4() {
    constexpr double kRelChange = 0.10;
    auto g = grid1d(256, 64, 4.0 * std::numbers::pi);
    const auto rho = ModulusSpec::log_power(-2.0);
    const ClassLabel label = classify_modulus(rho, 0.0, 2.0, 'b');
    auto f_fn = [](double t, const double* x) {
        double v = 0.0, f = 1.0;
        for (int l = 0; l < 5; ++l) {  // frequencies up to 16 resolve on both grids
            v += std::sin(f * x[0] + 0.7 * l);
            f *= 2.0;
        }
        return v * (1.0 + 0.5 * t);
    };
    const auto rep =
        verify_maximal_regularity(f_fn, DiffusionSpec::identity(1), 2.0, g, label, rho, 2024);
    const double rel = std::abs(rep.ratio_fine - rep.ratio_coarse) / rep.ratio_coarse;
    const bool pass = rep.ratio_coarse > 0.0 && std::isfinite(rep.ratio_fine) &&
                      rel <= kRelChange;
    report(4, "regularity ratio changes < 10% from N=256 to N=512", pass,
           "ratio_coarse=" + fmt(rep.ratio_coarse) + " ratio_fine=" + fmt(rep.ratio_fine) +
               " rel_change=" + fmt(rel));
}

// 5: rho-hat embedding seminorm stable under refinement at alpha = 2/p
void criterion5() {
    constexpr double kRelChange = 0.15;
    auto g = grid1d(256, 32, 4.0 * std::numbers::pi, 4.0);
    const auto rho = ModulusSpec::log_power(-3.0);
    const ClassLabel label = classify_modulus(rho, 0.5, 4.0, 'b');  // alpha = 2/p
    auto f_fn = [](double t, const double* x) {
        double v = 0.0, f = 1.0;
        for (int l = 0; l < 5; ++l) {
            v += std::pow(f, -0.5) * std::sin(f * x[0] + 0.7 * l);
            f *= 2.0;
        }
        return v * (1.0 + 0.3 * t);
    };
    const auto rep =
        verify_embedding(f_fn, DiffusionSpec::identity(1), 2.0, g, label, rho, 2024);
    const double rel = std::abs(rep.ratio_fine - rep.ratio_coarse) / rep.ratio_coarse;
    const bool pass = rep.ratio_coarse > 0.0 && std::isfinite(rep.empirical_constant) &&
                      rel <= kRelChange;
    report(5, "rho-hat embedding seminorm stable within 15% under refinement", pass,
           "ratio_coarse=" + fmt(rep.ratio_coarse) + " ratio_fine=" + fmt(rep.ratio_fine) +
               " rel_change=" + fmt(rel) + " C_emp=" + fmt(rep.empirical_constant));
}

// 6: Kolmogorov solve with unit-seminorm rough drift: gradient and
// contraction gates at the selected lambda
void criterion6() {
    constexpr double kGradGate = 0.5 + 1e-3;
    constexpr double kContractionGate = 0.5;
    const auto rho = ModulusSpec::log_power(-3.0);
    const auto b = DriftSpec::rough(rho, 1.0);
    auto g = grid1d(512, 64, 8.0);
    try {
        const auto sel = select_lambda(b, g, rho, 2.0, 1.0);
        const bool pass = sel.grad_sup <= kGradGate && sel.contraction <= kContractionGate &&
                          std::isfinite(sel.certificate);
        report(6, "Kolmogorov gradient <= 0.5 and Picard contraction <= 0.5", pass,
               "lambda=" + fmt(sel.lambda) + " grad_sup=" + fmt(sel.grad_sup) +
                   " contraction=" + fmt(sel.contraction) +
                   " certificate=" + fmt(sel.certificate));
    } catch (const std::exception& e) {
        report(6, "Kolmogorov gradient <= 0.5 and Picard contraction <= 0.5", false, e.what());
    }
}

// 7: transformed Euler scheme reproduces the constant-drift SDE exactly
void criterion7() {
    constexpr double kTol = 1e-8;
    const double c = 0.1, lambda = 1.0;
    auto g = grid1d(32, 1024, 8.0);
    const auto pic = picard_solve_U(DriftSpec::constant(1, {c}), g, lambda);
    const auto map = build_transform(pic, lambda);
    SimConfig cfg;
    cfg.dt = g.dt();
    cfg.paths = 1000;
    cfg.x0 = 0.3;
    cfg.seed = 2024;
    const auto e = euler_transformed(map, cfg);
    std::vector<double> w;
    double worst = 0.0;
    for (int path = 0; path < cfg.paths; ++path) {
        tape::fill(cfg.seed, path, g.M, cfg.dt, w);
        double wT = 0.0;
        for (double x : w) wT += x;
        worst = std::max(worst, std::abs(e.terminal[path] - (cfg.x0 + c + wT)));
    }
    report(7, "Zvonkin-transformed simulation exact for constant drift", worst <= kTol,
           "max_path_error=" + fmt(worst) + " paths=1000 tol=" + fmt(kTol));
}

// 8: strong convergence order of the transformed scheme
void criterion8() {
    constexpr double kOrderMin = 0.4;
    auto g = grid1d(1024, 256, 4.0 * std::numbers::pi);
    const double lambda = 4.0;
    const auto pic = picard_solve_U(DriftSpec::sinusoidal(1, 0.8, 1.0), g, lambda);
    const auto map = build_transform(pic, lambda);
    SimConfig cfg;
    cfg.paths = 512;
    cfg.x0 = 0.5;
    cfg.seed = 99;
    const auto rep = strong_convergence(
        map, cfg, {std::pow(2.0, -8), std::pow(2.0, -10), std::pow(2.0, -12)},
        std::pow(2.0, -14));
    const bool pass = rep.order >= kOrderMin && rep.rms.front() > rep.rms.back();
    report(8, "strong convergence order >= 0.4", pass,
           "order=" + fmt(rep.order) + " rms=" + fmt(rep.rms[0]) + "/" + fmt(rep.rms[1]) +
               "/" + fmt(rep.rms[2]));
}

// 9: pathwise flow: order preservation and q-th moment scaling
void criterion9() {
    constexpr double kQ = 2.0;
    constexpr double kExpLo = 0.9 * kQ, kExpHi = 1.1 * kQ;
    const auto rho = ModulusSpec::log_power(-3.0);
    const auto bd = DriftSpec::rough(rho, 1.0);
    SimConfig cfg;
    cfg.dt = 1.0 / 512.0;
    cfg.paths = 2000;
    cfg.x0 = 0.1;
    cfg.seed = 11;
    auto fn = [&bd](double t, double x) {
        double xx[1] = {x}, out[1];
        bd.eval(t, xx, out);
        return out[0];
    };
    const auto rep = flow_stats(fn, cfg, kQ, {0.02, 0.04, 0.08, 0.16});
    const bool pass = rep.order_violations == 0 && rep.exponent >= kExpLo &&
                      rep.exponent <= kExpHi;
    report(9, "flow order preserved; moment exponent within 10% of q=2", pass,
           "violations=" + std::to_string(rep.order_violations) +
               " exponent=" + fmt(rep.exponent));
}

// 10: supercritical sensitivity vs subcritical contrast + Peano extremal limit
void criterion10() {
    constexpr double kSpreadFactor = 2.0;
    constexpr double kPeanoTol = 1e-3;
    SimConfig cfg;
    cfg.dt = 1.0 / 1024.0;
    cfg.t0 = cfg.dt;
    cfg.paths = 1000;
    cfg.x0 = 0.0;
    cfg.seed = 7;
    const std::vector<double> eps = {1e-1, 1e-2, 1e-3};
    const auto super = supercritical_demo(2.5, -0.5, cfg, eps);
    const auto contrast = supercritical_demo(2.5, 0.5, cfg, eps);
    const double peano = peano_extremal_error(-0.5, 1.0);
    const bool pass = super.spreads.back() >= kSpreadFactor * contrast.spreads.back() &&
                      peano <= kPeanoTol;
    report(10, "supercritical regularization spread >= 2x contrast; Peano check", pass,
           "spread=" + fmt(super.spreads.back()) +
               " contrast=" + fmt(contrast.spreads.back()) + " peano_err=" + fmt(peano));
}

// 11: byte-identical determinism of results/ and fields/ across reruns
void criterion11() {
    const fs::path root = fs::temp_directory_path() / "parlab_acceptance_det";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path cfgp = root / "config.json";
    std::ofstream(cfgp) << R"({
      "experiment": "zvonkin-sim",
      "grid": {"n": 1, "L": 12.566370614359172, "N": 64, "T": 1.0, "M": 64, "p": 2.0},
      "lambda": 4.0,
      "drift": {"kind": "sin", "amp": 0.5, "freq": 1.0},
      "sim": {"dt": 0.015625, "paths": 200, "x0": 0.5, "seed": 5},
      "convergence": {"dts": [0.0625, 0.03125], "dt_ref": 0.0078125}
    })";
    RunOptions a, b;
    a.out_dir = (root / "a").string();
    b.out_dir = (root / "b").string();
    bool pass = run_experiment(cfgp.string(), a) && run_experiment(cfgp.string(), b);
    std::string mismatch = "all files identical";
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    int compared = 0;
    for (const char* sub : {"results", "fields"}) {
        for (const auto& entry : fs::directory_iterator(root / "a" / sub)) {
            const fs::path rel = fs::path(sub) / entry.path().filename();
            ++compared;
            if (slurp(root / "a" / rel) != slurp(root / "b" / rel) ||
                fs::file_size(root / "a" / rel) == 0) {
                pass = false;
                mismatch = "mismatch at " + rel.string();
            }
        }
    }
    if (compared == 0) pass = false;
    report(11, "rerun produces byte-identical results/ and fields/", pass,
           mismatch + " (" + std::to_string(compared) + " files)");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    std::printf("ACCEPTANCE: %d/11 criteria passed\n", 11 - g_failures);
    return g_failures;
}
