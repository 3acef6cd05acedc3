#include "parlab/sde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace parlab {

namespace tape {

namespace {
std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace

std::uint64_t mix(std::uint64_t seed, std::uint64_t path) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= path * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
    return a ^ splitmix64(s);
}

void fill(std::uint64_t seed, std::uint64_t path, int steps, double dt,
          std::vector<double>& out) {
    out.resize(steps);
    std::mt19937_64 rng(mix(seed, path));
    const double sqrt_dt = std::sqrt(dt);
    auto uniform = [&]() {  // in (0,1], platform-independent
        return (double(rng() >> 11) + 1.0) * 0x1p-53;
    };
    double cached = 0.0;
    bool has_cached = false;
    for (int k = 0; k < steps; ++k) {
        if (has_cached) {
            out[k] = sqrt_dt * cached;
            has_cached = false;
            continue;
        }
        const double u1 = uniform(), u2 = uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        out[k] = sqrt_dt * rad * std::cos(ang);
        cached = rad * std::sin(ang);
        has_cached = true;
    }
}

}  // namespace tape

namespace {

int step_count(const SimConfig& cfg, double dt) {
    const int steps = int(std::llround((cfg.T - cfg.t0) / dt));
    if (steps < 1 || std::abs(cfg.t0 + steps * dt - cfg.T) > 1e-9)
        throw std::invalid_argument("SimConfig: (T - t0) must be a multiple of dt");
    return steps;
}

void finalize(PathEnsemble& e) {
    const size_t n = e.terminal.size();
    double m = 0.0;
    for (double x : e.terminal) m += x;
    m /= double(n);
    double v = 0.0;
    for (double x : e.terminal) v += (x - m) * (x - m);
    e.mean = m;
    e.variance = n > 1 ? v / double(n - 1) : 0.0;
}

double ls_slope(const std::vector<double>& logx, const std::vector<double>& logy) {
    const size_t n = logx.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += logx[i];
        my += logy[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0.0, sxx = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (logx[i] - mx) * (logy[i] - my);
        sxx += (logx[i] - mx) * (logx[i] - mx);
    }
    return sxy / sxx;
}

double transformed_path(const ZvonkinMap& map, const SimConfig& cfg, double dt,
                        const double* dW, int steps) {
    double X = cfg.x0;
    double Y = map.phi(cfg.t0, X);
    for (int k = 0; k < steps; ++k) {
        const double t = cfg.t0 + k * dt;
        const double tn = t + dt;
        const double Vk = map.eval_V(t, X);
        const double Vk1 = map.eval_V(tn, X);
        const double sig = 1.0 + map.eval_gradV(t, X);
        Y += map.lambda * 0.5 * (Vk + Vk1) * dt + sig * dW[k];
        X = map.psi(tn, Y, X);
    }
    return X;
}

}  // namespace

PathEnsemble euler_direct(const DriftFn& b, const SimConfig& cfg) {
    const int steps = step_count(cfg, cfg.dt);
    PathEnsemble e;
    e.terminal.resize(cfg.paths);
    std::vector<double> dW;
    for (int path = 0; path < cfg.paths; ++path) {
        tape::fill(cfg.seed, path, steps, cfg.dt, dW);
        double X = cfg.x0;
        for (int k = 0; k < steps; ++k) {
            const double t = cfg.t0 + k * cfg.dt;
            X += b(t, X) * cfg.dt + dW[k];
        }
        e.terminal[path] = X;
    }
    finalize(e);
    return e;
}

PathEnsemble euler_transformed(const ZvonkinMap& map, const SimConfig& cfg) {
    const int steps = step_count(cfg, cfg.dt);
    PathEnsemble e;
    e.terminal.resize(cfg.paths);
    std::vector<double> dW;
    for (int path = 0; path < cfg.paths; ++path) {
        tape::fill(cfg.seed, path, steps, cfg.dt, dW);
        e.terminal[path] = transformed_path(map, cfg, cfg.dt, dW.data(), steps);
    }
    finalize(e);
    return e;
}

FlowReport flow_stats(const DriftFn& b, const SimConfig& cfg, double q,
                      const std::vector<double>& seps) {
    const int steps = step_count(cfg, cfg.dt);
    const size_t K = seps.size();
    FlowReport rep;
    rep.seps = seps;
    rep.q = q;
    rep.moments.assign(K, 0.0);
    std::vector<double> dW, X(K + 1);
    for (int path = 0; path < cfg.paths; ++path) {
        tape::fill(cfg.seed, path, steps, cfg.dt, dW);
        X[0] = cfg.x0;
        for (size_t i = 0; i < K; ++i) X[i + 1] = cfg.x0 + seps[i];
        for (int k = 0; k < steps; ++k) {
            const double t = cfg.t0 + k * cfg.dt;
            for (double& x : X) x += b(t, x) * cfg.dt + dW[k];
            for (size_t i = 0; i < K; ++i)
                if (X[i + 1] < X[i]) ++rep.order_violations;
        }
        for (size_t i = 0; i < K; ++i)
            rep.moments[i] += std::pow(std::abs(X[i + 1] - X[0]), q);
    }
    std::vector<double> lx, ly;
    for (size_t i = 0; i < K; ++i) {
        rep.moments[i] /= double(cfg.paths);
        lx.push_back(std::log(seps[i]));
        ly.push_back(std::log(rep.moments[i]));
    }
    rep.exponent = ls_slope(lx, ly);
    return rep;
}

ConvergenceReport strong_convergence(const ZvonkinMap& map, const SimConfig& cfg,
                                     const std::vector<double>& dts, double dt_ref) {
    const int steps_ref = step_count(cfg, dt_ref);
    ConvergenceReport rep;
    rep.dts = dts;
    rep.rms.assign(dts.size(), 0.0);
    std::vector<int> ratio(dts.size());
    for (size_t l = 0; l < dts.size(); ++l) {
        ratio[l] = int(std::llround(dts[l] / dt_ref));
        if (ratio[l] < 1 || std::abs(ratio[l] * dt_ref - dts[l]) > 1e-12)
            throw std::invalid_argument("strong_convergence: dt must be a multiple of dt_ref");
    }
    std::vector<double> fine, coarse;
    for (int path = 0; path < cfg.paths; ++path) {
        tape::fill(cfg.seed, path, steps_ref, dt_ref, fine);
        const double x_ref = transformed_path(map, cfg, dt_ref, fine.data(), steps_ref);
        for (size_t l = 0; l < dts.size(); ++l) {
            const int steps = steps_ref / ratio[l];
            coarse.assign(steps, 0.0);
            for (int k = 0; k < steps; ++k)
                for (int j = 0; j < ratio[l]; ++j) coarse[k] += fine[k * ratio[l] + j];
            const double x = transformed_path(map, cfg, dts[l], coarse.data(), steps);
            rep.rms[l] += (x - x_ref) * (x - x_ref);
        }
    }
    std::vector<double> lx, ly;
    for (size_t l = 0; l < dts.size(); ++l) {
        rep.rms[l] = std::sqrt(rep.rms[l] / double(cfg.paths));
        lx.push_back(std::log(dts[l]));
        ly.push_back(std::log(rep.rms[l]));
    }
    rep.order = ls_slope(lx, ly);
    return rep;
}

SupercriticalReport supercritical_demo(double p, double alpha, const SimConfig& cfg,
                                       const std::vector<double>& eps_levels) {
    if (eps_levels.size() < 2)
        throw std::invalid_argument("supercritical_demo: need at least two levels");
    const int steps = step_count(cfg, cfg.dt);
    SupercriticalReport rep;
    rep.eps = eps_levels;
    rep.spreads.assign(eps_levels.size() - 1, 0.0);
    std::vector<double> dW, X(eps_levels.size());
    for (int path = 0; path < cfg.paths; ++path) {
        tape::fill(cfg.seed, path, steps, cfg.dt, dW);
        std::fill(X.begin(), X.end(), cfg.x0);
        for (int k = 0; k < steps; ++k) {
            const double t = cfg.t0 + k * cfg.dt;
            const double tfac = std::pow(t, -1.0 / p);
            for (size_t l = 0; l < X.size(); ++l) {
                const double eps = eps_levels[l];
                const double b =
                    tfac * X[l] * std::pow(X[l] * X[l] + eps * eps, (alpha - 1.0) / 2.0);
                X[l] += b * cfg.dt + dW[k];
            }
        }
        for (size_t l = 0; l + 1 < X.size(); ++l)
            rep.spreads[l] += std::abs(X[l] - X[l + 1]);
    }
    for (double& s : rep.spreads) s /= double(cfg.paths);
    return rep;
}

double peano_extremal_error(double alpha, double T) {
    const double t0 = 1e-3, h = 1e-5;
    const double expo = 1.0 / (1.0 - alpha);
    double x = std::pow((1.0 - alpha) * t0, expo);
    auto f = [alpha](double xx) {
        return xx == 0.0 ? 0.0 : (xx > 0.0 ? 1.0 : -1.0) * std::pow(std::abs(xx), alpha);
    };
    const int steps = int(std::llround((T - t0) / h));
    for (int k = 0; k < steps; ++k) {
        const double k1 = f(x);
        const double k2 = f(x + 0.5 * h * k1);
        const double k3 = f(x + 0.5 * h * k2);
        const double k4 = f(x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return std::abs(x - std::pow((1.0 - alpha) * T, expo));
}

}  // namespace parlab
