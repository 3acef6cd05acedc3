#include "parlab/zvonkin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parlab {

namespace {

// linear interpolation in time and space, constant extension outside the box
double interp(const GridField& f, double t, double x) {
    const GridSpec& g = f.g;
    const double pos_t = std::clamp(t / g.dt(), 0.0, double(g.M));
    const int j0 = std::min(int(pos_t), g.M - 1);
    const double th = pos_t - j0;
    const double pos_x = (x + g.L) / g.dx();
    double v0, v1;
    if (pos_x <= 0.0) {
        v0 = f.at(j0, 0, 0);
        v1 = f.at(j0 + 1, 0, 0);
    } else if (pos_x >= g.N - 1) {
        v0 = f.at(j0, g.N - 1, 0);
        v1 = f.at(j0 + 1, g.N - 1, 0);
    } else {
        const int i0 = int(pos_x);
        const double xh = pos_x - i0;
        v0 = (1.0 - xh) * f.at(j0, i0, 0) + xh * f.at(j0, i0 + 1, 0);
        v1 = (1.0 - xh) * f.at(j0 + 1, i0, 0) + xh * f.at(j0 + 1, i0 + 1, 0);
    }
    return (1.0 - th) * v0 + th * v1;
}

}  // namespace

double ZvonkinMap::eval_V(double t, double x) const { return interp(U, T - t, x); }
double ZvonkinMap::eval_gradV(double t, double x) const { return interp(gradU, T - t, x); }
double ZvonkinMap::phi(double t, double x) const { return x + eval_V(t, x); }

double ZvonkinMap::psi(double t, double y, double x0) const {
    double x = x0;
    for (int it = 0; it < 200; ++it) {
        const double next = y - eval_V(t, x);
        const double res = std::abs(next + eval_V(t, next) - y);
        x = next;
        if (res <= 1e-10) return x;
    }
    throw std::runtime_error("ZvonkinMap::psi: inversion did not reach 1e-10");
}

double ZvonkinMap::drift(double t, double y) const { return lambda * eval_V(t, psi(t, y)); }
double ZvonkinMap::sigma(double t, double y) const { return 1.0 + eval_gradV(t, psi(t, y)); }

ZvonkinMap build_transform(const PicardResult& picard, double lambda) {
    if (!picard.converged)
        throw std::invalid_argument("build_transform: Picard solution not converged");
    if (picard.grad_sup >= 0.999)
        throw std::runtime_error("build_transform: sup |grad U| >= 1, map not invertible");
    ZvonkinMap map;
    map.U = picard.U;
    map.gradU = picard.gradU;
    map.lambda = lambda;
    map.T = picard.U.g.T;
    map.grad_bound = picard.grad_sup;
    return map;
}

}  // namespace parlab
