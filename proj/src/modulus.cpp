#include "parlab/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace parlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double integrate_ab(const std::function<double(double)>& f, double a, double b) {
    if (b <= a) return 0.0;
    boost::math::quadrature::tanh_sinh<double> quad;
    return quad.integrate(f, a, b, 1e-12);
}

}  // namespace

ModulusSpec ModulusSpec::log_power(double beta, double cutoff) {
    if (!(cutoff > 0.0 && cutoff < 1.0))
        throw std::invalid_argument("log_power modulus: cutoff must lie in (0,1)");
    ModulusSpec s;
    s.kind = Kind::log_power;
    s.beta = beta;
    s.cutoff = cutoff;
    return s;
}

ModulusSpec ModulusSpec::constant(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("constant modulus: c must be positive");
    ModulusSpec s;
    s.kind = Kind::constant;
    s.c = c;
    return s;
}

ModulusSpec ModulusSpec::tabulated(std::vector<double> r, std::vector<double> rho) {
    if (r.size() < 2 || r.size() != rho.size())
        throw std::invalid_argument("tabulated modulus: need >= 2 matched samples");
    for (size_t i = 0; i < r.size(); ++i) {
        if (!(rho[i] > 0.0)) throw std::invalid_argument("tabulated modulus: samples must be positive");
        if (i > 0 && !(r[i] > r[i - 1]))
            throw std::invalid_argument("tabulated modulus: r must be strictly increasing");
    }
    ModulusSpec s;
    s.kind = Kind::tabulated;
    s.tab_r = std::move(r);
    s.tab_rho = std::move(rho);
    return s;
}

ModulusSpec ModulusSpec::tabulated_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open modulus CSV: " + path);
    std::vector<double> r, rho;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a, b;
        if (ss >> a >> b) {
            r.push_back(a);
            rho.push_back(b);
        }
        // non-numeric lines (header) are skipped
    }
    return tabulated(std::move(r), std::move(rho));
}

double ModulusSpec::eval_unchecked(double r) const {
    switch (kind) {
        case Kind::constant:
            return c;
        case Kind::log_power: {
            if (beta == 0.0) return 1.0;
            if (r < cutoff) return std::pow(-std::log(r), beta);
            // quadratic continuation psi with psi(cutoff), psi'(cutoff) matched
            // and psi'(1) = 0; monotone on [cutoff, 1].
            const double v = std::pow(-std::log(cutoff), beta);
            const double slope = -beta * std::pow(-std::log(cutoff), beta - 1.0) / cutoff;
            const double u = r - cutoff;
            const double w = 1.0 - cutoff;
            return v + slope * u * (1.0 - u / (2.0 * w));
        }
        case Kind::tabulated: {
            const auto& xs = tab_r;
            const auto& ys = tab_rho;
            if (r <= xs.front()) {
                // power-law extrapolation through the first two samples,
                // exact for tabulations of pure powers
                const double g = std::log(ys[1] / ys[0]) / std::log(xs[1] / xs[0]);
                return ys.front() * std::pow(r / xs.front(), g);
            }
            if (r >= xs.back()) return ys.back();
            auto it = std::upper_bound(xs.begin(), xs.end(), r);
            const size_t i = size_t(it - xs.begin());
            const double w = (r - xs[i - 1]) / (xs[i] - xs[i - 1]);
            return ys[i - 1] + w * (ys[i] - ys[i - 1]);
        }
    }
    return kNaN;
}

double ModulusSpec::operator()(double r) const {
    if (!(r > 0.0 && r <= 1.0)) throw std::domain_error("modulus evaluated outside (0,1]");
    return eval_unchecked(r);
}

bool ModulusSpec::increasing() const {
    switch (kind) {
        case Kind::constant:
            return false;
        case Kind::log_power:
            return beta < 0.0;
        case Kind::tabulated:
            return tab_rho.back() >= tab_rho.front();
    }
    return false;
}

namespace {

// Simpson in s = log r over [lo, hi] of rho(e^s)^q.
double decade_piece(const ModulusSpec& spec, double q, double lo, double hi) {
    const int panels = 64;
    const double a = std::log(lo), b = std::log(hi);
    const double h = (b - a) / (2 * panels);
    double sum = std::pow(spec.eval_unchecked(lo), q) + std::pow(spec.eval_unchecked(hi), q);
    for (int i = 1; i < 2 * panels; ++i) {
        const double w = (i % 2 == 1) ? 4.0 : 2.0;
        sum += w * std::pow(spec.eval_unchecked(std::exp(a + i * h)), q);
    }
    return sum * h / 3.0;
}

DiniResult dini_tabulated(const ModulusSpec& spec, double q, double lower_cut, double upper) {
    double total = 0.0;
    double prev_inc = -1.0;
    int growing = 0;
    double hi = upper;
    double last_ratio = 0.0;
    while (hi > lower_cut) {
        const double lo = std::max(hi / 10.0, lower_cut);
        const double inc = decade_piece(spec, q, lo, hi);
        total += inc;
        if (prev_inc >= 0.0) {
            last_ratio = (prev_inc > 0.0) ? inc / prev_inc : 0.0;
            if (inc > 1e-3 * total && inc >= prev_inc * (1.0 - 1e-9)) {
                if (++growing >= 3) return {false, kNaN};
            } else {
                growing = 0;
            }
        }
        if (inc < 1e-16 * std::max(total, 1e-300)) break;
        prev_inc = inc;
        hi = lo;
    }
    // geometric tail below the last decade when the increments contract
    if (hi <= lower_cut * (1.0 + 1e-12) && last_ratio > 0.0 && last_ratio <= 0.9)
        total += prev_inc * last_ratio / (1.0 - last_ratio);
    return {true, total};
}

}  // namespace

DiniResult dini_integral(const ModulusSpec& spec, double lower_cut, double upper, double power) {
    if (!(upper > 0.0 && upper <= 1.0)) throw std::invalid_argument("dini_integral: upper in (0,1]");
    if (!(lower_cut > 0.0 && lower_cut < upper))
        throw std::invalid_argument("dini_integral: lower_cut in (0, upper)");
    switch (spec.kind) {
        case ModulusSpec::Kind::constant:
            return {false, kNaN};  // int c^q/r dr diverges at 0
        case ModulusSpec::Kind::log_power: {
            const double qb = power * spec.beta;
            if (qb >= -1.0 && spec.beta != 0.0) return {false, kNaN};
            if (spec.beta == 0.0) return {false, kNaN};  // reduces to constant
            const double top = std::min(spec.cutoff, upper);
            // antiderivative of |log r|^{qb}/r is -|log r|^{qb+1}/(qb+1); the
            // limit at r=0+ vanishes for qb < -1
            double value = -std::pow(-std::log(top), qb + 1.0) / (qb + 1.0);
            if (upper > spec.cutoff) {
                value += integrate_ab(
                    [&](double r) { return std::pow(spec.eval_unchecked(r), power) / r; },
                    spec.cutoff, upper);
            }
            return {true, value};
        }
        case ModulusSpec::Kind::tabulated:
            return dini_tabulated(spec, power, lower_cut, upper);
    }
    return {false, kNaN};
}

double rho_hat_at(const ModulusSpec& spec, double r) {
    if (!(r > 0.0 && r <= 1.0)) throw std::domain_error("rho_hat: r outside (0,1]");
    const DiniResult head = dini_integral(spec, 1e-12, r);
    if (!head.finite) throw std::runtime_error("rho_hat: modulus is not Dini (not applicable)");
    double tail = 0.0;
    if (r < 1.0) {
        tail = r * integrate_ab(
                       [&](double tau) { return spec.eval_unchecked(tau) / (tau * tau); }, r, 1.0);
    }
    return head.value + spec.eval_unchecked(r) + tail;
}

RhoHatTable rho_hat(const ModulusSpec& spec, const std::vector<double>& r_desc) {
    RhoHatTable table;
    table.r = r_desc;
    table.value.reserve(r_desc.size());
    for (size_t i = 0; i < r_desc.size(); ++i) {
        if (i > 0 && !(r_desc[i] < r_desc[i - 1]))
            throw std::invalid_argument("rho_hat: r grid must be strictly descending");
        table.value.push_back(rho_hat_at(spec, r_desc[i]));
    }
    return table;
}

std::vector<double> slowly_varying_ratio(const ModulusSpec& spec, double upsilon,
                                         const std::vector<double>& rs) {
    if (!(upsilon > 0.0)) throw std::invalid_argument("slowly_varying_ratio: upsilon > 0");
    std::vector<double> out;
    out.reserve(rs.size());
    for (double r : rs) {
        if (!(r > 0.0) || upsilon * r > 1.0)
            throw std::domain_error("slowly_varying_ratio: need 0 < r and upsilon*r <= 1");
        out.push_back(spec.eval_unchecked(upsilon * r) / spec.eval_unchecked(r));
    }
    return out;
}

bool is_slowly_varying(const ModulusSpec& spec) {
    switch (spec.kind) {
        case ModulusSpec::Kind::constant:
        case ModulusSpec::Kind::log_power:
            return true;  // |log r|^beta is slowly varying for every beta
        case ModulusSpec::Kind::tabulated: {
            // heuristic: the doubling ratio must be close to 1 at the smallest
            // resolvable scale and no worse than one scale up
            const double r0 = std::min(spec.tab_r[1], 0.4);
            const double r1 = std::min(std::max(10.0 * r0, spec.tab_r[1]), 0.4);
            const double d0 = std::abs(spec.eval_unchecked(2.0 * r0) / spec.eval_unchecked(r0) - 1.0);
            const double d1 = std::abs(spec.eval_unchecked(2.0 * r1) / spec.eval_unchecked(r1) - 1.0);
            return d0 <= 0.25 && d0 <= d1 + 0.05;
        }
    }
    return false;
}

ClassLabel classify_modulus(const ModulusSpec& spec, double alpha, double p, char theta,
                            ClassFlags* flags) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("classify: alpha in [0,1)");
    if (!(p > 1.0)) throw std::invalid_argument("classify: p in (1,+inf]");
    if (theta != 'l' && theta != 'b') throw std::invalid_argument("classify: theta is 'l' or 'b'");

    const DiniResult dini = dini_integral(spec, 1e-12);
    char varsigma;
    switch (spec.kind) {
        case ModulusSpec::Kind::constant:
            varsigma = 'c';
            break;
        case ModulusSpec::Kind::log_power:
            if (spec.beta == 0.0) varsigma = 'c';
            else if (spec.beta > 0.0) varsigma = 'w';
            else varsigma = dini.finite ? 'd' : 's';
            break;
        case ModulusSpec::Kind::tabulated: {
            const auto& y = spec.tab_rho;
            bool nondec = true, noninc = true;
            for (size_t i = 1; i < y.size(); ++i) {
                if (y[i] < y[i - 1]) nondec = false;
                if (y[i] > y[i - 1]) noninc = false;
            }
            const double span = *std::max_element(y.begin(), y.end()) /
                                *std::min_element(y.begin(), y.end());
            if (span < 1.05) varsigma = 'c';
            else if (nondec) varsigma = dini.finite ? 'd' : 's';
            else if (noninc) varsigma = 'w';
            else
                throw std::runtime_error(
                    "classify: tabulated modulus is not monotone; cannot assign a class");
            break;
        }
        default:
            throw std::logic_error("classify: unknown modulus kind");
    }

    if (flags) {
        flags->dini = dini.finite;
        flags->slowly_varying = is_slowly_varying(spec);
        const double q =
            std::isinf(p) ? 2.0 / 5.0 : 2.0 * p / (5.0 * p - 2.0);
        flags->admissible =
            flags->slowly_varying && dini_integral(spec, 1e-12, 1.0, q).finite;
    }
    return ClassLabel{varsigma, alpha, theta, p};
}

namespace {

double pair_ratio(double hv, double hw, double sep, double alpha, const ModulusSpec& spec) {
    return std::abs(hv - hw) / (std::pow(sep, alpha) * spec.eval_unchecked(sep));
}

}  // namespace

double holder_seminorm_1d(const double* h, int N, double dx, double alpha,
                          const ModulusSpec& spec, const SeminormOptions& opt) {
    if (N < 2) throw std::invalid_argument("holder_seminorm: empty grid");
    if (dx > 1.0) throw std::invalid_argument("holder_seminorm: grid spacing must be <= 1");
    double best = 0.0;
    for (int d = 1; d < N; d *= 2) {
        const double sep = d * dx;
        if (sep > opt.max_sep) break;
        if (sep < opt.min_sep) continue;
        for (int i = 0; i + d < N; ++i)
            best = std::max(best, pair_ratio(h[i], h[i + d], sep, alpha, spec));
    }
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> pick(0, N - 1);
    for (int k = 0; k < opt.pair_budget; ++k) {
        const int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        const double sep = std::abs(i - j) * dx;
        if (sep < opt.min_sep || sep > opt.max_sep) continue;
        best = std::max(best, pair_ratio(h[i], h[j], sep, alpha, spec));
    }
    return best;
}

double holder_seminorm_2d(const double* h, int N, double dx, double alpha,
                          const ModulusSpec& spec, const SeminormOptions& opt) {
    if (N < 2) throw std::invalid_argument("holder_seminorm: empty grid");
    if (dx > 1.0) throw std::invalid_argument("holder_seminorm: grid spacing must be <= 1");
    auto at = [&](int r, int c) { return h[size_t(r) * N + c]; };
    double best = 0.0;
    const double sqrt2 = std::sqrt(2.0);
    for (int d = 1; d < N; d *= 2) {
        const double sep_ax = d * dx, sep_di = d * dx * sqrt2;
        if (sep_ax > opt.max_sep) break;
        const bool ax_ok = sep_ax >= opt.min_sep;
        const bool di_ok = sep_di >= opt.min_sep && sep_di <= opt.max_sep;
        for (int r = 0; r < N; ++r) {
            for (int c = 0; c + d < N; ++c) {
                if (ax_ok) {
                    best = std::max(best, pair_ratio(at(r, c), at(r, c + d), sep_ax, alpha, spec));
                    if (r + d < N)
                        best = std::max(best, pair_ratio(at(r, c), at(r + d, c), sep_ax, alpha, spec));
                }
                if (di_ok && r + d < N)
                    best = std::max(best, pair_ratio(at(r, c), at(r + d, c + d), sep_di, alpha, spec));
            }
        }
    }
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> pick(0, N - 1);
    for (int k = 0; k < opt.pair_budget; ++k) {
        const int r1 = pick(rng), c1 = pick(rng), r2 = pick(rng), c2 = pick(rng);
        if (r1 == r2 && c1 == c2) continue;
        const double sep = dx * std::hypot(double(r1 - r2), double(c1 - c2));
        if (sep < opt.min_sep || sep > opt.max_sep) continue;
        best = std::max(best, pair_ratio(at(r1, c1), at(r2, c2), sep, alpha, spec));
    }
    return best;
}

std::vector<LimitRow> limit_checks(double alpha, const ModulusSpec& spec,
                                   const std::vector<double>& deltas) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("limit_checks: alpha in (0,1)");
    std::vector<LimitRow> rows;
    rows.reserve(deltas.size());
    for (double d : deltas) {
        if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("limit_checks: delta in (0,1)");
        const double denom = std::pow(d, alpha) * spec.eval_unchecked(d);
        const double n1 = integrate_ab(
            [&](double r) { return spec.eval_unchecked(r) * std::pow(r, alpha - 1.0); }, 0.0, d);
        const double n2 = integrate_ab(
            [&](double r) { return spec.eval_unchecked(r) * std::pow(r, alpha - 2.0); }, d, 1.0);
        rows.push_back(LimitRow{d, n1 / denom, d * n2 / denom});
    }
    return rows;
}

double vanishing_tail_quantity(const ModulusSpec& spec, double iota) {
    if (!(iota > 0.0 && iota < 1.0)) throw std::invalid_argument("iota in (0,1)");
    return iota * integrate_ab(
                      [&](double r) { return spec.eval_unchecked(r) / (r * r); }, iota, 1.0);
}

}  // namespace parlab
