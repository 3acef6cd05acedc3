#include "parlab/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "parlab/report_io.hpp"

namespace parlab {

void GridSpec::validate() const {
    if (n != 1 && n != 2) throw std::invalid_argument("GridSpec: n must be 1 or 2");
    if (N < 16 || (N & (N - 1)) != 0)
        throw std::invalid_argument("GridSpec: N must be a power of two >= 16");
    if (!(L > 0.0)) throw std::invalid_argument("GridSpec: L must be positive");
    if (dx() > 1.0) throw std::invalid_argument("GridSpec: dx must be <= 1");
    if (M < 8) throw std::invalid_argument("GridSpec: M must be >= 8");
    if (!(T > 0.0)) throw std::invalid_argument("GridSpec: T must be positive");
    if (!(p > 1.0)) throw std::invalid_argument("GridSpec: p must lie in (1,+inf]");
}

GridField::GridField(const GridSpec& spec, int comps_, std::string role_)
    : g(spec), comps(comps_), role(std::move(role_)),
      v(size_t(spec.M + 1) * spec.cells() * comps_, 0.0) {}

bool GridField::all_finite() const {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

GridField GridField::sample(const GridSpec& spec, int comps,
                            const std::function<void(double, const double*, double*)>& fn,
                            std::string role) {
    GridField f(spec, comps, std::move(role));
    double x[2];
    for (int j = 0; j <= spec.M; ++j) {
        const double t = spec.time(j);
        for (int cell = 0; cell < spec.cells(); ++cell) {
            spec.coords(cell, x);
            fn(t, x, &f.at(j, cell, 0));
        }
    }
    return f;
}

GridField GridField::sample_scalar(const GridSpec& spec,
                                   const std::function<double(double, const double*)>& fn,
                                   std::string role) {
    return sample(
        spec, 1, [&](double t, const double* x, double* out) { out[0] = fn(t, x); },
        std::move(role));
}

void write_field_ndjson(const GridField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (int j = 0; j <= f.g.M; ++j) {
        out << "{\"t\":" << fmt17(f.g.time(j)) << ",\"shape\":[" << f.g.N;
        if (f.g.n == 2) out << ',' << f.g.N;
        out << "],\"comps\":" << f.comps << ",\"values\":[";
        const double* s = f.slice(j);
        const size_t len = f.slice_size();
        for (size_t k = 0; k < len; ++k) {
            if (k) out << ',';
            out << fmt17(s[k]);
        }
        out << "]}\n";
    }
}

}  // namespace parlab
