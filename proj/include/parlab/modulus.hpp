#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace parlab {

// A modulus of continuity rho on (0,1]. Three kinds:
//  - log_power: rho(r) = |log r|^beta on (0, cutoff), continued on [cutoff, 1]
//    by the quadratic psi matching value and slope at the cutoff with
//    psi'(1) = 0 (monotone by construction for beta != 0);
//  - constant:  rho == c;
//  - tabulated: strictly positive monotone samples, linearly interpolated.
struct ModulusSpec {
    enum class Kind { log_power, constant, tabulated };

    Kind kind = Kind::constant;
    double beta = 0.0;    // log_power exponent
    double c = 1.0;       // constant value
    double cutoff = 0.5;  // where the log-power branch ends
    std::vector<double> tab_r, tab_rho;

    static ModulusSpec log_power(double beta, double cutoff = 0.5);
    static ModulusSpec constant(double c);
    static ModulusSpec tabulated(std::vector<double> r, std::vector<double> rho);
    // Two-column CSV (r, rho), strictly increasing r, optional header line.
    static ModulusSpec tabulated_from_csv(const std::string& path);

    // Evaluate rho(r); throws std::domain_error outside (0,1]. (Internal
    // quadratures may evaluate below the smallest tabulated r; those use
    // eval_unchecked.)
    double operator()(double r) const;
    double eval_unchecked(double r) const;

    bool increasing() const;  // direction on (0, cutoff)
};

struct DiniResult {
    bool finite = false;
    double value = 0.0;  // NaN when divergent
};

// Integral of rho(r)^power / r over (0, upper] when the analytic tail is
// classifiable (log_power / constant); tabulated specs integrate numerically
// over (lower_cut, upper] by geometric decade refinement with a Cauchy
// divergence test and a geometric tail extrapolation.
DiniResult dini_integral(const ModulusSpec& spec, double lower_cut,
                         double upper = 1.0, double power = 1.0);

struct RhoHatTable {
    std::vector<double> r;      // descending grid in (0,1]
    std::vector<double> value;  // rho_hat(r)
};

// rho_hat(r) = int_0^r rho/tau dtau + rho(r) + r int_r^1 rho/tau^2 dtau.
// Requires a finite Dini integral; throws std::runtime_error otherwise.
double rho_hat_at(const ModulusSpec& spec, double r);
RhoHatTable rho_hat(const ModulusSpec& spec, const std::vector<double>& r_desc);

// Ratios rho(upsilon*r)/rho(r); requires upsilon*r <= 1 for every r.
std::vector<double> slowly_varying_ratio(const ModulusSpec& spec, double upsilon,
                                         const std::vector<double>& rs);
bool is_slowly_varying(const ModulusSpec& spec);

struct ClassLabel {
    char varsigma = 'c';  // 'd','s','c','w'
    double alpha = 0.0;   // in [0,1)
    char theta = 'b';     // 'l' or 'b'
    double p = 2.0;       // in (1, +inf]
};

struct ClassFlags {
    bool dini = false;
    bool slowly_varying = false;
    bool admissible = false;  // rho^{2p/(5p-2)} Dini and rho slowly varying
};

ClassLabel classify_modulus(const ModulusSpec& spec, double alpha, double p,
                            char theta = 'b', ClassFlags* flags = nullptr);

struct SeminormOptions {
    int pair_budget = 4096;   // random pairs on top of the dyadic sweep
    std::uint64_t seed = 12345;
    double min_sep = 0.0;     // exclude separations below this
    double max_sep = 1.0;     // separations above this never enter the norm
};

// sup over sampled pairs of |h(x)-h(y)| / (|x-y|^alpha rho(|x-y|)) for a field
// sampled on a uniform 1-D grid (N points, spacing dx) or an N-by-N row-major
// 2-D grid. Pairs: all dyadic-separation grid pairs plus seeded random pairs.
double holder_seminorm_1d(const double* h, int N, double dx, double alpha,
                          const ModulusSpec& spec, const SeminormOptions& opt = {});
double holder_seminorm_2d(const double* h, int N, double dx, double alpha,
                          const ModulusSpec& spec, const SeminormOptions& opt = {});

struct LimitRow {
    double delta = 0.0;
    double r1 = 0.0;  // int_0^delta rho r^{alpha-1} dr / (delta^alpha rho(delta))  -> 1/alpha
    double r2 = 0.0;  // delta int_delta^1 rho r^{alpha-2} dr / (delta^alpha rho(delta)) -> 1/(1-alpha)
};

std::vector<LimitRow> limit_checks(double alpha, const ModulusSpec& spec,
                                   const std::vector<double>& deltas);

// iota * int_iota^1 rho(r)/r^2 dr; tends to 0 for Dini rho as iota -> 0.
double vanishing_tail_quantity(const ModulusSpec& spec, double iota);

}  // namespace parlab
