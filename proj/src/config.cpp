#include "parlab/config.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "parlab/heat_kernel.hpp"
#include "parlab/kolmogorov.hpp"
#include "parlab/modulus.hpp"
#include "parlab/parabolic.hpp"
#include "parlab/report_io.hpp"
#include "parlab/sde.hpp"
#include "parlab/zvonkin.hpp"

namespace parlab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

const json& require(const json& j, const std::string& key) {
    if (!j.contains(key)) bad("missing key '" + key + "'");
    return j.at(key);
}

double num(const json& j, const std::string& key) {
    const json& v = require(j, key);
    if (!v.is_number()) bad("'" + key + "' must be a number");
    return v.get<double>();
}

double num_or(const json& j, const std::string& key, double dflt) {
    return j.contains(key) ? num(j, key) : dflt;
}

std::string str(const json& j, const std::string& key) {
    const json& v = require(j, key);
    if (!v.is_string()) bad("'" + key + "' must be a string");
    return v.get<std::string>();
}

GridSpec parse_grid(const json& j) {
    GridSpec g;
    g.n = int(num_or(j, "n", 1));
    g.L = num_or(j, "L", 8.0);
    g.N = int(num(j, "N"));
    g.T = num_or(j, "T", 1.0);
    g.M = int(num(j, "M"));
    if (j.contains("p")) {
        if (j.at("p").is_string() && j.at("p").get<std::string>() == "inf")
            g.p = std::numeric_limits<double>::infinity();
        else
            g.p = num(j, "p");
    }
    try {
        g.validate();
    } catch (const std::exception& e) {
        bad(std::string("grid: ") + e.what());
    }
    return g;
}

ModulusSpec parse_modulus(const json& j) {
    const std::string kind = str(j, "kind");
    if (kind == "log_power") return ModulusSpec::log_power(num(j, "beta"), num_or(j, "cutoff", 0.5));
    if (kind == "constant") return ModulusSpec::constant(num_or(j, "c", 1.0));
    if (kind == "tabulated") {
        if (j.contains("csv")) return ModulusSpec::tabulated_from_csv(str(j, "csv"));
        return ModulusSpec::tabulated(require(j, "r").get<std::vector<double>>(),
                                      require(j, "rho").get<std::vector<double>>());
    }
    bad("unknown modulus kind '" + kind + "'");
}

std::function<double(double, const double*)> parse_source(const json& j, int n) {
    const std::string kind = str(j, "kind");
    if (kind == "constant") {
        const double v = num(j, "value");
        return [v](double, const double*) { return v; };
    }
    if (kind == "sin") {
        const double amp = num_or(j, "amp", 1.0), freq = num_or(j, "freq", 1.0),
                     tgrow = num_or(j, "tgrow", 0.0);
        return [amp, freq, tgrow, n](double t, const double* x) {
            double v = amp * std::sin(freq * x[0]);
            if (n == 2) v *= std::sin(freq * x[1]);
            return v * (1.0 + tgrow * t);
        };
    }
    if (kind == "gauss") {
        const double amp = num_or(j, "amp", 1.0), w = num_or(j, "width", 1.0),
                     tgrow = num_or(j, "tgrow", 0.0);
        return [amp, w, tgrow, n](double t, const double* x) {
            double r2 = x[0] * x[0];
            if (n == 2) r2 += x[1] * x[1];
            return amp * std::exp(-r2 / (w * w)) * (1.0 + tgrow * t);
        };
    }
    if (kind == "weierstrass") {
        const double alpha = num(j, "alpha"), base = num_or(j, "base", 2.0),
                     amp = num_or(j, "amp", 1.0), tgrow = num_or(j, "tgrow", 0.0);
        const int levels = int(num_or(j, "levels", 6));
        if (levels < 1 || levels > 24) bad("weierstrass: levels out of range");
        return [alpha, base, amp, levels, tgrow](double t, const double* x) {
            double v = 0.0, f = 1.0;
            for (int l = 0; l < levels; ++l) {
                v += std::pow(f, -alpha) * std::sin(f * x[0] + 0.7 * l);
                f *= base;
            }
            return amp * v * (1.0 + tgrow * t);
        };
    }
    if (kind == "affine") {
        const double c0 = num_or(j, "c0", 0.0), c1 = num_or(j, "c1", 1.0),
                     tgrow = num_or(j, "tgrow", 0.0);
        return [c0, c1, tgrow](double t, const double* x) {
            return (c0 + c1 * x[0]) * (1.0 + tgrow * t);
        };
    }
    bad("unknown source kind '" + kind + "'");
}

DriftSpec parse_drift(const json& j, const ModulusSpec* rho) {
    const std::string kind = str(j, "kind");
    if (kind == "constant") {
        std::vector<double> c = require(j, "c").get<std::vector<double>>();
        return DriftSpec::constant(int(c.size()), c);
    }
    if (kind == "sin")
        return DriftSpec::sinusoidal(int(num_or(j, "n", 1)), num_or(j, "amp", 1.0),
                                     num_or(j, "freq", 1.0));
    if (kind == "rough") {
        if (!rho) bad("rough drift requires a modulus");
        return DriftSpec::rough(*rho, num_or(j, "target", 1.0), num_or(j, "taper_radius", 2.0));
    }
    if (kind == "supercritical")
        return DriftSpec::supercritical(num(j, "p"), num(j, "alpha"), num(j, "eps"));
    bad("unknown drift kind '" + kind + "'");
}

DiffusionSpec parse_diffusion(const json& cfg, int n) {
    DiffusionSpec spec = DiffusionSpec::identity(n);
    if (!cfg.contains("diffusion")) return spec;
    const json& j = cfg.at("diffusion");
    const double ramp = num_or(j, "time_ramp", 0.0);
    if (ramp != 0.0) {
        spec = DiffusionSpec::scalar_time(
            n, [ramp](double t) { return 1.0 + ramp * t; }, 1.0 + std::abs(ramp));
    }
    if (j.contains("space_osc")) {
        const json& o = j.at("space_osc");
        const double amp = num(o, "amp"), freq = num_or(o, "freq", 1.0);
        if (std::abs(amp) >= 0.9) bad("diffusion: space oscillation too strong");
        spec.gamma = std::max(spec.gamma, 1.0 / (1.0 - std::abs(amp)));
        spec.a_space = [amp, freq, ramp, n](double t, const double* x) {
            return SymMat::scalar(n, (1.0 + ramp * t) * (1.0 + amp * std::sin(freq * x[0])));
        };
    }
    return spec;
}

SimConfig parse_sim(const json& cfg, std::optional<std::uint64_t> seed_override) {
    SimConfig s;
    const json& j = require(cfg, "sim");
    s.T = num_or(j, "T", 1.0);
    s.dt = num(j, "dt");
    s.paths = int(num(j, "paths"));
    s.x0 = num_or(j, "x0", 0.0);
    s.t0 = num_or(j, "t0", 0.0);
    s.seed = std::uint64_t(num_or(j, "seed", 42));
    if (seed_override) s.seed = *seed_override;
    if (s.paths < 1 || s.paths > 2000000) bad("sim: paths out of range");
    if (!(s.dt > 0.0) || s.t0 < 0.0 || s.t0 >= s.T) bad("sim: bad time parameters");
    return s;
}

// ---------------------------------------------------------------------------

struct Expectation {
    double value = 0.0;
    std::optional<double> min, max;
    bool pass = true;
};

struct RunContext {
    fs::path out;
    json manifest;
    std::map<std::string, double> metrics;
    std::vector<std::string> outputs;

    fs::path results(const std::string& name) {
        outputs.push_back("results/" + name);
        return out / "results" / name;
    }
    fs::path fields(const std::string& name) {
        outputs.push_back("fields/" + name);
        return out / "fields" / name;
    }
    void field(const GridField& f, const std::string& name) {
        write_field_ndjson(f, fields(name).string());
    }
};

bool check_expectations(const json& cfg, RunContext& ctx) {
    json report = json::object();
    bool all_pass = true;
    if (cfg.contains("expect")) {
        for (auto& [name, spec] : cfg.at("expect").items()) {
            auto it = ctx.metrics.find(name);
            if (it == ctx.metrics.end()) bad("expect: unknown metric '" + name + "'");
            Expectation e;
            e.value = it->second;
            if (spec.contains("min")) e.min = spec.at("min").get<double>();
            if (spec.contains("max")) e.max = spec.at("max").get<double>();
            if (e.min && !(e.value >= *e.min)) e.pass = false;
            if (e.max && !(e.value <= *e.max)) e.pass = false;
            all_pass = all_pass && e.pass;
            json row = {{"value", e.value}, {"pass", e.pass}};
            if (e.min) row["min"] = *e.min;
            if (e.max) row["max"] = *e.max;
            report[name] = row;
        }
    }
    ctx.manifest["expectations"] = report;
    return all_pass;
}

// ---------------------------------------------------------------------------
// experiment bodies (validate_only short-circuits after construction)

void exp_modulus_report(const json& cfg, RunContext* ctx) {
    ModulusSpec rho = parse_modulus(require(cfg, "modulus"));
    const double alpha = num_or(cfg, "alpha", 0.0);
    const double p = num_or(cfg, "p", 2.0);
    const char theta = num_or(cfg, "weighted", 0.0) != 0.0 ? 'l' : 'b';
    std::vector<double> deltas = cfg.contains("deltas")
                                     ? cfg.at("deltas").get<std::vector<double>>()
                                     : std::vector<double>{1e-3, 1e-6, 1e-9, 1e-12, 1e-15};
    if (!ctx) return;

    ClassFlags flags;
    ClassLabel label = classify_modulus(rho, alpha, p, theta, &flags);
    DiniResult dini = dini_integral(rho, 1e-16);

    CsvWriter csv(ctx->results("modulus_report.csv").string());
    csv.row({"quantity", "value"});
    csv.row({"class", std::string(1, label.varsigma)});
    csv.row({"dini_finite", flags.dini ? "1" : "0"});
    csv.row({"slowly_varying", flags.slowly_varying ? "1" : "0"});
    csv.row({"admissible", flags.admissible ? "1" : "0"});
    csv.row({"dini_value", dini.finite ? fmt17(dini.value) : "inf"});
    ctx->metrics["dini_finite"] = flags.dini ? 1.0 : 0.0;
    ctx->metrics["slowly_varying"] = flags.slowly_varying ? 1.0 : 0.0;
    ctx->metrics["admissible"] = flags.admissible ? 1.0 : 0.0;
    if (dini.finite) ctx->metrics["dini_value"] = dini.value;

    if (alpha > 0.0 && alpha < 1.0) {
        auto rows = limit_checks(alpha, rho, deltas);
        CsvWriter lim(ctx->results("limit_checks.csv").string());
        lim.row({"delta", "r1", "r2", "r1_target", "r2_target"});
        for (const auto& r : rows)
            lim.row({fmt17(r.delta), fmt17(r.r1), fmt17(r.r2), fmt17(1.0 / alpha),
                     fmt17(1.0 / (1.0 - alpha))});
        ctx->metrics["r1_last"] = rows.back().r1;
        ctx->metrics["r2_last"] = rows.back().r2;
        ctx->metrics["r1_rel_err"] = std::abs(rows.back().r1 * alpha - 1.0);
        ctx->metrics["r2_rel_err"] = std::abs(rows.back().r2 * (1.0 - alpha) - 1.0);
    }
    if (flags.dini) {
        CsvWriter rh(ctx->results("rho_hat.csv").string());
        rh.row({"r", "rho", "rho_hat"});
        for (double r = 1.0; r >= 1e-6; r /= 10.0)
            rh.row({fmt17(r), fmt17(rho.eval_unchecked(r)), fmt17(rho_hat_at(rho, r))});
    }
}

void exp_regularity(const json& cfg, RunContext* ctx, std::optional<std::uint64_t> seed) {
    GridSpec grid = parse_grid(require(cfg, "grid"));
    ModulusSpec rho = parse_modulus(require(cfg, "modulus"));
    const double alpha = num_or(cfg, "alpha", 0.0);
    const double lambda = num(cfg, "lambda");
    const char theta = num_or(cfg, "weighted", 0.0) != 0.0 ? 'l' : 'b';
    auto f_fn = parse_source(require(cfg, "source"), grid.n);
    DiffusionSpec spec = parse_diffusion(cfg, grid.n);
    const std::uint64_t s = seed ? *seed : std::uint64_t(num_or(cfg, "seed", 1));
    ClassLabel label = classify_modulus(rho, alpha, grid.p, theta);
    if (!ctx) return;

    auto rep = verify_maximal_regularity(f_fn, spec, lambda, grid, label, rho, s);
    CsvWriter csv(ctx->results("regularity.csv").string());
    csv.row({"time", "source_norm", "solution_norm"});
    for (size_t i = 0; i < rep.times.size(); ++i)
        csv.row({fmt17(rep.times[i]), fmt17(rep.source_norm_t[i]),
                 fmt17(rep.solution_norm_t[i])});
    CsvWriter sum(ctx->results("regularity_summary.csv").string());
    sum.row({"quantity", "value"});
    sum.row({"source_agg", fmt17(rep.source_agg)});
    sum.row({"solution_agg", fmt17(rep.solution_agg)});
    sum.row({"ratio_coarse", fmt17(rep.ratio_coarse)});
    sum.row({"ratio_fine", fmt17(rep.ratio_fine)});
    ctx->metrics["ratio_coarse"] = rep.ratio_coarse;
    ctx->metrics["ratio_fine"] = rep.ratio_fine;
    ctx->metrics["ratio_rel_change"] =
        std::abs(rep.ratio_fine - rep.ratio_coarse) / std::max(rep.ratio_coarse, 1e-300);
    ctx->metrics["source_agg"] = rep.source_agg;
    ctx->metrics["solution_agg"] = rep.solution_agg;

    GridField f = GridField::sample_scalar(grid, f_fn, "source");
    GridField u = solve_g_lambda(f, spec, lambda, theta == 'l');
    ctx->field(f, "source.ndjson");
    ctx->field(u, "solution.ndjson");
}

void exp_embedding(const json& cfg, RunContext* ctx, std::optional<std::uint64_t> seed) {
    GridSpec grid = parse_grid(require(cfg, "grid"));
    ModulusSpec rho = parse_modulus(require(cfg, "modulus"));
    const double alpha = num_or(cfg, "alpha", 0.0);
    const double lambda = num(cfg, "lambda");
    auto f_fn = parse_source(require(cfg, "source"), grid.n);
    DiffusionSpec spec = parse_diffusion(cfg, grid.n);
    const std::uint64_t s = seed ? *seed : std::uint64_t(num_or(cfg, "seed", 1));
    ClassLabel label = classify_modulus(rho, alpha, grid.p, 'b');
    if (!ctx) return;

    auto rep = verify_embedding(f_fn, spec, lambda, grid, label, rho, s);
    CsvWriter csv(ctx->results("embedding.csv").string());
    csv.row({"quantity", "value"});
    csv.row({"ratio_coarse", fmt17(rep.ratio_coarse)});
    csv.row({"ratio_fine", fmt17(rep.ratio_fine)});
    csv.row({"source_agg", fmt17(rep.source_agg)});
    csv.row({"empirical_constant", fmt17(rep.empirical_constant)});
    ctx->metrics["ratio_coarse"] = rep.ratio_coarse;
    ctx->metrics["ratio_fine"] = rep.ratio_fine;
    ctx->metrics["ratio_rel_change"] =
        std::abs(rep.ratio_fine - rep.ratio_coarse) / std::max(rep.ratio_coarse, 1e-300);
    ctx->metrics["empirical_constant"] = rep.empirical_constant;
}

void exp_drifted(const json& cfg, RunContext* ctx) {
    GridSpec grid = parse_grid(require(cfg, "grid"));
    const double lambda = num(cfg, "lambda");
    auto f_fn = parse_source(require(cfg, "source"), grid.n);
    DriftSpec bd = parse_drift(require(cfg, "drift"), nullptr);
    if (bd.n != grid.n) bad("drifted: drift dimension mismatch");
    DiffusionSpec spec = parse_diffusion(cfg, grid.n);
    if (!ctx) return;

    GridField f = GridField::sample_scalar(grid, f_fn, "source");
    GridField g_drift = GridField::sample(
        grid, grid.n, [&](double t, const double* x, double* out) { bd.eval(t, x, out); },
        "drift");
    auto res = solve_drifted(f, g_drift, spec, lambda);
    CsvWriter csv(ctx->results("drifted.csv").string());
    csv.row({"tau", "contraction"});
    double cmax = 0.0;
    for (size_t i = 0; i < res.tau_grid.size(); ++i) {
        csv.row({fmt17(res.tau_grid[i]), fmt17(res.contraction[i])});
        cmax = std::max(cmax, res.contraction[i]);
    }
    csv.row({"residual", fmt17(res.residual)});
    ctx->metrics["residual"] = res.residual;
    ctx->metrics["contraction_max"] = cmax;
    ctx->metrics["tau_steps"] = double(res.tau_grid.size());
    ctx->field(res.u, "solution.ndjson");
}

void exp_kolmogorov(const json& cfg, RunContext* ctx) {
    GridSpec grid = parse_grid(require(cfg, "grid"));
    ModulusSpec rho = parse_modulus(require(cfg, "modulus"));
    DriftSpec bd = parse_drift(require(cfg, "drift"), &rho);
    const double lambda0 = num_or(cfg, "lambda0", 1.0);
    std::vector<MollificationSpec> levels;
    if (cfg.contains("mollification")) {
        for (const json& l : cfg.at("mollification")) {
            MollificationSpec m;
            m.m = int(num_or(l, "m", 0));
            m.k = int(num_or(l, "k", 0));
            m.R = num_or(l, "R", 0.0);
            levels.push_back(m);
        }
    }
    if (!ctx) return;

    auto sel = select_lambda(bd, grid, rho, grid.p, lambda0);
    CsvWriter csv(ctx->results("kolmogorov.csv").string());
    csv.row({"quantity", "value"});
    csv.row({"lambda", fmt17(sel.lambda)});
    csv.row({"contraction", fmt17(sel.contraction)});
    csv.row({"grad_sup", fmt17(sel.grad_sup)});
    csv.row({"certificate", fmt17(sel.certificate)});
    csv.numeric_row("lambda_tried", sel.tried);
    ctx->metrics["lambda"] = sel.lambda;
    ctx->metrics["contraction"] = sel.contraction;
    ctx->metrics["grad_sup"] = sel.grad_sup;
    ctx->metrics["certificate"] = sel.certificate;
    ctx->field(sel.picard.U, "U.ndjson");
    ctx->field(sel.picard.gradU, "gradU.ndjson");

    if (!levels.empty()) {
        auto study = limit_solution(bd, grid, sel.lambda, levels);
        CsvWriter mc(ctx->results("mollification.csv").string());
        mc.row({"level", "gap"});
        for (size_t i = 0; i < study.gaps.size(); ++i)
            mc.row({std::to_string(i + 1), fmt17(study.gaps[i])});
        if (!study.gaps.empty()) {
            ctx->metrics["gap_last"] = study.gaps.back();
            ctx->metrics["gap_first"] = study.gaps.front();
        }
        ctx->field(study.U_limit, "U_limit.ndjson");
    }
}

void exp_zvonkin_sim(const json& cfg, RunContext* ctx, std::optional<std::uint64_t> seed) {
    GridSpec grid = parse_grid(require(cfg, "grid"));
    const double lambda = num(cfg, "lambda");
    ModulusSpec rho = cfg.contains("modulus") ? parse_modulus(cfg.at("modulus"))
                                              : ModulusSpec::constant(1.0);
    DriftSpec bd = parse_drift(require(cfg, "drift"), &rho);
    SimConfig sim = parse_sim(cfg, seed);
    std::vector<double> dts;
    double dt_ref = 0.0;
    if (cfg.contains("convergence")) {
        const json& c = cfg.at("convergence");
        dts = require(c, "dts").get<std::vector<double>>();
        dt_ref = num(c, "dt_ref");
    }
    if (!ctx) return;

    auto pic = picard_solve_U(bd, grid, lambda);
    auto map = build_transform(pic, lambda);
    auto ens = euler_transformed(map, sim);
    CsvWriter csv(ctx->results("zvonkin_sim.csv").string());
    csv.row({"quantity", "value"});
    csv.row({"mean", fmt17(ens.mean)});
    csv.row({"variance", fmt17(ens.variance)});
    csv.row({"grad_bound", fmt17(map.grad_bound)});
    ctx->metrics["mean"] = ens.mean;
    ctx->metrics["variance"] = ens.variance;
    ctx->metrics["grad_bound"] = map.grad_bound;
    CsvWriter term(ctx->results("terminal.csv").string());
    term.row({"path", "x_T"});
    for (size_t i = 0; i < ens.terminal.size(); ++i)
        term.row({std::to_string(i), fmt17(ens.terminal[i])});
    {
        std::ofstream pf(ctx->fields("paths.ndjson"));
        for (size_t i = 0; i < ens.terminal.size(); ++i)
            pf << "{\"path\":" << i << ",\"x_T\":" << fmt17(ens.terminal[i]) << "}\n";
    }
    ctx->field(pic.U, "U.ndjson");

    if (!dts.empty()) {
        auto rep = strong_convergence(map, sim, dts, dt_ref);
        CsvWriter cc(ctx->results("convergence.csv").string());
        cc.row({"dt", "rms"});
        for (size_t i = 0; i < rep.dts.size(); ++i)
            cc.row({fmt17(rep.dts[i]), fmt17(rep.rms[i])});
        cc.row({"order", fmt17(rep.order)});
        ctx->metrics["order"] = rep.order;
    }
}

void exp_supercritical(const json& cfg, RunContext* ctx, std::optional<std::uint64_t> seed) {
    const double p = num(cfg, "p"), alpha = num(cfg, "alpha");
    std::vector<double> eps = require(cfg, "eps_levels").get<std::vector<double>>();
    if (eps.size() < 2) bad("supercritical: need at least two eps levels");
    SimConfig sim = parse_sim(cfg, seed);
    const double contrast_alpha = num_or(cfg, "contrast_alpha", 0.5);
    if (!ctx) return;

    auto super = supercritical_demo(p, alpha, sim, eps);
    auto contrast = supercritical_demo(p, contrast_alpha, sim, eps);
    const double peano = peano_extremal_error(alpha, sim.T);
    CsvWriter csv(ctx->results("supercritical.csv").string());
    csv.row({"eps_hi", "eps_lo", "spread", "contrast_spread"});
    for (size_t i = 0; i + 1 < eps.size(); ++i)
        csv.row({fmt17(eps[i]), fmt17(eps[i + 1]), fmt17(super.spreads[i]),
                 fmt17(contrast.spreads[i])});
    csv.row({"peano_error", fmt17(peano)});
    ctx->metrics["spread_last"] = super.spreads.back();
    ctx->metrics["contrast_spread_last"] = contrast.spreads.back();
    ctx->metrics["spread_ratio"] =
        super.spreads.back() / std::max(contrast.spreads.back(), 1e-300);
    ctx->metrics["peano_error"] = peano;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        bad(std::string("JSON parse error: ") + e.what());
    }
    if (!j.is_object()) bad("config root must be an object");
    return j;
}

void dispatch(const json& cfg, RunContext* ctx, std::optional<std::uint64_t> seed) {
    const std::string exp = str(cfg, "experiment");
    if (exp == "modulus-report") exp_modulus_report(cfg, ctx);
    else if (exp == "regularity") exp_regularity(cfg, ctx, seed);
    else if (exp == "embedding") exp_embedding(cfg, ctx, seed);
    else if (exp == "drifted") exp_drifted(cfg, ctx);
    else if (exp == "kolmogorov") exp_kolmogorov(cfg, ctx);
    else if (exp == "zvonkin-sim") exp_zvonkin_sim(cfg, ctx, seed);
    else if (exp == "supercritical-demo") exp_supercritical(cfg, ctx, seed);
    else bad("unknown experiment '" + exp + "'");
}

}  // namespace

void validate_experiment(const std::string& config_path) {
    const json cfg = load_json(config_path);
    dispatch(cfg, nullptr, std::nullopt);
    if (cfg.contains("expect") && !cfg.at("expect").is_object())
        bad("'expect' must be an object");
}

bool run_experiment(const std::string& config_path, const RunOptions& opt) {
    const json cfg = load_json(config_path);
    if (opt.threads < 1) bad("threads must be >= 1");
    dispatch(cfg, nullptr, std::nullopt);  // validate before creating outputs

    RunContext ctx;
    ctx.out = opt.out_dir;
    fs::create_directories(ctx.out / "results");
    fs::create_directories(ctx.out / "fields");
    dispatch(cfg, &ctx, opt.seed);

    const bool pass = check_expectations(cfg, ctx);
    ctx.manifest["config"] = config_path;
    ctx.manifest["config_echo"] = cfg;
    ctx.manifest["experiment"] = cfg.at("experiment");
    ctx.manifest["threads"] = opt.threads;
    if (opt.seed) ctx.manifest["seed_override"] = *opt.seed;
    json metrics = json::object();
    for (const auto& [k, v] : ctx.metrics) metrics[k] = v;
    ctx.manifest["metrics"] = metrics;
    ctx.manifest["outputs"] = ctx.outputs;
    ctx.manifest["status"] = pass ? "pass" : "expectation-failure";
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    ctx.manifest["timestamp_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();

    std::ofstream mf(ctx.out / "manifest.json");
    if (!mf) throw std::runtime_error("cannot write manifest.json");
    mf << ctx.manifest.dump(2) << '\n';
    return pass;
}

}  // namespace parlab
