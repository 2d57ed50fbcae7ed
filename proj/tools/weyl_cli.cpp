// weyl: command-line front end for the Weyl-sum laboratory.
//
// Every subcommand prints exactly one JSON document to stdout (logs go to
// stderr) and records a RunRecord under the cache directory, keyed by the
// SHA-256 of the canonicalized config.  Rerunning an identical config
// replays the cached outputs unless --no-cache is given; either way the
// outputs are byte-identical.
//
// Exit codes: 0 ok, 2 invalid input / bad flags, 3 resource or quadrature
// budget exceeded, 4 file I/O failure.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "weyl/counterexample.hpp"
#include "weyl/csv.hpp"
#include "weyl/maximal.hpp"
#include "weyl/nt.hpp"
#include "weyl/parallel.hpp"
#include "weyl/sums.hpp"

using json = nlohmann::json;
using namespace weyl;
namespace fs = std::filesystem;

namespace {

std::string sha256_hex(const std::string &data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

json cplx_json(cplx v) {
    return json{{"re", v.real()}, {"im", v.imag()}, {"magnitude", std::abs(v)}};
}

struct Common {
    int threads = 0;
    bool no_cache = false;
    std::string cache_dir;

    std::string resolve_cache_dir() const {
        if (!cache_dir.empty()) return cache_dir;
        if (const char *env = std::getenv("WEYL_CACHE_DIR")) return env;
        return ".weyl-cache";
    }
};

std::vector<double> parse_doubles(const std::string &s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::vector<i64> parse_ints(const std::string &s) {
    std::vector<i64> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
    return out;
}

// runs compute() behind the RunRecord cache and prints the stdout document
int run_cached(const Common &common, const std::string &command, const json &config,
               const std::function<json()> &compute) {
    const std::string canonical = command + "\n" + config.dump();
    const std::string hash = sha256_hex(canonical);
    const fs::path dir = common.resolve_cache_dir();
    const fs::path record_path = dir / (hash + ".json");

    json outputs;
    bool from_cache = false;
    if (!common.no_cache && fs::exists(record_path)) {
        std::ifstream in(record_path);
        json record;
        in >> record;
        if (record.contains("outputs") && record.value("artifact_version", "") == ARTIFACT_VERSION) {
            outputs = record["outputs"];
            from_cache = true;
        }
    }

    if (!from_cache) {
        auto t0 = std::chrono::steady_clock::now();
        outputs = compute();
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json record{{"schema", JSON_SCHEMA},
                    {"artifact_version", ARTIFACT_VERSION},
                    {"config_hash", hash},
                    {"command", command},
                    {"config", config},
                    {"outputs", outputs},
                    {"wall_time_s", wall}};
        std::time_t now = std::time(nullptr);
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        record["timestamp"] = stamp;
        std::error_code ec;
        fs::create_directories(dir, ec);
        std::ofstream out(record_path);
        if (out)
            out << record.dump(1) << "\n";
        else
            std::cerr << "weyl: warning: could not write RunRecord to " << record_path << "\n";
    }

    json doc{{"schema", JSON_SCHEMA},
             {"command", command},
             {"config_hash", hash},
             {"config", config},
             {"outputs", outputs}};
    std::cout << doc.dump(1) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"numerical laboratory for L^p maximal estimates of higher-order Weyl sums"};
    app.require_subcommand(1);

    Common common;
    app.add_option("--threads", common.threads, "worker threads (0 = all cores)");
    app.add_flag("--no-cache", common.no_cache, "recompute even if a RunRecord exists");
    app.add_option("--cache-dir", common.cache_dir, "override WEYL_CACHE_DIR");

    auto *eval = app.add_subcommand("eval", "evaluate omega_{N,k}(x,t) or a grid of values");
    struct {
        i64 N = 1;
        int k = 3;
        double x = 0.0, t = 0.0;
        i64 t_num = 0, t_den = 0;
        u64 grid_x = 0, grid_t = 0;
        std::string csv;
    } ev;
    eval->add_option("--N", ev.N, "number of terms")->required();
    eval->add_option("--k", ev.k, "polynomial degree")->required();
    eval->add_option("--x", ev.x, "x coordinate");
    eval->add_option("--t", ev.t, "t coordinate");
    eval->add_option("--t-num", ev.t_num, "exact t numerator (with --t-den)");
    eval->add_option("--t-den", ev.t_den, "exact t denominator");
    eval->add_option("--grid-x", ev.grid_x, "evaluate all x = m/M at fixed t (M power of two)");
    eval->add_option("--grid-t", ev.grid_t, "evaluate all t = m/M at fixed x (M power of two)");
    eval->add_option("--csv", ev.csv, "write the grid to this CSV path");

    auto *gauss = app.add_subcommand("gauss", "complete Gauss sum S_k(a,b,q)");
    struct {
        int k = 2;
        i64 a = 0, b = 0;
        u64 q = 1;
    } ga;
    gauss->add_option("--k", ga.k)->required();
    gauss->add_option("--a", ga.a, "coefficient of n^k")->required();
    gauss->add_option("--b", ga.b, "coefficient of n")->required();
    gauss->add_option("--q", ga.q)->required();

    auto *integral = app.add_subcommand("integral", "oscillatory integral I(xi) over [0,N]");
    struct {
        double N = 1.0;
        std::string xi;
        double tol = 0.0;
    } ig;
    integral->add_option("--N", ig.N)->required();
    integral->add_option("--xi", ig.xi, "comma-separated xi_1..xi_k")->required();
    integral->add_option("--tol", ig.tol, "absolute tolerance (default 1e-8 N)");

    auto *arc = app.add_subcommand("arc", "major-arc decomposition or rational-center search");
    struct {
        i64 N = 1;
        int k = 3;
        double x = 0.0, t = 0.0;
        u64 q = 0;
        i64 r1 = 0, rk = 0;
        double A = 0.0, eps = 0.05;
    } ar;
    arc->add_option("--N", ar.N)->required();
    arc->add_option("--k", ar.k)->required();
    arc->add_option("--x", ar.x)->required();
    arc->add_option("--t", ar.t)->required();
    arc->add_option("--q", ar.q, "decompose at this center (with --r1/--rk)");
    arc->add_option("--r1", ar.r1, "x-side numerator");
    arc->add_option("--rk", ar.rk, "t-side numerator");
    arc->add_option("--A", ar.A, "locate the arc for level A (when --q absent)");
    arc->add_option("--eps", ar.eps, "reporting exponent for the radii");

    auto *dec = app.add_subcommand("decompose", "power-class modulus decomposition q = q_2...q_k");
    struct {
        u64 q = 1;
        int k = 3;
    } dc;
    dec->add_option("--q", dc.q)->required();
    dec->add_option("--k", dc.k)->required();

    auto *pf = app.add_subcommand("powerfull", "enumerate i-th power full integers up to x");
    struct {
        int i = 2;
        u64 x = 1;
    } pw;
    pf->add_option("--i", pw.i)->required();
    pf->add_option("--x", pw.x)->required();

    auto *dir = app.add_subcommand("dirichlet", "best rational approximation with q <= M");
    struct {
        double alpha = 0.0, M = 1.0;
    } di;
    dir->add_option("--alpha", di.alpha)->required();
    dir->add_option("--M", di.M)->required();

    auto *sup = app.add_subcommand("sup", "sup over t of |omega_{N,k}(x,t)|");
    struct {
        i64 N = 1;
        int k = 3;
        double x = 0.0;
        int oversample = 8;
        u64 budget = u64(1) << 27;
    } su;
    sup->add_option("--N", su.N)->required();
    sup->add_option("--k", su.k)->required();
    sup->add_option("--x", su.x)->required();
    sup->add_option("--oversample", su.oversample);
    sup->add_option("--budget", su.budget, "max grid points per sup call");

    auto *lpn = app.add_subcommand("lpnorm", "L^p norm of the maximal function");
    struct {
        i64 N = 1;
        int k = 3;
        double p = 2.0;
        i64 x_grid = 0;
        int oversample = 8;
        u64 budget = u64(1) << 27;
        bool uniform = false;
        bool check_doubling = false;
    } lp;
    lpn->add_option("--N", lp.N)->required();
    lpn->add_option("--k", lp.k)->required();
    lpn->add_option("--p", lp.p)->required();
    lpn->add_option("--x-grid", lp.x_grid, "uniform grid size (default 8N)");
    lpn->add_option("--oversample", lp.oversample);
    lpn->add_option("--budget", lp.budget);
    lpn->add_flag("--uniform", lp.uniform, "plain uniform grid, no Farey injection");
    lpn->add_flag("--check-doubling", lp.check_doubling, "also compute at 2x resolution");

    auto *lvl = app.add_subcommand("levelset", "super-level-set measure of the maximal function");
    struct {
        i64 N = 1;
        int k = 3;
        double A = 1.0;
        i64 x_grid = 0;
        int oversample = 8;
        u64 budget = u64(1) << 27;
    } lv;
    lvl->add_option("--N", lv.N)->required();
    lvl->add_option("--k", lv.k)->required();
    lvl->add_option("--A", lv.A)->required();
    lvl->add_option("--x-grid", lv.x_grid, "grid size (default 8N)");
    lvl->add_option("--oversample", lv.oversample);
    lvl->add_option("--budget", lv.budget);

    auto *ef = app.add_subcommand("exponent-fit", "fit the norm growth exponent against theory");
    struct {
        int k = 3;
        double p = 2.0;
        std::string Ns;
        i64 mult = 8;
        int oversample = 8;
        u64 budget = u64(1) << 27;
        bool uniform = false;
    } ex;
    ef->add_option("--k", ex.k)->required();
    ef->add_option("--p", ex.p)->required();
    ef->add_option("--N", ex.Ns, "comma-separated N values (at least 3)")->required();
    ef->add_option("--x-grid-mult", ex.mult, "uniform x points per unit N");
    ef->add_option("--oversample", ex.oversample);
    ef->add_option("--budget", ex.budget);
    ef->add_flag("--uniform", ex.uniform, "disable Farey injection");

    auto *cs = app.add_subcommand("conjecture-scan", "ratio scan against the conjectured bound");
    struct {
        int k = 3;
        i64 N = 16;
        i64 samples = 1000;
        u64 seed = 12345;
    } cj;
    cs->add_option("--k", cj.k)->required();
    cs->add_option("--N", cj.N)->required();
    cs->add_option("--samples", cj.samples)->required();
    cs->add_option("--seed", cj.seed);

    auto *cen = app.add_subcommand("census", "good-set census of Gauss sums mod a prime");
    struct {
        int k = 3;
        u64 q = 5;
    } ce;
    cen->add_option("--k", ce.k)->required();
    cen->add_option("--q", ce.q)->required();

    auto *cert = app.add_subcommand("certificate", "build the lower-bound certificate");
    struct {
        i64 N = 400;
        int k = 3;
        double c1 = 0.5;
        std::string out;
    } cf;
    cert->add_option("--N", cf.N)->required();
    cert->add_option("--k", cf.k)->required();
    cert->add_option("--c1", cf.c1);
    cert->add_option("--out", cf.out, "also write the certificate JSON to this path");

    auto *ver = app.add_subcommand("verify", "rebuild and independently verify the certificate");
    struct {
        i64 N = 400;
        int k = 3;
        double c1 = 0.5;
        u64 seed = 12345;
    } vf;
    ver->add_option("--N", vf.N)->required();
    ver->add_option("--k", vf.k)->required();
    ver->add_option("--c1", vf.c1);
    ver->add_option("--seed", vf.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e, std::cout, std::cerr);
        return 2;
    }

    try {
        if (*eval) {
            json cfg{{"N", ev.N}, {"k", ev.k}, {"x", ev.x}, {"t", ev.t}};
            if (ev.t_den > 0) {
                cfg["t_num"] = ev.t_num;
                cfg["t_den"] = ev.t_den;
            }
            if (ev.grid_x) cfg["grid_x"] = ev.grid_x;
            if (ev.grid_t) cfg["grid_t"] = ev.grid_t;
            sums::WeylParams params{ev.N, ev.k};
            if (ev.grid_x || ev.grid_t) {
                const u64 M = ev.grid_x ? ev.grid_x : ev.grid_t;
                auto values = ev.grid_x ? sums::eval_weyl_grid_x(params, ev.t, M)
                                        : sums::eval_weyl_grid_t(params, ev.x, M);
                csv::Grid grid;
                grid.coord_name = ev.grid_x ? "x" : "t";
                grid.coord.resize(M);
                for (u64 m = 0; m < M; ++m) grid.coord[m] = double(m) / double(M);
                grid.value = std::move(values);
                if (!ev.csv.empty()) csv::emit_grid(grid, ev.csv);
                return run_cached(common, "eval", cfg, [&] {
                    double maxmag = 0.0, l2 = 0.0;
                    for (auto v : grid.value) {
                        maxmag = std::max(maxmag, std::abs(v));
                        l2 += std::norm(v);
                    }
                    json out{{"mode", ev.grid_x ? "grid-x" : "grid-t"},
                             {"M", M},
                             {"max_magnitude", maxmag},
                             {"l2", std::sqrt(l2 / double(M))}};
                    if (M <= 2048) {
                        json vals = json::array();
                        for (auto v : grid.value) vals.push_back(json::array({v.real(), v.imag()}));
                        out["values"] = vals;
                    }
                    return out;
                });
            }
            return run_cached(common, "eval", cfg, [&] {
                sums::PhasePoint pt =
                    ev.t_den > 0 ? sums::PhasePoint::with_exact_t(ev.x, {ev.t_num, ev.t_den})
                                 : sums::PhasePoint::from(ev.x, ev.t);
                return cplx_json(sums::eval_weyl_sum(params, pt));
            });
        }

        if (*gauss) {
            json cfg{{"k", ga.k}, {"a", ga.a}, {"b", ga.b}, {"q", ga.q}};
            return run_cached(common, "gauss", cfg,
                              [&] { return cplx_json(sums::eval_gauss_sum(ga.k, ga.a, ga.b, ga.q)); });
        }

        if (*integral) {
            auto xi = parse_doubles(ig.xi);
            json cfg{{"N", ig.N}, {"xi", xi}, {"tol", ig.tol}};
            return run_cached(common, "integral", cfg, [&] {
                sums::QuadStats stats;
                cplx v = sums::eval_oscillatory_integral({xi}, ig.N, ig.tol, &stats);
                json out = cplx_json(v);
                out["err_estimate"] = stats.err_estimate;
                out["evals"] = stats.evals;
                out["panels"] = stats.panels;
                return out;
            });
        }

        if (*arc) {
            sums::WeylParams params{ar.N, ar.k};
            sums::PhasePoint pt = sums::PhasePoint::from(ar.x, ar.t);
            if (ar.q > 0) {
                json cfg{{"N", ar.N}, {"k", ar.k}, {"x", ar.x}, {"t", ar.t},
                         {"q", ar.q}, {"r1", ar.r1}, {"rk", ar.rk}};
                return run_cached(common, "arc", cfg, [&] {
                    auto d = sums::major_arc_decompose(params, pt, {ar.q, ar.r1, ar.rk});
                    return json{{"main_term", cplx_json(d.main_term)},
                                {"delta", cplx_json(d.delta)},
                                {"exact", cplx_json(d.exact)},
                                {"delta_bound", d.delta_bound},
                                {"delta_ratio", std::abs(d.delta) / d.delta_bound}};
                });
            }
            json cfg{{"N", ar.N}, {"k", ar.k}, {"x", ar.x}, {"t", ar.t},
                     {"A", ar.A}, {"eps", ar.eps}};
            return run_cached(common, "arc", cfg, [&] {
                maximal::LocateDiagnostics diag;
                auto found = maximal::locate_major_arc(params, pt, ar.A, ar.eps, &diag);
                json out{{"found", found.has_value()},
                         {"q_candidate", diag.q_found},
                         {"q_bound", diag.q_bound}};
                if (found) {
                    out["q"] = found->q;
                    out["r1"] = found->r1;
                    out["rk"] = found->rk;
                    out["x_radius"] = found->x_radius;
                    out["t_radius"] = found->t_radius;
                    out["x_radius_refined"] = found->x_radius_refined;
                    out["t_radius_refined"] = found->t_radius_refined;
                    out["contains_x"] = found->contains_x;
                    out["contains_t"] = found->contains_t;
                    out["contains_x_refined"] = found->contains_x_refined;
                    out["contains_t_refined"] = found->contains_t_refined;
                    out["decomposition"] = found->decomposition.parts;
                }
                return out;
            });
        }

        if (*dec) {
            json cfg{{"q", dc.q}, {"k", dc.k}};
            return run_cached(common, "decompose", cfg, [&] {
                auto d = nt::decompose_modulus(dc.q, dc.k);
                return json{{"k", d.k}, {"parts", d.parts}, {"product", d.product()}};
            });
        }

        if (*pf) {
            json cfg{{"i", pw.i}, {"x", pw.x}};
            return run_cached(common, "powerfull", cfg, [&] {
                auto v = nt::enumerate_power_full(pw.i, pw.x);
                json out{{"count", v.size()},
                         {"density_ratio", double(v.size()) / std::pow(double(pw.x), 1.0 / pw.i)}};
                if (v.size() <= 10000) out["values"] = v;
                return out;
            });
        }

        if (*dir) {
            json cfg{{"alpha", di.alpha}, {"M", di.M}};
            return run_cached(common, "dirichlet", cfg, [&] {
                auto r = nt::dirichlet_approx(di.alpha, di.M);
                double err = std::abs(di.alpha - double(r.num) / double(r.den));
                return json{{"num", r.num},
                            {"den", r.den},
                            {"error", err},
                            {"bound_ok", err * double(r.den) * di.M <= 1.0 + 1e-9}};
            });
        }

        if (*sup) {
            json cfg{{"N", su.N}, {"k", su.k}, {"x", su.x},
                     {"oversample", su.oversample}, {"budget", su.budget}};
            return run_cached(common, "sup", cfg, [&] {
                maximal::SupOptions opt;
                opt.oversample = su.oversample;
                opt.budget = su.budget;
                opt.threads = common.threads;
                auto mv = maximal::sup_over_t({su.N, su.k}, su.x, opt);
                return json{{"value", mv.value},
                            {"t_star", mv.t_star},
                            {"grid_size", mv.grid_size},
                            {"refined", mv.refined}};
            });
        }

        if (*lpn) {
            const i64 g = lp.x_grid > 0 ? lp.x_grid : 8 * lp.N;
            json cfg{{"N", lp.N}, {"k", lp.k}, {"p", lp.p}, {"x_grid", g},
                     {"oversample", lp.oversample}, {"budget", lp.budget},
                     {"farey", !lp.uniform}, {"check_doubling", lp.check_doubling}};
            return run_cached(common, "lpnorm", cfg, [&] {
                sums::WeylParams params{lp.N, lp.k};
                maximal::SupOptions opt;
                opt.oversample = lp.oversample;
                opt.budget = lp.budget;
                opt.threads = common.threads;
                auto norm_at = [&](i64 grid_size) {
                    if (lp.uniform) return maximal::lp_norm_max(params, lp.p, grid_size, opt);
                    int qmax = int(std::sqrt(double(lp.N)));
                    auto xg = maximal::make_x_grid(grid_size, qmax);
                    auto prof = maximal::sup_profile(params, xg.x, opt);
                    return maximal::lp_norm_from_profile(prof, xg.weight, lp.p);
                };
                double base = norm_at(g);
                json out{{"norm", base}, {"x_grid", g}};
                if (lp.check_doubling) {
                    double dbl = norm_at(2 * g);
                    out["norm_doubled"] = dbl;
                    out["doubling_delta"] = std::abs(dbl - base) / std::max(dbl, 1e-300);
                }
                return out;
            });
        }

        if (*lvl) {
            const i64 g = lv.x_grid > 0 ? lv.x_grid : 8 * lv.N;
            json cfg{{"N", lv.N}, {"k", lv.k}, {"A", lv.A}, {"x_grid", g},
                     {"oversample", lv.oversample}, {"budget", lv.budget}};
            return run_cached(common, "levelset", cfg, [&] {
                maximal::SupOptions opt;
                opt.oversample = lv.oversample;
                opt.budget = lv.budget;
                opt.threads = common.threads;
                auto rep = maximal::superlevel_measure({lv.N, lv.k}, lv.A, g, opt);
                return json{{"A", rep.A},
                            {"measure", rep.measure},
                            {"paper_bound", rep.paper_bound},
                            {"ratio", rep.ratio}};
            });
        }

        if (*ef) {
            auto Ns = parse_ints(ex.Ns);
            json cfg{{"k", ex.k}, {"p", ex.p}, {"N_values", Ns}, {"x_grid_mult", ex.mult},
                     {"oversample", ex.oversample}, {"budget", ex.budget}, {"farey", !ex.uniform}};
            return run_cached(common, "exponent-fit", cfg, [&] {
                maximal::FitOptions opt;
                opt.x_grid_mult = ex.mult;
                opt.farey = !ex.uniform;
                opt.sup.oversample = ex.oversample;
                opt.sup.budget = ex.budget;
                opt.sup.threads = common.threads;
                auto fit = maximal::exponent_fit(ex.k, ex.p, Ns, opt);
                return json{{"k", fit.k},
                            {"p", fit.p},
                            {"N_values", fit.N_values},
                            {"norm_values", fit.norm_values},
                            {"doubling_delta", fit.doubling_delta},
                            {"fitted_slope", fit.fitted_slope},
                            {"predicted_upper", fit.predicted_upper},
                            {"predicted_lower", fit.predicted_lower},
                            {"predicted_conditional", fit.predicted_conditional}};
            });
        }

        if (*cs) {
            json cfg{{"k", cj.k}, {"N", cj.N}, {"samples", cj.samples}, {"seed", cj.seed}};
            return run_cached(common, "conjecture-scan", cfg, [&] {
                auto r = maximal::conjecture_scan(cj.k, cj.N, cj.samples, cj.seed, common.threads);
                return json{{"max_ratio", r.max_ratio},
                            {"max_ratio_random", r.max_ratio_random},
                            {"max_ratio_rational", r.max_ratio_rational},
                            {"samples_random", r.samples_random},
                            {"samples_rational", r.samples_rational},
                            {"seed", r.seed}};
            });
        }

        if (*cen) {
            json cfg{{"k", ce.k}, {"q", ce.q}};
            return run_cached(common, "census", cfg, [&] {
                auto c = counterexample::good_set_census(ce.k, ce.q, common.threads);
                return json{{"k", c.k},
                            {"q", c.q},
                            {"alpha1", c.alpha1},
                            {"counts_per_b", c.counts_per_b},
                            {"total", c.total},
                            {"best_b", c.best_b}};
            });
        }

        auto cert_json = [](const counterexample::LowerBoundCertificate &c) {
            json intervals = json::array();
            for (const auto &iv : c.intervals)
                intervals.push_back(json{{"q", iv.q}, {"a", iv.a}, {"b", iv.b},
                                         {"center", iv.center}, {"radius", iv.radius},
                                         {"height", iv.height}});
            json chosen = json::array();
            for (auto [q, b] : c.chosen_b) chosen.push_back(json::array({q, b}));
            return json{{"N", c.N},           {"k", c.k},
                        {"c1", c.c1},         {"primes", c.primes},
                        {"chosen_b", chosen}, {"intervals", intervals},
                        {"l1_lower", c.l1_lower}, {"target", c.target},
                        {"ratio", c.l1_lower / c.target}};
        };

        if (*cert) {
            json cfg{{"N", cf.N}, {"k", cf.k}, {"c1", cf.c1}};
            return run_cached(common, "certificate", cfg, [&] {
                auto c = counterexample::build_certificate(cf.N, cf.k, cf.c1, common.threads);
                json out = cert_json(c);
                if (!cf.out.empty()) {
                    std::ofstream f(cf.out);
                    if (!f) throw csv::IOError("cannot write certificate to " + cf.out);
                    f << out.dump(1) << "\n";
                }
                return out;
            });
        }

        if (*ver) {
            json cfg{{"N", vf.N}, {"k", vf.k}, {"c1", vf.c1}, {"seed", vf.seed}};
            return run_cached(common, "verify", cfg, [&] {
                auto c = counterexample::build_certificate(vf.N, vf.k, vf.c1, common.threads);
                auto v = counterexample::verify_certificate(c, vf.seed, common.threads);
                return json{{"theta", v.theta},
                            {"l1_builder", c.l1_lower},
                            {"l1_recomputed", v.l1_recomputed},
                            {"rel_diff", v.rel_diff},
                            {"ratio", v.ratio},
                            {"points_sampled", v.points_sampled}};
            });
        }
    } catch (const csv::IOError &e) {
        std::cerr << "weyl: io error: " << e.what() << "\n";
        return 4;
    } catch (const ResourceError &e) {
        std::cerr << "weyl: resource budget: " << e.what() << "\n";
        return 3;
    } catch (const QuadratureError &e) {
        std::cerr << "weyl: quadrature budget: " << e.what() << "\n";
        return 3;
    } catch (const InvalidInput &e) {
        std::cerr << "weyl: invalid input: " << e.what() << "\n";
        return 2;
    } catch (const PrecisionError &e) {
        std::cerr << "weyl: precision guard: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "weyl: error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
