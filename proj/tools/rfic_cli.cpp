#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rfic/disorder.hpp"
#include "rfic/experiments.hpp"
#include "rfic/extrema.hpp"
#include "rfic/oracle.hpp"
#include "rfic/reflected.hpp"
#include "rfic/rg.hpp"
#include "rfic/transfer.hpp"

namespace {

using namespace rfic;

// Raised when a checked identity fails; maps to exit code 1.
struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string law = "gauss:1";
    std::vector<double> gamma;
    std::vector<double> J;
    std::int64_t n = 0;
    std::size_t replicas = 0;
    std::uint64_t seed = 1;
    bool seed_given = false;
    std::string out;
    std::string format = "csv";
    unsigned threads = 1;
    double tol = 1e-8;
    std::size_t trials = 50;
    std::size_t samples = 200;
    std::vector<std::int64_t> n_grid;
    std::string fisher_out;
    std::string chain_out;
    std::string estimator = "gibbs";
    double c = 10.0;
};

std::uint64_t resolve_seed(const Options& o) {
    if (o.seed_given) return o.seed;
    if (const char* env = std::getenv("RFIC_SEED")) {
        try {
            std::size_t pos = 0;
            const auto v = std::stoull(env, &pos);
            if (pos == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw std::invalid_argument(std::string("RFIC_SEED is not an unsigned integer: ") + env);
    }
    return o.seed;
}

class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

  private:
    std::ofstream file_;
};

void emit(const Options& o, const Table& t) {
    Output out(o.out);
    if (o.format == "json")
        out.stream() << t.to_json() << '\n';
    else
        t.write_csv(out.stream());
}

ExperimentConfig config_from(const Options& o, std::vector<double> sweep) {
    ExperimentConfig cfg;
    cfg.law = DisorderLaw::parse(o.law);
    cfg.sweep = std::move(sweep);
    if (o.replicas) cfg.replicas = o.replicas;
    if (o.n) cfg.n = o.n;
    cfg.seed = resolve_seed(o);
    cfg.threads = o.threads;
    cfg.tol_rel = o.tol;
    cfg.samples = o.samples;
    cfg.n_grid = o.n_grid;
    cfg.validate();
    return cfg;
}

double single_gamma(const Options& o) {
    if (o.gamma.size() != 1) throw std::invalid_argument("this subcommand takes exactly one --gamma");
    return o.gamma.front();
}

int run_oracle_check(const Options& o) {
    const std::size_t nmax = o.n ? static_cast<std::size_t>(o.n) : 12;
    if (nmax > kMaxEnumerate) throw std::invalid_argument("--n exceeds the enumeration limit of 20");
    std::mt19937_64 rng(resolve_seed(o));
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> jdist(0.05, 3.0);
    double max_rel = 0.0, max_marg = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
        const std::size_t n = 1 + rng() % nmax;
        std::vector<double> h(n);
        for (double& x : h) x = gauss(rng);
        const double J = jdist(rng);
        const int a = rng() % 2 ? 1 : -1;
        const int b = rng() % 2 ? 1 : -1;
        const auto en = enumerate<double>(h, J, a, b);
        const double lz = log_partition(h, J, a, b);
        max_rel = std::max(max_rel, std::abs(lz - en.logZ) / std::max(1.0, std::abs(en.logZ)));
        const auto m = marginals(FieldWindow(1, h), ModelParams::from_J(J), a, b);
        for (std::size_t i = 0; i < n; ++i) max_marg = std::max(max_marg, std::abs(m[i] - en.marginals[i]));
    }
    std::cout << "trials=" << o.trials << '\n';
    std::cout << "max_rel_err=" << max_rel << '\n';
    std::cout << "max_marginal_err=" << max_marg << '\n';
    if (max_rel > 1e-10 || max_marg > 1e-10) throw CheckFailed("transfer recursion disagrees with enumeration");
    return 0;
}

int run_extrema(const Options& o) {
    const double gamma = single_gamma(o);
    const auto law = DisorderLaw::parse(o.law);
    const std::int64_t n = o.n ? o.n : 10000;
    const auto src = law_source(law, resolve_seed(o));
    TwoSidedOptions opt;
    opt.theta = law.theta();
    const auto ext = gamma_extrema_two_sided(src, gamma, 1, n, opt);
    const auto s = fisher_z(ext, gamma, 1, n);
    Output out(o.out);
    if (o.format == "json") {
        nlohmann::json j;
        j["gamma"] = gamma;
        j["n"] = n;
        auto& recs = j["records"] = nlohmann::json::array();
        for (std::size_t i = 0; i < ext.records.size(); ++i) {
            const auto& r = ext.records[i];
            recs.push_back({{"index", ext.labels[i]}, {"kind", kind_name(r.kind)}, {"u", r.u},
                            {"u_plus", r.u_plus}, {"level", r.level}, {"t", r.t}});
        }
        j["fisher"] = s;
        out.stream() << j.dump() << '\n';
    } else {
        write_extrema_csv(out.stream(), ext.records, ext.labels);
    }
    if (!o.fisher_out.empty()) {
        Output f(o.fisher_out);
        write_fisher_csv(f.stream(), 1, s);
    }
    return 0;
}

int run_rg(const Options& o) {
    const double gamma = single_gamma(o);
    const auto law = DisorderLaw::parse(o.law);
    const std::int64_t n = o.n ? o.n : 10000;
    const auto src = law_source(law, resolve_seed(o));
    const auto rep = rg_vs_extrema(src, n, gamma, law.atomic());
    {
        Output out(o.out);
        out.stream() << rep.to_json() << '\n';
    }
    if (!o.chain_out.empty()) {
        Output f(o.chain_out);
        write_chain_csv(f.stream(), rg_run(src(1, n), gamma).chain);
    }
    if (!rep.containment || !rep.bracket)
        std::cerr << "note: boundary extrema not captured: " << rep.missed.size() << '\n';
    if (!rep.atomic_law && !rep.bracket_certified) throw CheckFailed("N_Gamma outside the certified bracket");
    return 0;
}

int run_groundstate_check(const Options& o) {
    const std::size_t nmax = o.n ? static_cast<std::size_t>(o.n) : 14;
    if (nmax > kMaxStructure) throw std::invalid_argument("--n exceeds the structure-check limit of 16");
    const double gamma = o.gamma.empty() ? 2.0 : single_gamma(o);
    std::mt19937_64 rng(resolve_seed(o));
    std::normal_distribution<double> gauss;
    std::size_t failures = 0, checks = 0;
    for (std::size_t t = 0; t < o.trials; ++t) {
        std::vector<double> h(1 + rng() % nmax);
        for (double& x : h) x = gauss(rng);
        for (int a : {-1, 1})
            for (int b : {-1, 1}) {
                ++checks;
                const auto rep = check_maximizer_structure<double>(h, gamma, a, b);
                bool ok = rep.match;
                for (const auto& s : maximizer_signs<double>(h, gamma, a, b)) ok = ok && s.agree();
                if (!ok) {
                    ++failures;
                    std::cerr << "trial " << t << " (a=" << a << ", b=" << b << "): " << rep.message << '\n';
                }
            }
    }
    std::cout << "checks=" << checks << '\n' << "failures=" << failures << '\n';
    if (failures) throw CheckFailed("ground-state structure mismatch");
    return 0;
}

int run_invhist(const Options& o) {
    auto cfg = config_from(o, {single_gamma(o)});
    if (!o.n) cfg.n = 1000000;
    const auto h = invariant_histogram(cfg);
    std::cerr << "burn_in=" << h.burn_in << " c1_hat=" << h.c1_hat << '\n';
    emit(o, h.table());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-field Ising chain: transfer recursions, Gamma-extrema and experiments"};
    app.set_config("--config", "", "TOML config file for sweeps; command-line flags win");
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    Options o;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--law", o.law, "disorder law: twopoint:a, gauss:s, uniform:a, fig2mix, table:x:w,...");
        sub->add_option("--gamma", o.gamma, "Gamma = 2J; comma-separated list for sweeps")->delimiter(',');
        sub->add_option("--n", o.n, "window length");
        sub->add_option("--replicas", o.replicas, "replica count");
        sub->add_option("--seed", o.seed, "master seed (falls back to RFIC_SEED)")
            ->each([&](const std::string&) { o.seed_given = true; });
        sub->add_option("--out", o.out, "output file (default stdout)");
        sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--tol", o.tol, "relative sandwich tolerance")->check(CLI::PositiveNumber);
    };

    auto* oracle = app.add_subcommand("oracle-check", "transfer recursion against brute-force enumeration");
    add_common(oracle);
    oracle->add_option("--trials", o.trials, "random instances");

    auto* extrema = app.add_subcommand("extrema", "two-sided Gamma-extrema and Fisher configuration");
    add_common(extrema);
    extrema->add_option("--fisher-out", o.fisher_out, "also write n,s_F to this file");

    auto* rg = app.add_subcommand("rg", "decimation report against the Gamma-extrema");
    add_common(rg);
    rg->add_option("--chain-out", o.chain_out, "also write the decimated chain to this file");

    auto* disc = app.add_subcommand("discrepancy", "P(sigma_0 != s^F_0) per Gamma");
    add_common(disc);
    disc->add_option("--estimator", o.estimator, "gibbs (thermal spin) or sm (sign of m_0)")
        ->check(CLI::IsMember({"gibbs", "sm"}));

    auto* dn = app.add_subcommand("dn", "Gibbs fluctuations of D_N for one disorder seed");
    add_common(dn);
    dn->add_option("--n-grid", o.n_grid, "window lengths")->delimiter(',');
    dn->add_option("--samples", o.samples, "Gibbs samples per window");

    auto* invhist = app.add_subcommand("invhist", "histogram of the l-chain");
    add_common(invhist);

    auto* scaling = app.add_subcommand("scaling", "gap statistics of the Gamma-extrema");
    add_common(scaling);

    auto* fe = app.add_subcommand("free-energy", "(1/N) log Z per J");
    add_common(fe);
    fe->add_option("--J", o.J, "coupling values")->delimiter(',');

    auto* prox = app.add_subcommand("proximity", "distance between l_0 and its reflected counterpart");
    add_common(prox);
    prox->add_option("--c", o.c, "threshold constant");

    auto* gs = app.add_subcommand("groundstate-check", "maximizer family against enumeration");
    add_common(gs);
    gs->add_option("--trials", o.trials, "random instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*oracle) return run_oracle_check(o);
        if (*extrema) return run_extrema(o);
        if (*rg) return run_rg(o);
        if (*gs) return run_groundstate_check(o);
        if (*invhist) return run_invhist(o);
        if (*disc) {
            const auto cfg = config_from(o, o.gamma.empty() ? std::vector<double>{5, 10, 20, 40} : o.gamma);
            emit(o, o.estimator == "sm" ? sm_vs_sf_density(cfg) : estimate_D_Gamma(cfg));
        } else if (*dn) {
            emit(o, dn_trajectory(config_from(o, {}), single_gamma(o)));
        } else if (*scaling) {
            emit(o, scaling_sweep(config_from(o, o.gamma.empty() ? std::vector<double>{30} : o.gamma)));
        } else if (*fe) {
            if (!o.gamma.empty()) throw std::invalid_argument("free-energy takes --J, not --gamma");
            emit(o, free_energy(config_from(o, o.J.empty() ? std::vector<double>{4} : o.J)));
        } else if (*prox) {
            emit(o, proximity_table(config_from(o, o.gamma.empty() ? std::vector<double>{10} : o.gamma), o.c));
        }
        return 0;
    } catch (const CheckFailed& e) {
        std::cerr << "check failed: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n' << app.help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
