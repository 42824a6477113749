#include "rfic/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

#include "rfic/extrema.hpp"
#include "rfic/parallel.hpp"
#include "rfic/reflected.hpp"
#include "rfic/transfer.hpp"

namespace rfic {

void ExperimentConfig::validate() const {
    if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");
    if (n < 1) throw std::invalid_argument("window length must be >= 1");
    for (double v : sweep)
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("sweep values must be positive");
    for (std::int64_t v : n_grid)
        if (v < 1) throw std::invalid_argument("N grid values must be >= 1");
    if (bin_width < 0.0) throw std::invalid_argument("bin width must be >= 0");
    if (!(tol_rel > 0.0)) throw std::invalid_argument("tolerance must be > 0");
}

void Table::write_csv(std::ostream& os) const {
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
    os << '\n';
    char buf[64];
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", row[c]);
            os << (c ? "," : "") << buf;
        }
        os << '\n';
    }
}

std::string Table::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        nlohmann::json o;
        for (std::size_t c = 0; c < columns.size(); ++c) o[columns[c]] = rows[r][c];
        if (r < extra_rows.size())
            for (std::size_t c = 0; c < extra_columns.size(); ++c) o[extra_columns[c]] = extra_rows[r][c];
        out.push_back(o);
    }
    return out.dump(2);
}

double Table::at(std::size_t row, const std::string& column) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
        if (columns[c] == column) return rows.at(row).at(c);
    for (std::size_t c = 0; c < extra_columns.size(); ++c)
        if (extra_columns[c] == column) return extra_rows.at(row).at(c);
    throw std::out_of_range("no column " + column);
}

namespace {

struct MeanErr {
    double mean = 0.0;
    double var = 0.0;  ///< unbiased
    double stderr_ = 0.0;
};

MeanErr mean_err(const std::vector<double>& v) {
    MeanErr m;
    if (v.empty()) return m;
    m.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - m.mean) * (x - m.mean);
        m.var = ss / static_cast<double>(v.size() - 1);
        m.stderr_ = std::sqrt(m.var / static_cast<double>(v.size()));
    }
    return m;
}

double loglog(double gamma) { return std::log(std::log(gamma)); }

struct SiteReplica {
    bool kept = false;
    double m = 0.0;
    int s_f = 0;
};

// m_0 from sandwich midpoints and s^F_0 from the two-sided construction.
std::vector<SiteReplica> site_replicas(const ExperimentConfig& cfg, double gamma) {
    const ModelParams p = ModelParams::from_gamma(gamma);
    SandwichOptions sopt;
    sopt.tol_rel = cfg.tol_rel;
    sopt.theta = cfg.law.theta();
    TwoSidedOptions topt;
    topt.theta = cfg.law.theta();
    return parallel_map<SiteReplica>(cfg.replicas, cfg.threads, [&](std::size_t i) {
        const FieldSource src = law_source(cfg.law, derive_seed(cfg.seed, i));
        SiteReplica o;
        const SandwichValue l = sandwich_l_at(src, -1, p, sopt);
        const SandwichValue r = sandwich_r_at(src, 1, p, sopt);
        if (!l.converged || !r.converged) return o;
        try {
            o.s_f = fisher_z(gamma_extrema_two_sided(src, gamma, 0, 0, topt), gamma, 0, 0)[0];
        } catch (const std::runtime_error&) {
            return o;
        }
        o.m = l.mid() + 2.0 * src(0, 0).h[0] + r.mid();
        o.kept = true;
        return o;
    });
}

template <class Value>
Table density_table(const ExperimentConfig& cfg, Value value, bool with_flag) {
    cfg.validate();
    Table t;
    t.columns = {"gamma", "estimate", "stderr", "kept", "dropped", "gamma_scaled"};
    if (with_flag) t.extra_columns = {"flagged"};
    for (double gamma : cfg.sweep) {
        const auto reps = site_replicas(cfg, gamma);
        std::vector<double> v;
        for (const auto& o : reps)
            if (o.kept) v.push_back(value(o));
        const MeanErr me = mean_err(v);
        const double dropped = static_cast<double>(reps.size() - v.size());
        t.rows.push_back({gamma, me.mean, me.stderr_, static_cast<double>(v.size()), dropped,
                          gamma * me.mean / loglog(gamma)});
        if (with_flag) t.extra_rows.push_back({dropped > 0.1 * static_cast<double>(reps.size()) ? 1.0 : 0.0});
    }
    return t;
}

}  // namespace

Table estimate_D_Gamma(const ExperimentConfig& cfg) {
    return density_table(cfg, [](const SiteReplica& o) { return mismatch_probability(o.s_f, o.m); }, true);
}

Table sm_vs_sf_density(const ExperimentConfig& cfg) {
    return density_table(
        cfg, [](const SiteReplica& o) { return (o.m >= 0.0 ? 1 : -1) != o.s_f ? 1.0 : 0.0; }, false);
}

std::vector<double> dn_samples(const FieldWindow& field, double gamma, double lb, double rb,
                               const std::vector<int>& reference, std::size_t samples,
                               std::uint64_t seed, unsigned threads) {
    const GibbsSampler sampler(field, ModelParams::from_gamma(gamma), lb, rb);
    const double n = static_cast<double>(field.size());
    return parallel_map<double>(samples, threads, [&](std::size_t k) {
        return static_cast<double>(sampler.sample_mismatches(derive_seed(seed, k), reference)) / n;
    });
}

Table dn_trajectory(const ExperimentConfig& cfg, double gamma) {
    cfg.validate();
    std::vector<std::int64_t> grid = cfg.n_grid;
    if (grid.empty()) grid = {1000, 10000, 100000};
    const ModelParams p = ModelParams::from_gamma(gamma);
    SandwichOptions sopt;
    sopt.tol_rel = cfg.tol_rel;
    sopt.theta = cfg.law.theta();
    TwoSidedOptions topt;
    topt.theta = cfg.law.theta();
    const FieldSource src = law_source(cfg.law, cfg.seed);
    Table t;
    t.columns = {"N", "mean", "var", "var_times_N", "samples"};
    for (std::int64_t n : grid) {
        const std::vector<int> ref = fisher_z(gamma_extrema_two_sided(src, gamma, 1, n, topt), gamma, 1, n);
        const double lb = sandwich_l_at(src, 0, p, sopt).mid();
        const double rb = sandwich_r_at(src, n + 1, p, sopt).mid();
        const auto d = dn_samples(src(1, n), gamma, lb, rb, ref, cfg.samples,
                                  hash3(cfg.seed, 0x646e, static_cast<std::uint64_t>(n)), cfg.threads);
        const MeanErr me = mean_err(d);
        t.rows.push_back({static_cast<double>(n), me.mean, me.var, me.var * static_cast<double>(n),
                          static_cast<double>(d.size())});
    }
    return t;
}

Table Histogram::table() const {
    Table t;
    t.columns = {"bin_left", "bin_right", "count"};
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double left = lo + width * static_cast<double>(i);
        t.rows.push_back({left, left + width, static_cast<double>(counts[i])});
    }
    return t;
}

double Histogram::autocorrelation(std::size_t lag) const {
    const std::size_t n = counts.size();
    if (lag >= n) return 0.0;
    const double mu = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::int64_t{0})) /
                      static_cast<double>(n);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(counts[i]) - mu;
        den += d * d;
        if (i + lag < n) num += d * (static_cast<double>(counts[i + lag]) - mu);
    }
    return den > 0.0 ? num / den : 0.0;
}

double Histogram::bulk_spread() const {
    const std::size_t n = counts.size();
    const auto b = counts.begin() + static_cast<std::ptrdiff_t>(n / 4);
    const auto e = counts.begin() + static_cast<std::ptrdiff_t>(3 * n / 4);
    if (b >= e) return 0.0;
    const auto [mn, mx] = std::minmax_element(b, e);
    const double mean = static_cast<double>(std::accumulate(b, e, std::int64_t{0})) / static_cast<double>(e - b);
    return mean > 0.0 ? static_cast<double>(*mx - *mn) / mean : 0.0;
}

Histogram invariant_histogram(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.sweep.empty()) throw std::invalid_argument("invariant_histogram: needs a Gamma value");
    const double gamma = cfg.sweep.front();
    Histogram hist;
    hist.width = cfg.bin_width > 0.0 ? cfg.bin_width : gamma / 500.0;
    hist.lo = -gamma;
    const std::size_t bins = static_cast<std::size_t>(std::ceil(2.0 * gamma / hist.width - 1e-9));
    hist.counts.assign(bins, 0);

    // burn-in: the -Gamma and +Gamma chains sandwich every start; stop once they meet
    const double tol = cfg.tol_rel * gamma;
    double lo = -gamma;
    double hi = gamma;
    std::int64_t site = 0;
    while (hi - lo > tol) {
        ++site;
        const double h = cfg.law.sample(cfg.seed, site);
        lo = step_l(lo, h, gamma);
        hi = step_l(hi, h, gamma);
    }
    hist.burn_in = site;
    double l = 0.5 * (lo + hi);
    for (std::int64_t k = 0; k < cfg.n; ++k) {
        ++site;
        l = step_l(l, cfg.law.sample(cfg.seed, site), gamma);
        const auto idx = static_cast<std::ptrdiff_t>(std::floor((l - hist.lo) / hist.width));
        ++hist.counts[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(bins) - 1))];
    }

    // empirical c_1: densest interval of length at least c2 log log Gamma
    const double min_len = std::max(hist.width, cfg.c2 * (gamma > std::exp(1.0) ? loglog(gamma) : 0.0));
    const std::size_t k = std::min(bins, static_cast<std::size_t>(std::ceil(min_len / hist.width - 1e-12)));
    std::vector<std::int64_t> pre(bins + 1, 0);
    for (std::size_t i = 0; i < bins; ++i) pre[i + 1] = pre[i] + hist.counts[i];
    const double total = static_cast<double>(cfg.n);
    for (std::size_t len = k; len <= std::min(bins, 2 * k - 1); ++len)
        for (std::size_t i = 0; i + len <= bins; ++i) {
            const double mass = static_cast<double>(pre[i + len] - pre[i]) / total;
            hist.c1_hat = std::max(hist.c1_hat, mass * gamma / (hist.width * static_cast<double>(len)));
        }
    return hist;
}

Table scaling_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    Table t;
    t.columns = {"gamma", "mean_gap_excess", "ks_exp1", "mean_scaled_spacing", "corr_even"};
    t.extra_columns = {"var_gap_excess", "n_pairs", "min_gap_ratio", "corr_bound"};
    const double theta2 = cfg.law.variance();
    const auto per_gamma = parallel_map<std::pair<std::vector<double>, std::vector<double>>>(
        cfg.sweep.size(), cfg.threads, [&](std::size_t g) {
            const double gamma = cfg.sweep[g];
            // the first gap involves the scan's first record, which is only a one-sided extremum
            auto gaps = neveu_pitman_stats(cfg.law, gamma, cfg.replicas + 1, derive_seed(cfg.seed, g));
            gaps.erase(gaps.begin());
            std::vector<double> x;
            double spacing = 0.0;
            double min_ratio = INFINITY;
            for (const auto& gp : gaps) {
                x.push_back(gp.height / gamma - 1.0);
                spacing += theta2 * static_cast<double>(gp.spacing) / (gamma * gamma);
                min_ratio = std::min(min_ratio, gp.height / gamma);
            }
            const MeanErr me = mean_err(x);
            std::vector<double> sorted = x;
            std::sort(sorted.begin(), sorted.end());
            double ks = 0.0;
            const double n = static_cast<double>(sorted.size());
            for (std::size_t i = 0; i < sorted.size(); ++i) {
                const double f = sorted[i] > 0.0 ? -std::expm1(-sorted[i]) : 0.0;
                ks = std::max({ks, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
            }
            // consecutive even-index gap heights (every other gap of the alternating sequence)
            std::vector<double> ax, bx;
            for (std::size_t i = 1; i + 2 < gaps.size(); i += 2) {
                ax.push_back(gaps[i].height);
                bx.push_back(gaps[i + 2].height);
            }
            const MeanErr ma = mean_err(ax);
            const MeanErr mb = mean_err(bx);
            double cov = 0.0;
            for (std::size_t i = 0; i < ax.size(); ++i) cov += (ax[i] - ma.mean) * (bx[i] - mb.mean);
            const double np = static_cast<double>(ax.size());
            const double corr = np > 1 ? cov / (np - 1) / std::sqrt(ma.var * mb.var) : 0.0;
            std::vector<double> row = {gamma, me.mean, ks, spacing / n, corr};
            std::vector<double> extra = {me.var, np, min_ratio, 3.0 / std::sqrt(np)};
            return std::make_pair(row, extra);
        });
    for (const auto& [row, extra] : per_gamma) {
        t.rows.push_back(row);
        t.extra_rows.push_back(extra);
    }
    return t;
}

Table free_energy(const ExperimentConfig& cfg) {
    cfg.validate();
    Table t;
    t.columns = {"J", "f_hat", "stderr", "two_j_excess"};
    for (double J : cfg.sweep) {
        const auto f = parallel_map<double>(cfg.replicas, cfg.threads, [&](std::size_t i) {
            const FieldWindow field = sample_field(cfg.law, 1, cfg.n, derive_seed(cfg.seed, i));
            return log_partition(field.h, J, 1, 1) / static_cast<double>(cfg.n);
        });
        const MeanErr me = mean_err(f);
        t.rows.push_back({J, me.mean, me.stderr_, 2.0 * J * (me.mean - J)});
    }
    return t;
}

double free_energy_zero_field(double J, std::int64_t n) {
    // Z = ((2 cosh J)^{N+1} + (2 sinh J)^{N+1}) / 2
    const double log2cosh = std::abs(J) + std::log1p(std::exp(-2.0 * std::abs(J)));
    const double ratio = std::pow(std::tanh(J), static_cast<double>(n + 1));
    return ((static_cast<double>(n) + 1.0) * log2cosh + std::log1p(ratio) - std::log(2.0)) / static_cast<double>(n);
}

Table proximity_table(const ExperimentConfig& cfg, double c_threshold) {
    cfg.validate();
    Table t;
    t.columns = {"gamma", "mean_gap", "max_gap", "threshold", "exceed_fraction", "kept", "dropped"};
    for (std::size_t g = 0; g < cfg.sweep.size(); ++g) {
        const double gamma = cfg.sweep[g];
        const ProximityReport rep =
            proximity_sample(cfg.law, gamma, cfg.replicas, cfg.seed, c_threshold, cfg.threads, cfg.tol_rel);
        const MeanErr me = mean_err(rep.gaps);
        const double mx = rep.gaps.empty() ? 0.0 : *std::max_element(rep.gaps.begin(), rep.gaps.end());
        t.rows.push_back({gamma, me.mean, mx, rep.threshold, rep.exceed_fraction, static_cast<double>(rep.kept),
                          static_cast<double>(rep.dropped)});
    }
    return t;
}

}  // namespace rfic
