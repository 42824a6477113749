#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rfic/disorder.hpp"

namespace rfic {

struct ExperimentConfig {
    DisorderLaw law = DisorderLaw::gauss(1.0);
    std::vector<double> sweep;  ///< Gamma values, or J values for free_energy
    std::size_t replicas = 1000;
    std::int64_t n = 10000;     ///< window length
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double tol_rel = 1e-8;
    double bin_width = 0.0;     ///< 0 means Gamma / 500
    double c2 = 1.0;            ///< interval scan: minimal length c2 log log Gamma
    std::vector<std::int64_t> n_grid;  ///< dn_trajectory
    std::size_t samples = 200;         ///< Gibbs samples per N

    void validate() const;
};

/// A CSV/JSON table with fixed column names. Extra columns go to JSON only, so the
/// CSV headers stay exactly as published.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> extra_columns;
    std::vector<std::vector<double>> extra_rows;

    void write_csv(std::ostream& os) const;
    std::string to_json() const;
    double at(std::size_t row, const std::string& column) const;
};

/// Replica estimate of P(sigma_0 != s^F_0) from m_0 = l_{-1} + 2h_0 + r_1 and the
/// two-sided Fisher sign. Columns: gamma,estimate,stderr,kept,dropped,gamma_scaled;
/// extra: flagged (drop rate above 10%).
Table estimate_D_Gamma(const ExperimentConfig& cfg);

/// P(s^(m)_0 != s^(F)_0). Columns: gamma,estimate,stderr,kept,dropped,gamma_scaled.
Table sm_vs_sf_density(const ExperimentConfig& cfg);

/// Mean and variance of D_N(sigma, s^F) over Gibbs samples on [1, N] of one field, with
/// infinite-volume boundary fields. Columns: N,mean,var,var_times_N,samples.
Table dn_trajectory(const ExperimentConfig& cfg, double gamma);

/// D_N over Gibbs samples for a given window and reference (boundary fields lb, rb).
std::vector<double> dn_samples(const FieldWindow& field, double gamma, double lb, double rb,
                               const std::vector<int>& reference, std::size_t samples,
                               std::uint64_t seed, unsigned threads);

struct Histogram {
    double lo = 0.0;
    double width = 0.0;
    std::vector<std::int64_t> counts;
    std::int64_t burn_in = 0;
    double c1_hat = 0.0;  ///< max over intervals of length >= c2 loglog Gamma of P(l in I) Gamma / |I|

    Table table() const;  ///< bin_left,bin_right,count
    /// Sample autocorrelation of the counts at `lag` bins.
    double autocorrelation(std::size_t lag) const;
    /// (max - min) / mean over the middle half of the bins.
    double bulk_spread() const;
};

/// l-chain run of cfg.n steps at Gamma = cfg.sweep[0], started after the +-Gamma chains coalesced.
Histogram invariant_histogram(const ExperimentConfig& cfg);

/// Gap statistics per Gamma. Columns: gamma,mean_gap_excess,ks_exp1,mean_scaled_spacing,corr_even;
/// extra: var_gap_excess,n_pairs,min_gap_ratio,corr_bound.
Table scaling_sweep(const ExperimentConfig& cfg);

/// (1/N) log Z^{++}_{1,N} per replica at each J. Columns: J,f_hat,stderr,two_j_excess.
Table free_energy(const ExperimentConfig& cfg);

/// Exact (1/N) log Z^{++}_{1,N} for h = 0.
double free_energy_zero_field(double J, std::int64_t n);

/// Proximity of l_0 to l_hat_0. Columns: gamma,mean_gap,max_gap,threshold,exceed_fraction,kept,dropped.
Table proximity_table(const ExperimentConfig& cfg, double c_threshold = 10.0);

}  // namespace rfic
