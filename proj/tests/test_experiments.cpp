#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "rfic/experiments.hpp"
#include "rfic/transfer.hpp"

using namespace rfic;

namespace {

std::string csv(const Table& t) {
    std::ostringstream os;
    t.write_csv(os);
    return os.str();
}

std::string header(const Table& t) {
    const std::string s = csv(t);
    return s.substr(0, s.find('\n'));
}

ExperimentConfig small(std::vector<double> sweep, std::size_t replicas) {
    ExperimentConfig cfg;
    cfg.sweep = std::move(sweep);
    cfg.replicas = replicas;
    cfg.seed = 17;
    return cfg;
}

}  // namespace

TEST_CASE("configuration validation") {
    ExperimentConfig cfg;
    cfg.replicas = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ExperimentConfig{};
    cfg.sweep = {2.0, -1.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ExperimentConfig{};
    cfg.tol_rel = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("discrepancy estimates: headers, accounting and thread independence") {
    auto cfg = small({4.0, 6.0}, 40);
    const auto a = estimate_D_Gamma(cfg);
    CHECK(header(a) == "gamma,estimate,stderr,kept,dropped,gamma_scaled");
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        CHECK(a.at(r, "kept") + a.at(r, "dropped") == 40.0);
        CHECK(a.at(r, "estimate") >= 0.0);
        CHECK(a.at(r, "estimate") <= 1.0);
    }
    cfg.threads = 3;
    CHECK(csv(estimate_D_Gamma(cfg)) == csv(a));

    const auto b = sm_vs_sf_density(cfg);
    CHECK(header(b) == "gamma,estimate,stderr,kept,dropped,gamma_scaled");
    const auto j = nlohmann::json::parse(a.to_json());
    CHECK(j.is_array());
    CHECK(j[0].contains("flagged"));
}

TEST_CASE("D_N against a reference that is never matched") {
    const auto f = sample_field(DisorderLaw::gauss(1.0), 1, 200, 3);
    // every spin is +-1, so it differs from a zero reference at every site
    const auto d = dn_samples(f, 4.0, 0.0, 0.0, std::vector<int>(200, 0), 20, 5, 1);
    REQUIRE(d.size() == 20);
    for (double x : d) CHECK(x == 1.0);
}

TEST_CASE("D_N trajectory is deterministic and thread independent") {
    auto cfg = small({}, 1);
    cfg.n_grid = {100, 400};
    cfg.samples = 30;
    const auto a = dn_trajectory(cfg, 4.0);
    CHECK(header(a) == "N,mean,var,var_times_N,samples");
    CHECK(a.rows.size() == 2);
    cfg.threads = 2;
    CHECK(csv(dn_trajectory(cfg, 4.0)) == csv(a));
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        CHECK(a.at(r, "mean") >= 0.0);
        CHECK(a.at(r, "mean") <= 1.0);
    }
}

TEST_CASE("invariant histogram") {
    auto cfg = small({4.0}, 1);
    cfg.n = 200000;
    const auto h = invariant_histogram(cfg);
    CHECK(h.counts.size() == 1000);
    std::int64_t total = 0;
    for (auto c : h.counts) total += c;
    CHECK(total == 200000);
    CHECK(h.width == doctest::Approx(4.0 / 500.0));
    CHECK(h.c1_hat > 0.0);
    const auto t = h.table();
    CHECK(header(t) == "bin_left,bin_right,count");
}

TEST_CASE("scaling sweep headers and gap bounds") {
    auto cfg = small({3.0, 5.0}, 200);
    const auto t = scaling_sweep(cfg);
    CHECK(header(t) == "gamma,mean_gap_excess,ks_exp1,mean_scaled_spacing,corr_even");
    const auto j = nlohmann::json::parse(t.to_json());
    for (const auto& row : j) CHECK(row["min_gap_ratio"].get<double>() >= 1.0);
    cfg.threads = 2;
    CHECK(csv(scaling_sweep(cfg)) == csv(t));
}

TEST_CASE("zero-field free energy closed form") {
    for (double J : {0.3, 1.0, 2.5})
        for (std::int64_t n : {1, 5, 50}) {
            const std::vector<double> h(static_cast<std::size_t>(n), 0.0);
            CHECK(free_energy_zero_field(J, n) ==
                  doctest::Approx(log_partition(h, J, 1, 1) / static_cast<double>(n)).epsilon(1e-12));
        }
}

TEST_CASE("free energy table") {
    auto cfg = small({0.5, 1.5}, 20);
    cfg.n = 2000;
    const auto t = free_energy(cfg);
    CHECK(header(t) == "J,f_hat,stderr,two_j_excess");
    for (std::size_t r = 0; r < t.rows.size(); ++r) CHECK(t.at(r, "f_hat") >= t.at(r, "J"));
}

TEST_CASE("proximity table") {
    auto cfg = small({6.0}, 30);
    const auto t = proximity_table(cfg);
    CHECK(header(t) == "gamma,mean_gap,max_gap,threshold,exceed_fraction,kept,dropped");
    CHECK(t.at(0, "kept") + t.at(0, "dropped") == 30.0);
    CHECK(t.at(0, "max_gap") <= 12.0);
}
