#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "rfic/extrema.hpp"
#include "rfic/rg.hpp"

using namespace rfic;

namespace {

BondChain chain_of(std::vector<double> deltas) {
    BondChain c;
    for (double d : deltas) c.bonds.push_back({1, d});
    return c;
}

// naive iteration of the single-step map
BondChain naive_run(BondChain c, double gamma) {
    while (c.size() >= 3 && c.interior_min() < gamma) c = rg_step(c);
    return c;
}

FieldSource fixture_source() {
    std::vector<double> h = fixtures::rg_fixture_field();
    for (double x : fixtures::rg_fixture_continuation()) h.push_back(x);
    return [h](std::int64_t lo, std::int64_t hi) {
        std::vector<double> out;
        for (std::int64_t k = lo; k <= hi; ++k)
            out.push_back(k >= 1 && k <= static_cast<std::int64_t>(h.size()) ? h[static_cast<std::size_t>(k - 1)] : 0.0);
        return FieldWindow(lo, out);
    };
}

void check_invariants(const BondChain& c, std::int64_t total_sites) {
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        CHECK(c.bonds[j].eta >= 1);
        sum += c.bonds[j].eta;
        if (j + 1 < c.size()) CHECK((c.bonds[j].delta >= 0) != (c.bonds[j + 1].delta >= 0));
    }
    CHECK(sum == total_sites);
}

}  // namespace

TEST_CASE("coarse graining groups same-sign runs") {
    const auto c = coarse_grain(FieldWindow(1, {1, 1, -1, -1, -1, 2}));
    REQUIRE(c.size() == 3);
    CHECK(c.bonds[0] == Bond{2, 2.0});
    CHECK(c.bonds[1] == Bond{3, -3.0});
    CHECK(c.bonds[2] == Bond{1, 2.0});
    CHECK(c.breakpoints() == std::vector<std::int64_t>{2, 5, 6});
}

TEST_CASE("zero counts as positive") {
    const auto c = coarse_grain(FieldWindow(1, {0.0, 1.0, -1.0}));
    REQUIRE(c.size() == 2);
    CHECK(c.bonds[0] == Bond{2, 1.0});
}

TEST_CASE("one decimation merges the smallest interior bond") {
    const auto a = rg_step(chain_of({5, -1, 4, -6}));
    REQUIRE(a.size() == 2);
    CHECK(a.bonds[0] == Bond{3, 8.0});
    CHECK(a.bonds[1] == Bond{1, -6.0});

    const auto b = rg_step(chain_of({5, -4, 1, -6}));
    REQUIRE(b.size() == 2);
    CHECK(b.bonds[0] == Bond{1, 5.0});
    CHECK(b.bonds[1] == Bond{3, -9.0});
}

TEST_CASE("ties go to the leftmost interior bond") {
    const auto c = rg_step(chain_of({3, -1, 1, -1, 3}));
    REQUIRE(c.size() == 3);
    CHECK(c.bonds[0] == Bond{3, 3.0});
    CHECK(c.bonds[1] == Bond{1, -1.0});
}

TEST_CASE("three bonds collapse to one") {
    const auto c = rg_step(chain_of({2, -1, 2}));
    REQUIRE(c.size() == 1);
    CHECK(c.bonds[0] == Bond{3, 3.0});
    CHECK_THROWS_AS(rg_step(chain_of({2, -1})), std::invalid_argument);
}

TEST_CASE("interior minimum") {
    CHECK(chain_of({1, -2}).interior_min() == std::numeric_limits<double>::infinity());
    CHECK(chain_of({0.1, -2, 3, -0.5}).interior_min() == 2.0);
}

TEST_CASE("run invariants and fixed point on random fields") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto f = sample_field(DisorderLaw::gauss(1.0), 1, 3000, seed);
        for (double gamma : {1.0, 3.0, 6.0}) {
            const auto res = rg_run(f, gamma);
            check_invariants(res.chain, 3000);
            CHECK(res.n_gamma == res.chain.size());
            CHECK((res.chain.size() < 3 || res.chain.interior_min() >= gamma));
            const auto again = rg_run(res.chain, gamma);
            CHECK(again.steps == 0);
            CHECK(again.chain.bonds == res.chain.bonds);
            // merged heights are walk differences
            const auto w = walk_from_field(f);
            std::int64_t prev = 0;
            for (std::size_t j = 0; j < res.chain.size(); ++j) {
                const std::int64_t tau = prev + res.chain.bonds[j].eta;
                CHECK(std::abs(res.chain.bonds[j].delta - (w.at(tau) - w.at(prev))) <= 1e-9);
                prev = tau;
            }
        }
    }
}

TEST_CASE("priority queue agrees with the naive iteration") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto f = sample_field(DisorderLaw::two_point(1.0), 1, 500, seed);
        const auto c = coarse_grain(f);
        for (double gamma : {2.5, 4.5, 8.5}) {
            const auto fast = rg_run(c, gamma).chain;
            const auto slow = naive_run(c, gamma);
            REQUIRE(fast.size() == slow.size());
            for (std::size_t j = 0; j < fast.size(); ++j) {
                CHECK(fast.bonds[j].eta == slow.bonds[j].eta);
                CHECK(fast.bonds[j].delta == doctest::Approx(slow.bonds[j].delta));
            }
        }
    }
}

TEST_CASE("fifty-site fixture") {
    const auto rep = rg_vs_extrema(fixture_source(), 50, 2.5);
    CHECK(rep.breakpoints == std::vector<std::int64_t>{3, 12, 14, 23, 38, 45, 50});
    CHECK(rep.n_gamma == 7);
    CHECK(rep.extrema == std::vector<std::int64_t>{12, 14, 23, 38});
    CHECK(rep.j_n == 4);
    CHECK(rep.spurious == std::vector<std::int64_t>{3, 45, 50});
    CHECK(rep.containment);
    CHECK(rep.bracket);
    CHECK(rep.spurious_positions_ok);
    CHECK(rep.certified == rep.extrema);

    const auto f = FieldWindow(1, fixtures::rg_fixture_field());
    const auto chain = rg_run(f, 2.5).chain;
    const double expected[] = {-1.0, 3.2, -2.835, 5.198, -3.768, 2.7, -1.2};
    REQUIRE(chain.size() == 7);
    for (std::size_t j = 0; j < 7; ++j) CHECK(chain.bonds[j].delta == doctest::Approx(expected[j]).epsilon(1e-12));
}

TEST_CASE("certified extrema survive the decimation on gaussian fields") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        for (double gamma : {2.0, 4.0}) {
            const auto rep = rg_vs_extrema(law_source(DisorderLaw::gauss(1.0), seed), 2000, gamma);
            CHECK(rep.containment_certified);
            CHECK(rep.bracket_certified);
            CHECK(rep.spurious_positions_ok);
            // only the two boundary extrema can be uncertified
            CHECK(rep.j_n - rep.j_certified <= 2);
            for (std::int64_t u : rep.missed)
                CHECK(std::find(rep.certified.begin(), rep.certified.end(), u) == rep.certified.end());
        }
    }
}

TEST_CASE("first extremum without a swing on its left can be decimated") {
    // walk 0 -> -2.14 (site 4) -> 0.38 (site 6) -> -3.88 (site 10): u_1 = 6 is a one-sided maximum
    const auto rep = rg_vs_extrema(law_source(DisorderLaw::gauss(1.0), 2), 2000, 4.0);
    REQUIRE_FALSE(rep.extrema.empty());
    CHECK(rep.extrema.front() == 6);
    CHECK(rep.missed == std::vector<std::int64_t>{6});
    CHECK_FALSE(rep.containment);
    CHECK(rep.containment_certified);
    CHECK(rep.certified.front() != 6);
}

TEST_CASE("last extremum confirmed beyond the window can be decimated") {
    const auto rep = rg_vs_extrema(law_source(DisorderLaw::gauss(1.0), derive_seed(505, 2)), 10000, 5.0);
    CHECK(rep.missed == std::vector<std::int64_t>{9990});
    CHECK(rep.extrema.back() == 9990);
    CHECK(rep.certified.back() != 9990);
    CHECK(rep.containment_certified);
}

TEST_CASE("sawtooth: breakpoints are the extrema") {
    const auto f = fixtures::sawtooth_field(1, 120);
    const auto res = rg_run(f, 2.5);
    const auto bp = res.chain.breakpoints();
    // interior breakpoints sit at the peaks and troughs of the triangle wave
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) CHECK((bp[i] % 12 == 3 || bp[i] % 12 == 9));
    const auto rep = rg_vs_extrema(window_source(fixtures::sawtooth_field(1, 4096)), 120, 2.5);
    CHECK(rep.containment);
    CHECK(rep.spurious == std::vector<std::int64_t>{120});
}

TEST_CASE("atomic laws are reported, not rejected") {
    const auto rep = rg_vs_extrema(law_source(DisorderLaw::two_point(1.0), 3), 500, 2.0, true);
    const auto j = nlohmann::json::parse(rep.to_json());
    CHECK(j.contains("warning"));
    CHECK(j["n_sites"] == 500);
    CHECK(j["spurious_count"] == rep.spurious.size());
}

TEST_CASE("chain CSV") {
    std::ostringstream os;
    write_chain_csv(os, coarse_grain(FieldWindow(1, {1, 1, -1})));
    CHECK(os.str() == "j,tau,eta,delta\n1,2,2,2\n2,3,1,-1\n");
}
