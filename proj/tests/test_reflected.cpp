#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "rfic/extrema.hpp"
#include "rfic/reflected.hpp"

using namespace rfic;

namespace {

WalkPath negate(WalkPath w) {
    for (double& s : w.s) s = -s;
    return w;
}

}  // namespace

TEST_CASE("step_hat clamps") {
    CHECK(step_hat(0.0, 0.0, 5.0) == 0.0);
    CHECK(step_hat(4.0, 3.0, 5.0) == 5.0);
    CHECK(step_hat(-4.0, -3.0, 5.0) == -5.0);
    CHECK(step_hat(1.0, 0.5, 5.0) == 2.0);
}

TEST_CASE("hard wall dominates the smooth wall away from the origin") {
    const double gamma = 4.0;
    for (int i = -400; i <= 400; ++i) {
        const double y = gamma * i / 400.0;
        for (double h : {-1.3, -0.2, 0.0, 0.7, 2.1}) {
            const double x = y + 2.0 * h;
            if (x >= 0.0) CHECK(step_hat(y, h, gamma) >= step_l(y, h, gamma));
            if (x <= 0.0) CHECK(step_hat(y, h, gamma) <= step_l(y, h, gamma));
        }
    }
}

TEST_CASE("step_hat is nondecreasing in the state") {
    for (int i = -100; i < 100; ++i) CHECK(step_hat(i * 0.05, 0.3, 5.0) <= step_hat((i + 1) * 0.05, 0.3, 5.0));
}

TEST_CASE("coalescence is exact after a swing") {
    const auto f = sample_field(DisorderLaw::gauss(1.0), 1, 2000, 5);
    const double gamma = 6.0;
    double lo = -gamma, hi = gamma, mid = 1.0;
    bool met = false;
    for (double h : f.h) {
        lo = step_hat(lo, h, gamma);
        hi = step_hat(hi, h, gamma);
        mid = step_hat(mid, h, gamma);
        if (lo == hi) met = true;
        if (met) {
            CHECK(lo == hi);
            CHECK(mid == lo);
        }
        CHECK(std::abs(lo) <= gamma);
    }
    CHECK(met);
}

TEST_CASE("zero field never coalesces") {
    CHECK_THROWS_AS(hat_l_from_coalescence(FieldWindow(1, std::vector<double>(100, 0.0)), 3.0), std::runtime_error);
    const WalkPath flat{0, std::vector<double>(100, 0.0)};
    CHECK_THROWS_AS(hat_l_explicit(flat, 3.0, 99), std::runtime_error);
}

TEST_CASE("closed forms equal the coalesced chains") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto src = law_source(DisorderLaw::gauss(1.0), seed);
        for (double gamma : {4.0, 8.0}) {
            const auto a = hat_l_explicit_at(src, gamma, 0);
            const auto b = hat_l_coalescence_at(src, gamma, 0);
            CHECK(std::abs(a.value - b.value) <= 1e-12);
            const auto c = hat_r_explicit_at(src, gamma, 1);
            const auto d = hat_r_coalescence_at(src, gamma, 1);
            CHECK(std::abs(c.value - d.value) <= 1e-12);
            CHECK(std::abs(a.value) <= gamma);
            CHECK(std::abs(c.value) <= gamma);
        }
    }
}

TEST_CASE("negating the field negates l_hat") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto f = sample_field(DisorderLaw::gauss(1.0), -500, 0, seed);
        const auto w = walk_from_field(f);
        CHECK(hat_l_explicit(w, 5.0, 0).value == -hat_l_explicit(negate(w), 5.0, 0).value);
    }
}

TEST_CASE("r_hat at 1 is l_hat at 0 of the negated reversed walk") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto w = walk_from_field(sample_field(DisorderLaw::gauss(1.0), 1, 800, seed));
        const auto rv = negate(reverse_walk(w));
        CHECK(std::abs(hat_r_explicit(w, 5.0, 1).value - hat_l_explicit(rv, 5.0, 0).value) <= 1e-12);
    }
}

TEST_CASE("hat chains on the reference walk") {
    const auto w = fixtures::fig1_walk();
    // after the drop to u_2 = 7 the backward chain from the right sits on the upper wall at 8
    CHECK(hat_r_explicit(w, 2.5, 8).value == 2.5);
    // the drop from S_4 = 2 to S_7 = -1 pins the forward chain to the lower wall
    CHECK(hat_l_explicit(w, 2.5, 7).value == -2.5);
    CHECK_THROWS_AS(hat_l_explicit(w, 2.5, 6), std::runtime_error);
    const auto f = field_from_walk(w);
    const auto series = hat_series(f, 2.5, 12, 24);
    for (std::size_t i = 0; i < series.sign.size(); ++i) {
        const std::int64_t n = 12 + static_cast<std::int64_t>(i);
        const auto hs = hat_m_and_sign(w, 2.5, n);
        CHECK(hs.m == series.m_hat[i]);
        CHECK(hs.s == series.sign[i]);
    }
}

TEST_CASE("sawtooth signs") {
    const auto f = fixtures::sawtooth_field(-200, 400);
    const auto series = hat_series(f, 2.5, -100, 100);
    for (std::int64_t n = -100; n <= 100; ++n) {
        const std::size_t i = static_cast<std::size_t>(n + 100);
        CHECK(series.sign[i] == (f.at(n) > 0 ? 1 : -1));
    }
}

TEST_CASE("plateau sites have m_hat exactly 0") {
    const auto src = law_source(DisorderLaw::two_point(1.0), 77);
    const double gamma = 4.0;
    const auto f = src(-3000, 6000);
    const auto series = hat_series(f, gamma, 1, 3000);
    const auto ext = gamma_extrema_two_sided(src, gamma, 1, 3000);
    std::size_t checked = 0;
    for (const auto& r : ext.records)
        for (std::int64_t n = r.u + 1; n <= r.u_plus; ++n)
            if (n >= 1 && n <= 3000) {
                CHECK(series.m_hat[static_cast<std::size_t>(n - 1)] == 0.0);
                ++checked;
            }
    CHECK(checked > 0);
}

TEST_CASE("sign of m_hat equals the two-sided Fisher value") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (double gamma : {4.0, 8.0}) {
            const auto src = law_source(DisorderLaw::gauss(1.0), seed);
            const std::int64_t lo = 1, hi = 2000;
            const auto ext = gamma_extrema_two_sided(src, gamma, lo, hi);
            const auto s = fisher_z(ext, gamma, lo, hi);
            const auto series = hat_series(src(lo - 4000, hi + 4000), gamma, lo, hi);
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (std::abs(series.m_hat[i]) > 1e-9)
                    CHECK(series.sign[i] == s[i]);
                else
                    CHECK(s[i] == 0);
            }
        }
    }
}

TEST_CASE("proximity sample bounds") {
    const auto rep = proximity_sample(DisorderLaw::gauss(1.0), 10.0, 50, 3);
    CHECK(rep.kept + rep.dropped == 50);
    for (std::size_t i = 0; i < rep.l0.size(); ++i) {
        CHECK(std::abs(rep.l0[i]) <= 10.0);
        CHECK(std::abs(rep.lhat0[i]) <= 10.0);
    }
    CHECK(rep.threshold == doctest::Approx(std::log(std::log(10.0)) + 10.0));
}

TEST_CASE("hat CSV") {
    const auto f = fixtures::sawtooth_field(-50, 100);
    std::ostringstream os;
    write_hat_csv(os, hat_series(f, 2.5, 0, 3));
    CHECK(os.str().rfind("site,l_hat,r_hat,m_hat,sign\n0,", 0) == 0);
}
