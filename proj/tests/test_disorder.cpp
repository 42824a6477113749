#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "rfic/disorder.hpp"

using namespace rfic;

TEST_CASE("two-point field takes values in its support") {
    const auto f = sample_field(DisorderLaw::two_point(2.0), 1, 4, 99);
    for (double h : f.h) CHECK((h == 2.0 || h == -2.0));
}

TEST_CASE("enlarging the range preserves overlapping values") {
    const auto law = DisorderLaw::gauss(1.0);
    const auto a = sample_field(law, 1, 10, 5);
    const auto b = sample_field(law, 1, 20, 5);
    const auto c = sample_field(law, -30, 10, 5);
    for (std::int64_t n = 1; n <= 10; ++n) {
        CHECK(a.at(n) == b.at(n));
        CHECK(a.at(n) == c.at(n));
    }
}

TEST_CASE("gaussian field statistics over 1e6 sites") {
    const auto f = sample_field(DisorderLaw::gauss(1.0), 1, 1000000, 11);
    double s = 0.0, s2 = 0.0;
    for (double h : f.h) {
        s += h;
        s2 += h * h;
    }
    const double n = static_cast<double>(f.size());
    const double mean = s / n;
    CHECK(std::abs(mean) <= 5e-3);
    CHECK(std::abs(s2 / n - mean * mean - 1.0) <= 1e-2);
}

TEST_CASE("catalog laws: analytic mean and variance against 1e6 samples") {
    const DisorderLaw laws[] = {DisorderLaw::two_point(2.0), DisorderLaw::gauss(1.5), DisorderLaw::uniform(1.0),
                                DisorderLaw::fig2mix(),
                                DisorderLaw::from_table({{-1.0, 2.0}, {2.0, 1.0}})};
    for (const auto& law : laws) {
        CAPTURE(law.describe());
        CHECK(std::abs(law.mean()) <= 1e-12);
        CHECK(law.variance() > 0.0);
        const int n = 1000000;
        double s = 0.0, s2 = 0.0, s4 = 0.0;
        for (int i = 1; i <= n; ++i) {
            const double x = law.sample(3, i);
            s += x;
            s2 += x * x;
            s4 += x * x * x * x;
        }
        const double m = s / n;
        const double v = s2 / n;
        const double se_mean = std::sqrt(law.variance() / n);
        const double se_var = std::sqrt((s4 / n - v * v) / n);
        CHECK(std::abs(m - law.mean()) <= 3.0 * se_mean + 1e-15);
        CHECK(std::abs(v - law.variance()) <= 3.0 * se_var + 1e-15);
    }
}

TEST_CASE("fig2mix variance") {
    const double a = std::pow(2.0, -0.25);
    CHECK(DisorderLaw::fig2mix().variance() == doctest::Approx(4.0 + 0.5 * a * a).epsilon(1e-15));
}

TEST_CASE("non-centered table is rejected with its mean") {
    try {
        DisorderLaw::from_table({{1.0, 1.0}, {-0.5, 1.0}});
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("mean = 0.25") != std::string::npos);
    }
}

TEST_CASE("law grammar") {
    CHECK(DisorderLaw::parse("twopoint:2").kind == LawKind::TwoPoint);
    CHECK(DisorderLaw::parse("gauss:0.5").theta() == doctest::Approx(0.5));
    CHECK(DisorderLaw::parse("uniform:3").variance() == doctest::Approx(3.0));
    CHECK(DisorderLaw::parse("fig2mix").kind == LawKind::Fig2Mix);
    const auto t = DisorderLaw::parse("table:-1:1,1:1");
    CHECK(t.kind == LawKind::Table);
    CHECK(t.variance() == doctest::Approx(1.0));
    CHECK(t.atomic());
    CHECK_FALSE(DisorderLaw::gauss(1).atomic());
    CHECK_THROWS_AS(DisorderLaw::parse("cauchy:1"), std::invalid_argument);
    CHECK_THROWS_AS(DisorderLaw::parse("gauss:-1"), std::invalid_argument);
    CHECK_THROWS_AS(DisorderLaw::parse("table:1:1,2:1"), std::invalid_argument);
}

TEST_CASE("model parameters") {
    const auto p = ModelParams::from_J(1.25);
    CHECK(p.gamma == 2.5);
    CHECK(p.eps == std::exp(-2.5));
    CHECK(ModelParams::from_gamma(3.0).J == 1.5);
    CHECK_THROWS(ModelParams::from_J(0.0));
}

TEST_CASE("field windows reject non-finite values") {
    CHECK_THROWS(FieldWindow(1, {1.0, NAN}));
    CHECK_THROWS(FieldWindow(1, {}));
}

TEST_CASE("walk from a positive window") {
    const auto w = walk_from_field(FieldWindow(1, {1.0, -1.0, 2.0}));
    CHECK(w.first() == 0);
    CHECK(w.at(0) == 0.0);
    CHECK(w.at(1) == 1.0);
    CHECK(w.at(2) == 0.0);
    CHECK(w.at(3) == 2.0);
}

TEST_CASE("walk from a window ending at 0 uses the negative branch") {
    const auto w = walk_from_field(FieldWindow(-1, {3.0, -1.0}));
    CHECK(w.at(-2) == -2.0);
    CHECK(w.at(-1) == 1.0);
    CHECK(w.at(0) == 0.0);
}

TEST_CASE("zero field gives the zero walk") {
    const auto w = walk_from_field(FieldWindow(-5, std::vector<double>(10, 0.0)));
    for (double s : w.s) CHECK(s == 0.0);
}

TEST_CASE("increments reproduce the field") {
    const auto f = sample_field(DisorderLaw::two_point(1.0), -40, 40, 8);
    const auto w = walk_from_field(f);
    for (std::int64_t n = f.first(); n <= f.last(); ++n) CHECK(w.at(n) - w.at(n - 1) == f.at(n));
    // dyadic values keep the sums exact; the general case is exact up to a few ulps
    const auto g = sample_field(DisorderLaw::gauss(1.0), -200, 200, 8);
    const auto wg = walk_from_field(g);
    for (std::int64_t n = g.first(); n <= g.last(); ++n)
        CHECK(std::abs(wg.at(n) - wg.at(n - 1) - g.at(n)) <= 8 * std::numeric_limits<double>::epsilon() *
                                                               std::max(1.0, std::abs(wg.at(n))));
    const auto back = field_from_walk(w);
    CHECK(back.h == f.h);
    CHECK(back.first() == f.first());
}

TEST_CASE("walk anchored at the window start when 0 is outside") {
    const auto w = walk_from_field(FieldWindow(5, {1.0, 2.0}));
    CHECK(w.first() == 4);
    CHECK(w.at(4) == 0.0);
    CHECK(w.at(6) == 3.0);
}

TEST_CASE("reverse walk") {
    const auto w = walk_from_field(FieldWindow(1, {1.0, -1.0}));
    const auto r = reverse_walk(w);
    CHECK(r.at(-1) == 1.0);
    CHECK(r.at(-2) == 0.0);
    const auto rr = reverse_walk(r);
    CHECK(rr.origin == w.origin);
    CHECK(rr.s == w.s);

    // increments of the reversed walk at n equal -h_{1-n}
    const FieldWindow f(1, {0.5, -2.0, 1.25, 3.0});
    const auto rv = reverse_walk(walk_from_field(f));
    for (std::int64_t n = rv.first() + 1; n <= rv.last(); ++n) CHECK(rv.at(n) - rv.at(n - 1) == -f.at(1 - n));
}
