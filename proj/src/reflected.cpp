#include "rfic/reflected.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "rfic/parallel.hpp"

namespace rfic {

double step_hat(double value, double h, double gamma) {
    return std::min(gamma, std::max(-gamma, value + 2.0 * h));
}

HatState hat_l_from_coalescence(const FieldWindow& field, double gamma) {
    double lo = -gamma;
    double hi = gamma;
    for (double h : field.h) {
        lo = step_hat(lo, h, gamma);
        hi = step_hat(hi, h, gamma);
    }
    if (lo != hi) throw std::runtime_error("hat_l: no Gamma-swing in the window, extend it to the left");
    return {lo, field.last(), HatProvenance::Coalescence};
}

HatState hat_r_from_coalescence(const FieldWindow& field, double gamma) {
    double lo = -gamma;
    double hi = gamma;
    for (auto it = field.h.rbegin(); it != field.h.rend(); ++it) {
        lo = step_hat(lo, *it, gamma);
        hi = step_hat(hi, *it, gamma);
    }
    if (lo != hi) throw std::runtime_error("hat_r: no Gamma-swing in the window, extend it to the right");
    return {lo, field.first(), HatProvenance::Coalescence};
}

namespace {

// First index k >= 1 where the path x_k (x_0 = 0) has dropped (down) or risen (up)
// by Gamma since its running extremum, with the first argmax / argmin kept.
struct SwingScan {
    bool found = false;
    bool down_first = false;
    double max = 0.0;
    double min = 0.0;
};

template <class Get>
SwingScan first_swing(Get x, std::int64_t kmax, double gamma) {
    SwingScan sc;
    for (std::int64_t k = 1; k <= kmax; ++k) {
        const double v = x(k);
        if (v > sc.max) sc.max = v;
        if (v < sc.min) sc.min = v;
        const bool down = sc.max - v >= gamma;
        const bool up = v - sc.min >= gamma;
        if (down && up) throw std::logic_error("simultaneous Gamma-increase and Gamma-decrease");
        if (down || up) {
            sc.found = true;
            sc.down_first = down;
            return sc;
        }
    }
    return sc;
}

}  // namespace

HatState hat_l_explicit(const WalkPath& walk, double gamma, std::int64_t n) {
    if (!walk.contains(n)) throw std::out_of_range("hat_l_explicit: site outside the walk");
    const double base = walk.at(n);
    // reversed walk seen from n: R_k = S_{n-k} - S_n
    const auto sc = first_swing([&](std::int64_t k) { return walk.at(n - k) - base; }, n - walk.first(), gamma);
    if (!sc.found) throw std::runtime_error("hat_l_explicit: window too short, extend it to the left");
    // s_down > s_up exactly when the reversed walk drops first
    const double v = sc.down_first ? gamma - 2.0 * sc.max : -gamma - 2.0 * sc.min;
    return {v, n, HatProvenance::ClosedForm};
}

HatState hat_r_explicit(const WalkPath& walk, double gamma, std::int64_t n) {
    if (!walk.contains(n - 1)) throw std::out_of_range("hat_r_explicit: site outside the walk");
    const double base = walk.at(n - 1);
    const auto sc = first_swing([&](std::int64_t k) { return walk.at(n - 1 + k) - base; }, walk.last() - (n - 1), gamma);
    if (!sc.found) throw std::runtime_error("hat_r_explicit: window too short, extend it to the right");
    const double v = sc.down_first ? -gamma + 2.0 * sc.max : gamma + 2.0 * sc.min;
    return {v, n, HatProvenance::ClosedForm};
}

namespace {

constexpr int kMaxDoublings = 12;

std::int64_t start_window(double gamma) {
    return std::max<std::int64_t>(16, static_cast<std::int64_t>(std::ceil(4.0 * gamma * gamma)));
}

template <class Fn>
HatState grow(Fn attempt, double gamma) {
    std::int64_t w = start_window(gamma);
    for (int i = 0;; ++i, w *= 2) {
        try {
            return attempt(w);
        } catch (const std::runtime_error&) {
            if (i == kMaxDoublings) throw;
        }
    }
}

}  // namespace

HatState hat_l_explicit_at(const FieldSource& src, double gamma, std::int64_t n) {
    return grow([&](std::int64_t w) { return hat_l_explicit(walk_from_field(src(n - w + 1, n)), gamma, n); }, gamma);
}

HatState hat_r_explicit_at(const FieldSource& src, double gamma, std::int64_t n) {
    return grow([&](std::int64_t w) { return hat_r_explicit(walk_from_field(src(n, n + w - 1)), gamma, n); }, gamma);
}

HatState hat_l_coalescence_at(const FieldSource& src, double gamma, std::int64_t n) {
    return grow([&](std::int64_t w) { return hat_l_from_coalescence(src(n - w + 1, n), gamma); }, gamma);
}

HatState hat_r_coalescence_at(const FieldSource& src, double gamma, std::int64_t n) {
    return grow([&](std::int64_t w) { return hat_r_from_coalescence(src(n, n + w - 1), gamma); }, gamma);
}

HatSign hat_m_and_sign(const WalkPath& walk, double gamma, std::int64_t n) {
    const double l = hat_l_explicit(walk, gamma, n - 1).value;
    const double r = hat_r_explicit(walk, gamma, n + 1).value;
    const double h = walk.at(n) - walk.at(n - 1);
    const double m = l + 2.0 * h + r;
    return {m, (m > 0.0) - (m < 0.0)};
}

HatSeries hat_series(const FieldWindow& field, double gamma, std::int64_t lo, std::int64_t hi) {
    if (lo - 1 < field.first() || hi + 1 > field.last())
        throw std::out_of_range("hat_series: field must extend beyond the target on both sides");
    HatSeries out;
    out.lo = lo;
    out.hi = hi;
    // forward chains up to site hi
    double a = -gamma;
    double b = gamma;
    for (std::int64_t n = field.first(); n <= lo - 1; ++n) {
        a = step_hat(a, field.at(n), gamma);
        b = step_hat(b, field.at(n), gamma);
    }
    if (a != b) throw std::runtime_error("hat_series: l_hat chains not coalesced before the target");
    out.l_hat.push_back(a);
    for (std::int64_t n = lo; n <= hi; ++n) out.l_hat.push_back(a = step_hat(a, field.at(n), gamma));
    // backward chains down to site lo
    a = -gamma;
    b = gamma;
    for (std::int64_t n = field.last(); n >= hi + 1; --n) {
        a = step_hat(a, field.at(n), gamma);
        b = step_hat(b, field.at(n), gamma);
    }
    if (a != b) throw std::runtime_error("hat_series: r_hat chains not coalesced after the target");
    out.r_hat.assign(static_cast<std::size_t>(hi - lo + 2), 0.0);
    out.r_hat.back() = a;
    for (std::int64_t n = hi; n >= lo; --n) out.r_hat[static_cast<std::size_t>(n - lo)] = a = step_hat(a, field.at(n), gamma);
    for (std::int64_t n = lo; n <= hi; ++n) {
        const std::size_t i = static_cast<std::size_t>(n - lo);
        const double m = out.l_hat[i] + 2.0 * field.at(n) + out.r_hat[i + 1];
        out.m_hat.push_back(m);
        out.sign.push_back((m > 0.0) - (m < 0.0));
    }
    return out;
}

void write_hat_csv(std::ostream& os, const HatSeries& s) {
    os << "site,l_hat,r_hat,m_hat,sign\n";
    char buf[128];
    for (std::int64_t n = s.lo; n <= s.hi; ++n) {
        const std::size_t i = static_cast<std::size_t>(n - s.lo);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", s.l_hat[i + 1], s.r_hat[i], s.m_hat[i]);
        os << n << ',' << buf << ',' << s.sign[i] << '\n';
    }
}

ProximityReport proximity_sample(const DisorderLaw& law, double gamma, std::size_t replicas,
                                 std::uint64_t seed, double c_threshold, unsigned threads, double tol_rel) {
    struct One {
        bool kept = false;
        double l0 = 0.0;
        double lhat = 0.0;
    };
    const ModelParams p = ModelParams::from_gamma(gamma);
    SandwichOptions opt;
    opt.tol_rel = tol_rel;
    opt.theta = law.theta();
    const auto rows = parallel_map<One>(replicas, threads, [&](std::size_t i) {
        const FieldSource src = law_source(law, derive_seed(seed, i));
        One o;
        const SandwichValue sv = sandwich_l_at(src, 0, p, opt);
        if (!sv.converged) return o;
        o.kept = true;
        o.l0 = sv.mid();
        o.lhat = hat_l_explicit_at(src, gamma, 0).value;
        return o;
    });
    ProximityReport rep;
    rep.threshold = std::log(std::log(gamma)) + c_threshold;
    std::int64_t exceed = 0;
    for (const auto& o : rows) {
        if (!o.kept) {
            ++rep.dropped;
            continue;
        }
        ++rep.kept;
        rep.l0.push_back(o.l0);
        rep.lhat0.push_back(o.lhat);
        rep.gaps.push_back(std::abs(o.l0 - o.lhat));
        if (rep.gaps.back() > rep.threshold) ++exceed;
    }
    rep.exceed_fraction = rep.kept ? static_cast<double>(exceed) / static_cast<double>(rep.kept) : 0.0;
    return rep;
}

}  // namespace rfic
