#include "rfic/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rfic {

TransferPair TransferPair::make(double h, double J) {
    TransferPair t;
    t.logT = {h, -h};
    t.logQ = {{{J, -J}, {-J, J}}};
    return t;
}

double log_sum_exp(double x, double y) {
    if (x == -std::numeric_limits<double>::infinity()) return y;
    if (y == -std::numeric_limits<double>::infinity()) return x;
    return x > y ? x + std::log1p(std::exp(y - x)) : y + std::log1p(std::exp(x - y));
}

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double log_partition(const std::vector<double>& h, double J, int a, int b) {
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    // v[0] for spin +1, v[1] for spin -1
    double vp = a > 0 ? 0.0 : ninf;
    double vm = a > 0 ? ninf : 0.0;
    for (double hn : h) {
        const double np = log_sum_exp(vp + J, vm - J) + hn;
        const double nm = log_sum_exp(vp - J, vm + J) - hn;
        vp = np;
        vm = nm;
    }
    return b > 0 ? log_sum_exp(vp + J, vm - J) : log_sum_exp(vp - J, vm + J);
}

double log_partition(const FieldWindow& field, const ModelParams& p, int a, int b) {
    return log_partition(field.h, p.J, a, b);
}

double step_l(double y, double h, double gamma) {
    const double x = y + 2.0 * h;
    // grouped so that negating (y, h) negates the result bit for bit
    return x + (softplus(-gamma - x) - softplus(x - gamma));
}

std::vector<double> run_l(const FieldWindow& field, double init, const ModelParams& p) {
    std::vector<double> out(field.size() + 1);
    out[0] = init;
    for (std::size_t i = 0; i < field.size(); ++i) out[i + 1] = step_l(out[i], field.h[i], p.gamma);
    return out;
}

std::vector<double> run_r(const FieldWindow& field, double init, const ModelParams& p) {
    // g_k = h_{1-k}: site n of the field is site 1 - n of the mirror.
    FieldWindow mirror;
    mirror.origin = 1 - field.last();
    mirror.h.assign(field.h.rbegin(), field.h.rend());
    const std::vector<double> l = run_l(mirror, init, p);
    // l at mirror site k corresponds to r at site 1 - k
    return {l.rbegin(), l.rend()};
}

double gibbs_marginal(double l, double h, double r) {
    return std::clamp(logistic(l + 2.0 * h + r), 0.0, 1.0);
}

double mismatch_probability(int s, double m) {
    return 1.0 / (1.0 + std::exp(static_cast<double>(s) * m)) + (s == 0 ? 0.5 : 0.0);
}

MAndS m_and_sm(double l, double h, double r) {
    const double m = l + 2.0 * h + r;
    return {m, m >= 0.0 ? 1 : -1};
}

std::vector<double> marginals(const FieldWindow& field, const ModelParams& p, int a, int b) {
    const auto l = run_l(field, a * p.gamma, p);
    const auto r = run_r(field, b * p.gamma, p);
    std::vector<double> out(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) out[i] = gibbs_marginal(l[i], field.h[i], r[i + 1]);
    return out;
}

GibbsSampler::GibbsSampler(const FieldWindow& field, const ModelParams& p, double lb, double rb)
    : h_(field.h), r_(field.size()), gamma_(p.gamma), lb_(lb) {
    if (h_.empty()) return;
    const std::size_t n = h_.size();
    r_[n - 1] = rb;
    for (std::size_t i = n - 1; i-- > 0;) r_[i] = step_l(r_[i + 1], h_[i + 1], gamma_);
}

std::vector<int> GibbsSampler::sample(std::uint64_t seed) const {
    std::vector<int> sigma(h_.size());
    double field_left = lb_;
    for (std::size_t i = 0; i < h_.size(); ++i) {
        const double pplus = logistic(field_left + 2.0 * h_[i] + r_[i]);
        sigma[i] = uniform01(seed, 7, i) < pplus ? 1 : -1;
        field_left = sigma[i] * gamma_;
    }
    return sigma;
}

std::int64_t GibbsSampler::sample_mismatches(std::uint64_t seed, const std::vector<int>& ref) const {
    std::int64_t count = 0;
    double field_left = lb_;
    for (std::size_t i = 0; i < h_.size(); ++i) {
        const double pplus = logistic(field_left + 2.0 * h_[i] + r_[i]);
        const int s = uniform01(seed, 7, i) < pplus ? 1 : -1;
        if (s != ref[i]) ++count;
        field_left = s * gamma_;
    }
    return count;
}

std::vector<int> gibbs_sample(const FieldWindow& field, const ModelParams& p, int a, int b,
                              std::uint64_t seed) {
    return GibbsSampler(field, p, a * p.gamma, b * p.gamma).sample(seed);
}

FieldSource law_source(const DisorderLaw& law, std::uint64_t seed) {
    return [law, seed](std::int64_t lo, std::int64_t hi) { return sample_field(law, lo, hi, seed); };
}

FieldSource window_source(const FieldWindow& field) {
    return [field](std::int64_t lo, std::int64_t hi) {
        if (lo < field.first() || hi > field.last())
            throw std::out_of_range("requested sites outside the fixed field window");
        return field.slice(lo, hi);
    };
}

namespace {

// Runs the pair over h in the given order; returns (lower, upper).
template <class It>
SandwichValue sandwich_run(It begin, It end, double gamma, double tol) {
    double lo = -gamma;
    double hi = gamma;
    std::int64_t steps = 0;
    It it = begin;
    for (; it != end && lo != hi; ++it, ++steps) {
        lo = step_l(lo, *it, gamma);
        hi = step_l(hi, *it, gamma);
    }
    const bool merged = lo == hi;
    for (; it != end; ++it, ++steps) lo = step_l(lo, *it, gamma);
    if (merged) hi = lo;
    SandwichValue v;
    v.lower = std::min(lo, hi);
    v.upper = std::max(lo, hi);
    v.burn_in = steps;
    v.converged = v.upper - v.lower <= tol;
    return v;
}

}  // namespace

SandwichValue sandwich_l(const FieldWindow& field, const ModelParams& p, double tol) {
    auto v = sandwich_run(field.h.begin(), field.h.end(), p.gamma, tol);
    v.site = field.last();
    return v;
}

SandwichValue sandwich_r(const FieldWindow& field, const ModelParams& p, double tol) {
    auto v = sandwich_run(field.h.rbegin(), field.h.rend(), p.gamma, tol);
    v.site = field.first();
    return v;
}

namespace {

std::int64_t default_window(const ModelParams& p, double theta, double factor) {
    const double w = factor * p.gamma * p.gamma / (theta * theta);
    return std::max<std::int64_t>(16, static_cast<std::int64_t>(std::ceil(w)));
}

}  // namespace

SandwichValue sandwich_l_at(const FieldSource& src, std::int64_t n, const ModelParams& p,
                            const SandwichOptions& opt) {
    std::int64_t w = opt.initial > 0 ? opt.initial : default_window(p, opt.theta, 4.0);
    const std::int64_t wmax = opt.max_window > 0 ? opt.max_window : default_window(p, opt.theta, 1024.0);
    SandwichValue v;
    for (;;) {
        v = sandwich_l(src(n - w + 1, n), p, opt.tol_rel * p.gamma);
        if (v.converged || w >= wmax) return v;
        w = std::min(2 * w, wmax);
    }
}

SandwichValue sandwich_r_at(const FieldSource& src, std::int64_t n, const ModelParams& p,
                            const SandwichOptions& opt) {
    std::int64_t w = opt.initial > 0 ? opt.initial : default_window(p, opt.theta, 4.0);
    const std::int64_t wmax = opt.max_window > 0 ? opt.max_window : default_window(p, opt.theta, 1024.0);
    SandwichValue v;
    for (;;) {
        v = sandwich_r(src(n, n + w - 1), p, opt.tol_rel * p.gamma);
        if (v.converged || w >= wmax) return v;
        w = std::min(2 * w, wmax);
    }
}

}  // namespace rfic
