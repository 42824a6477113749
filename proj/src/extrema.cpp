#include "rfic/extrema.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rfic {

ExtremaScanner::ExtremaScanner(double gamma, std::int64_t start, double s_start, bool decrease_first)
    : gamma_(gamma), n_(start), tracking_max_(decrease_first), best_(s_start), first_(start),
      last_(start), t_prev_(start) {
    if (!(gamma > 0.0)) throw std::invalid_argument("Gamma must be > 0");
}

std::optional<ExtremumRecord> ExtremaScanner::push(double s) {
    ++n_;
    if (tracking_max_) {
        if (s > best_) {
            best_ = s;
            first_ = last_ = n_;
        } else if (s == best_) {
            last_ = n_;
        } else if (best_ - s >= gamma_) {
            ExtremumRecord r{ExtremumKind::Max, first_, last_, best_, t_prev_, n_};
            tracking_max_ = false;
            best_ = s;
            first_ = last_ = t_prev_ = n_;
            return r;
        }
    } else {
        if (s < best_) {
            best_ = s;
            first_ = last_ = n_;
        } else if (s == best_) {
            last_ = n_;
        } else if (s - best_ >= gamma_) {
            ExtremumRecord r{ExtremumKind::Min, first_, last_, best_, t_prev_, n_};
            tracking_max_ = true;
            best_ = s;
            first_ = last_ = t_prev_ = n_;
            return r;
        }
    }
    return std::nullopt;
}

ExtremaSequence gamma_extrema_one_sided(const WalkPath& walk, double gamma, bool decrease_first) {
    ExtremaSequence seq;
    seq.decrease_first = decrease_first;
    ExtremaScanner sc(gamma, walk.first(), walk.s.front(), decrease_first);
    for (std::size_t i = 1; i < walk.size(); ++i)
        if (auto r = sc.push(walk.s[i])) seq.records.push_back(*r);
    seq.no_swing = seq.records.empty();
    return seq;
}

ExtremaSequence gamma_extrema_bruteforce(const WalkPath& walk, double gamma, bool decrease_first) {
    ExtremaSequence seq;
    seq.decrease_first = decrease_first;
    const std::int64_t end = walk.last();
    std::int64_t t = walk.first();
    bool want_max = decrease_first;
    for (;;) {
        // t_next = min{n > t : S^down_{t,n} >= Gamma} (or S^up for a minimum)
        std::int64_t tn = -1;
        for (std::int64_t n = t + 1; n <= end && tn < 0; ++n) {
            double swing = 0.0;
            for (std::int64_t i = t; i <= n; ++i)
                for (std::int64_t j = i; j <= n; ++j)
                    swing = std::max(swing, want_max ? walk.at(i) - walk.at(j) : walk.at(j) - walk.at(i));
            if (swing >= gamma) tn = n;
        }
        if (tn < 0) break;
        double best = walk.at(t);
        for (std::int64_t i = t; i <= tn; ++i)
            best = want_max ? std::max(best, walk.at(i)) : std::min(best, walk.at(i));
        std::int64_t u = -1;
        std::int64_t up = -1;
        for (std::int64_t i = t; i <= tn; ++i) {
            if (walk.at(i) == best) {
                if (u < 0) u = i;
                up = i;
            }
        }
        seq.records.push_back({want_max ? ExtremumKind::Max : ExtremumKind::Min, u, up, best, t, tn});
        t = tn;
        want_max = !want_max;
    }
    seq.no_swing = seq.records.empty();
    return seq;
}

std::vector<int> fisher_from_records(const std::vector<ExtremumRecord>& recs, double gamma,
                                     std::int64_t lo, std::int64_t hi) {
    std::vector<int> out(static_cast<std::size_t>(std::max<std::int64_t>(0, hi - lo + 1)), 0);
    for (std::size_t j = 0; j + 1 < recs.size(); ++j) {
        const auto& a = recs[j];
        const auto& b = recs[j + 1];
        const double height = b.level - a.level;
        int v = 0;
        if (a.kind == ExtremumKind::Min && height > gamma) v = 1;
        if (a.kind == ExtremumKind::Max && -height > gamma) v = -1;
        if (v == 0) continue;
        const std::int64_t from = std::max(a.u_plus + 1, lo);
        const std::int64_t to = std::min(b.u, hi);
        for (std::int64_t n = from; n <= to; ++n) out[static_cast<std::size_t>(n - lo)] = v;
    }
    return out;
}

std::vector<int> fisher_plus(const WalkPath& walk, const ExtremaSequence& seq, double gamma) {
    return fisher_from_records(seq.records, gamma, walk.first() + 1, walk.last());
}

namespace {

bool same_records(const std::vector<ExtremumRecord>& a, const std::vector<ExtremumRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].kind != b[i].kind || a[i].u != b[i].u || a[i].u_plus != b[i].u_plus ||
            a[i].level != b[i].level)
            return false;
    }
    return true;
}

std::int64_t scaled_window(double gamma, double theta, double factor) {
    return std::max<std::int64_t>(16, static_cast<std::int64_t>(std::ceil(factor * gamma * gamma / (theta * theta))));
}

}  // namespace

TwoSidedExtrema gamma_extrema_two_sided(const FieldSource& src, double gamma, std::int64_t lo,
                                        std::int64_t hi, const TwoSidedOptions& opt) {
    if (hi < lo) throw std::invalid_argument("two-sided extrema: empty target window");
    std::int64_t n = opt.initial > 0 ? opt.initial : scaled_window(gamma, opt.theta, 4.0);
    const std::int64_t nmax = opt.max_window > 0 ? opt.max_window : scaled_window(gamma, opt.theta, 1024.0);
    std::int64_t right = n;
    std::vector<ExtremumRecord> prev;
    std::int64_t prev_n = -1;
    int rounds = 0;
    for (;;) {
        const WalkPath walk = walk_from_field(src(lo - n, hi + right));
        const ExtremaSequence seq = gamma_extrema_one_sided(walk, gamma);
        const auto& recs = seq.records;
        const auto q = std::find_if(recs.begin(), recs.end(), [&](const ExtremumRecord& r) { return r.u > hi; });
        if (q == recs.end()) {
            if (right >= nmax)
                throw std::runtime_error("two-sided extrema: no record to the right of the target within the maximal window");
            right = std::min(2 * right, nmax);
            continue;
        }
        std::ptrdiff_t p = -1;
        for (std::size_t i = 0; i < recs.size() && recs[i].u < lo; ++i) p = static_cast<std::ptrdiff_t>(i);
        ++rounds;
        if (p >= 1) {
            std::vector<ExtremumRecord> cur(recs.begin() + p, q + 1);
            if (prev_n > 0 && same_records(cur, prev)) {
                TwoSidedExtrema out;
                out.records.assign(recs.begin() + 1, recs.end());
                std::ptrdiff_t zero = -1;
                for (std::size_t i = 0; i < out.records.size(); ++i)
                    if (out.records[i].u < 0) zero = static_cast<std::ptrdiff_t>(i);
                for (std::size_t i = 0; i < out.records.size(); ++i)
                    out.labels.push_back(static_cast<std::int64_t>(i) - zero);
                out.target_lo = lo;
                out.target_hi = hi;
                out.left_window = n;
                out.rounds = rounds;
                return out;
            }
            prev = std::move(cur);
            prev_n = n;
        }
        if (n >= nmax) {
            std::ostringstream os;
            os << "two-sided extrema did not stabilize: rounds with N=" << prev_n << " and N=" << n
               << " disagree on the target window";
            throw std::runtime_error(os.str());
        }
        n = std::min(2 * n, nmax);
    }
}

std::vector<int> fisher_z(const TwoSidedExtrema& ext, double gamma, std::int64_t lo, std::int64_t hi) {
    return fisher_from_records(ext.records, gamma, lo, hi);
}

std::vector<std::int64_t> ladder_times(const WalkPath& walk) {
    std::vector<std::int64_t> rho{walk.first()};
    for (std::int64_t n = walk.first() + 1; n <= walk.last(); ++n)
        if (walk.at(n) > walk.at(rho.back())) rho.push_back(n);
    return rho;
}

LadderResult ladder_epochs(const WalkPath& walk, double gamma) {
    if (walk.first() != 0) throw std::invalid_argument("ladder_epochs: walk must start at index 0");
    LadderResult res;
    res.rho.push_back(0);
    std::int64_t cur = 0;
    for (std::int64_t n = 1; n <= walk.last(); ++n) {
        if (walk.at(n) > walk.at(cur)) {
            cur = n;
            res.rho.push_back(n);
        } else if (res.K < 0 && walk.at(cur) - walk.at(n) >= gamma) {
            res.K = static_cast<std::int64_t>(res.rho.size()) - 1;
            res.u_down = cur;
        }
    }
    if (res.K < 0) throw std::runtime_error("ladder_epochs: window exhausted before a Gamma-decrease");
    const ExtremaSequence seq = gamma_extrema_one_sided(walk, gamma);
    res.u_first = seq.records.front().u;
    res.identity_holds = res.u_first == res.u_down;
    return res;
}

std::vector<NPGap> neveu_pitman_stats(const DisorderLaw& law, double gamma, std::size_t count,
                                      std::uint64_t seed) {
    std::vector<NPGap> out;
    out.reserve(count);
    ExtremaScanner sc(gamma, 0, 0.0);
    double s = 0.0;
    std::optional<ExtremumRecord> prev;
    std::int64_t index = 0;
    for (std::int64_t n = 1; out.size() < count; ++n) {
        s += law.sample(seed, n);
        if (auto r = sc.push(s)) {
            ++index;
            if (prev) out.push_back({index - 1, r->u - prev->u, std::abs(r->level - prev->level)});
            prev = r;
        }
    }
    return out;
}

const char* kind_name(ExtremumKind k) { return k == ExtremumKind::Max ? "max" : "min"; }

void write_extrema_csv(std::ostream& os, const std::vector<ExtremumRecord>& recs,
                       const std::vector<std::int64_t>& labels) {
    os << "index,kind,u,u_plus,level,t\n";
    char buf[64];
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        std::snprintf(buf, sizeof buf, "%.17g", r.level);
        os << (labels.empty() ? static_cast<std::int64_t>(i + 1) : labels[i]) << ',' << kind_name(r.kind) << ','
           << r.u << ',' << r.u_plus << ',' << buf << ',' << r.t << '\n';
    }
}

void write_fisher_csv(std::ostream& os, std::int64_t first, const std::vector<int>& s) {
    os << "n,s_F\n";
    for (std::size_t i = 0; i < s.size(); ++i) os << first + static_cast<std::int64_t>(i) << ',' << s[i] << '\n';
}

}  // namespace rfic
