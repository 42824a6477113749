#include "rfic/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rfic/transfer.hpp"

namespace rfic {

namespace {

double to_double(double x) { return x; }
double to_double(const Rational& x) { return boost::rational_cast<double>(x); }

// Near-tie band for maximizers: exact for rationals.
bool near_max(double v, double best) { return v >= best - kMaxBand; }
bool near_max(const Rational& v, const Rational& best) { return v == best; }

template <class Scalar>
Scalar clamp_step(Scalar v, Scalar h, Scalar gamma) {
    const Scalar x = v + h + h;
    if (x > gamma) return gamma;
    if (x < -gamma) return -gamma;
    return x;
}

template <class Scalar>
int sign_of(const Scalar& x) {
    const Scalar zero(0);
    return (x > zero) - (x < zero);
}

SpinConfig spins_of(std::uint64_t mask, std::size_t n) {
    SpinConfig s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> i) & 1u ? 1 : -1;
    return s;
}

}  // namespace

template <class Scalar>
Scalar hamiltonian(const std::vector<Scalar>& h, Scalar J, int a, int b, const SpinConfig& s) {
    if (s.size() != h.size()) throw std::invalid_argument("hamiltonian: size mismatch");
    if (h.empty()) return J * Scalar(a * b);
    Scalar bonds(a * s.front() + s.back() * b);
    Scalar field(0);
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (i + 1 < h.size()) bonds += Scalar(s[i] * s[i + 1]);
        field += s[i] > 0 ? h[i] : -h[i];
    }
    return J * bonds + field;
}

template <class Scalar>
EnumerationResult<Scalar> enumerate(const std::vector<Scalar>& h, Scalar J, int a, int b) {
    const std::size_t n = h.size();
    if (n > kMaxEnumerate) {
        std::ostringstream os;
        os << "enumerate: window of " << n << " sites exceeds the limit of " << kMaxEnumerate;
        throw std::invalid_argument(os.str());
    }
    const std::uint64_t count = std::uint64_t{1} << n;
    std::vector<Scalar> H(count);
    for (std::uint64_t m = 0; m < count; ++m) H[m] = hamiltonian(h, J, a, b, spins_of(m, n));
    EnumerationResult<Scalar> res;
    res.max_h = *std::max_element(H.begin(), H.end());
    const double top = to_double(res.max_h);
    double total = 0.0;
    std::vector<double> plus(n, 0.0);
    for (std::uint64_t m = 0; m < count; ++m) {
        const double w = std::exp(to_double(H[m]) - top);
        total += w;
        for (std::size_t i = 0; i < n; ++i)
            if ((m >> i) & 1u) plus[i] += w;
        if (near_max(H[m], res.max_h)) res.maximizers.push_back(spins_of(m, n));
    }
    res.logZ = top + std::log(total);
    res.marginals.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.marginals[i] = plus[i] / total;
    return res;
}

namespace {

// Wall-max at w in the walk S_0..S_N: an interval around w where S_w is maximal, closed on
// each side either by a drop of at least Gamma or by the boundary spin (+1 on the left, -1 on the right).
template <class Scalar>
bool wall_max(const std::vector<Scalar>& S, Scalar gamma, int a, int b, std::size_t w) {
    const std::size_t N = S.size() - 1;
    bool left = false;
    for (std::size_t k = w + 1; k-- > 0;) {
        if (S[k] > S[w]) break;
        if (S[k] <= S[w] - gamma || (k == 0 && a == 1)) {
            left = true;
            break;
        }
    }
    if (!left) return false;
    for (std::size_t k = w; k <= N; ++k) {
        if (S[k] > S[w]) return false;
        if (S[k] <= S[w] - gamma || (k == N && b == -1)) return true;
    }
    return false;
}

template <class Scalar>
std::vector<Wall> finite_walls(const std::vector<Scalar>& S, Scalar gamma, int a, int b) {
    std::vector<Scalar> neg(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) neg[i] = -S[i];
    std::vector<Wall> out;
    for (std::size_t w = 0; w < S.size(); ++w) {
        const bool mx = wall_max(S, gamma, a, b, w);
        const bool mn = wall_max(neg, gamma, -a, -b, w);
        if (mx && mn) throw std::logic_error("a wall cannot be both a maximum and a minimum");
        if (mx || mn) out.push_back({w, mx});
    }
    return out;
}

}  // namespace

template <class Scalar>
StructureReport check_maximizer_structure(const std::vector<Scalar>& h, Scalar gamma, int a, int b) {
    const std::size_t n = h.size();
    if (n > kMaxStructure) {
        std::ostringstream os;
        os << "check_maximizer_structure: window of " << n << " sites exceeds the limit of " << kMaxStructure;
        throw std::invalid_argument(os.str());
    }
    StructureReport rep;
    std::vector<Scalar> S(n + 1, Scalar(0));
    for (std::size_t i = 1; i <= n; ++i) S[i] = S[i - 1] + h[i - 1];
    rep.walls = finite_walls(S, gamma, a, b);

    std::vector<std::vector<std::size_t>> groups;
    std::vector<bool> group_max;
    for (const Wall& w : rep.walls) {
        if (groups.empty() || group_max.back() != w.is_max) {
            groups.push_back({});
            group_max.push_back(w.is_max);
        } else if (S[w.pos] != S[groups.back().front()]) {
            throw std::logic_error("adjacent walls of the same type at different levels");
        }
        groups.back().push_back(w.pos);
    }
    const std::size_t g = groups.size();
    std::vector<std::size_t> exact;  // stretch i joins groups i and i+1
    for (std::size_t i = 0; i + 1 < g; ++i) {
        const Scalar d = S[groups[i + 1].front()] - S[groups[i].front()];
        if (d == gamma || d == -gamma) exact.push_back(i);
    }

    std::set<SpinConfig> family;
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << exact.size()); ++sub) {
        std::vector<bool> removed(g, false);
        bool ok = true;
        for (std::size_t k = 0; k < exact.size() && ok; ++k) {
            if (!((sub >> k) & 1u)) continue;
            const std::size_t i = exact[k];
            if (removed[i] || removed[i + 1]) ok = false;
            removed[i] = removed[i + 1] = true;
        }
        if (!ok) continue;
        std::vector<std::size_t> live;
        for (std::size_t i = 0; i < g; ++i)
            if (!removed[i]) live.push_back(i);
        std::vector<std::size_t> pick(live.size(), 0);
        for (;;) {
            SpinConfig s(n);
            int sign = a;
            std::size_t next = 0;
            bool consistent = true;
            for (std::size_t site = 1; site <= n + 1; ++site) {
                // walls at walk index site-1 sit between spins site-1 and site
                while (next < live.size() && groups[live[next]][pick[next]] == site - 1) {
                    if ((sign == 1) != group_max[live[next]]) consistent = false;
                    sign = -sign;
                    ++next;
                }
                if (site <= n) s[site - 1] = sign;
            }
            if (!consistent || sign != b) {
                std::ostringstream os;
                os << "Gamma-extrema construction is inconsistent with the boundary conditions (a=" << a
                   << ", b=" << b << ")";
                rep.message = os.str();
                rep.witness = s;
                return rep;
            }
            family.insert(std::move(s));
            std::size_t k = 0;
            for (; k < live.size(); ++k) {
                if (++pick[k] < groups[live[k]].size()) break;
                pick[k] = 0;
            }
            if (k == live.size()) break;
        }
    }

    const auto en = enumerate(h, gamma / Scalar(2), a, b);
    const std::set<SpinConfig> truth(en.maximizers.begin(), en.maximizers.end());
    rep.family_size = family.size();
    rep.enumerated_size = truth.size();
    rep.match = family == truth;
    if (!rep.match) {
        for (const auto& s : family)
            if (!truth.count(s)) {
                rep.witness = s;
                rep.message = "configuration in the constructed family is not a maximizer";
                return rep;
            }
        for (const auto& s : truth)
            if (!family.count(s)) {
                rep.witness = s;
                rep.message = "maximizer missing from the constructed family";
                return rep;
            }
    }
    return rep;
}

template <class Scalar>
Scalar hat_l_finite(const std::vector<Scalar>& h, Scalar gamma, int a, std::size_t n) {
    Scalar v = gamma * Scalar(a);
    for (std::size_t i = 0; i < n; ++i) v = clamp_step(v, h[i], gamma);
    return v;
}

namespace {

template <class Scalar>
std::vector<int> enumerated_pattern(const EnumerationResult<Scalar>& en, std::size_t n) {
    std::vector<int> out(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        bool all_plus = true;
        bool all_minus = true;
        for (const auto& s : en.maximizers) {
            all_plus = all_plus && s[i] == 1;
            all_minus = all_minus && s[i] == -1;
        }
        out[i] = all_plus ? 1 : all_minus ? -1 : 0;
    }
    return out;
}

template <class Scalar>
int band_sign(const Scalar& m) {
    if constexpr (std::is_same_v<Scalar, double>) {
        if (std::abs(m) <= kMaxBand) return 0;
    }
    return sign_of(m);
}

}  // namespace

template <class Scalar>
std::vector<SiteSign<Scalar>> maximizer_signs(const std::vector<Scalar>& h, Scalar gamma, int a, int b) {
    const std::size_t n = h.size();
    if (n > kMaxStructure) throw std::invalid_argument("maximizer_signs: window longer than 16 sites");
    const auto pattern = enumerated_pattern(enumerate(h, gamma / Scalar(2), a, b), n);
    // l_hat at sites 0..n-1 (forward), r_hat at sites 2..n+1 (backward)
    std::vector<Scalar> l(n + 1), r(n + 2);
    l[0] = gamma * Scalar(a);
    for (std::size_t i = 1; i <= n; ++i) l[i] = clamp_step(l[i - 1], h[i - 1], gamma);
    r[n + 1] = gamma * Scalar(b);
    for (std::size_t i = n; i >= 1; --i) r[i] = clamp_step(r[i + 1], h[i - 1], gamma);
    std::vector<SiteSign<Scalar>> out(n);
    for (std::size_t i = 1; i <= n; ++i) {
        auto& o = out[i - 1];
        o.m = l[i - 1] + h[i - 1] + h[i - 1] + r[i + 1];
        o.hat = band_sign(o.m);
        o.enumerated = pattern[i - 1];
    }
    return out;
}

template <class Scalar>
SiteSign<Scalar> maximizer_sign_site(const std::vector<Scalar>& h, Scalar gamma, int a, int b, std::size_t site) {
    if (site < 1 || site > h.size()) throw std::out_of_range("maximizer_sign_site: site outside the window");
    const auto all = maximizer_signs(h, gamma, a, b);
    if (!all[site - 1].agree()) {
        std::ostringstream os;
        os << "maximizer_sign_site: reflected-chain sign " << all[site - 1].hat << " disagrees with enumeration "
           << all[site - 1].enumerated << " at site " << site;
        throw std::logic_error(os.str());
    }
    return all[site - 1];
}

BetaReport beta_limit_check(const std::vector<double>& h, double J, int a, std::size_t n, std::vector<double> betas) {
    if (n > h.size() || n > kMaxStructure) throw std::invalid_argument("beta_limit_check: site outside the window or window too long");
    if (betas.empty())
        for (double b = 1.0; b <= 256.0; b *= 2.0) betas.push_back(b);
    if (!std::is_sorted(betas.begin(), betas.end())) throw std::invalid_argument("beta_limit_check: schedule must increase");
    const std::vector<double> head(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(n));
    BetaReport rep;
    rep.betas = betas;
    rep.rhs = enumerate(head, J, a, 1).max_h - enumerate(head, J, a, -1).max_h;
    rep.hat = hat_l_finite(head, 2.0 * J, a, n);
    rep.identity_exact = std::abs(rep.rhs - rep.hat) <= 1e-12 * std::max(1.0, std::abs(rep.rhs));
    for (double beta : betas) {
        std::vector<double> bh(head);
        for (double& x : bh) x *= beta;
        const double v = (log_partition(bh, beta * J, a, 1) - log_partition(bh, beta * J, a, -1)) / beta;
        rep.lhs.push_back(v);
        rep.gaps.push_back(std::abs(v - rep.rhs));
    }
    rep.monotone = true;
    for (std::size_t i = 1; i < rep.gaps.size(); ++i)
        if (rep.gaps[i] > rep.gaps[i - 1] + 1e-12) rep.monotone = false;
    rep.final_below = rep.gaps.back() <= 1e-3;
    return rep;
}

template double hamiltonian<double>(const std::vector<double>&, double, int, int, const SpinConfig&);
template Rational hamiltonian<Rational>(const std::vector<Rational>&, Rational, int, int, const SpinConfig&);
template EnumerationResult<double> enumerate<double>(const std::vector<double>&, double, int, int);
template EnumerationResult<Rational> enumerate<Rational>(const std::vector<Rational>&, Rational, int, int);
template StructureReport check_maximizer_structure<double>(const std::vector<double>&, double, int, int);
template StructureReport check_maximizer_structure<Rational>(const std::vector<Rational>&, Rational, int, int);
template SiteSign<double> maximizer_sign_site<double>(const std::vector<double>&, double, int, int, std::size_t);
template SiteSign<Rational> maximizer_sign_site<Rational>(const std::vector<Rational>&, Rational, int, int, std::size_t);
template std::vector<SiteSign<double>> maximizer_signs<double>(const std::vector<double>&, double, int, int);
template std::vector<SiteSign<Rational>> maximizer_signs<Rational>(const std::vector<Rational>&, Rational, int, int);
template double hat_l_finite<double>(const std::vector<double>&, double, int, std::size_t);
template Rational hat_l_finite<Rational>(const std::vector<Rational>&, Rational, int, std::size_t);

}  // namespace rfic
