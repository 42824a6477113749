#include "rfic/rg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

#include "rfic/extrema.hpp"

namespace rfic {

std::vector<std::int64_t> BondChain::breakpoints() const {
    std::vector<std::int64_t> out;
    out.reserve(bonds.size());
    std::int64_t tau = origin;
    for (const auto& b : bonds) out.push_back(tau += b.eta);
    return out;
}

double BondChain::interior_min() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j + 1 < bonds.size(); ++j) m = std::min(m, std::abs(bonds[j].delta));
    return m;
}

namespace {

int run_sign(double h) { return h >= 0.0 ? 1 : -1; }

// Breakpoint positions tau_0..tau_N with the walk level at each of them.
struct Nodes {
    std::vector<std::int64_t> tau;
    std::vector<double> level;
};

Nodes nodes_from_field(const FieldWindow& field) {
    if (field.first() != 1) throw std::invalid_argument("coarse_grain: the field window must start at site 1");
    Nodes nd;
    nd.tau.push_back(0);
    nd.level.push_back(0.0);
    double s = 0.0;
    for (std::int64_t n = 1; n <= field.last(); ++n) {
        s += field.at(n);
        if (n == field.last() || run_sign(field.at(n)) != run_sign(field.at(n + 1))) {
            nd.tau.push_back(n);
            nd.level.push_back(s);
        }
    }
    return nd;
}

Nodes nodes_from_chain(const BondChain& c) {
    Nodes nd;
    nd.tau.push_back(c.origin);
    nd.level.push_back(0.0);
    for (const auto& b : c.bonds) {
        nd.tau.push_back(nd.tau.back() + b.eta);
        nd.level.push_back(nd.level.back() + b.delta);
    }
    return nd;
}

BondChain chain_from_nodes(const std::vector<std::int64_t>& tau, const std::vector<double>& level) {
    BondChain c;
    c.origin = tau.front();
    for (std::size_t i = 1; i < tau.size(); ++i) c.bonds.push_back({tau[i] - tau[i - 1], level[i] - level[i - 1]});
    return c;
}

// Decimation on a doubly linked list of breakpoints. Merging bond J removes its two
// endpoints; queue entries are checked against the live list when popped.
RGResult decimate(const Nodes& nd, double gamma, const BondChain* original) {
    if (!(gamma > 0.0)) throw std::invalid_argument("rg_run: Gamma must be > 0");
    const std::size_t m = nd.tau.size();
    std::vector<std::ptrdiff_t> prev(m), next(m);
    std::vector<char> alive(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
        prev[i] = static_cast<std::ptrdiff_t>(i) - 1;
        next[i] = static_cast<std::ptrdiff_t>(i) + 1;
    }
    const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(m) - 1;
    auto height = [&](std::ptrdiff_t a, std::ptrdiff_t b) {
        return std::abs(nd.level[static_cast<std::size_t>(b)] - nd.level[static_cast<std::size_t>(a)]);
    };
    using Entry = std::tuple<double, std::ptrdiff_t, std::ptrdiff_t>;  // (|delta|, left node, right node)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    auto interior = [&](std::ptrdiff_t a, std::ptrdiff_t b) { return a != 0 && b != last; };
    for (std::ptrdiff_t i = 1; i + 2 <= last; ++i) pq.emplace(height(i, i + 1), i, i + 1);

    std::size_t count = m - 1;
    RGResult res;
    while (count >= 3 && !pq.empty()) {
        const auto [d, a, b] = pq.top();
        if (!alive[static_cast<std::size_t>(a)] || !alive[static_cast<std::size_t>(b)] ||
            next[static_cast<std::size_t>(a)] != b) {
            pq.pop();
            continue;
        }
        if (!(d < gamma)) break;
        pq.pop();
        const std::ptrdiff_t pa = prev[static_cast<std::size_t>(a)];
        const std::ptrdiff_t nb = next[static_cast<std::size_t>(b)];
        alive[static_cast<std::size_t>(a)] = alive[static_cast<std::size_t>(b)] = 0;
        next[static_cast<std::size_t>(pa)] = nb;
        prev[static_cast<std::size_t>(nb)] = pa;
        if (interior(pa, nb)) pq.emplace(height(pa, nb), pa, nb);
        count -= 2;
        ++res.steps;
    }
    std::vector<std::int64_t> tau;
    std::vector<double> level;
    for (std::ptrdiff_t i = 0; i <= last && i >= 0; i = next[static_cast<std::size_t>(i)]) {
        tau.push_back(nd.tau[static_cast<std::size_t>(i)]);
        level.push_back(nd.level[static_cast<std::size_t>(i)]);
        if (i == last) break;
    }
    if (original != nullptr && res.steps == 0) {
        res.chain = *original;
    } else {
        res.chain = chain_from_nodes(tau, level);
    }
    res.chain.threshold = gamma;
    res.n_gamma = res.chain.size();
    return res;
}

}  // namespace

BondChain coarse_grain(const FieldWindow& field) {
    const Nodes nd = nodes_from_field(field);
    return chain_from_nodes(nd.tau, nd.level);
}

BondChain rg_step(const BondChain& chain) {
    const std::size_t n = chain.size();
    if (n < 3) throw std::invalid_argument("rg_step: needs at least 3 bonds");
    std::size_t J = 1;
    for (std::size_t j = 2; j + 1 < n; ++j)
        if (std::abs(chain.bonds[j].delta) < std::abs(chain.bonds[J].delta)) J = j;
    BondChain out;
    out.origin = chain.origin;
    out.threshold = chain.threshold;
    out.bonds.assign(chain.bonds.begin(), chain.bonds.begin() + static_cast<std::ptrdiff_t>(J - 1));
    const Bond& a = chain.bonds[J - 1];
    const Bond& b = chain.bonds[J];
    const Bond& c = chain.bonds[J + 1];
    out.bonds.push_back({a.eta + b.eta + c.eta, a.delta + b.delta + c.delta});
    out.bonds.insert(out.bonds.end(), chain.bonds.begin() + static_cast<std::ptrdiff_t>(J + 2), chain.bonds.end());
    return out;
}

RGResult rg_run(const BondChain& chain, double gamma) { return decimate(nodes_from_chain(chain), gamma, &chain); }

RGResult rg_run(const FieldWindow& field, double gamma) { return decimate(nodes_from_field(field), gamma, nullptr); }

RGReport rg_vs_extrema(const FieldSource& src, std::int64_t n, double gamma, bool atomic_law) {
    if (n < 1) throw std::invalid_argument("rg_vs_extrema: empty window");
    RGReport rep;
    rep.n_sites = n;
    rep.atomic_law = atomic_law;
    const FieldWindow field = src(1, n);
    rep.n_bonds = coarse_grain(field).size();
    const RGResult rg = rg_run(field, gamma);
    rep.n_gamma = rg.n_gamma;
    rep.breakpoints = rg.chain.breakpoints();
    const std::int64_t tau_n = rep.breakpoints.back();

    // extend to the right until a record beyond tau_N is confirmed, so j(N) is final
    std::vector<ExtremumRecord> recs;
    WalkPath walk;
    for (std::int64_t right = std::max<std::int64_t>(2 * n, 64);; right *= 2) {
        walk = walk_from_field(src(1, right));
        recs = gamma_extrema_one_sided(walk, gamma).records;
        if (!recs.empty() && recs.back().u > tau_n) break;
        if (right > (std::int64_t{1} << 40)) throw std::runtime_error("rg_vs_extrema: no extremum beyond the window");
    }
    const auto is_breakpoint = [&](std::int64_t u) {
        return std::binary_search(rep.breakpoints.begin(), rep.breakpoints.end(), u);
    };
    for (std::size_t j = 0; j < recs.size() && recs[j].u <= tau_n; ++j) {
        const auto& r = recs[j];
        rep.extrema.push_back(r.u);
        if (!is_breakpoint(r.u)) rep.missed.push_back(r.u);
        bool certified = r.t <= tau_n;
        if (j == 0 && certified) {
            // the scan starts at 0, so u_1 need not have a Gamma-swing on its left
            double lo = walk.at(0), hi = walk.at(0);
            for (std::int64_t k = 0; k <= r.u; ++k) {
                lo = std::min(lo, walk.at(k));
                hi = std::max(hi, walk.at(k));
            }
            const double swing = r.kind == ExtremumKind::Max ? r.level - lo : hi - r.level;
            certified = swing >= gamma;
        }
        if (certified) rep.certified.push_back(r.u);
    }
    rep.j_n = rep.extrema.size();
    rep.j_certified = rep.certified.size();
    rep.containment = rep.missed.empty();
    rep.containment_certified = std::all_of(rep.certified.begin(), rep.certified.end(), is_breakpoint);
    rep.bracket = rep.j_n <= rep.n_gamma && rep.n_gamma <= rep.j_n + 3;
    rep.bracket_certified = rep.j_certified <= rep.n_gamma && rep.n_gamma <= rep.j_certified + 3;

    const std::size_t nb = rep.breakpoints.size();
    rep.spurious_positions_ok = true;
    for (std::size_t i = 0; i < nb; ++i) {
        const std::int64_t tau = rep.breakpoints[i];
        if (std::binary_search(rep.extrema.begin(), rep.extrema.end(), tau)) continue;
        rep.spurious.push_back(tau);
        if (!(i == 0 || i + 2 >= nb)) rep.spurious_positions_ok = false;
    }
    if (!atomic_law && !rep.containment_certified)
        throw std::logic_error("rg_vs_extrema: a certified extremum was decimated on an atomless law");
    return rep;
}

std::string RGReport::to_json() const {
    nlohmann::json j;
    j["n_sites"] = n_sites;
    j["n_bonds"] = n_bonds;
    j["n_gamma"] = n_gamma;
    j["j_n"] = j_n;
    j["j_certified"] = j_certified;
    j["containment"] = containment;
    j["bracket"] = bracket;
    j["containment_certified"] = containment_certified;
    j["bracket_certified"] = bracket_certified;
    j["missed"] = missed;
    j["spurious_count"] = spurious.size();
    j["spurious"] = spurious;
    j["spurious_positions_ok"] = spurious_positions_ok;
    j["breakpoints"] = breakpoints;
    j["extrema"] = extrema;
    j["certified"] = certified;
    if (atomic_law) j["warning"] = "atomic law: outside the atomless hypothesis, containment not guaranteed";
    return j.dump(2);
}

void write_chain_csv(std::ostream& os, const BondChain& chain) {
    os << "j,tau,eta,delta\n";
    std::int64_t tau = chain.origin;
    char buf[64];
    for (std::size_t j = 0; j < chain.bonds.size(); ++j) {
        tau += chain.bonds[j].eta;
        std::snprintf(buf, sizeof buf, "%.17g", chain.bonds[j].delta);
        os << j + 1 << ',' << tau << ',' << chain.bonds[j].eta << ',' << buf << '\n';
    }
}

}  // namespace rfic
