#include "rfic/disorder.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rfic {

std::uint64_t mix64(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t k = mix64(seed ^ 0x5851f42d4c957f2dULL);
    k = mix64(k ^ (stream * 0xd1342543de82ef95ULL));
    return mix64(k ^ counter);
}

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return (static_cast<double>(hash3(seed, stream, counter) >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return hash3(master, 0xa5a5a5a5ULL, index);
}

namespace {

std::uint64_t site_counter(std::int64_t index) { return static_cast<std::uint64_t>(index); }

double std_normal(std::uint64_t seed, std::uint64_t stream, std::int64_t index) {
    const double u1 = uniform01(seed, stream, site_counter(index));
    const double u2 = uniform01(seed, stream + 1, site_counter(index));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double fig2_sd() { return std::pow(2.0, -0.25); }

}  // namespace

DisorderLaw DisorderLaw::two_point(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("twopoint: amplitude must be > 0");
    DisorderLaw law;
    law.kind = LawKind::TwoPoint;
    law.a = a;
    return law;
}

DisorderLaw DisorderLaw::gauss(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("gauss: sigma must be > 0");
    DisorderLaw law;
    law.kind = LawKind::Gauss;
    law.a = sigma;
    return law;
}

DisorderLaw DisorderLaw::uniform(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("uniform: half-width must be > 0");
    DisorderLaw law;
    law.kind = LawKind::Uniform;
    law.a = a;
    return law;
}

DisorderLaw DisorderLaw::fig2mix() {
    DisorderLaw law;
    law.kind = LawKind::Fig2Mix;
    law.a = fig2_sd();
    return law;
}

DisorderLaw DisorderLaw::from_table(std::vector<std::pair<double, double>> atoms) {
    if (atoms.empty()) throw std::invalid_argument("table: no atoms");
    double wsum = 0.0;
    for (const auto& [x, w] : atoms) {
        if (!std::isfinite(x) || !(w > 0.0)) throw std::invalid_argument("table: atoms must be finite with weight > 0");
        wsum += w;
    }
    double mean = 0.0;
    double second = 0.0;
    for (auto& [x, w] : atoms) {
        w /= wsum;
        mean += x * w;
        second += x * x * w;
    }
    if (std::abs(mean) > 1e-12) {
        std::ostringstream os;
        os.precision(17);
        os << "table: law is not centered, computed mean = " << mean;
        throw std::invalid_argument(os.str());
    }
    if (!(second > 0.0)) throw std::invalid_argument("table: variance must be > 0");
    DisorderLaw law;
    law.kind = LawKind::Table;
    law.table = std::move(atoms);
    return law;
}

DisorderLaw DisorderLaw::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto number = [&](const std::string& s) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number '" + s + "' in law '" + spec + "'");
        }
        if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "' in law '" + spec + "'");
        return v;
    };
    if (name == "twopoint") return two_point(number(rest));
    if (name == "gauss") return gauss(number(rest));
    if (name == "uniform") return uniform(number(rest));
    if (name == "fig2mix") {
        if (!rest.empty()) throw std::invalid_argument("fig2mix takes no parameters");
        return fig2mix();
    }
    if (name == "table") {
        std::vector<std::pair<double, double>> atoms;
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto c = item.find(':');
            if (c == std::string::npos) throw std::invalid_argument("table entry '" + item + "' is not x:w");
            atoms.emplace_back(number(item.substr(0, c)), number(item.substr(c + 1)));
        }
        return from_table(std::move(atoms));
    }
    throw std::invalid_argument("unknown law '" + spec + "'");
}

double DisorderLaw::mean() const {
    if (kind != LawKind::Table) return 0.0;
    double m = 0.0;
    for (const auto& [x, w] : table) m += x * w;
    return m;
}

double DisorderLaw::variance() const {
    switch (kind) {
        case LawKind::TwoPoint: return a * a;
        case LawKind::Gauss: return a * a;
        case LawKind::Uniform: return a * a / 3.0;
        case LawKind::Fig2Mix: return 4.0 + 0.5 * a * a;
        case LawKind::Table: {
            const double m = mean();
            double v = 0.0;
            for (const auto& [x, w] : table) v += (x - m) * (x - m) * w;
            return v;
        }
    }
    return 0.0;
}

double DisorderLaw::theta() const { return std::sqrt(variance()); }

bool DisorderLaw::atomic() const {
    return kind == LawKind::TwoPoint || kind == LawKind::Table || kind == LawKind::Fig2Mix;
}

std::string DisorderLaw::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case LawKind::TwoPoint: os << "twopoint:" << a; break;
        case LawKind::Gauss: os << "gauss:" << a; break;
        case LawKind::Uniform: os << "uniform:" << a; break;
        case LawKind::Fig2Mix: os << "fig2mix"; break;
        case LawKind::Table: {
            os << "table:";
            for (std::size_t i = 0; i < table.size(); ++i) {
                if (i) os << ',';
                os << table[i].first << ':' << table[i].second;
            }
            break;
        }
    }
    return os.str();
}

double DisorderLaw::sample(std::uint64_t seed, std::int64_t index) const {
    switch (kind) {
        case LawKind::TwoPoint:
            return (hash3(seed, 0, site_counter(index)) >> 63) ? a : -a;
        case LawKind::Gauss:
            return a * std_normal(seed, 1, index);
        case LawKind::Uniform:
            return a * (2.0 * uniform01(seed, 0, site_counter(index)) - 1.0);
        case LawKind::Fig2Mix:
            if (hash3(seed, 0, site_counter(index)) >> 63) return 2.0 + a * std_normal(seed, 1, index);
            return -2.0;
        case LawKind::Table: {
            const double u = uniform01(seed, 0, site_counter(index));
            double c = 0.0;
            for (const auto& [x, w] : table) {
                c += w;
                if (u < c) return x;
            }
            return table.back().first;
        }
    }
    return 0.0;
}

ModelParams ModelParams::from_J(double J) {
    if (!(J > 0.0) || !std::isfinite(J)) throw std::invalid_argument("J must be > 0");
    ModelParams p;
    p.J = J;
    p.gamma = 2.0 * J;
    p.eps = std::exp(-p.gamma);
    return p;
}

ModelParams ModelParams::from_gamma(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("Gamma must be > 0");
    ModelParams p;
    p.J = gamma / 2.0;
    p.gamma = gamma;
    p.eps = std::exp(-gamma);
    return p;
}

FieldWindow::FieldWindow(std::int64_t origin_, std::vector<double> values)
    : origin(origin_), h(std::move(values)) {
    if (h.empty()) throw std::invalid_argument("field window must hold at least one site");
    for (double v : h)
        if (!std::isfinite(v)) throw std::invalid_argument("field values must be finite");
}

FieldWindow FieldWindow::slice(std::int64_t lo, std::int64_t hi) const {
    if (lo < first() || hi > last() || hi < lo - 1) throw std::out_of_range("slice outside field window");
    FieldWindow out;
    out.origin = lo;
    out.h.assign(h.begin() + (lo - origin), h.begin() + (hi - origin + 1));
    out.seed = seed;
    out.law = law;
    return out;
}

FieldWindow FieldWindow::negated() const {
    FieldWindow out = *this;
    for (double& v : out.h) v = -v;
    return out;
}

FieldWindow sample_field(const DisorderLaw& law, std::int64_t first, std::int64_t last,
                         std::uint64_t seed) {
    if (last < first) throw std::invalid_argument("sample_field: empty range");
    FieldWindow f;
    f.origin = first;
    f.seed = seed;
    f.law = law.describe();
    f.h.resize(static_cast<std::size_t>(last - first + 1));
    for (std::int64_t n = first; n <= last; ++n) f.h[static_cast<std::size_t>(n - first)] = law.sample(seed, n);
    return f;
}

WalkPath walk_from_field(const FieldWindow& field) {
    WalkPath w;
    w.origin = field.first() - 1;
    w.s.assign(field.size() + 1, 0.0);
    // Anchor index: 0 when the walk window covers it, else the window start.
    const std::int64_t anchor = (w.origin <= 0 && field.last() >= 0) ? 0 : w.origin;
    const std::size_t ia = static_cast<std::size_t>(anchor - w.origin);
    for (std::size_t i = ia + 1; i < w.s.size(); ++i) w.s[i] = w.s[i - 1] + field.h[i - 1];
    for (std::size_t i = ia; i-- > 0;) w.s[i] = w.s[i + 1] - field.h[i];
    return w;
}

WalkPath reverse_walk(const WalkPath& walk) {
    WalkPath r;
    r.origin = -walk.last();
    r.s.assign(walk.s.rbegin(), walk.s.rend());
    return r;
}

FieldWindow field_from_walk(const WalkPath& walk) {
    FieldWindow f;
    f.origin = walk.first() + 1;
    f.h.resize(walk.size() - 1);
    for (std::size_t i = 1; i < walk.size(); ++i) f.h[i - 1] = walk.s[i] - walk.s[i - 1];
    return f;
}

}  // namespace rfic
