#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rfic {

/// Counter-based hashing used for every random draw in the library.
/// A value depends only on (seed, stream, counter), never on call order.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);
/// Uniform in (0, 1), 53 bits.
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);
/// Seed for replica `index` derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

enum class LawKind { TwoPoint, Gauss, Uniform, Fig2Mix, Table };

/**
 * Centered law of a single field value h_n.
 *
 * Grammar accepted by parse(): `twopoint:a`, `gauss:sigma`, `uniform:a`,
 * `fig2mix`, `table:x1:w1,x2:w2,...`.
 */
struct DisorderLaw {
    LawKind kind = LawKind::Gauss;
    double a = 1.0;  ///< amplitude, std or half-width depending on kind
    std::vector<std::pair<double, double>> table;  ///< (atom, weight), weights normalized

    static DisorderLaw two_point(double a);
    static DisorderLaw gauss(double sigma);
    static DisorderLaw uniform(double a);
    static DisorderLaw fig2mix();
    /// Throws std::invalid_argument naming the computed mean if it is not 0 within 1e-12.
    static DisorderLaw from_table(std::vector<std::pair<double, double>> atoms);
    static DisorderLaw parse(const std::string& spec);

    double mean() const;
    double variance() const;
    double theta() const;  ///< standard deviation
    bool atomic() const;   ///< true when the law has atoms (ties have positive probability)
    std::string describe() const;

    /// Value at site `index` for `seed`; a pure function of its arguments.
    double sample(std::uint64_t seed, std::int64_t index) const;
};

struct ModelParams {
    double J = 1.0;
    double gamma = 2.0;
    double eps = 0.1353352832366127;

    static ModelParams from_J(double J);
    static ModelParams from_gamma(double gamma);
};

/// Field values h_n for n in [origin, origin + size).
struct FieldWindow {
    std::int64_t origin = 1;
    std::vector<double> h;
    std::uint64_t seed = 0;
    std::string law;  ///< provenance, empty for hand-made fields

    FieldWindow() = default;
    FieldWindow(std::int64_t origin_, std::vector<double> values);

    std::int64_t first() const { return origin; }
    std::int64_t last() const { return origin + static_cast<std::int64_t>(h.size()) - 1; }
    std::size_t size() const { return h.size(); }
    double at(std::int64_t n) const { return h[static_cast<std::size_t>(n - origin)]; }
    FieldWindow slice(std::int64_t lo, std::int64_t hi) const;
    FieldWindow negated() const;
};

FieldWindow sample_field(const DisorderLaw& law, std::int64_t first, std::int64_t last,
                         std::uint64_t seed);

/// S_n for n in [origin, origin + size). S_0 = 0 when 0 is in range,
/// otherwise the first stored entry is 0.
struct WalkPath {
    std::int64_t origin = 0;
    std::vector<double> s;

    std::int64_t first() const { return origin; }
    std::int64_t last() const { return origin + static_cast<std::int64_t>(s.size()) - 1; }
    std::size_t size() const { return s.size(); }
    double at(std::int64_t n) const { return s[static_cast<std::size_t>(n - origin)]; }
    bool contains(std::int64_t n) const { return n >= first() && n <= last(); }
};

/// Walk on [field.first() - 1, field.last()] following S_n = sum_{1..n} h for n > 0
/// and S_n = -sum_{n+1..0} h for n < 0.
WalkPath walk_from_field(const FieldWindow& field);
/// S^rv_n = S_{-n}.
WalkPath reverse_walk(const WalkPath& walk);
/// Increments h_n = S_n - S_{n-1} on [walk.first() + 1, walk.last()].
FieldWindow field_from_walk(const WalkPath& walk);

}  // namespace rfic
