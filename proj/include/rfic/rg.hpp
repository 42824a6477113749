#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rfic/disorder.hpp"
#include "rfic/transfer.hpp"

namespace rfic {

struct Bond {
    std::int64_t eta = 1;
    double delta = 0.0;
    bool operator==(const Bond&) const = default;
};

/// Alternating-sign bonds starting at tau_0 = origin.
struct BondChain {
    std::int64_t origin = 0;
    std::vector<Bond> bonds;
    double threshold = 0.0;  ///< Gamma reached by the decimation, 0 before any run

    std::size_t size() const { return bonds.size(); }
    /// Cumulative breakpoints tau_1, ..., tau_N.
    std::vector<std::int64_t> breakpoints() const;
    /// Smallest |delta| over the interior bonds 2..N-1; +inf when N < 3.
    double interior_min() const;
};

/// Maximal same-sign runs of the field, sign(0) := +1. The field must start at site 1.
/// A run cut by the window end is kept as a truncated last bond.
BondChain coarse_grain(const FieldWindow& field);
/// One decimation: merge the smallest interior bond (ties: smallest j) with its two neighbours.
/// Throws std::invalid_argument when N < 3.
BondChain rg_step(const BondChain& chain);

struct RGResult {
    BondChain chain;
    std::size_t n_gamma = 0;
    std::size_t steps = 0;
};

/// Iterates R while N >= 3 and the interior minimum is below Gamma.
RGResult rg_run(const BondChain& chain, double gamma);
/// Same, with bond heights read from the walk so merged heights are exact walk differences.
RGResult rg_run(const FieldWindow& field, double gamma);

struct RGReport {
    std::int64_t n_sites = 0;
    std::size_t n_bonds = 0;
    std::size_t n_gamma = 0;
    std::size_t j_n = 0;                 ///< #{j : u_j <= N}
    std::size_t j_certified = 0;
    bool containment = false;            ///< every u_j, j <= j(N), is a breakpoint
    bool bracket = false;                ///< j(N) <= N_Gamma <= j(N) + 3
    bool containment_certified = false;  ///< same for the certified extrema only
    bool bracket_certified = false;
    bool spurious_positions_ok = false;
    bool atomic_law = false;
    std::vector<std::int64_t> breakpoints;
    std::vector<std::int64_t> extrema;    ///< u_j <= N
    /// Extrema the window itself decides: confirmed at t_j <= N and, for j = 1, preceded by
    /// a drop (or rise) of at least Gamma inside [0, u_1].
    std::vector<std::int64_t> certified;
    std::vector<std::int64_t> missed;     ///< extrema that are not breakpoints
    std::vector<std::int64_t> spurious;
    std::string to_json() const;
};

/// Field on [1, n] from `src`; extrema are confirmed by extending the walk to the right.
/// Throws std::logic_error if a certified extremum is lost on an atomless law.
RGReport rg_vs_extrema(const FieldSource& src, std::int64_t n, double gamma, bool atomic_law = false);

void write_chain_csv(std::ostream& os, const BondChain& chain);

}  // namespace rfic
