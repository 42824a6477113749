#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace rfic {

using Rational = boost::rational<long long>;

/// Spins of sites l..r, each +1 or -1.
using SpinConfig = std::vector<int>;

inline constexpr std::size_t kMaxEnumerate = 20;
inline constexpr std::size_t kMaxStructure = 16;
inline constexpr double kMaxBand = 1e-9;

template <class Scalar>
struct EnumerationResult {
    double logZ = 0.0;
    std::vector<double> marginals;  ///< P(sigma_n = +1)
    Scalar max_h{};
    std::vector<SpinConfig> maximizers;
};

/// H^{ab}(sigma) = J (a s_1 + sum s_i s_{i+1} + s_N b) + sum h_i s_i.
template <class Scalar>
Scalar hamiltonian(const std::vector<Scalar>& h, Scalar J, int a, int b, const SpinConfig& s);

/// Direct summation over all 2^N configurations. Throws std::invalid_argument when N > 20.
/// Maximizers use exact comparison for Rational and a 1e-9 band for double.
template <class Scalar>
EnumerationResult<Scalar> enumerate(const std::vector<Scalar>& h, Scalar J, int a, int b);

/// A finite-volume Gamma-extremum seen as a domain wall between spins w and w+1
/// (walk index w in [0, N], spin 0 = a, spin N+1 = b).
struct Wall {
    std::size_t pos = 0;
    bool is_max = true;
};

struct StructureReport {
    bool match = false;
    std::size_t family_size = 0;
    std::size_t enumerated_size = 0;
    std::vector<Wall> walls;
    SpinConfig witness;  ///< a configuration in exactly one of the two sets
    std::string message;
};

/// Builds the maximizer family from the finite-volume Gamma-extrema with boundary
/// conditions (one representative per group of equal-level walls, optional removal of
/// non-adjacent stretches of height exactly Gamma) and compares it with enumeration.
template <class Scalar>
StructureReport check_maximizer_structure(const std::vector<Scalar>& h, Scalar gamma, int a, int b);

template <class Scalar>
struct SiteSign {
    int hat = 0;         ///< sign of l_hat + 2h + r_hat
    int enumerated = 0;  ///< +1 / -1 if all maximizers agree, else 0
    Scalar m{};
    bool agree() const { return hat == enumerated; }
};

/// Finite-volume reflected chains started from a Gamma at l-1 and b Gamma at r+1; `site` is 1-based.
template <class Scalar>
SiteSign<Scalar> maximizer_sign_site(const std::vector<Scalar>& h, Scalar gamma, int a, int b, std::size_t site);

/// All sites at once, sharing one enumeration.
template <class Scalar>
std::vector<SiteSign<Scalar>> maximizer_signs(const std::vector<Scalar>& h, Scalar gamma, int a, int b);

/// l_hat^{(a)} at site n of the window (chain from a Gamma at site 0).
template <class Scalar>
Scalar hat_l_finite(const std::vector<Scalar>& h, Scalar gamma, int a, std::size_t n);

struct BetaReport {
    std::vector<double> betas;
    std::vector<double> lhs;   ///< (1/beta)(log Z^{a+} - log Z^{a-}) at beta J, beta h on sites 1..n
    std::vector<double> gaps;  ///< |lhs - rhs|
    double rhs = 0.0;          ///< max H^{a+} - max H^{a-} on sites 1..n
    double hat = 0.0;          ///< l_hat^{(a)}_n
    bool identity_exact = false;
    bool monotone = false;
    bool final_below = false;  ///< last gap <= 1e-3
};

BetaReport beta_limit_check(const std::vector<double>& h, double J, int a, std::size_t n,
                            std::vector<double> betas = {});

}  // namespace rfic
