#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rfic/disorder.hpp"
#include "rfic/transfer.hpp"

namespace rfic {

enum class HatProvenance { Coalescence, ClosedForm };

struct HatState {
    double value = 0.0;
    std::int64_t site = 0;
    HatProvenance provenance = HatProvenance::ClosedForm;
};

/// Clamp of value + 2h to [-Gamma, Gamma].
double step_hat(double value, double h, double gamma);

/// Chains from -Gamma and +Gamma at field.first() - 1; value at field.last().
/// Throws std::runtime_error when no Gamma-swing occurred (chains still differ).
HatState hat_l_from_coalescence(const FieldWindow& field, double gamma);
/// Backward chains from field.last() + 1; value at field.first().
HatState hat_r_from_coalescence(const FieldWindow& field, double gamma);

/// Closed form for l_hat_n from the walk to the left of n. Throws std::runtime_error
/// if the walk does not reach both backward stopping times' decision.
HatState hat_l_explicit(const WalkPath& walk, double gamma, std::int64_t n);
/// Closed form for r_hat_n from the walk to the right of n - 1.
HatState hat_r_explicit(const WalkPath& walk, double gamma, std::int64_t n);

/// Window-growing wrappers: windows double from 4 Gamma^2 until the construction succeeds.
HatState hat_l_explicit_at(const FieldSource& src, double gamma, std::int64_t n);
HatState hat_r_explicit_at(const FieldSource& src, double gamma, std::int64_t n);
HatState hat_l_coalescence_at(const FieldSource& src, double gamma, std::int64_t n);
HatState hat_r_coalescence_at(const FieldSource& src, double gamma, std::int64_t n);

struct HatSign {
    double m = 0.0;
    int s = 0;  ///< strict sign, sign(0) = 0
};

/// m_hat_n = l_hat_{n-1} + 2 h_n + r_hat_{n+1} from the closed forms.
HatSign hat_m_and_sign(const WalkPath& walk, double gamma, std::int64_t n);

/// l_hat, r_hat, m_hat and sign on [lo, hi], iterated from exact coalescence.
struct HatSeries {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::vector<double> l_hat;  ///< sites lo-1 .. hi
    std::vector<double> r_hat;  ///< sites lo .. hi+1
    std::vector<double> m_hat;  ///< sites lo .. hi
    std::vector<int> sign;      ///< sites lo .. hi
};

/// `field` must extend far enough on both sides of [lo, hi] for both chains to coalesce.
HatSeries hat_series(const FieldWindow& field, double gamma, std::int64_t lo, std::int64_t hi);
void write_hat_csv(std::ostream& os, const HatSeries& series);

struct ProximityReport {
    std::vector<double> gaps;   ///< |l_0 - l_hat_0| per kept replica
    std::vector<double> l0;
    std::vector<double> lhat0;
    double threshold = 0.0;     ///< log log Gamma + C
    double exceed_fraction = 0.0;
    std::int64_t kept = 0;
    std::int64_t dropped = 0;
};

ProximityReport proximity_sample(const DisorderLaw& law, double gamma, std::size_t replicas,
                                 std::uint64_t seed, double c_threshold = 10.0, unsigned threads = 1,
                                 double tol_rel = 1e-8);

}  // namespace rfic
