#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "rfic/disorder.hpp"

namespace rfic {

/// T(h) and Q in log domain.
struct TransferPair {
    std::array<double, 2> logT;                  ///< (h, -h)
    std::array<std::array<double, 2>, 2> logQ;   ///< index 0 is +1, index 1 is -1
    static TransferPair make(double h, double J);
};

struct ChainState {
    double value = 0.0;
    std::int64_t site = 0;
};

struct SandwichValue {
    double lower = 0.0;
    double upper = 0.0;
    std::int64_t site = 0;
    std::int64_t burn_in = 0;  ///< number of chain steps used
    bool converged = false;

    double mid() const { return 0.5 * (lower + upper); }
    double gap() const { return upper - lower; }
};

double log_sum_exp(double x, double y);
double softplus(double x);  ///< log(1 + e^x), stable
double logistic(double x);  ///< 1 / (1 + e^{-x})

/// log Z^{ab}_{l,r,J,h}; an empty field returns J a b.
double log_partition(const FieldWindow& field, const ModelParams& p, int a, int b);
/// Same quantity for a window [first, first + h.size()), with a flat vector.
double log_partition(const std::vector<double>& h, double J, int a, int b);

/// f_h(y) = b_Gamma(y + 2h).
double step_l(double y, double h, double gamma);
inline ChainState step_l(const ChainState& s, double h, const ModelParams& p) {
    return {step_l(s.value, h, p.gamma), s.site + 1};
}

/// l values on [field.first() - 1, field.last()], the first entry being `init`.
std::vector<double> run_l(const FieldWindow& field, double init, const ModelParams& p);
/// r values on [field.first(), field.last() + 1], the last entry being `init`.
/// Computed as the l chain of the mirrored field g_k = h_{1-k}.
std::vector<double> run_r(const FieldWindow& field, double init, const ModelParams& p);

double gibbs_marginal(double l, double h, double r);
/// P(sigma_n != s) given m = l + 2h + r, for s in {-1, 0, +1}.
double mismatch_probability(int s, double m);

struct MAndS {
    double m;
    int s;
};
/// m = l + 2h + r, s = +1 iff m >= 0.
MAndS m_and_sm(double l, double h, double r);

/// P(sigma_n = +1) for every n of the window under P^{ab}.
std::vector<double> marginals(const FieldWindow& field, const ModelParams& p, int a, int b);

/// Exact sample from P^{ab}_{l,r} with spins as boundary conditions.
std::vector<int> gibbs_sample(const FieldWindow& field, const ModelParams& p, int a, int b,
                              std::uint64_t seed);

/// Exact sampler with real boundary fields: the boundary enters as weight
/// exp(lb sigma_first / 2) exp(rb sigma_last / 2). Spins a, b correspond to lb = a Gamma, rb = b Gamma.
class GibbsSampler {
  public:
    GibbsSampler(const FieldWindow& field, const ModelParams& p, double lb, double rb);
    std::vector<int> sample(std::uint64_t seed) const;
    /// Number of sites where the sample differs from `ref` (0 in ref always counts).
    std::int64_t sample_mismatches(std::uint64_t seed, const std::vector<int>& ref) const;

  private:
    std::vector<double> h_;
    std::vector<double> r_;  ///< r_{n+1} for each site, boundary included
    double gamma_;
    double lb_;
};

/// Supplies field values on demand; used to grow windows.
using FieldSource = std::function<FieldWindow(std::int64_t lo, std::int64_t hi)>;
FieldSource law_source(const DisorderLaw& law, std::uint64_t seed);
/// Source backed by a fixed window; throws std::out_of_range beyond it.
FieldSource window_source(const FieldWindow& field);

/// Two l chains from -Gamma and +Gamma at field.first() - 1; bracket of l at field.last().
SandwichValue sandwich_l(const FieldWindow& field, const ModelParams& p, double tol);
/// Same for r at field.first(), chains started at field.last() + 1.
SandwichValue sandwich_r(const FieldWindow& field, const ModelParams& p, double tol);

struct SandwichOptions {
    double tol_rel = 1e-8;          ///< tolerance is tol_rel * Gamma
    std::int64_t initial = 0;       ///< 0 means 4 Gamma^2 / theta^2
    std::int64_t max_window = 0;    ///< 0 means 2^10 Gamma^2 / theta^2
    double theta = 1.0;
};

/// l_n (window ending at n) or r_n (window starting at n), doubling until the bracket closes.
SandwichValue sandwich_l_at(const FieldSource& src, std::int64_t n, const ModelParams& p,
                            const SandwichOptions& opt = {});
SandwichValue sandwich_r_at(const FieldSource& src, std::int64_t n, const ModelParams& p,
                            const SandwichOptions& opt = {});

}  // namespace rfic
