#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rfic/disorder.hpp"
#include "rfic/transfer.hpp"

namespace rfic {

enum class ExtremumKind { Max, Min };

struct ExtremumRecord {
    ExtremumKind kind = ExtremumKind::Max;
    std::int64_t u = 0;       ///< first attainment
    std::int64_t u_plus = 0;  ///< last attainment
    double level = 0.0;       ///< S at u (and u_plus)
    std::int64_t t_prev = 0;  ///< start of the search interval (t_{j-1}, or the scan start)
    std::int64_t t = 0;       ///< confirming time t_j

    bool operator==(const ExtremumRecord&) const = default;
};

struct ExtremaSequence {
    std::vector<ExtremumRecord> records;
    bool decrease_first = true;  ///< standard convention
    bool no_swing = false;       ///< window ended before the first confirmation
};

/// Streaming scanner for Gamma-extrema with exact comparisons.
class ExtremaScanner {
  public:
    ExtremaScanner(double gamma, std::int64_t start, double s_start, bool decrease_first = true);
    /// Feeds S at the next index; returns the record confirmed at this index, if any.
    std::optional<ExtremumRecord> push(double s);
    std::int64_t index() const { return n_; }

  private:
    double gamma_;
    std::int64_t n_;
    bool tracking_max_;
    double best_;
    std::int64_t first_;
    std::int64_t last_;
    std::int64_t t_prev_;
};

/// Scans from walk.first(); only records confirmed inside the window are emitted.
ExtremaSequence gamma_extrema_one_sided(const WalkPath& walk, double gamma, bool decrease_first = true);
/// Quadratic reference implementation straight from the interval definitions.
ExtremaSequence gamma_extrema_bruteforce(const WalkPath& walk, double gamma, bool decrease_first = true);

/// Fisher values on [lo, hi] from consecutive records; 0 where the records do not decide.
std::vector<int> fisher_from_records(const std::vector<ExtremumRecord>& recs, double gamma,
                                     std::int64_t lo, std::int64_t hi);
/// s^(F,+) on [walk.first() + 1, walk.last()].
std::vector<int> fisher_plus(const WalkPath& walk, const ExtremaSequence& seq, double gamma);

struct TwoSidedOptions {
    std::int64_t initial = 0;     ///< 0 means 4 Gamma^2 / theta^2
    std::int64_t max_window = 0;  ///< 0 means 2^10 Gamma^2 / theta^2
    double theta = 1.0;
};

struct TwoSidedExtrema {
    std::vector<ExtremumRecord> records;  ///< the scan's first record is dropped
    std::vector<std::int64_t> labels;     ///< label 0 is the largest negative u
    std::int64_t target_lo = 0;
    std::int64_t target_hi = 0;
    std::int64_t left_window = 0;  ///< N of the stabilized round
    int rounds = 0;
};

/// Bilateral extrema covering [lo, hi]. Throws std::runtime_error when the rounds
/// do not stabilize within the maximal window.
TwoSidedExtrema gamma_extrema_two_sided(const FieldSource& src, double gamma, std::int64_t lo,
                                        std::int64_t hi, const TwoSidedOptions& opt = {});
std::vector<int> fisher_z(const TwoSidedExtrema& ext, double gamma, std::int64_t lo, std::int64_t hi);

struct LadderResult {
    std::vector<std::int64_t> rho;  ///< rho_0 = 0, rho_1, ... inside the window
    std::int64_t K = -1;
    std::int64_t u_down = -1;       ///< rho_K
    std::int64_t u_first = -1;      ///< u_1 from the standard scan
    bool identity_holds = false;
};

/// Strict ascending record times from walk.first(), starting with walk.first() itself.
std::vector<std::int64_t> ladder_times(const WalkPath& walk);

/// Requires walk.first() == 0. Throws std::runtime_error if no Gamma-drop occurs in the window.
LadderResult ladder_epochs(const WalkPath& walk, double gamma);

struct NPGap {
    std::int64_t index;    ///< n in (u_{n+1} - u_n, |S gap|)
    std::int64_t spacing;
    double height;
};

/// Streams a one-sided walk from 0 and harvests `count` consecutive gaps.
std::vector<NPGap> neveu_pitman_stats(const DisorderLaw& law, double gamma, std::size_t count,
                                      std::uint64_t seed);

const char* kind_name(ExtremumKind k);
void write_extrema_csv(std::ostream& os, const std::vector<ExtremumRecord>& recs,
                       const std::vector<std::int64_t>& labels = {});
void write_fisher_csv(std::ostream& os, std::int64_t first, const std::vector<int>& s);

}  // namespace rfic
