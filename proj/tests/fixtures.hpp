#pragma once

#include <cstdint>
#include <vector>

#include "rfic/disorder.hpp"

namespace fixtures {

// Reference simple random walk S_0..S_38.
inline rfic::WalkPath fig1_walk() {
    return {0, {0, 1, 2, 1, 2, 1, 0, -1, 0, 1, 2, 3, 2, 3, 4, 3, 2, 1, 0, -1,
                0, 1, 0, 1, 0, 1, 2, 3, 4, 5, 4, 5, 4, 3, 2, 1, 2, 1, 2}};
}

// Unit steps 0 -> +3 -> -3 -> +3 ... on sites 1..n.
inline rfic::FieldWindow sawtooth_field(std::int64_t first, std::int64_t n) {
    std::vector<double> h;
    for (std::int64_t k = first; k < first + n; ++k) {
        // position of the step inside the period of 12 steps, aligned so that S_0 = 0 rises first
        std::int64_t m = ((k - 1) % 12 + 12) % 12;
        h.push_back(m < 3 || m >= 9 ? 1.0 : -1.0);
    }
    return rfic::FieldWindow(first, h);
}

// Fifty sites whose coarse-grained chain decimates, at Gamma = 2.5, to breakpoints
// 3, 12, 14, 23, 38, 45, 50; the Gamma-extrema are 12, 14, 23, 38. The extra sites
// after 50 make the last breakpoints non-extremal.
inline std::vector<double> rg_fixture_field() {
    return {-0.7, 0.3,    -0.6,    0.9,  -0.4, 1.0,  -0.3, 0.8,  -0.5, 0.6,  0.6,  0.5,  -1.4175,
            -1.4175, 1.2, -0.5,    1.4,  -0.8, 1.6,  -0.4, 1.1,  -0.7, 2.298, -0.9, 0.3,  -0.7,
            0.4,  -1.0,   0.5,     -0.6, 0.2,  -0.8, 0.6,  -0.9, 0.3,  -0.7, 0.4,  -0.868, 0.8,
            -0.3, 1.0,    -0.5,    0.9,  -0.4, 1.2,  -0.6, 0.3,  -0.8, 0.4,  -0.5};
}
inline std::vector<double> rg_fixture_continuation() { return {0.9, 0.9, 0.9, -3.0}; }

}  // namespace fixtures
