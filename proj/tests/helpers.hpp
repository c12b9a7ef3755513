#pragma once

// Shared fixtures and generators for the test binaries. The reference table
// rows are restated here by hand, independently of the bundled fixture file;
// test_io proves the two agree.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gridrf/gom.hpp"
#include "gridrf/model.hpp"

namespace helpers {

using namespace gridrf;

// Security factor rows N1..N7 (AS, AVC, FC, AM, BF, NA, IPS).
inline constexpr std::array<std::array<double, 7>, 7> kSecurityRows = {{
    {0.25, 0.54, 0.66, 0.6, 0.6, 0.7, 0.6},
    {0.2, 0.5, 0.7, 0.59, 0.59, 0.8, 0.87},
    {0.6, 0.37, 0.89, 0.51, 0.67, 0.73, 0.79},
    {0.15, 0.21, 0.45, 0.57, 0.39, 0.23, 0.38},
    {0.145, 0.7725, 0.7775, 0.675, 0.7075, 0.675, 0.7},
    {0.6, 0.37, 0.89, 0.51, 0.67, 0.73, 0.79}, // N6 repeats N3's row
    {0.51, 0.42, 0.5, 0.56, 0.7, 0.4, 0.61},
}};

// Feedback rows N1..N7 (NC, NI, NT, NP, NP2, NU, NR, NA).
inline constexpr std::array<std::array<double, 8>, 7> kFeedbackRows = {{
    {0.25, 0.29, 0.3, 0.35, 0.4, 0.31, 0.12, 0.35},
    {0.68, 0.69, 1.0, 0.4, 0.1, 0.35, 0.21, 0.7},
    {0.6, 0.7, 0.8, 0.25, 0.0, 0.21, 0.6, 0.58},
    {0.71, 0.77, 0.85, 0.52, 0.23, 0.58, 0.15, 0.67},
    {0.46, 0.463, 0.47, 0.43, 0.3, 0.44, 0.19, 0.44},
    {0.54, 0.725, 0.75, 0.465, 0.4, 0.5, 0.5, 0.6},
    {0.75, 0.8, 0.9, 0.28, 0.15, 0.32, 0.51, 0.55},
}};

inline constexpr std::array<const char*, 8> kFeedbackNames = {
    "NC", "NI", "NT", "NP", "NP2", "NU", "NR", "NA"};

// Full-precision expected scores, frozen from an independent recomputation
// of the table rows before this implementation existed.
struct ExpectedScores {
    double spc;
    double rw;
    double rf;
};
inline constexpr std::array<ExpectedScores, 7> kExpected = {{
    {0.5642857142857144, 0.29625, 0.4302678571428572},              // N1
    {0.6071428571428571, 0.51625, 0.5616964285714285},              // N2
    {0.6514285714285715, 0.46749999999999997, 0.5594642857142857},  // N3
    {0.33999999999999997, 0.56, 0.45},                              // N4
    {0.6360714285714286, 0.39912499999999995, 0.5175982142857143},  // N5
    {0.6514285714285715, 0.5599999999999999, 0.6057142857142856},   // N6
    {0.5285714285714286, 0.5325, 0.5305357142857143},               // N7
}};

// Registry order by descending computed RF (ties none).
inline constexpr std::array<const char*, 7> kExpectedOrder = {
    "N6", "N2", "N3", "N7", "N5", "N4", "N1"};

inline std::string node_id(int node) { // node in 1..7
    return "N" + std::to_string(node);
}

inline SecurityProfile reference_profile(int node) {
    const auto& r = kSecurityRows[static_cast<std::size_t>(node - 1)];
    return SecurityProfile(r[0], r[1], r[2], r[3], r[4], r[5], r[6]);
}

inline FeedbackVector reference_feedback(int node) {
    const auto& r = kFeedbackRows[static_cast<std::size_t>(node - 1)];
    std::vector<std::pair<std::string, double>> attrs;
    for (std::size_t i = 0; i < r.size(); ++i) {
        attrs.emplace_back(kFeedbackNames[i], r[i]);
    }
    return FeedbackVector(std::move(attrs));
}

// All seven reference nodes, seeded with their feedback rows (tpc 100).
inline Gom reference_gom(GomConfig config = {}, int skip_node = 0) {
    Gom gom(std::move(config));
    for (int n = 1; n <= 7; ++n) {
        if (n == skip_node) {
            continue;
        }
        gom.register_node(node_id(n), reference_profile(n), 100.0,
                          reference_feedback(n));
    }
    return gom;
}

// -- deterministic random generators ----------------------------------------

inline double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * u01(rng);
}

// Random integer in [lo, hi] without std::uniform_int_distribution (whose
// output is implementation-defined).
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t lo,
                                   std::uint64_t hi) {
    return lo + rng() % (hi - lo + 1);
}

inline double random_score(std::mt19937_64& rng) {
    // Sprinkle exact endpoints in so boundary handling gets exercised.
    std::uint64_t pick = rng() % 16;
    if (pick == 0) {
        return 0.0;
    }
    if (pick == 1) {
        return 1.0;
    }
    return u01(rng);
}

inline SecurityProfile random_profile(std::mt19937_64& rng) {
    return SecurityProfile(random_score(rng), random_score(rng),
                           random_score(rng), random_score(rng),
                           random_score(rng), random_score(rng),
                           random_score(rng));
}

inline FeedbackVector random_feedback(std::mt19937_64& rng,
                                      std::size_t min_attrs = 1,
                                      std::size_t max_attrs = 8) {
    std::size_t count = uniform_index(rng, min_attrs, max_attrs);
    std::vector<std::pair<std::string, double>> attrs;
    for (std::size_t i = 0; i < count; ++i) {
        attrs.emplace_back(kFeedbackNames[i], random_score(rng));
    }
    return FeedbackVector(std::move(attrs));
}

template <typename T>
void shuffle(std::vector<T>& values, std::mt19937_64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::swap(values[i - 1], values[uniform_index(rng, 0, i - 1)]);
    }
}

} // namespace helpers
