#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "defects/fields.hpp"

namespace defects {

/// Deterministic, seeded set of bump x polynomial test forms on a box. The
/// same (n, degree, box, seed, count) always yields the same battery; the hash
/// of the generating parameters is recorded in reports.
struct Battery {
    std::vector<DifferentialForm> forms;
    std::uint64_t hash = 0;

    std::string hash_hex() const;
};

struct BatteryOptions {
    int count = 12;
    /// Support radius range as a fraction of the box half-extent.
    double radius_lo = 0.70;
    double radius_hi = 0.92;
    /// Center jitter as a fraction of the half-extent.
    double center_jitter = 0.05;
    int poly_degree = 1;
};

Battery make_battery(int n, int degree, const Box& box, std::uint64_t seed,
                     BatteryOptions opts = {});

/// FNV-1a over a byte view; used for battery and config hashes.
std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed = 1469598103934665603ull);

}  // namespace defects
