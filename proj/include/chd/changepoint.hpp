#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace chd {

inline constexpr double kVarianceFloor = 1e-8;

struct ChangeOptions {
    double theta_conf = 0.99;
    std::uint64_t seed = 0;
    std::size_t permutations = 200;
    std::size_t min_length = 6;
    double var_floor = kVarianceFloor;
};

struct ChangeDecision {
    // Last 1-based position of the first segment, 2 <= k <= n - 2.
    std::optional<std::size_t> k;
    double confidence = 0.0;
    double delta_sic = 0.0;

    bool detected() const noexcept { return k.has_value(); }
    bool operator==(const ChangeDecision&) const = default;
};

// SIC of the no-change Gaussian model (2 free parameters).
double sic_null(std::span<const double> x, std::size_t min_length = 6, double var_floor = kVarianceFloor);

// SIC of the single mean+variance change after position k (4 free parameters).
double sic_alt(std::span<const double> x, std::size_t k, double var_floor = kVarianceFloor);

struct SicScan {
    std::size_t best_k = 0;  // smallest argmin
    double best_sic = 0.0;
    double null_sic = 0.0;
    double delta() const noexcept { return null_sic - best_sic; }
};

// Scans every admissible split with one forward and one backward pass.
SicScan scan_sic(std::span<const double> x, double var_floor = kVarianceFloor);

// Minimum-SIC single change-point test with a seeded permutation confidence.
ChangeDecision detect_change(std::span<const double> x, const ChangeOptions& options);

}  // namespace chd
