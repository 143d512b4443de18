#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chd/corpus.hpp"

namespace chd {

struct SizeStats {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    double stdev = 0.0;  // sample standard deviation
    std::size_t min = 0;
    std::size_t max = 0;
};

SizeStats size_stats(std::span<const std::size_t> sizes);

// Fraction of sizes inside mean +- j*stdev for j = 1, 2, 3.
std::array<double, 3> band_occupancy(std::span<const std::size_t> sizes, double mean, double stdev);

inline constexpr std::array<double, 3> kNormalBands = {0.6827, 0.9545, 0.9973};

struct DatasetReport {
    SizeStats ch;
    SizeStats nch;
    // NCH occupancy of the CH mean +- j*stdev bands (matched setting only).
    std::array<double, 3> bands{};
    bool matched = false;
};

struct Dataset {
    std::vector<Account> accounts;  // labelled, seeded order
    DatasetReport report;
};

struct BuildOptions {
    std::size_t min_half = 10;      // reviews per CH source account
    std::size_t min_account = 20;   // reviews per NCH account (and first halves when unmatched)
    double band_tolerance = 0.05;   // target deviation per band
    double band_hard_limit = 0.10;  // build fails beyond this deviation
};

// Concatenates two date-sorted accounts into a labelled synthetic CH account.
Account concatenate(const Account& first, const Account& second);

// CH accounts from disjoint pairs of >= min_half-review accounts; NCH
// accounts drawn so their size distribution follows the CH size
// distribution's 68-95-99.7 bands.
Dataset build_matched(std::span<const Account> corpus, std::size_t n_ch, std::uint64_t seed,
                      const BuildOptions& options = {});

// CH first halves and NCH accounts from >= min_account-review accounts,
// second halves from >= min_half-review accounts; no size matching.
Dataset build_unmatched(std::span<const Account> corpus, std::size_t n_per_class, std::uint64_t seed,
                        const BuildOptions& options = {});

struct Split {
    std::vector<Account> dev;
    std::vector<Account> test;
};

// Class-stratified seeded split; both parts keep the dataset's order.
Split split_dev_test(std::span<const Account> dataset, std::size_t dev_per_class, std::uint64_t seed);

DatasetReport describe(std::span<const Account> dataset);

}  // namespace chd
