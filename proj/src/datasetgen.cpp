#include "chd/datasetgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "chd/error.hpp"
#include "chd/rng.hpp"

namespace chd {
namespace {

// Signed sigma bins: band 1..4 (4 = beyond 3 sigma), low and high side.
constexpr std::size_t kBins = 8;
// Standard normal mass per bin, low side then high side, inner band first.
constexpr std::array<double, 4> kBandMass = {0.341345, 0.135905, 0.021400, 0.001350};

std::size_t band_of(double size, double mean, double stdev) {
    const double dist = std::fabs(size - mean);
    for (std::size_t j = 1; j <= 3; ++j)
        if (dist <= double(j) * stdev) return j - 1;
    return 3;
}

std::size_t bin_of(double size, double mean, double stdev) {
    return band_of(size, mean, stdev) * 2 + (size >= mean ? 1 : 0);
}

// Largest-remainder rounding of n * mass over the eight bins.
std::array<std::size_t, kBins> bin_quotas(std::size_t n) {
    std::array<double, kBins> exact{};
    for (std::size_t b = 0; b < kBins; ++b) exact[b] = double(n) * kBandMass[b / 2];
    std::array<std::size_t, kBins> quota{};
    std::size_t assigned = 0;
    for (std::size_t b = 0; b < kBins; ++b) {
        quota[b] = static_cast<std::size_t>(std::floor(exact[b]));
        assigned += quota[b];
    }
    std::array<std::size_t, kBins> order{};
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return exact[a] - std::floor(exact[a]) > exact[b] - std::floor(exact[b]);
    });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++quota[order[i % kBins]];
    return quota;
}

// Bins to borrow from when `bin` runs dry: its mirror, then neighbouring
// bands outward from it.
std::vector<std::size_t> fallback_bins(std::size_t bin) {
    const std::size_t band = bin / 2, side = bin % 2;
    std::vector<std::size_t> out = {band * 2 + (1 - side)};
    for (std::size_t d = 1; d < 4; ++d) {
        if (band >= d) {
            out.push_back((band - d) * 2 + side);
            out.push_back((band - d) * 2 + (1 - side));
        }
        if (band + d < 4) {
            out.push_back((band + d) * 2 + side);
            out.push_back((band + d) * 2 + (1 - side));
        }
    }
    return out;
}

std::vector<const Account*> shuffled_pool(std::span<const Account> corpus, std::size_t min_size,
                                          const std::set<std::string>& exclude, Rng& rng) {
    std::vector<const Account*> pool;
    for (const auto& a : corpus)
        if (a.size() >= min_size && !exclude.count(a.account_id)) pool.push_back(&a);
    rng.shuffle(std::span(pool));
    return pool;
}

Account as_raw(const Account& a) {
    Account copy = a;
    copy.synthetic = false;
    sort_reviews(copy);
    copy.label.reset();
    return copy;
}

std::vector<std::size_t> sizes_of(std::span<const Account> accounts, bool ch) {
    std::vector<std::size_t> out;
    for (const auto& a : accounts)
        if (a.label && a.label->is_ch == ch) out.push_back(a.size());
    return out;
}

void finish(Dataset& ds, Rng& rng) {
    rng.shuffle(std::span(ds.accounts));
    const auto matched = ds.report.matched;
    const auto bands = ds.report.bands;
    ds.report = describe(ds.accounts);
    ds.report.matched = matched;
    ds.report.bands = bands;
}

}  // namespace

SizeStats size_stats(std::span<const std::size_t> sizes) {
    SizeStats s;
    s.count = sizes.size();
    if (sizes.empty()) return s;
    std::vector<std::size_t> sorted(sizes.begin(), sizes.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    const std::size_t n = sorted.size();
    s.median = n % 2 ? double(sorted[n / 2]) : (double(sorted[n / 2 - 1]) + double(sorted[n / 2])) / 2.0;
    double sum = 0.0;
    for (auto v : sorted) sum += double(v);
    s.mean = sum / double(n);
    if (n > 1) {
        double ss = 0.0;
        for (auto v : sorted) ss += (double(v) - s.mean) * (double(v) - s.mean);
        s.stdev = std::sqrt(ss / double(n - 1));
    }
    return s;
}

std::array<double, 3> band_occupancy(std::span<const std::size_t> sizes, double mean, double stdev) {
    std::array<double, 3> out{};
    if (sizes.empty()) return out;
    for (std::size_t j = 0; j < 3; ++j) {
        std::size_t inside = 0;
        for (auto v : sizes)
            if (std::fabs(double(v) - mean) <= double(j + 1) * stdev) ++inside;
        out[j] = double(inside) / double(sizes.size());
    }
    return out;
}

Account concatenate(const Account& first, const Account& second) {
    if (first.account_id == second.account_id) throw ContractViolation("cannot concatenate an account with itself");
    const Account a = as_raw(first);
    const Account b = as_raw(second);
    Account out;
    out.account_id = "ch:" + a.account_id + "+" + b.account_id;
    out.synthetic = true;
    std::set<std::string> ids;
    for (const auto* src : {&a, &b}) {
        for (auto r : src->reviews) {
            if (!ids.insert(r.review_id).second)
                throw ContractViolation("review_id " + r.review_id + " occurs in both source accounts");
            r.account_id = out.account_id;
            out.reviews.push_back(std::move(r));
        }
    }
    out.label = Label{true, static_cast<int>(a.size()) + 1};
    return out;
}

Dataset build_matched(std::span<const Account> corpus, std::size_t n_ch, std::uint64_t seed,
                      const BuildOptions& options) {
    Rng rng(seed);
    Dataset ds;
    ds.report.matched = true;

    auto halves = shuffled_pool(corpus, options.min_half, {}, rng);
    if (halves.size() < 2 * n_ch)
        throw InsufficientPool("matched: need " + std::to_string(2 * n_ch) + " accounts with >= " +
                               std::to_string(options.min_half) + " reviews for CH pairs, pool has " +
                               std::to_string(halves.size()) + " (short by " +
                               std::to_string(2 * n_ch - halves.size()) + ")");
    std::set<std::string> used;
    std::vector<std::size_t> ch_sizes;
    for (std::size_t i = 0; i < n_ch; ++i) {
        const Account& a1 = *halves[2 * i];
        const Account& a2 = *halves[2 * i + 1];
        used.insert(a1.account_id);
        used.insert(a2.account_id);
        ds.accounts.push_back(concatenate(a1, a2));
        ch_sizes.push_back(ds.accounts.back().size());
    }

    auto candidates = shuffled_pool(corpus, options.min_account, used, rng);
    if (candidates.size() < n_ch)
        throw InsufficientPool("matched: need " + std::to_string(n_ch) + " NCH accounts with >= " +
                               std::to_string(options.min_account) + " reviews, pool has " +
                               std::to_string(candidates.size()) + " (short by " +
                               std::to_string(n_ch - candidates.size()) + ")");

    const auto ch = size_stats(ch_sizes);
    std::vector<const Account*> chosen;
    if (ch.stdev == 0.0) {
        // Degenerate CH sizes: take the candidates closest to the common size.
        std::stable_sort(candidates.begin(), candidates.end(), [&](const Account* a, const Account* b) {
            return std::fabs(double(a->size()) - ch.mean) < std::fabs(double(b->size()) - ch.mean);
        });
        chosen.assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(n_ch));
    } else {
        std::array<std::vector<const Account*>, kBins> buckets;
        for (const auto* a : candidates) buckets[bin_of(double(a->size()), ch.mean, ch.stdev)].push_back(a);
        const auto quota = bin_quotas(n_ch);
        std::array<std::size_t, kBins> taken{};
        std::size_t deficit_total = 0;
        std::array<std::size_t, kBins> deficit{};
        for (std::size_t b = 0; b < kBins; ++b) {
            const std::size_t k = std::min(quota[b], buckets[b].size());
            taken[b] = k;
            deficit[b] = quota[b] - k;
            deficit_total += deficit[b];
        }
        for (std::size_t b = 0; b < kBins && deficit_total > 0; ++b) {
            for (auto alt : fallback_bins(b)) {
                while (deficit[b] > 0 && taken[alt] < buckets[alt].size()) {
                    ++taken[alt];
                    --deficit[b];
                    --deficit_total;
                }
                if (deficit[b] == 0) break;
            }
        }
        for (std::size_t b = 0; b < kBins; ++b)
            chosen.insert(chosen.end(), buckets[b].begin(), buckets[b].begin() + static_cast<std::ptrdiff_t>(taken[b]));
    }

    std::vector<std::size_t> nch_sizes;
    for (const auto* a : chosen) nch_sizes.push_back(a->size());
    ds.report.bands = band_occupancy(nch_sizes, ch.mean, ch.stdev);
    if (ch.stdev > 0.0) {
        for (std::size_t j = 0; j < 3; ++j) {
            if (std::fabs(ds.report.bands[j] - kNormalBands[j]) > options.band_hard_limit) {
                std::ostringstream msg;
                msg << "matched: NCH size distribution cannot follow the CH bands; achieved " << ds.report.bands[0]
                    << "/" << ds.report.bands[1] << "/" << ds.report.bands[2] << " within 1/2/3 sigma";
                throw InsufficientPool(msg.str());
            }
        }
    }

    for (const auto* a : chosen) {
        Account nch = as_raw(*a);
        nch.label = Label{false, std::nullopt};
        ds.accounts.push_back(std::move(nch));
    }
    finish(ds, rng);
    return ds;
}

Dataset build_unmatched(std::span<const Account> corpus, std::size_t n_per_class, std::uint64_t seed,
                        const BuildOptions& options) {
    Rng rng(seed);
    Dataset ds;

    auto long_pool = shuffled_pool(corpus, options.min_account, {}, rng);
    if (long_pool.size() < 2 * n_per_class)
        throw InsufficientPool("unmatched: need " + std::to_string(2 * n_per_class) + " accounts with >= " +
                               std::to_string(options.min_account) + " reviews, pool has " +
                               std::to_string(long_pool.size()));
    std::set<std::string> used;
    for (std::size_t i = 0; i < 2 * n_per_class; ++i) used.insert(long_pool[i]->account_id);
    auto second_pool = shuffled_pool(corpus, options.min_half, used, rng);
    if (second_pool.size() < n_per_class)
        throw InsufficientPool("unmatched: need " + std::to_string(n_per_class) +
                               " further accounts with >= " + std::to_string(options.min_half) +
                               " reviews, pool has " + std::to_string(second_pool.size()));

    for (std::size_t i = 0; i < n_per_class; ++i) {
        Account nch = as_raw(*long_pool[i]);
        nch.label = Label{false, std::nullopt};
        ds.accounts.push_back(std::move(nch));
        ds.accounts.push_back(concatenate(*long_pool[n_per_class + i], *second_pool[i]));
    }
    finish(ds, rng);
    return ds;
}

Split split_dev_test(std::span<const Account> dataset, std::size_t dev_per_class, std::uint64_t seed) {
    std::vector<std::size_t> ch, nch;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (!dataset[i].label) throw ContractViolation("split: account " + dataset[i].account_id + " has no label");
        (dataset[i].label->is_ch ? ch : nch).push_back(i);
    }
    if (ch.size() < dev_per_class || nch.size() < dev_per_class)
        throw InsufficientPool("split: need " + std::to_string(dev_per_class) + " accounts per class, have " +
                               std::to_string(ch.size()) + " CH and " + std::to_string(nch.size()) + " NCH");
    Rng rng(seed);
    rng.shuffle(std::span(ch));
    rng.shuffle(std::span(nch));
    std::vector<bool> in_dev(dataset.size(), false);
    for (std::size_t i = 0; i < dev_per_class; ++i) in_dev[ch[i]] = in_dev[nch[i]] = true;

    Split split;
    for (std::size_t i = 0; i < dataset.size(); ++i) (in_dev[i] ? split.dev : split.test).push_back(dataset[i]);
    return split;
}

DatasetReport describe(std::span<const Account> dataset) {
    DatasetReport r;
    const auto ch = sizes_of(dataset, true);
    const auto nch = sizes_of(dataset, false);
    r.ch = size_stats(ch);
    r.nch = size_stats(nch);
    if (r.ch.stdev > 0.0) r.bands = band_occupancy(nch, r.ch.mean, r.ch.stdev);
    return r;
}

}  // namespace chd
