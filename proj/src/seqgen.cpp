#include "chd/seqgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "chd/error.hpp"

namespace chd {
namespace {

using SparseRow = std::vector<std::pair<std::uint32_t, std::int64_t>>;

// Per-review count vectors with terms interned to account-local ids.
std::vector<SparseRow> review_rows(FeatureId feature, const std::vector<TokenizedReview>& reviews,
                                   const Lexicon& lexicon) {
    std::unordered_map<std::string, std::uint32_t> ids;
    std::vector<SparseRow> rows;
    rows.reserve(reviews.size());
    for (const auto& r : reviews) {
        const auto counts = std::get<SparseCounts>(extract(feature, std::span(&r, 1), lexicon));
        SparseRow row;
        row.reserve(counts.size());
        for (const auto& [term, c] : counts) {
            auto [it, _] = ids.emplace(term, static_cast<std::uint32_t>(ids.size()));
            row.emplace_back(it->second, c);
        }
        std::sort(row.begin(), row.end());
        rows.push_back(std::move(row));
    }
    return rows;
}

std::int64_t dot(const SparseRow& a, const SparseRow& b) {
    std::int64_t sum = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first)
            ++ia;
        else if (ib->first < ia->first)
            ++ib;
        else {
            sum += ia->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    return sum;
}

std::vector<std::size_t> excised_indices(std::size_t n, PivotWindow pivot) {
    std::vector<std::size_t> rest;
    rest.reserve(n - pivot.size);
    for (std::size_t i = 0; i < n; ++i)
        if (!pivot.contains(i + 1)) rest.push_back(i);
    return rest;
}

}  // namespace

AccountFeatures::AccountFeatures(const Account& account, std::span<const FeatureId> features, const Lexicon& lexicon) {
    reviews_.reserve(account.reviews.size());
    for (const auto& r : account.reviews) reviews_.push_back(tokenize(r.text, lexicon));
    build(features, lexicon);
}

AccountFeatures::AccountFeatures(std::vector<TokenizedReview> reviews, std::span<const FeatureId> features,
                                 const Lexicon& lexicon)
    : reviews_(std::move(reviews)) {
    build(features, lexicon);
}

void AccountFeatures::build(std::span<const FeatureId> features, const Lexicon& lexicon) {
    stats_.reserve(reviews_.size());
    for (const auto& r : reviews_) stats_.push_back(review_stats(r, lexicon));

    const std::size_t n = reviews_.size();
    for (auto f : features) {
        const auto slot = static_cast<std::size_t>(f);
        if (present_[slot]) continue;
        present_[slot] = true;
        if (is_scalar(f)) continue;
        const auto rows = review_rows(f, reviews_, lexicon);
        auto& g = grams_[slot];
        g.assign(n * n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) g[i * n + j] = g[j * n + i] = dot(rows[i], rows[j]);
    }
}

double AccountFeatures::window_similarity(FeatureId feature, std::span<const std::size_t> a,
                                          std::span<const std::size_t> b) const {
    const auto slot = static_cast<std::size_t>(feature);
    if (!present_[slot])
        throw ContractViolation("feature " + std::string(to_string(feature)) + " was not cached for this account");

    if (is_scalar(feature)) {
        ReviewStats sa, sb;
        for (auto i : a) sa += stats_[i];
        for (auto i : b) sb += stats_[i];
        return scalar_similarity(scalar_value(feature, sa), scalar_value(feature, sb));
    }

    std::int64_t aa = 0, bb = 0, ab = 0;
    for (auto i : a)
        for (auto j : a) aa += gram(slot, i, j);
    for (auto i : b)
        for (auto j : b) bb += gram(slot, i, j);
    for (auto i : a)
        for (auto j : b) ab += gram(slot, i, j);
    if (aa == 0 && bb == 0) return 1.0;
    if (aa == 0 || bb == 0) return 0.0;
    return std::clamp(double(ab) / std::sqrt(double(aa) * double(bb)), 0.0, 1.0);
}

SimilaritySequence compute_sim_seq(const AccountFeatures& cache, PivotWindow pivot, FeatureId feature,
                                   std::size_t min_length) {
    const std::size_t n = cache.size();
    const std::size_t k = pivot.size;
    if (k == 0) throw ContractViolation("window size must be >= 1");
    const std::size_t needed = required_reviews(k, min_length);
    if (n < needed) throw SequenceTooShort(n, needed);
    if (pivot.start < 1 || pivot.start + k - 1 > n)
        throw ContractViolation("pivot start " + std::to_string(pivot.start) + " out of range");

    std::vector<std::size_t> pivot_idx(k);
    for (std::size_t i = 0; i < k; ++i) pivot_idx[i] = pivot.start - 1 + i;
    const auto rest = excised_indices(n, pivot);

    SimilaritySequence seq;
    seq.feature = feature;
    seq.pivot = pivot;
    const std::size_t len = rest.size() - k + 1;
    seq.values.reserve(len);
    seq.position_map.reserve(len);
    for (std::size_t t = 0; t < len; ++t) {
        const std::span<const std::size_t> window(rest.data() + t, k);
        seq.values.push_back(cache.window_similarity(feature, pivot_idx, window));
        seq.position_map.push_back(rest[t] + 1);
    }
    return seq;
}

ValueSequence compute_os_seq(const AccountFeatures& cache, std::size_t window, OsFeature feature,
                             std::size_t min_length) {
    const std::size_t n = cache.size();
    if (window == 0) throw ContractViolation("window size must be >= 1");
    const std::size_t needed = required_reviews_os(window, min_length);
    if (n < needed) throw SequenceTooShort(n, needed);

    ValueSequence seq;
    seq.feature = feature;
    const std::size_t len = n - window + 1;
    seq.values.reserve(len);
    seq.position_map.reserve(len);
    for (std::size_t t = 0; t < len; ++t) {
        ReviewStats total;
        for (std::size_t i = t; i < t + window; ++i) total += cache.stats(i);
        seq.values.push_back(os_value(feature, total));
        seq.position_map.push_back(t + 1);
    }
    return seq;
}

}  // namespace chd
