#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "chd/corpus.hpp"
#include "chd/textfeat.hpp"

namespace chd {

// Shortest sequence the change-point test accepts.
inline constexpr std::size_t kDefaultMinLength = 6;

struct PivotWindow {
    std::size_t start = 1;  // 1-based index of the first pivot review
    std::size_t size = 5;

    bool contains(std::size_t index) const noexcept { return index >= start && index < start + size; }
    bool operator==(const PivotWindow&) const = default;
};

struct SimilaritySequence {
    std::vector<double> values;
    FeatureId feature = FeatureId::WordUnigrams;
    PivotWindow pivot;
    // position_map[t] is the 1-based account index of the first review of
    // the moving window at sequence position t (0-based t).
    std::vector<std::size_t> position_map;
};

// Raw statistic per moving window for the one-sequence baseline.
struct ValueSequence {
    std::vector<double> values;
    OsFeature feature = OsFeature::AvgSentLen;
    std::vector<std::size_t> position_map;
};

// Minimum account size for pivot sequences of length >= min_length.
constexpr std::size_t required_reviews(std::size_t window, std::size_t min_length = kDefaultMinLength) {
    return 2 * window + min_length - 1;
}

constexpr std::size_t required_reviews_os(std::size_t window, std::size_t min_length = kDefaultMinLength) {
    return window + min_length - 1;
}

// Review-level feature cache for one account. Sparse features are held as
// Gram matrices of per-review count vectors, so the cosine between any two
// pooled windows reduces to sums of cached inner products; scalar features
// keep per-review counts. Immutable after construction and safe to share
// across threads.
class AccountFeatures {
public:
    AccountFeatures(const Account& account, std::span<const FeatureId> features,
                    const Lexicon& lexicon = Lexicon::builtin());
    AccountFeatures(std::vector<TokenizedReview> reviews, std::span<const FeatureId> features,
                    const Lexicon& lexicon = Lexicon::builtin());

    std::size_t size() const noexcept { return reviews_.size(); }
    const std::vector<TokenizedReview>& reviews() const noexcept { return reviews_; }
    const ReviewStats& stats(std::size_t zero_based) const { return stats_.at(zero_based); }
    bool has(FeatureId f) const noexcept { return present_[static_cast<std::size_t>(f)]; }

    // Similarity of the pooled windows given as 0-based review indices.
    double window_similarity(FeatureId feature, std::span<const std::size_t> a, std::span<const std::size_t> b) const;

private:
    void build(std::span<const FeatureId> features, const Lexicon& lexicon);
    std::int64_t gram(std::size_t slot, std::size_t i, std::size_t j) const {
        return grams_[slot][i * reviews_.size() + j];
    }

    std::vector<TokenizedReview> reviews_;
    std::vector<ReviewStats> stats_;
    std::array<bool, kAllFeatures.size()> present_{};
    std::array<std::vector<std::int64_t>, kAllFeatures.size()> grams_;
};

// Moving windows of size K over the account with the pivot reviews excised.
// Throws SequenceTooShort when the account has fewer than
// required_reviews(K, min_length) reviews.
SimilaritySequence compute_sim_seq(const AccountFeatures& cache, PivotWindow pivot, FeatureId feature,
                                   std::size_t min_length = kDefaultMinLength);

ValueSequence compute_os_seq(const AccountFeatures& cache, std::size_t window, OsFeature feature,
                             std::size_t min_length = kDefaultMinLength);

// Number of pivots for an account of n reviews, n - K + 1.
constexpr std::size_t pivot_count(std::size_t n, std::size_t window) { return n >= window ? n - window + 1 : 0; }

}  // namespace chd
