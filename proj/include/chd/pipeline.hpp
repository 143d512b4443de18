#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chd/changepoint.hpp"
#include "chd/corpus.hpp"
#include "chd/seqgen.hpp"
#include "chd/textfeat.hpp"
#include "chd/voting.hpp"

namespace chd {

enum class Method {
    Chad,         // pre-selected features + pivot-level selection
    ChadPfs,      // pre-selected features, no pivot-level selection
    ChadF,        // all features + pivot-level selection
    OneFeature,   // OF-<feature>
    OneSequence,  // OS-<scalar>
};

struct DetectorConfig {
    Method method = Method::Chad;
    FeatureId of_feature = FeatureId::WordUnigrams;
    OsFeature os_feature = OsFeature::AvgSentLen;
    std::size_t window = 5;
    int lambda_s = 2;
    double theta_conf = 0.99;
    // Pre-selected feature set; ignored by OF/OS and by CHAD-F.
    std::vector<FeatureId> features{kAllFeatures.begin(), kAllFeatures.end()};
    std::uint64_t rng_seed = 0;
    std::size_t permutations = 200;
    std::size_t min_length = kDefaultMinLength;

    void validate() const;
    // Features whose sequences the method builds, in declaration order.
    std::vector<FeatureId> active_features() const;
    bool pivot_selection() const noexcept { return method == Method::Chad || method == Method::ChadF; }
    // "CHAD", "CHAD-PFS", "CHAD-F", "OF-<feature>", "OS-<feature>".
    std::string method_name() const;
    // Minimum account size this configuration can analyse.
    std::size_t required_reviews() const;
};

// Parses a method name as produced by DetectorConfig::method_name() (the
// underscore spellings CHAD_PFS / CHAD_F are accepted too) into `config`.
void set_method(DetectorConfig& config, std::string_view name);

enum class Outcome { None, ChangedAt, Undetectable };

std::string_view to_string(Outcome o);

struct PivotResult {
    std::size_t pivot_start = 0;  // 0 for the single OS sequence
    ChangeDecision decision;
    std::vector<FeatureId> selected;
    std::optional<std::size_t> vote;  // review index, or nullopt for NONE

    bool operator==(const PivotResult&) const = default;
};

struct DetectionResult {
    std::string account_id;
    std::size_t reviews = 0;
    Outcome outcome = Outcome::None;
    std::optional<std::size_t> change_index;  // set iff outcome == ChangedAt
    std::vector<PivotResult> per_pivot;
    VoteTally tally;

    bool changed() const noexcept { return outcome == Outcome::ChangedAt; }
    bool operator==(const DetectionResult&) const = default;
};

// Similarity sequences for every pivot and every cached feature of one account.
struct AccountSequences {
    std::string account_id;
    std::size_t reviews = 0;
    std::size_t window = 0;
    std::vector<FeatureId> features;
    // by_pivot[p][f]: pivot start p + 1, features[f].
    std::vector<std::vector<SimilaritySequence>> by_pivot;
};

AccountSequences build_sequences(const Account& account, std::size_t window, std::span<const FeatureId> features,
                                 std::size_t min_length = kDefaultMinLength,
                                 const Lexicon& lexicon = Lexicon::builtin());

// Maps a sequence-space split (last point k of the first segment, 1-based)
// to the review index voted for: the first review of the moving window at
// sequence position k + 1.
std::size_t vote_index(std::span<const std::size_t> position_map, std::size_t k);

// Seed for the permutation test of one pivot.
std::uint64_t pivot_seed(std::uint64_t rng_seed, std::string_view account_id, std::size_t pivot_start);

// Runs the per-pivot detection and two-round voting over precomputed
// sequences. The config's active features must be a subset of seqs.features.
DetectionResult detect_from_sequences(const AccountSequences& seqs, const DetectorConfig& config);

DetectionResult detect_account(const Account& account, const DetectorConfig& config,
                               const Lexicon& lexicon = Lexicon::builtin());

// CSV rows account_id,pivot_start,feature,t,original_index,value (t and
// indices 1-based). write_sequences_csv_header emits the column line.
void write_sequences_csv_header(std::ostream& out);
void write_sequences_csv(std::ostream& out, const AccountSequences& seqs);

std::vector<DetectionResult> detect_all(std::span<const Account> accounts, const DetectorConfig& config,
                                        const Lexicon& lexicon = Lexicon::builtin(), std::size_t threads = 0);

}  // namespace chd
