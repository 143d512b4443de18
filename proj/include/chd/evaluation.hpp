#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chd/corpus.hpp"
#include "chd/pipeline.hpp"

namespace chd {

enum class Scheme { Cha, Cp };

std::string_view to_string(Scheme s);

struct Confusion {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::size_t total() const noexcept { return tp + fp + fn + tn; }
    bool operator==(const Confusion&) const = default;
};

struct AccountVerdict {
    std::string account_id;
    Label gold;
    std::optional<std::size_t> predicted;
    std::string verdict;  // TP, FP, FN, TN or FP+FN
};

struct EvalReport {
    Scheme scheme = Scheme::Cha;
    std::size_t y = 0;  // localization tolerance (eval_cp)
    double precision = 0.0, recall = 0.0, f1 = 0.0, accuracy = 0.0;
    Confusion confusion;
    std::vector<AccountVerdict> per_account;
};

struct ScoreOptions {
    // Drop undetectable (too short) accounts instead of scoring them as none.
    bool skip_undetectable = false;
};

// Throws ParseError when a result has no gold label.
EvalReport score(std::span<const DetectionResult> results, const Manifest& gold, Scheme scheme, std::size_t y = 0,
                 const ScoreOptions& options = {});

Manifest manifest_of(std::span<const Account> accounts);

struct PreselectStep {
    std::vector<FeatureId> features;  // F after this step
    std::optional<FeatureId> removed;
    double f1 = 0.0;                  // dev eval_cp F1 of `features`
};

struct PreselectResult {
    std::vector<FeatureId> features;
    std::vector<PreselectStep> trace;  // starting point first
};

struct PreselectOptions {
    std::size_t y = 5;
    std::size_t threads = 0;
};

// Backward elimination from all features: each round drops the feature
// whose removal gives the largest strictly positive eval_cp F1 gain on the
// dev set, running detection without pivot-level selection.
PreselectResult preselect(std::span<const Account> dev, const DetectorConfig& base, const PreselectOptions& options = {},
                          const Lexicon& lexicon = Lexicon::builtin());

struct ProtocolOptions {
    std::size_t runs = 5;
    std::size_t dev_per_class = 100;
    std::vector<std::size_t> ys = {1, 3, 5, 7};
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    ScoreOptions scoring;
};

struct RunReport {
    std::size_t run = 0;
    std::uint64_t split_seed = 0;
    std::vector<FeatureId> features;
    EvalReport cha;
    std::vector<EvalReport> cp;  // one per y
};

struct MeanReport {
    Scheme scheme = Scheme::Cha;
    std::size_t y = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0, accuracy = 0.0;
};

struct ProtocolReport {
    std::string method;
    std::vector<RunReport> runs;
    MeanReport cha;
    std::vector<MeanReport> cp;
};

MeanReport mean_of(std::span<const EvalReport> reports);

// Repeated split / fit / score. Feature pre-selection is fitted on each dev
// split for CHAD and CHAD-PFS; other parameters stay as configured.
ProtocolReport run_protocol(std::span<const Account> dataset, const DetectorConfig& config,
                            const ProtocolOptions& options, const Lexicon& lexicon = Lexicon::builtin());

}  // namespace chd
