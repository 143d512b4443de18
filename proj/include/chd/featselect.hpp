#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chd/seqgen.hpp"
#include "chd/textfeat.hpp"

namespace chd {

// Pearson product-moment correlation. Zero variance on either side gives 0.
// Throws ContractViolation on length mismatch or fewer than 2 points.
double pearson(std::span<const double> x, std::span<const double> y);

// Element-wise mean of equally long sequences.
std::vector<double> average(std::span<const std::vector<double>* const> sequences);

struct SelectionStep {
    std::size_t candidate;    // index into the input
    double before = 0.0;      // correlation of avg(E) with the target
    double with = 0.0;        // correlation of avg(E + candidate) with the target
    bool accepted = false;
};

struct FeatureSelection {
    std::vector<double> target;
    std::vector<std::size_t> order;         // input indices, sorted by correlation to target
    std::vector<double> correlation;        // per input index
    std::vector<std::size_t> selected;      // input indices in addition order
    std::vector<SelectionStep> steps;       // one per tested candidate after the first
};

// Greedy pivot-level selection: keep the correlation-sorted prefix whose
// running average keeps strictly improving its correlation with the average
// of all inputs. Ties in the sort are broken by feature declaration order,
// then input position.
FeatureSelection select_sequences(std::span<const std::vector<double>> values, std::span<const FeatureId> features);
FeatureSelection select_sequences(std::span<const SimilaritySequence> sequences);

}  // namespace chd
