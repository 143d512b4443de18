#include "chd/featselect.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <numeric>
#include <string>

#include "chd/error.hpp"

namespace chd {

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ContractViolation("pearson: length mismatch " + std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()));
    if (x.size() < 2) throw ContractViolation("pearson: need at least 2 points");
    // Rounding in the mean leaves tiny residuals on constant input.
    auto constant = [](std::span<const double> v) {
        return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>{}) == v.end();
    };
    if (constant(x) || constant(y)) return 0.0;
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average(std::span<const std::vector<double>* const> sequences) {
    if (sequences.empty()) throw ContractViolation("average: no sequences");
    const std::size_t len = sequences.front()->size();
    std::vector<double> out(len, 0.0);
    for (const auto* s : sequences) {
        if (s->size() != len) throw ContractViolation("average: sequences differ in length");
        for (std::size_t t = 0; t < len; ++t) out[t] += (*s)[t];
    }
    const double count = static_cast<double>(sequences.size());
    for (auto& v : out) v /= count;
    return out;
}

FeatureSelection select_sequences(std::span<const std::vector<double>> values, std::span<const FeatureId> features) {
    if (values.empty()) throw ContractViolation("feature selection: empty sequence set");
    if (features.size() != values.size()) throw ContractViolation("feature selection: one feature id per sequence");

    std::vector<const std::vector<double>*> all;
    for (const auto& v : values) all.push_back(&v);

    FeatureSelection sel;
    sel.target = average(all);
    sel.correlation.reserve(values.size());
    for (const auto& v : values) sel.correlation.push_back(pearson(v, sel.target));

    sel.order.resize(values.size());
    std::iota(sel.order.begin(), sel.order.end(), 0);
    std::stable_sort(sel.order.begin(), sel.order.end(), [&](std::size_t a, std::size_t b) {
        if (sel.correlation[a] != sel.correlation[b]) return sel.correlation[a] > sel.correlation[b];
        return features[a] < features[b];
    });

    sel.selected.push_back(sel.order.front());
    std::vector<const std::vector<double>*> chosen = {&values[sel.order.front()]};
    for (std::size_t j = 1; j < sel.order.size(); ++j) {
        const std::size_t candidate = sel.order[j];
        SelectionStep step{candidate};
        step.before = pearson(average(chosen), sel.target);
        chosen.push_back(&values[candidate]);
        step.with = pearson(average(chosen), sel.target);
        step.accepted = step.with > step.before;
        sel.steps.push_back(step);
        if (!step.accepted) break;
        sel.selected.push_back(candidate);
    }
    return sel;
}

FeatureSelection select_sequences(std::span<const SimilaritySequence> sequences) {
    std::vector<std::vector<double>> values;
    std::vector<FeatureId> features;
    values.reserve(sequences.size());
    for (const auto& s : sequences) {
        values.push_back(s.values);
        features.push_back(s.feature);
    }
    return select_sequences(values, features);
}

}  // namespace chd
