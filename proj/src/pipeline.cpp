#include "chd/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "chd/error.hpp"
#include "chd/featselect.hpp"
#include "chd/parallel.hpp"
#include "chd/rng.hpp"

namespace chd {

void DetectorConfig::validate() const {
    if (window < 1) throw ContractViolation("window size K must be >= 1");
    if (lambda_s < 2) throw ContractViolation("lambda_s must be >= 2");
    if (!(theta_conf >= 0.0 && theta_conf <= 1.0)) throw ContractViolation("theta_conf must lie in [0, 1]");
    if (permutations < 1) throw ContractViolation("permutation count must be >= 1");
    if (min_length < 4) throw ContractViolation("min_length must be >= 4");
    if ((method == Method::Chad || method == Method::ChadPfs) && features.empty())
        throw ContractViolation("feature set F must not be empty");
}

std::vector<FeatureId> DetectorConfig::active_features() const {
    switch (method) {
        case Method::ChadF: return {kAllFeatures.begin(), kAllFeatures.end()};
        case Method::OneFeature: return {of_feature};
        case Method::OneSequence: return {};
        case Method::Chad:
        case Method::ChadPfs: break;
    }
    std::vector<FeatureId> out;
    for (auto f : kAllFeatures)
        if (std::find(features.begin(), features.end(), f) != features.end()) out.push_back(f);
    return out;
}

std::string DetectorConfig::method_name() const {
    switch (method) {
        case Method::Chad: return "CHAD";
        case Method::ChadPfs: return "CHAD-PFS";
        case Method::ChadF: return "CHAD-F";
        case Method::OneFeature: return "OF-" + std::string(to_string(of_feature));
        case Method::OneSequence: return "OS-" + std::string(to_string(os_feature));
    }
    return "?";
}

std::size_t DetectorConfig::required_reviews() const {
    return method == Method::OneSequence ? required_reviews_os(window, min_length)
                                         : chd::required_reviews(window, min_length);
}

void set_method(DetectorConfig& config, std::string_view name) {
    if (name == "CHAD") {
        config.method = Method::Chad;
    } else if (name == "CHAD-PFS" || name == "CHAD_PFS") {
        config.method = Method::ChadPfs;
    } else if (name == "CHAD-F" || name == "CHAD_F") {
        config.method = Method::ChadF;
    } else if (name.starts_with("OF-") || name.starts_with("OF:")) {
        auto f = parse_feature(name.substr(3));
        if (!f) throw ContractViolation("unknown feature in method " + std::string(name));
        config.method = Method::OneFeature;
        config.of_feature = *f;
    } else if (name.starts_with("OS-") || name.starts_with("OS:")) {
        auto f = parse_os_feature(name.substr(3));
        if (!f) throw ContractViolation("unknown scalar feature in method " + std::string(name));
        config.method = Method::OneSequence;
        config.os_feature = *f;
    } else {
        throw ContractViolation("unknown method " + std::string(name));
    }
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::None: return "none";
        case Outcome::ChangedAt: return "changed";
        case Outcome::Undetectable: return "undetectable";
    }
    return "?";
}

AccountSequences build_sequences(const Account& account, std::size_t window, std::span<const FeatureId> features,
                                 std::size_t min_length, const Lexicon& lexicon) {
    AccountSequences out;
    out.account_id = account.account_id;
    out.reviews = account.size();
    out.window = window;
    out.features.assign(features.begin(), features.end());
    const std::size_t needed = required_reviews(window, min_length);
    if (account.size() < needed) throw SequenceTooShort(account.size(), needed);

    const AccountFeatures cache(account, features, lexicon);
    const std::size_t pivots = pivot_count(cache.size(), window);
    out.by_pivot.resize(pivots);
    for (std::size_t p = 0; p < pivots; ++p) {
        auto& row = out.by_pivot[p];
        row.reserve(features.size());
        for (auto f : features) row.push_back(compute_sim_seq(cache, {p + 1, window}, f, min_length));
    }
    return out;
}

std::size_t vote_index(std::span<const std::size_t> position_map, std::size_t k) {
    if (k < 1 || k >= position_map.size())
        throw ContractViolation("vote_index: split " + std::to_string(k) + " outside the sequence");
    return position_map[k];
}

std::uint64_t pivot_seed(std::uint64_t rng_seed, std::string_view account_id, std::size_t pivot_start) {
    return combine_seed(combine_seed(rng_seed, stable_hash(account_id)), pivot_start);
}

namespace {

ChangeOptions change_options(const DetectorConfig& config, std::uint64_t seed) {
    ChangeOptions o;
    o.theta_conf = config.theta_conf;
    o.seed = seed;
    o.permutations = config.permutations;
    o.min_length = config.min_length;
    return o;
}

void finish_voting(DetectionResult& result, int lambda_s) {
    if (!is_change_vote(result.tally)) {
        result.outcome = Outcome::None;
        return;
    }
    const auto smoothed = smooth(result.tally.without_none(), lambda_s, result.reviews);
    result.outcome = Outcome::ChangedAt;
    result.change_index = change_point_vote(smoothed);
}

DetectionResult detect_one_sequence(const Account& account, const DetectorConfig& config, const Lexicon& lexicon) {
    DetectionResult result;
    result.account_id = account.account_id;
    result.reviews = account.size();
    const AccountFeatures cache(account, std::span<const FeatureId>{}, lexicon);
    const auto seq = compute_os_seq(cache, config.window, config.os_feature, config.min_length);

    PivotResult pr;
    pr.decision = detect_change(seq.values, change_options(config, pivot_seed(config.rng_seed, account.account_id, 0)));
    if (pr.decision.k) pr.vote = vote_index(seq.position_map, *pr.decision.k);
    result.per_pivot.push_back(pr);
    if (pr.vote) {
        result.tally.add(*pr.vote);
        result.outcome = Outcome::ChangedAt;
        result.change_index = pr.vote;
    } else {
        result.tally.add_none();
        result.outcome = Outcome::None;
    }
    return result;
}

DetectionResult undetectable(const Account& account) {
    DetectionResult result;
    result.account_id = account.account_id;
    result.reviews = account.size();
    result.outcome = Outcome::Undetectable;
    return result;
}

}  // namespace

DetectionResult detect_from_sequences(const AccountSequences& seqs, const DetectorConfig& config) {
    config.validate();
    if (config.method == Method::OneSequence)
        throw ContractViolation("detect_from_sequences: the one-sequence baseline has no pivot sequences");
    if (config.window != seqs.window) throw ContractViolation("detect_from_sequences: window size mismatch");

    // Column of each active feature in the cached rows.
    const auto active = config.active_features();
    std::vector<std::size_t> columns;
    for (auto f : active) {
        auto it = std::find(seqs.features.begin(), seqs.features.end(), f);
        if (it == seqs.features.end())
            throw ContractViolation("feature " + std::string(to_string(f)) + " missing from sequence cache");
        columns.push_back(static_cast<std::size_t>(it - seqs.features.begin()));
    }

    DetectionResult result;
    result.account_id = seqs.account_id;
    result.reviews = seqs.reviews;
    result.per_pivot.reserve(seqs.by_pivot.size());

    std::vector<std::vector<double>> values;
    std::vector<FeatureId> ids;
    std::vector<const std::vector<double>*> kept;
    for (std::size_t p = 0; p < seqs.by_pivot.size(); ++p) {
        const auto& row = seqs.by_pivot[p];
        PivotResult pr;
        pr.pivot_start = p + 1;

        values.clear();
        ids.clear();
        for (auto c : columns) {
            values.push_back(row[c].values);
            ids.push_back(row[c].feature);
        }
        kept.clear();
        if (config.pivot_selection()) {
            const auto sel = select_sequences(values, ids);
            for (auto i : sel.selected) {
                kept.push_back(&values[i]);
                pr.selected.push_back(ids[i]);
            }
        } else {
            for (std::size_t i = 0; i < values.size(); ++i) kept.push_back(&values[i]);
            pr.selected = ids;
        }
        const auto aggregated = average(kept);

        pr.decision = detect_change(aggregated,
                                    change_options(config, pivot_seed(config.rng_seed, seqs.account_id, pr.pivot_start)));
        if (pr.decision.k) {
            pr.vote = vote_index(row[columns.front()].position_map, *pr.decision.k);
            result.tally.add(*pr.vote);
        } else {
            result.tally.add_none();
        }
        result.per_pivot.push_back(std::move(pr));
    }
    finish_voting(result, config.lambda_s);
    return result;
}

DetectionResult detect_account(const Account& account, const DetectorConfig& config, const Lexicon& lexicon) {
    config.validate();
    if (account.size() < config.required_reviews()) return undetectable(account);
    if (config.method == Method::OneSequence) return detect_one_sequence(account, config, lexicon);
    const auto features = config.active_features();
    const auto seqs = build_sequences(account, config.window, features, config.min_length, lexicon);
    return detect_from_sequences(seqs, config);
}

void write_sequences_csv_header(std::ostream& out) {
    out << "account_id,pivot_start,feature,t,original_index,value\n";
}

void write_sequences_csv(std::ostream& out, const AccountSequences& seqs) {
    // Account ids are opaque; quote when they would break the row.
    std::string id = seqs.account_id;
    if (id.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char c : id) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        id = quoted + "\"";
    }
    char value[32];
    for (const auto& row : seqs.by_pivot) {
        for (const auto& seq : row) {
            for (std::size_t t = 0; t < seq.values.size(); ++t) {
                std::snprintf(value, sizeof value, "%.17g", seq.values[t]);
                out << id << ',' << seq.pivot.start << ',' << to_string(seq.feature) << ',' << t + 1 << ','
                    << seq.position_map[t] << ',' << value << '\n';
            }
        }
    }
}

std::vector<DetectionResult> detect_all(std::span<const Account> accounts, const DetectorConfig& config,
                                        const Lexicon& lexicon, std::size_t threads) {
    config.validate();
    std::vector<DetectionResult> results(accounts.size());
    parallel_for(accounts.size(), threads, [&](std::size_t i) { results[i] = detect_account(accounts[i], config, lexicon); });
    return results;
}

}  // namespace chd
