#include "chd/evaluation.hpp"

#include <algorithm>
#include <cstdlib>

#include "chd/datasetgen.hpp"
#include "chd/error.hpp"
#include "chd/parallel.hpp"
#include "chd/rng.hpp"

namespace chd {
namespace {

double safe_div(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

void finalize(EvalReport& r, std::size_t correct, std::size_t accounts) {
    const auto& c = r.confusion;
    r.precision = safe_div(double(c.tp), double(c.tp + c.fp));
    r.recall = safe_div(double(c.tp), double(c.tp + c.fn));
    r.f1 = r.precision + r.recall == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / (r.precision + r.recall);
    r.accuracy = safe_div(double(correct), double(accounts));
}

std::optional<AccountSequences> sequences_or_none(const Account& a, const DetectorConfig& base,
                                                  const Lexicon& lexicon) {
    if (a.size() < required_reviews(base.window, base.min_length)) return std::nullopt;
    return build_sequences(a, base.window, kAllFeatures, base.min_length, lexicon);
}

}  // namespace

std::string_view to_string(Scheme s) { return s == Scheme::Cha ? "eval_cha" : "eval_cp"; }

EvalReport score(std::span<const DetectionResult> results, const Manifest& gold, Scheme scheme, std::size_t y,
                 const ScoreOptions& options) {
    EvalReport report;
    report.scheme = scheme;
    report.y = y;
    std::size_t correct = 0, accounts = 0;
    for (const auto& r : results) {
        auto it = gold.find(r.account_id);
        if (it == gold.end()) throw ParseError("no gold label for account " + r.account_id);
        if (r.outcome == Outcome::Undetectable && options.skip_undetectable) continue;
        const Label& label = it->second;
        AccountVerdict v{r.account_id, label, r.changed() ? r.change_index : std::nullopt, ""};
        auto& c = report.confusion;
        if (!v.predicted) {
            v.verdict = label.is_ch ? "FN" : "TN";
            ++(label.is_ch ? c.fn : c.tn);
        } else if (!label.is_ch) {
            v.verdict = "FP";
            ++c.fp;
        } else if (scheme == Scheme::Cha) {
            v.verdict = "TP";
            ++c.tp;
        } else {
            const auto gold_index = static_cast<long long>(*label.change_index);
            const auto predicted = static_cast<long long>(*v.predicted);
            if (std::llabs(predicted - gold_index) <= static_cast<long long>(y)) {
                v.verdict = "TP";
                ++c.tp;
            } else {
                v.verdict = "FP+FN";
                ++c.fp;
                ++c.fn;
            }
        }
        if (v.verdict == "TP" || v.verdict == "TN") ++correct;
        ++accounts;
        report.per_account.push_back(std::move(v));
    }
    finalize(report, correct, accounts);
    return report;
}

Manifest manifest_of(std::span<const Account> accounts) {
    Manifest m;
    for (const auto& a : accounts) {
        if (!a.label) throw ContractViolation("account " + a.account_id + " has no label");
        m.emplace(a.account_id, *a.label);
    }
    return m;
}

PreselectResult preselect(std::span<const Account> dev, const DetectorConfig& base, const PreselectOptions& options,
                          const Lexicon& lexicon) {
    if (dev.empty()) throw ContractViolation("preselect: empty development set");
    base.validate();
    const Manifest gold = manifest_of(dev);

    std::vector<std::optional<AccountSequences>> cache(dev.size());
    parallel_for(dev.size(), options.threads, [&](std::size_t i) { cache[i] = sequences_or_none(dev[i], base, lexicon); });

    auto dev_f1 = [&](const std::vector<FeatureId>& features) {
        DetectorConfig cfg = base;
        cfg.method = Method::ChadPfs;
        cfg.features = features;
        std::vector<DetectionResult> results(dev.size());
        parallel_for(dev.size(), options.threads, [&](std::size_t i) {
            if (cache[i]) {
                results[i] = detect_from_sequences(*cache[i], cfg);
            } else {
                results[i].account_id = dev[i].account_id;
                results[i].reviews = dev[i].size();
                results[i].outcome = Outcome::Undetectable;
            }
        });
        return score(results, gold, Scheme::Cp, options.y).f1;
    };

    PreselectResult out;
    out.features.assign(kAllFeatures.begin(), kAllFeatures.end());
    double current = dev_f1(out.features);
    out.trace.push_back({out.features, std::nullopt, current});

    while (out.features.size() > 1) {
        std::optional<std::size_t> best;
        double best_f1 = current;
        for (std::size_t i = 0; i < out.features.size(); ++i) {
            auto reduced = out.features;
            reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(i));
            const double f1 = dev_f1(reduced);
            if (f1 > best_f1) {
                best_f1 = f1;
                best = i;
            }
        }
        if (!best) break;
        const FeatureId removed = out.features[*best];
        out.features.erase(out.features.begin() + static_cast<std::ptrdiff_t>(*best));
        current = best_f1;
        out.trace.push_back({out.features, removed, current});
    }
    return out;
}

MeanReport mean_of(std::span<const EvalReport> reports) {
    MeanReport m;
    if (reports.empty()) return m;
    m.scheme = reports.front().scheme;
    m.y = reports.front().y;
    for (const auto& r : reports) {
        m.precision += r.precision;
        m.recall += r.recall;
        m.f1 += r.f1;
        m.accuracy += r.accuracy;
    }
    const double n = double(reports.size());
    m.precision /= n;
    m.recall /= n;
    m.f1 /= n;
    m.accuracy /= n;
    return m;
}

ProtocolReport run_protocol(std::span<const Account> dataset, const DetectorConfig& config,
                            const ProtocolOptions& options, const Lexicon& lexicon) {
    config.validate();
    if (options.runs < 1) throw ContractViolation("run_protocol: runs must be >= 1");

    ProtocolReport report;
    report.method = config.method_name();
    for (std::size_t run = 0; run < options.runs; ++run) {
        RunReport rr;
        rr.run = run;
        rr.split_seed = combine_seed(options.seed, run);
        const Split split = split_dev_test(dataset, options.dev_per_class, rr.split_seed);

        DetectorConfig cfg = config;
        if (cfg.method == Method::Chad || cfg.method == Method::ChadPfs) {
            if (split.dev.empty()) throw ContractViolation("run_protocol: feature pre-selection needs a dev split");
            cfg.features = preselect(split.dev, cfg, {5, options.threads}, lexicon).features;
        }
        rr.features = cfg.active_features();

        const auto results = detect_all(split.test, cfg, lexicon, options.threads);
        const Manifest gold = manifest_of(split.test);
        rr.cha = score(results, gold, Scheme::Cha, 0, options.scoring);
        for (auto y : options.ys) rr.cp.push_back(score(results, gold, Scheme::Cp, y, options.scoring));
        report.runs.push_back(std::move(rr));
    }

    std::vector<EvalReport> cha;
    for (const auto& r : report.runs) cha.push_back(r.cha);
    report.cha = mean_of(cha);
    for (std::size_t i = 0; i < options.ys.size(); ++i) {
        std::vector<EvalReport> cp;
        for (const auto& r : report.runs) cp.push_back(r.cp[i]);
        report.cp.push_back(mean_of(cp));
    }
    return report;
}

}  // namespace chd
