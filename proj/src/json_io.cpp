#include "chd/json_io.hpp"

#include <set>

#include "chd/error.hpp"

namespace chd {

using nlohmann::json;

std::vector<FeatureId> features_from_json(const json& j) {
    if (j.is_object() && j.contains("features")) return features_from_json(j.at("features"));
    if (!j.is_array()) throw ParseError("feature list must be a JSON array of names");
    std::vector<FeatureId> out;
    for (const auto& item : j) {
        if (!item.is_string()) throw ParseError("feature names must be strings");
        auto f = parse_feature(item.get<std::string>());
        if (!f) throw ParseError("unknown feature " + item.get<std::string>());
        if (std::find(out.begin(), out.end(), *f) == out.end()) out.push_back(*f);
    }
    return out;
}

json features_to_json(std::span<const FeatureId> features) {
    json arr = json::array();
    for (auto f : features) arr.push_back(std::string(to_string(f)));
    return arr;
}

DetectorConfig config_from_json(const json& j, const DetectorConfig& defaults) {
    static const std::set<std::string> kKnown = {"method",       "K",           "lambda_s",   "theta_conf",
                                                 "features",     "rng_seed",    "permutations", "min_length"};
    if (!j.is_object()) throw ParseError("detector config must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!kKnown.count(key)) throw ParseError("unknown detector config key " + key);

    DetectorConfig c = defaults;
    try {
        if (j.contains("method")) set_method(c, j.at("method").get<std::string>());
        if (j.contains("K")) c.window = j.at("K").get<std::size_t>();
        if (j.contains("lambda_s")) c.lambda_s = j.at("lambda_s").get<int>();
        if (j.contains("theta_conf")) c.theta_conf = j.at("theta_conf").get<double>();
        if (j.contains("features")) c.features = features_from_json(j.at("features"));
        if (j.contains("rng_seed")) c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
        if (j.contains("permutations")) c.permutations = j.at("permutations").get<std::size_t>();
        if (j.contains("min_length")) c.min_length = j.at("min_length").get<std::size_t>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("detector config: ") + e.what());
    } catch (const ContractViolation& e) {
        throw ParseError(std::string("detector config: ") + e.what());
    }
    c.validate();
    return c;
}

json to_json(const DetectorConfig& c) {
    return json{{"method", c.method_name()},
                {"K", c.window},
                {"lambda_s", c.lambda_s},
                {"theta_conf", c.theta_conf},
                {"features", features_to_json(c.features)},
                {"rng_seed", c.rng_seed},
                {"permutations", c.permutations},
                {"min_length", c.min_length}};
}

json to_json(const DetectionResult& r, bool verbose) {
    json j;
    j["account_id"] = r.account_id;
    j["outcome"] = std::string(to_string(r.outcome));
    if (r.change_index) j["change_index"] = *r.change_index;

    json votes = json::object();
    for (const auto& [i, m] : r.tally.points()) votes[std::to_string(i)] = m;
    j["per_pivot_summary"] = {{"pivots", r.per_pivot.size()}, {"none_votes", r.tally.none()}, {"votes", votes}};

    if (verbose) {
        json pivots = json::array();
        for (const auto& p : r.per_pivot) {
            json pj{{"pivot_start", p.pivot_start},
                    {"confidence", p.decision.confidence},
                    {"delta_sic", p.decision.delta_sic},
                    {"selected", features_to_json(p.selected)}};
            pj["k"] = p.decision.k ? json(*p.decision.k) : json(nullptr);
            pj["vote"] = p.vote ? json(*p.vote) : json(nullptr);
            pivots.push_back(std::move(pj));
        }
        j["per_pivot"] = std::move(pivots);
    }
    return j;
}

json to_json(const EvalReport& r, bool per_account) {
    json j{{"scheme", std::string(to_string(r.scheme))},
           {"precision", r.precision},
           {"recall", r.recall},
           {"f1", r.f1},
           {"accuracy", r.accuracy},
           {"confusion", {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}, {"tn", r.confusion.tn}}}};
    if (r.scheme == Scheme::Cp) j["y"] = r.y;
    if (per_account) {
        json rows = json::array();
        for (const auto& v : r.per_account) {
            json row{{"account_id", v.account_id}, {"gold_is_ch", v.gold.is_ch}, {"verdict", v.verdict}};
            row["gold_change_index"] = v.gold.change_index ? json(*v.gold.change_index) : json(nullptr);
            row["predicted"] = v.predicted ? json(*v.predicted) : json(nullptr);
            rows.push_back(std::move(row));
        }
        j["per_account"] = std::move(rows);
    }
    return j;
}

json to_json(const MeanReport& r) {
    json j{{"scheme", std::string(to_string(r.scheme))},
           {"precision", r.precision},
           {"recall", r.recall},
           {"f1", r.f1},
           {"accuracy", r.accuracy}};
    if (r.scheme == Scheme::Cp) j["y"] = r.y;
    return j;
}

json to_json(const ProtocolReport& r) {
    json runs = json::array();
    for (const auto& run : r.runs) {
        json cp = json::array();
        for (const auto& rep : run.cp) cp.push_back(to_json(rep));
        runs.push_back({{"run", run.run},
                        {"split_seed", run.split_seed},
                        {"features", features_to_json(run.features)},
                        {"eval_cha", to_json(run.cha)},
                        {"eval_cp", cp}});
    }
    json cp = json::array();
    for (const auto& m : r.cp) cp.push_back(to_json(m));
    return {{"method", r.method}, {"runs", runs}, {"mean", {{"eval_cha", to_json(r.cha)}, {"eval_cp", cp}}}};
}

json to_json(const PreselectResult& r) {
    json trace = json::array();
    for (const auto& s : r.trace) {
        json step{{"features", features_to_json(s.features)}, {"f1", s.f1}};
        step["removed"] = s.removed ? json(std::string(to_string(*s.removed))) : json(nullptr);
        trace.push_back(std::move(step));
    }
    return {{"features", features_to_json(r.features)}, {"trace", trace}};
}

json to_json(const SizeStats& s) {
    return {{"count", s.count}, {"mean", s.mean}, {"median", s.median},
            {"stdev", s.stdev}, {"min", s.min},   {"max", s.max}};
}

json to_json(const DatasetReport& r) {
    json j{{"CH", to_json(r.ch)}, {"NCH", to_json(r.nch)}, {"matched", r.matched}};
    if (r.matched) j["nch_band_occupancy"] = {{"1sigma", r.bands[0]}, {"2sigma", r.bands[1]}, {"3sigma", r.bands[2]}};
    return j;
}

}  // namespace chd
