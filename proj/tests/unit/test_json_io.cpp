#include <doctest.h>

#include "chd/error.hpp"
#include "chd/json_io.hpp"
#include "style_generator.hpp"

using namespace chd;
using nlohmann::json;

TEST_CASE("config defaults and overrides") {
    const auto d = config_from_json(json::object());
    CHECK(d.method == Method::Chad);
    CHECK(d.window == 5);
    CHECK(d.lambda_s == 2);
    CHECK(d.theta_conf == 0.99);
    CHECK(d.permutations == 200);
    CHECK(d.features.size() == 10);

    const auto c = config_from_json(json::parse(
        R"({"method":"OF-Nouns","K":4,"lambda_s":3,"theta_conf":0.95,"features":["Nouns","AdjAdv"],"rng_seed":9,"permutations":50})"));
    CHECK(c.method == Method::OneFeature);
    CHECK(c.of_feature == FeatureId::Nouns);
    CHECK(c.window == 4);
    CHECK(c.lambda_s == 3);
    CHECK(c.theta_conf == 0.95);
    CHECK(c.features == std::vector<FeatureId>{FeatureId::Nouns, FeatureId::AdjAdv});
    CHECK(c.rng_seed == 9);
    CHECK(c.permutations == 50);
}

TEST_CASE("config round trip and rejection of bad input") {
    DetectorConfig c;
    set_method(c, "OS-FuncWordRatio");
    c.rng_seed = 123;
    const auto back = config_from_json(to_json(c));
    CHECK(back.method_name() == c.method_name());
    CHECK(back.rng_seed == 123);

    CHECK_THROWS_AS(config_from_json(json::parse(R"({"window":5})")), ParseError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"features":["Bogus"]})")), ParseError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"K":"five"})")), ParseError);
    CHECK_THROWS(config_from_json(json::parse(R"({"lambda_s":1})")));
}

TEST_CASE("feature lists") {
    CHECK(features_from_json(json::parse(R"(["Nouns"])")) == std::vector<FeatureId>{FeatureId::Nouns});
    CHECK(features_from_json(json::parse(R"({"features":["AvgSentLen","Nouns"]})")) ==
          std::vector<FeatureId>{FeatureId::AvgSentLen, FeatureId::Nouns});
    CHECK(features_to_json(std::vector<FeatureId>{FeatureId::WordBigrams}) == json::parse(R"(["WordBigrams"])"));
}

TEST_CASE("detection records") {
    const auto acct = testing::changed_hands("ab", 1, testing::style_g1(), 15, testing::style_g2(), 15);
    const auto r = detect_account(acct, DetectorConfig{});
    const auto j = to_json(r);
    CHECK(j.at("account_id") == "ab");
    CHECK(j.at("outcome") == "changed");
    CHECK(j.at("change_index") == *r.change_index);
    CHECK(j.at("per_pivot_summary").at("pivots") == 26);
    CHECK_FALSE(j.contains("per_pivot"));
    const auto v = to_json(r, true);
    CHECK(v.at("per_pivot").size() == 26);

    DetectionResult none;
    none.account_id = "n";
    CHECK_FALSE(to_json(none).contains("change_index"));
}
