#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "chd/corpus.hpp"
#include "chd/datasetgen.hpp"
#include "chd/error.hpp"
#include "style_generator.hpp"

using namespace chd;

namespace {

std::vector<Account> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_corpus(in);
}

Manifest manifest(const std::string& text, std::vector<std::string>* warnings = nullptr) {
    std::istringstream in(text);
    return parse_manifest(in, warnings);
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("dates parse strictly") {
    CHECK(Date::parse("2020-02-29").has_value());
    CHECK_FALSE(Date::parse("2019-02-29").has_value());
    CHECK_FALSE(Date::parse("2020-13-01").has_value());
    CHECK_FALSE(Date::parse("2020-1-01").has_value());
    CHECK_FALSE(Date::parse("2020-01-01T00:00").has_value());
    CHECK(Date::parse("1999-12-31")->to_string() == "1999-12-31");
}

TEST_CASE("reviews are grouped by account") {
    const auto accounts = parse(
        R"({"review_id":"r1","account_id":"b","date":"2020-01-01","text":"one"})"
        "\n"
        R"({"review_id":"r2","account_id":"a","date":"2020-01-02","text":"two"})"
        "\n"
        R"({"review_id":"r3","account_id":"b","date":"2020-01-03","text":"three","rating":4.5,"product_id":"p"})"
        "\n");
    REQUIRE(accounts.size() == 2);
    CHECK(accounts[0].account_id == "a");
    CHECK(accounts[0].size() == 1);
    CHECK(accounts[1].size() == 2);
    CHECK(accounts[1].reviews[1].rating == 4.5);
    CHECK(accounts[1].reviews[1].product_id == "p");
}

TEST_CASE("reviews are sorted by date, then review_id") {
    const auto accounts = parse(
        R"({"review_id":"z","account_id":"a","date":"2021-05-01","text":"late"})"
        "\n"
        R"({"review_id":"b","account_id":"a","date":"2020-01-01","text":"tie b"})"
        "\n"
        R"({"review_id":"a","account_id":"a","date":"2020-01-01","text":"tie a"})"
        "\n");
    REQUIRE(accounts.size() == 1);
    CHECK(accounts[0].reviews[0].review_id == "a");
    CHECK(accounts[0].reviews[1].review_id == "b");
    CHECK(accounts[0].reviews[2].review_id == "z");
}

TEST_CASE("malformed records name the line") {
    CHECK(error_of(R"({"review_id":"r1","account_id":"a","date":"2020-01-01"})") ==
          "missing field text at line 1");
    CHECK(error_of(R"({"review_id":"r1","account_id":"a","date":"2020-01-01","text":"x"})"
                   "\n{not json}\n")
              .find("line 2") != std::string::npos);
    CHECK(error_of(R"({"review_id":"r1","account_id":"a","date":"2020-02-30","text":"x"})").find("invalid date") !=
          std::string::npos);
    CHECK(error_of(R"({"review_id":"r1","account_id":"a","date":"2020-02-03","text":"   "})").find("empty text") !=
          std::string::npos);
    CHECK(error_of(R"({"review_id":"r1","account_id":"a","date":"2020-01-01","text":"x"})"
                   "\n"
                   R"({"review_id":"r1","account_id":"a","date":"2020-01-02","text":"y"})")
              .find("duplicate review_id") != std::string::npos);
}

TEST_CASE("manifest entries") {
    std::vector<std::string> warnings;
    const auto m = manifest(R"({"account_id":"a1","is_ch":false})"
                            "\n"
                            R"({"account_id":"a2","is_ch":true,"change_index":41,"note":"x"})"
                            "\n",
                            &warnings);
    CHECK(m.at("a1") == Label{false, std::nullopt});
    CHECK(m.at("a2") == Label{true, 41});
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("note") != std::string::npos);

    CHECK_THROWS_AS(manifest(R"({"account_id":"a3","is_ch":true})"), ParseError);
    CHECK_THROWS_AS(manifest(R"({"account_id":"a4","is_ch":false,"change_index":3})"), ParseError);
    CHECK_THROWS_AS(manifest(R"({"account_id":"a","is_ch":false})"
                             "\n"
                             R"({"account_id":"a","is_ch":false})"),
                    ParseError);
}

TEST_CASE("labels are attached and bounds-checked") {
    auto accounts = parse(R"({"review_id":"r1","account_id":"a","date":"2020-01-01","text":"one"})"
                          "\n"
                          R"({"review_id":"r2","account_id":"a","date":"2020-01-02","text":"two"})");
    auto ok = accounts;
    attach_labels(ok, manifest(R"({"account_id":"a","is_ch":true,"change_index":2})"));
    CHECK(ok[0].label == Label{true, 2});
    auto bad = accounts;
    CHECK_THROWS_AS(attach_labels(bad, manifest(R"({"account_id":"a","is_ch":true,"change_index":3})")), ParseError);
    CHECK_THROWS_AS(attach_labels(bad, manifest(R"({"account_id":"a","is_ch":true,"change_index":1})")), ParseError);
    CHECK_THROWS_AS(attach_labels(bad, manifest(R"({"account_id":"other","is_ch":false})")), ParseError);
}

TEST_CASE("round trip through the file format") {
    auto accounts = testing::style_dataset(3, 4);
    accounts.push_back(concatenate(testing::single_author("late", 1, testing::style_g1(), 12),
                                   testing::single_author("early", 2, testing::style_g2(), 11)));
    // Make the seam non-monotonic in date.
    for (auto& r : accounts.back().reviews)
        if (r.review_id.rfind("early", 0) == 0) r.date.year = 2001;
    accounts.back().reviews[0].rating = 3.0;
    accounts.back().reviews[1].product_id = "B00X";

    std::sort(accounts.begin(), accounts.end(), [](auto& a, auto& b) { return a.account_id < b.account_id; });
    std::ostringstream reviews, labels;
    write_corpus(reviews, accounts);
    write_manifest(labels, accounts);
    std::istringstream rin(reviews.str()), lin(labels.str());
    auto loaded = parse_corpus(rin);
    attach_labels(loaded, parse_manifest(lin));

    CHECK(loaded == accounts);

    std::ostringstream again;
    write_corpus(again, loaded);
    CHECK(again.str() == reviews.str());
}

TEST_CASE("file loading") {
    const auto dir = std::filesystem::temp_directory_path() / "chd_corpus_test";
    std::filesystem::create_directories(dir);
    const auto accounts = testing::style_dataset(2, 1);
    write_corpus(dir / "r.jsonl", accounts);
    write_manifest(dir / "m.jsonl", accounts);
    auto loaded = load_corpus(dir / "r.jsonl");
    attach_labels(loaded, load_manifest(dir / "m.jsonl"));
    CHECK(loaded.size() == 4);
    CHECK(load_corpus(dir / "r.jsonl") == load_corpus(dir / "r.jsonl"));
    CHECK_THROWS_AS(load_corpus(dir / "missing.jsonl"), ParseError);
    std::filesystem::remove_all(dir);
}
