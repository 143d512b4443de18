#include "chd/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <set>

#include <json.hpp>

#include "chd/error.hpp"

namespace chd {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

bool blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string at_line(std::size_t line) { return " at line " + std::to_string(line); }

const json& require(const json& record, const char* key, std::size_t line) {
    auto it = record.find(key);
    if (it == record.end() || it->is_null())
        throw ParseError(std::string("missing field ") + key + at_line(line));
    return *it;
}

std::string require_string(const json& record, const char* key, std::size_t line) {
    const json& v = require(record, key, line);
    if (!v.is_string()) throw ParseError(std::string("field ") + key + " must be a string" + at_line(line));
    return v.get<std::string>();
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

}  // namespace

std::optional<Date> Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    Date d;
    if (!parse_int(text.substr(0, 4), d.year) || !parse_int(text.substr(5, 2), d.month) ||
        !parse_int(text.substr(8, 2), d.day))
        return std::nullopt;
    if (d.month < 1 || d.month > 12) return std::nullopt;
    if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return std::nullopt;
    return d;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

void sort_reviews(Account& account) {
    if (account.synthetic) return;
    std::stable_sort(account.reviews.begin(), account.reviews.end(), [](const Review& a, const Review& b) {
        if (a.date != b.date) return a.date < b.date;
        return a.review_id < b.review_id;
    });
}

void validate(const Account& account) {
    if (account.reviews.empty()) throw ContractViolation("account " + account.account_id + " has no reviews");
    if (account.label && account.label->is_ch) {
        const auto& ci = account.label->change_index;
        const auto n = static_cast<int>(account.reviews.size());
        if (!ci || *ci <= 1 || *ci > n)
            throw ContractViolation("account " + account.account_id + ": change_index out of range (1, " +
                                    std::to_string(n) + "]");
    }
}

std::vector<Account> parse_corpus(std::istream& in) {
    std::map<std::string, Account> grouped;
    std::map<std::string, std::set<std::string>> seen_ids;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (blank(raw)) continue;
        json record;
        try {
            record = json::parse(raw);
        } catch (const json::parse_error& e) {
            throw ParseError("malformed JSON" + at_line(line) + ": " + e.what());
        }
        if (!record.is_object()) throw ParseError("record is not an object" + at_line(line));

        Review r;
        r.review_id = require_string(record, "review_id", line);
        r.account_id = require_string(record, "account_id", line);
        const auto date_text = require_string(record, "date", line);
        auto date = Date::parse(date_text);
        if (!date) throw ParseError("invalid date '" + date_text + "'" + at_line(line));
        r.date = *date;
        r.text = require_string(record, "text", line);
        if (blank(r.text)) throw ParseError("empty text" + at_line(line));
        if (auto it = record.find("product_id"); it != record.end() && !it->is_null()) {
            if (!it->is_string()) throw ParseError("field product_id must be a string" + at_line(line));
            r.product_id = it->get<std::string>();
        }
        if (auto it = record.find("rating"); it != record.end() && !it->is_null()) {
            if (!it->is_number()) throw ParseError("field rating must be a number" + at_line(line));
            r.rating = it->get<double>();
        }
        bool synthetic = false;
        if (auto it = record.find("is_synthetic"); it != record.end() && !it->is_null()) {
            if (!it->is_boolean()) throw ParseError("field is_synthetic must be a boolean" + at_line(line));
            synthetic = it->get<bool>();
        }

        if (!seen_ids[r.account_id].insert(r.review_id).second)
            throw ParseError("duplicate review_id " + r.review_id + " in account " + r.account_id + at_line(line));

        Account& acc = grouped[r.account_id];
        acc.account_id = r.account_id;
        acc.synthetic = acc.synthetic || synthetic;
        acc.reviews.push_back(std::move(r));
    }

    std::vector<Account> accounts;
    accounts.reserve(grouped.size());
    for (auto& [id, acc] : grouped) {
        sort_reviews(acc);
        accounts.push_back(std::move(acc));
    }
    return accounts;
}

std::vector<Account> load_corpus(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_corpus(in);
}

Manifest parse_manifest(std::istream& in, std::vector<std::string>* warnings) {
    static const std::set<std::string> kKnown = {"account_id", "is_ch", "change_index"};
    Manifest manifest;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (blank(raw)) continue;
        json record;
        try {
            record = json::parse(raw);
        } catch (const json::parse_error& e) {
            throw ParseError("malformed JSON" + at_line(line) + ": " + e.what());
        }
        if (!record.is_object()) throw ParseError("record is not an object" + at_line(line));
        for (const auto& [key, _] : record.items()) {
            if (kKnown.count(key)) continue;
            const auto msg = "unknown field " + key + at_line(line) + " ignored";
            if (warnings)
                warnings->push_back(msg);
            else
                std::cerr << "warning: " << msg << '\n';
        }
        const auto id = require_string(record, "account_id", line);
        const json& is_ch = require(record, "is_ch", line);
        if (!is_ch.is_boolean()) throw ParseError("field is_ch must be a boolean" + at_line(line));

        Label label;
        label.is_ch = is_ch.get<bool>();
        auto ci = record.find("change_index");
        const bool has_ci = ci != record.end() && !ci->is_null();
        if (label.is_ch) {
            if (!has_ci) throw ParseError("is_ch true without change_index" + at_line(line));
            if (!ci->is_number_integer()) throw ParseError("change_index must be an integer" + at_line(line));
            label.change_index = ci->get<int>();
        } else if (has_ci) {
            throw ParseError("change_index present for non-CH account" + at_line(line));
        }
        if (!manifest.emplace(id, label).second) throw ParseError("duplicate account_id " + id + at_line(line));
    }
    return manifest;
}

Manifest load_manifest(const std::filesystem::path& path, std::vector<std::string>* warnings) {
    auto in = open_input(path);
    return parse_manifest(in, warnings);
}

void write_corpus(std::ostream& out, const std::vector<Account>& accounts) {
    for (const auto& acc : accounts) {
        for (const auto& r : acc.reviews) {
            ordered_json j;
            j["review_id"] = r.review_id;
            j["account_id"] = acc.account_id;
            j["date"] = r.date.to_string();
            j["text"] = r.text;
            if (r.product_id) j["product_id"] = *r.product_id;
            if (r.rating) j["rating"] = *r.rating;
            if (acc.synthetic) j["is_synthetic"] = true;
            out << j.dump() << '\n';
        }
    }
}

void write_corpus(const std::filesystem::path& path, const std::vector<Account>& accounts) {
    auto out = open_output(path);
    write_corpus(out, accounts);
}

void write_manifest(std::ostream& out, const std::vector<Account>& accounts) {
    for (const auto& acc : accounts) {
        if (!acc.label) continue;
        ordered_json j;
        j["account_id"] = acc.account_id;
        j["is_ch"] = acc.label->is_ch;
        if (acc.label->is_ch) j["change_index"] = *acc.label->change_index;
        out << j.dump() << '\n';
    }
}

void write_manifest(const std::filesystem::path& path, const std::vector<Account>& accounts) {
    auto out = open_output(path);
    write_manifest(out, accounts);
}

void attach_labels(std::vector<Account>& accounts, const Manifest& manifest) {
    for (auto& acc : accounts) {
        auto it = manifest.find(acc.account_id);
        if (it == manifest.end()) throw ParseError("no manifest entry for account " + acc.account_id);
        acc.label = it->second;
        try {
            validate(acc);
        } catch (const ContractViolation& e) {
            throw ParseError(e.what());
        }
    }
}

}  // namespace chd
