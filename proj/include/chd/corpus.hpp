#pragma once

#include <filesystem>
#include <map>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chd {

// Calendar date, day precision.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    // Parses strict "YYYY-MM-DD"; returns nullopt on malformed or impossible dates.
    static std::optional<Date> parse(std::string_view text);
    std::string to_string() const;
};

struct Review {
    std::string review_id;
    std::string account_id;
    Date date;
    std::string text;
    std::optional<std::string> product_id;
    std::optional<double> rating;

    bool operator==(const Review&) const = default;
};

struct Label {
    bool is_ch = false;
    // 1-based index of the first review written by the second author.
    std::optional<int> change_index;

    bool operator==(const Label&) const = default;
};

struct Account {
    std::string account_id;
    std::vector<Review> reviews;
    std::optional<Label> label;
    // Synthetic accounts keep their concatenation order; they are never re-sorted.
    bool synthetic = false;

    std::size_t size() const noexcept { return reviews.size(); }
    bool operator==(const Account&) const = default;
};

using Manifest = std::map<std::string, Label>;

// Sorts by date, then review_id. No-op for synthetic accounts.
void sort_reviews(Account& account);

// Checks the Account invariants (non-empty, label bounds, order for raw accounts).
void validate(const Account& account);

// Reads a review JSON Lines file. Reviews are grouped by account_id and the
// result is ordered by account_id. Throws ParseError naming the line number.
std::vector<Account> load_corpus(const std::filesystem::path& path);
std::vector<Account> parse_corpus(std::istream& in);

// Reads a manifest JSON Lines file. Unknown keys produce a warning on the
// supplied sink (stderr when null) and are otherwise ignored.
Manifest load_manifest(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
Manifest parse_manifest(std::istream& in, std::vector<std::string>* warnings = nullptr);

void write_corpus(std::ostream& out, const std::vector<Account>& accounts);
void write_corpus(const std::filesystem::path& path, const std::vector<Account>& accounts);
void write_manifest(std::ostream& out, const std::vector<Account>& accounts);
void write_manifest(const std::filesystem::path& path, const std::vector<Account>& accounts);

// Copies labels from the manifest onto matching accounts. Throws ParseError if
// any account lacks an entry or a label violates the account's bounds.
void attach_labels(std::vector<Account>& accounts, const Manifest& manifest);

}  // namespace chd
