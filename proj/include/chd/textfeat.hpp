#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

namespace chd {

// Coarse part-of-speech tags.
enum class PosTag : std::uint8_t { Noun, Verb, Adj, Adv, Pron, Det, Adp, Conj, Num, Punct, Func, Other };

std::string_view to_string(PosTag tag);

struct Token {
    std::string surface;  // lowercased
    PosTag tag = PosTag::Other;

    bool is_punct() const noexcept { return tag == PosTag::Punct; }
    bool operator==(const Token&) const = default;
};

// Half-open token index range [begin, end).
struct SentenceRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    bool operator==(const SentenceRange&) const = default;
};

struct TokenizedReview {
    std::vector<Token> tokens;
    // Disjoint, contiguous, covering all tokens.
    std::vector<SentenceRange> sentences;

    bool operator==(const TokenizedReview&) const = default;
};

// The ten stylometric feature families. Declaration order is the canonical
// order used for tie-breaking throughout the library.
enum class FeatureId : std::uint8_t {
    WordUnigrams,
    WordBigrams,
    PosUnigrams,
    PosBigrams,
    AdjAdv,
    Nouns,
    FunctionWords,
    Punctuations,
    AvgSentLen,
    AvgTokenLen,
};

inline constexpr std::array<FeatureId, 10> kAllFeatures = {
    FeatureId::WordUnigrams, FeatureId::WordBigrams,   FeatureId::PosUnigrams,  FeatureId::PosBigrams,
    FeatureId::AdjAdv,       FeatureId::Nouns,         FeatureId::FunctionWords, FeatureId::Punctuations,
    FeatureId::AvgSentLen,   FeatureId::AvgTokenLen,
};

constexpr bool is_scalar(FeatureId f) noexcept {
    return f == FeatureId::AvgSentLen || f == FeatureId::AvgTokenLen;
}

std::string_view to_string(FeatureId f);
std::optional<FeatureId> parse_feature(std::string_view name);

// Scalar features used by the one-sequence baseline.
enum class OsFeature : std::uint8_t { AvgSentLen, AvgTokenLen, NounRatio, AdjAdvRatio, FuncWordRatio, PunctRatio };

inline constexpr std::array<OsFeature, 6> kAllOsFeatures = {
    OsFeature::AvgSentLen,  OsFeature::AvgTokenLen,   OsFeature::NounRatio,
    OsFeature::AdjAdvRatio, OsFeature::FuncWordRatio, OsFeature::PunctRatio,
};

std::string_view to_string(OsFeature f);
std::optional<OsFeature> parse_os_feature(std::string_view name);

using SparseCounts = std::map<std::string, std::int64_t>;
using FeatureVector = std::variant<SparseCounts, double>;

// Function-word lexicon and abbreviation list. The built-in instance is
// compiled from resources/*.txt; either list can be replaced from a file.
class Lexicon {
public:
    static const Lexicon& builtin();

    // Empty paths keep the built-in list.
    static Lexicon from_files(const std::filesystem::path& function_words, const std::filesystem::path& abbreviations);
    static Lexicon from_text(std::string_view function_words, std::string_view abbreviations);

    bool is_function_word(std::string_view w) const { return function_words_.count(std::string(w)) != 0; }
    bool is_abbreviation(std::string_view w) const { return abbreviations_.count(std::string(w)) != 0; }
    std::size_t function_word_count() const noexcept { return function_words_.size(); }
    std::size_t abbreviation_count() const noexcept { return abbreviations_.size(); }

private:
    std::unordered_set<std::string> function_words_;
    std::unordered_set<std::string> abbreviations_;
};

// Lowercases, splits words and punctuation, segments sentences and assigns
// tags with the bundled lexicon + suffix-rule tagger.
TokenizedReview tokenize(std::string_view text, const Lexicon& lexicon = Lexicon::builtin());

// Tag for a single lowercased word token (no sentence context).
PosTag tag_word(std::string_view word);

// Pools raw counts (sparse features) or computes the window statistic
// (scalar features) over all reviews in the window. Throws ContractViolation
// on an empty window.
FeatureVector extract(FeatureId feature, std::span<const TokenizedReview> window,
                      const Lexicon& lexicon = Lexicon::builtin());

// Cosine of two count vectors. Both empty -> 1, exactly one empty -> 0.
double cosine(const SparseCounts& a, const SparseCounts& b);

// 1 / (1 + ln(1 + |a - b|)).
double scalar_similarity(double a, double b);

// Throws ContractViolation when the vector kinds disagree with each other or
// with the feature.
double similarity(FeatureId feature, const FeatureVector& a, const FeatureVector& b);

double os_scalar(OsFeature feature, std::span<const TokenizedReview> window,
                 const Lexicon& lexicon = Lexicon::builtin());

// Per-review counts from which every scalar statistic is derived; windows
// are summed component-wise.
struct ReviewStats {
    std::int64_t tokens = 0;  // including punctuation
    std::int64_t words = 0;
    std::int64_t word_chars = 0;  // code points of word tokens
    std::int64_t sentences = 0;
    std::int64_t nouns = 0;
    std::int64_t adj_adv = 0;
    std::int64_t function_words = 0;
    std::int64_t punct_and_special = 0;

    ReviewStats& operator+=(const ReviewStats& o);
};

ReviewStats review_stats(const TokenizedReview& review, const Lexicon& lexicon = Lexicon::builtin());

double scalar_value(FeatureId feature, const ReviewStats& stats);
double os_value(OsFeature feature, const ReviewStats& stats);

}  // namespace chd
