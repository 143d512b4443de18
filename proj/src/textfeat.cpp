#include "chd/textfeat.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "builtin_resources.hpp"
#include "chd/error.hpp"

namespace chd {
namespace {

// ---------------------------------------------------------------------------
// UTF-8 helpers

struct CodePoint {
    char32_t value;
    std::size_t length;
};

CodePoint decode(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    auto cont = [&](std::size_t k) -> unsigned {
        if (i + k >= s.size()) return 0x100;
        const auto b = static_cast<unsigned char>(s[i + k]);
        return (b & 0xC0) == 0x80 ? (b & 0x3F) : 0x100;
    };
    if (b0 < 0x80) return {b0, 1};
    if ((b0 & 0xE0) == 0xC0) {
        const unsigned c1 = cont(1);
        if (c1 < 0x100) return {char32_t(((b0 & 0x1F) << 6) | c1), 2};
    } else if ((b0 & 0xF0) == 0xE0) {
        const unsigned c1 = cont(1), c2 = cont(2);
        if (c1 < 0x100 && c2 < 0x100) return {char32_t(((b0 & 0x0F) << 12) | (c1 << 6) | c2), 3};
    } else if ((b0 & 0xF8) == 0xF0) {
        const unsigned c1 = cont(1), c2 = cont(2), c3 = cont(3);
        if (c1 < 0x100 && c2 < 0x100 && c3 < 0x100)
            return {char32_t(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3), 4};
    }
    // Invalid byte: treat it as a single opaque symbol.
    return {0xFFFD, 1};
}

std::size_t code_points(std::string_view s) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size(); i += decode(s, i).length) ++n;
    return n;
}

bool is_space(char32_t c) {
    return c == ' ' || (c >= '\t' && c <= '\r') || c == 0xA0 || (c >= 0x2000 && c <= 0x200B) || c == 0x2028 ||
           c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000 || c == 0xFEFF;
}

bool is_ascii_alnum(char32_t c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }

bool is_symbol(char32_t c) {
    if (c < 0x80) return !is_ascii_alnum(c) && !is_space(c);
    if (c >= 0xA1 && c <= 0xBF) return c != 0xAA && c != 0xB5 && c != 0xBA;
    if (c == 0xD7 || c == 0xF7 || c == 0xFFFD) return true;
    if (c >= 0x2010 && c <= 0x205E) return true;  // general punctuation
    if (c >= 0x20A0 && c <= 0x20CF) return true;  // currency
    if (c >= 0x2190 && c <= 0x2BFF) return true;  // arrows, math, shapes
    if (c >= 0x3001 && c <= 0x3003) return true;
    if (c >= 0x1F000 && c <= 0x1FAFF) return true;  // emoji
    return false;
}

bool is_word_char(char32_t c) { return !is_space(c) && !is_symbol(c); }

bool is_terminator(std::string_view s) { return s == "." || s == "!" || s == "?"; }

// ---------------------------------------------------------------------------
// Tagger lexicon

const std::unordered_map<std::string_view, PosTag>& closed_class() {
    static const auto table = [] {
        std::unordered_map<std::string_view, PosTag> t;
        auto add = [&](PosTag tag, std::initializer_list<std::string_view> words) {
            for (auto w : words) t.emplace(w, tag);
        };
        add(PosTag::Det, {"a", "an", "the", "this", "that", "these", "those", "my", "your", "his", "her", "its",
                          "our", "their", "whose", "each", "every", "either", "neither", "some", "any", "no",
                          "all", "both", "another", "such", "what", "which", "half", "several", "many", "much",
                          "few", "fewer", "less", "least", "most", "more", "enough"});
        add(PosTag::Pron, {"i", "me", "you", "he", "him", "she", "it", "we", "us", "they", "them", "myself",
                           "yourself", "himself", "herself", "itself", "ourselves", "themselves", "yourselves",
                           "mine", "yours", "hers", "ours", "theirs", "who", "whom", "whoever", "someone",
                           "somebody", "something", "anyone", "anybody", "anything", "everyone", "everybody",
                           "everything", "nobody", "nothing", "none", "one", "ones", "oneself", "others"});
        add(PosTag::Adp, {"about", "above", "across", "after", "against", "along", "among", "amongst", "around",
                          "at", "before", "behind", "below", "beneath", "beside", "besides", "between", "beyond",
                          "by", "despite", "down", "during", "except", "for", "from", "in", "inside", "into",
                          "like", "near", "of", "off", "on", "onto", "out", "outside", "over", "past", "since",
                          "through", "throughout", "till", "to", "toward", "towards", "under", "underneath",
                          "unlike", "until", "up", "upon", "via", "with", "within", "without", "per", "amid",
                          "versus", "vs"});
        add(PosTag::Conj, {"and", "or", "nor", "but", "yet", "although", "because", "though", "unless",
                           "whereas", "whether", "while", "whilst", "if", "once", "than", "so", "lest"});
        add(PosTag::Func,
            {"be",       "am",      "is",       "are",     "was",      "were",    "been",     "being",
             "have",     "has",     "had",      "having",  "do",       "does",    "did",      "doing",
             "will",     "would",   "shall",    "should",  "can",      "could",   "may",      "might",
             "must",     "ought",   "not",      "n't",     "cannot",   "i'm",     "you're",   "he's",
             "she's",    "it's",    "we're",    "they're", "i've",     "you've",  "we've",    "they've",
             "i'd",      "you'd",   "he'd",     "she'd",   "we'd",     "they'd",  "i'll",     "you'll",
             "he'll",    "she'll",  "we'll",    "they'll", "isn't",    "aren't",  "wasn't",   "weren't",
             "hasn't",   "haven't", "hadn't",   "doesn't", "don't",    "didn't",  "won't",    "wouldn't",
             "shan't",   "shouldn't", "can't",  "couldn't", "mustn't", "mightn't", "needn't", "let's",
             "that's",   "there's", "here's",   "what's",  "who's"});
        add(PosTag::Adv, {"very", "really", "quite", "too", "also", "just", "only", "even", "still", "already",
                          "always", "ever", "often", "sometimes", "never", "here", "there", "then", "now",
                          "again", "soon", "almost", "rather", "perhaps", "maybe", "well", "however", "thus",
                          "therefore", "instead", "otherwise", "anyway", "away", "back", "far", "when", "where",
                          "why", "how", "else", "indeed", "yet", "ago", "once", "later", "together", "overall",
                          "definitely", "pretty", "fast"});
        add(PosTag::Num, {"zero", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
                          "eleven", "twelve", "twenty", "thirty", "forty", "fifty", "hundred", "thousand",
                          "million", "billion", "dozen"});
        add(PosTag::Adj, {"good", "great", "bad", "nice", "best", "better", "worse", "worst", "excellent",
                          "awesome", "amazing", "perfect", "poor", "fine", "new", "old", "big", "small", "little",
                          "large", "cheap", "easy", "hard", "happy", "sure", "high", "low", "long", "short",
                          "real", "top", "free", "full", "clean", "clear", "fresh", "friendly", "lovely", "ugly",
                          "likely", "first", "last", "next", "other", "own", "same", "different", "right",
                          "wrong", "whole", "able", "main", "major", "whole", "quick", "slow", "hot", "cold",
                          "warm", "cool", "dark", "bright", "light", "heavy", "strong", "weak", "rich", "safe",
                          "simple", "solid", "tiny", "huge", "wide", "quiet", "loud", "soft", "sweet", "fun",
                          "glad", "sad", "rude", "kind", "late", "early", "busy", "dirty", "okay", "ok"});
        add(PosTag::Verb, {"get", "got", "gets", "buy", "bought", "love", "loves", "like", "likes", "use",
                           "make", "made", "makes", "work", "works", "go", "goes", "went", "gone", "come",
                           "came", "comes", "take", "took", "taken", "say", "said", "says", "see", "saw", "seen",
                           "know", "knew", "known", "think", "thought", "want", "wants", "need", "needs", "try",
                           "tried", "give", "gave", "given", "keep", "kept", "look", "looks", "feel", "felt",
                           "find", "found", "seem", "seems", "recommend", "put", "let", "tell", "told", "ask",
                           "became", "become", "leave", "left", "stay", "stayed", "bring", "brought", "run",
                           "ran", "read", "write", "wrote", "written", "hope", "expect", "enjoy", "arrive",
                           "return", "send", "sent", "pay", "paid", "eat", "ate", "eaten", "sleep", "slept"});
        add(PosTag::Other, {"oh", "wow", "yes", "yeah", "hey", "hi", "hello", "please", "thanks", "ah", "um",
                            "uh", "lol", "etc"});
        add(PosTag::Noun, {"family", "thing", "things", "business", "address", "glass", "class", "bus", "news",
                           "series", "species", "interest", "rest", "test", "bed", "need", "red", "hotel",
                           "room", "staff", "service", "food", "price", "product", "phone", "book", "time"});
        return t;
    }();
    return table;
}

bool ends_with(std::string_view w, std::string_view suffix) {
    return w.size() > suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

// Suffix heuristics; nullopt means "no evidence".
std::optional<PosTag> suffix_tag(std::string_view w) {
    if (w.size() <= 3) return std::nullopt;
    if (ends_with(w, "ly")) return PosTag::Adv;
    for (auto s : {"ing", "ed", "ize", "ise", "ify", "izes", "ises", "ifies"})
        if (ends_with(w, s)) return PosTag::Verb;
    for (auto s : {"tion", "sion", "ment", "ness", "ity", "ism", "ist", "ance", "ence", "ship", "hood", "er", "or"})
        if (ends_with(w, s)) return PosTag::Noun;
    for (auto s : {"ous", "ful", "able", "ible", "ive", "less", "ish", "ical", "est"})
        if (ends_with(w, s)) return PosTag::Adj;
    if (w.size() > 4 && ends_with(w, "ic")) return PosTag::Adj;
    if (w.size() > 5 && ends_with(w, "al")) return PosTag::Adj;
    return std::nullopt;
}

bool is_modal_or_to(std::string_view w) {
    static const std::unordered_set<std::string_view> kTriggers = {
        "to", "will", "would", "shall", "should", "can", "could", "may", "might", "must", "don't", "didn't",
        "doesn't", "won't", "can't", "cannot", "couldn't", "wouldn't", "shouldn't"};
    return kTriggers.count(w) != 0;
}

void insert_lines(std::unordered_set<std::string>& out, std::string_view text) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(pos, nl - pos);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
        if (!line.empty() && line.front() != '#') {
            std::string entry(line);
            std::transform(entry.begin(), entry.end(), entry.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            out.insert(std::move(entry));
        }
        pos = nl + 1;
    }
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot open resource file " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void add(SparseCounts& counts, std::string key, std::int64_t n = 1) { counts[std::move(key)] += n; }

// Word tokens of one sentence, in order.
template <typename Fn>
void for_each_sentence_words(const TokenizedReview& r, Fn&& fn) {
    std::vector<const Token*> words;
    for (const auto& s : r.sentences) {
        words.clear();
        for (std::size_t i = s.begin; i < s.end; ++i)
            if (!r.tokens[i].is_punct()) words.push_back(&r.tokens[i]);
        fn(std::span<const Token* const>(words));
    }
}

void accumulate(FeatureId feature, const TokenizedReview& r, const Lexicon& lexicon, SparseCounts& out) {
    switch (feature) {
        case FeatureId::WordUnigrams:
            for (const auto& t : r.tokens)
                if (!t.is_punct()) add(out, t.surface);
            break;
        case FeatureId::WordBigrams:
            for_each_sentence_words(r, [&](std::span<const Token* const> w) {
                for (std::size_t i = 1; i < w.size(); ++i) add(out, w[i - 1]->surface + ' ' + w[i]->surface);
            });
            break;
        case FeatureId::PosUnigrams:
            for (const auto& t : r.tokens)
                if (!t.is_punct()) add(out, std::string(to_string(t.tag)));
            break;
        case FeatureId::PosBigrams:
            for_each_sentence_words(r, [&](std::span<const Token* const> w) {
                for (std::size_t i = 1; i < w.size(); ++i)
                    add(out, std::string(to_string(w[i - 1]->tag)) + ' ' + std::string(to_string(w[i]->tag)));
            });
            break;
        case FeatureId::AdjAdv:
            for (const auto& t : r.tokens)
                if (t.tag == PosTag::Adj || t.tag == PosTag::Adv) add(out, t.surface);
            break;
        case FeatureId::Nouns:
            for (const auto& t : r.tokens)
                if (t.tag == PosTag::Noun) add(out, t.surface);
            break;
        case FeatureId::FunctionWords:
            for (const auto& t : r.tokens)
                if (!t.is_punct() && lexicon.is_function_word(t.surface)) add(out, t.surface);
            break;
        case FeatureId::Punctuations:
            for (const auto& t : r.tokens)
                if (t.is_punct()) add(out, t.surface);
            break;
        case FeatureId::AvgSentLen:
        case FeatureId::AvgTokenLen:
            throw ContractViolation("scalar feature has no sparse representation");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Names

std::string_view to_string(PosTag tag) {
    switch (tag) {
        case PosTag::Noun: return "NOUN";
        case PosTag::Verb: return "VERB";
        case PosTag::Adj: return "ADJ";
        case PosTag::Adv: return "ADV";
        case PosTag::Pron: return "PRON";
        case PosTag::Det: return "DET";
        case PosTag::Adp: return "ADP";
        case PosTag::Conj: return "CONJ";
        case PosTag::Num: return "NUM";
        case PosTag::Punct: return "PUNCT";
        case PosTag::Func: return "FUNC";
        case PosTag::Other: return "OTHER";
    }
    return "OTHER";
}

std::string_view to_string(FeatureId f) {
    switch (f) {
        case FeatureId::WordUnigrams: return "WordUnigrams";
        case FeatureId::WordBigrams: return "WordBigrams";
        case FeatureId::PosUnigrams: return "PosUnigrams";
        case FeatureId::PosBigrams: return "PosBigrams";
        case FeatureId::AdjAdv: return "AdjAdv";
        case FeatureId::Nouns: return "Nouns";
        case FeatureId::FunctionWords: return "FunctionWords";
        case FeatureId::Punctuations: return "Punctuations";
        case FeatureId::AvgSentLen: return "AvgSentLen";
        case FeatureId::AvgTokenLen: return "AvgTokenLen";
    }
    return "?";
}

std::optional<FeatureId> parse_feature(std::string_view name) {
    for (auto f : kAllFeatures)
        if (to_string(f) == name) return f;
    return std::nullopt;
}

std::string_view to_string(OsFeature f) {
    switch (f) {
        case OsFeature::AvgSentLen: return "AvgSentLen";
        case OsFeature::AvgTokenLen: return "AvgTokenLen";
        case OsFeature::NounRatio: return "NounRatio";
        case OsFeature::AdjAdvRatio: return "AdjAdvRatio";
        case OsFeature::FuncWordRatio: return "FuncWordRatio";
        case OsFeature::PunctRatio: return "PunctRatio";
    }
    return "?";
}

std::optional<OsFeature> parse_os_feature(std::string_view name) {
    for (auto f : kAllOsFeatures)
        if (to_string(f) == name) return f;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Lexicon

const Lexicon& Lexicon::builtin() {
    static const Lexicon lex = from_text(resources::kFunctionWords, resources::kAbbreviations);
    return lex;
}

Lexicon Lexicon::from_text(std::string_view function_words, std::string_view abbreviations) {
    Lexicon lex;
    insert_lines(lex.function_words_, function_words);
    insert_lines(lex.abbreviations_, abbreviations);
    return lex;
}

Lexicon Lexicon::from_files(const std::filesystem::path& function_words, const std::filesystem::path& abbreviations) {
    const std::string fw = function_words.empty() ? std::string(resources::kFunctionWords) : read_file(function_words);
    const std::string ab = abbreviations.empty() ? std::string(resources::kAbbreviations) : read_file(abbreviations);
    return from_text(fw, ab);
}

// ---------------------------------------------------------------------------
// Tokenizer and tagger

PosTag tag_word(std::string_view w) {
    if (w.empty()) return PosTag::Other;
    const auto& table = closed_class();
    if (auto it = table.find(w); it != table.end()) return it->second;

    bool any_digit = false, any_alpha = false;
    for (std::size_t i = 0; i < w.size(); i += decode(w, i).length) {
        const char32_t c = decode(w, i).value;
        if (is_digit(c))
            any_digit = true;
        else if (c != '.' && c != ',' && c != '\'' && c != '-')
            any_alpha = true;
    }
    if (any_digit && !any_alpha) return PosTag::Num;
    if (any_digit) return PosTag::Other;
    if (auto t = suffix_tag(w)) return *t;
    return PosTag::Noun;
}

TokenizedReview tokenize(std::string_view text, const Lexicon& lexicon) {
    TokenizedReview out;
    // Whether whitespace (or end of text) follows each token, and whether the
    // token is glued to its predecessor.
    std::vector<bool> space_after;
    std::vector<bool> glued_before;

    std::size_t i = 0;
    bool prev_space = true;
    while (i < text.size()) {
        const auto cp = decode(text, i);
        if (is_space(cp.value)) {
            prev_space = true;
            i += cp.length;
            continue;
        }
        if (is_word_char(cp.value)) {
            std::string word;
            char32_t last = 0;
            while (i < text.size()) {
                const auto c = decode(text, i);
                if (is_word_char(c.value)) {
                    if (c.value < 0x80)
                        word.push_back(static_cast<char>(std::tolower(static_cast<int>(c.value))));
                    else
                        word.append(text.substr(i, c.length));
                    last = c.value;
                    i += c.length;
                    continue;
                }
                // Joiners inside a word: apostrophes and hyphens between word
                // characters, decimal/thousand separators between digits.
                const std::size_t next_at = i + c.length;
                if (next_at >= text.size()) break;
                const char32_t next = decode(text, next_at).value;
                const bool apostrophe = c.value == '\'' || c.value == 0x2019;
                if ((apostrophe || c.value == '-') && is_word_char(next)) {
                    word.push_back(apostrophe ? '\'' : '-');
                    i = next_at;
                    continue;
                }
                if ((c.value == '.' || c.value == ',') && is_digit(last) && is_digit(next)) {
                    word.push_back(static_cast<char>(c.value));
                    i = next_at;
                    continue;
                }
                break;
            }
            out.tokens.push_back({std::move(word), PosTag::Other});
        } else {
            out.tokens.push_back({std::string(text.substr(i, cp.length)), PosTag::Punct});
            i += cp.length;
        }
        glued_before.push_back(!prev_space);
        prev_space = false;
        const bool at_end = i >= text.size();
        space_after.push_back(at_end || is_space(decode(text, i).value));
    }

    // Tags.
    for (std::size_t t = 0; t < out.tokens.size(); ++t) {
        auto& tok = out.tokens[t];
        if (tok.is_punct()) continue;
        tok.tag = tag_word(tok.surface);
        // Bare open-class word after "to"/modal reads as a verb.
        if (tok.tag == PosTag::Noun && t > 0 && is_modal_or_to(out.tokens[t - 1].surface) &&
            !suffix_tag(tok.surface) && !closed_class().count(tok.surface))
            tok.tag = PosTag::Verb;
    }

    // Sentences.
    std::size_t begin = 0;
    for (std::size_t t = 0; t < out.tokens.size(); ++t) {
        const auto& tok = out.tokens[t];
        if (!tok.is_punct() || !is_terminator(tok.surface) || !space_after[t]) continue;
        if (tok.surface == "." && t > 0 && glued_before[t] && !out.tokens[t - 1].is_punct()) {
            const auto& prev = out.tokens[t - 1].surface;
            if (lexicon.is_abbreviation(prev) || code_points(prev) == 1) continue;
        }
        out.sentences.push_back({begin, t + 1});
        begin = t + 1;
    }
    if (begin < out.tokens.size() || out.sentences.empty()) out.sentences.push_back({begin, out.tokens.size()});
    if (out.tokens.empty()) out.sentences.clear();
    return out;
}

// ---------------------------------------------------------------------------
// Features

ReviewStats& ReviewStats::operator+=(const ReviewStats& o) {
    tokens += o.tokens;
    words += o.words;
    word_chars += o.word_chars;
    sentences += o.sentences;
    nouns += o.nouns;
    adj_adv += o.adj_adv;
    function_words += o.function_words;
    punct_and_special += o.punct_and_special;
    return *this;
}

ReviewStats review_stats(const TokenizedReview& review, const Lexicon& lexicon) {
    ReviewStats s;
    s.sentences = static_cast<std::int64_t>(review.sentences.size());
    for (const auto& t : review.tokens) {
        ++s.tokens;
        if (t.is_punct()) {
            ++s.punct_and_special;
            continue;
        }
        ++s.words;
        for (std::size_t i = 0; i < t.surface.size();) {
            const auto c = decode(t.surface, i);
            ++s.word_chars;
            if (c.value < 0x80 && !is_ascii_alnum(c.value)) ++s.punct_and_special;
            i += c.length;
        }
        if (t.tag == PosTag::Noun) ++s.nouns;
        if (t.tag == PosTag::Adj || t.tag == PosTag::Adv) ++s.adj_adv;
        if (lexicon.is_function_word(t.surface)) ++s.function_words;
    }
    return s;
}

namespace {
double ratio(std::int64_t num, std::int64_t den) { return den == 0 ? 0.0 : double(num) / double(den); }
}  // namespace

double scalar_value(FeatureId feature, const ReviewStats& s) {
    switch (feature) {
        case FeatureId::AvgSentLen: return ratio(s.words, s.sentences);
        case FeatureId::AvgTokenLen: return ratio(s.word_chars, s.words);
        default: throw ContractViolation("feature " + std::string(to_string(feature)) + " is not scalar");
    }
}

double os_value(OsFeature feature, const ReviewStats& s) {
    switch (feature) {
        case OsFeature::AvgSentLen: return ratio(s.words, s.sentences);
        case OsFeature::AvgTokenLen: return ratio(s.word_chars, s.words);
        case OsFeature::NounRatio: return ratio(s.nouns, s.tokens);
        case OsFeature::AdjAdvRatio: return ratio(s.adj_adv, s.tokens);
        case OsFeature::FuncWordRatio: return ratio(s.function_words, s.tokens);
        case OsFeature::PunctRatio: return ratio(s.punct_and_special, s.tokens);
    }
    return 0.0;
}

FeatureVector extract(FeatureId feature, std::span<const TokenizedReview> window, const Lexicon& lexicon) {
    if (window.empty()) throw ContractViolation("extract: empty window");
    if (is_scalar(feature)) {
        ReviewStats total;
        for (const auto& r : window) total += review_stats(r, lexicon);
        return scalar_value(feature, total);
    }
    SparseCounts counts;
    for (const auto& r : window) accumulate(feature, r, lexicon, counts);
    return counts;
}

double cosine(const SparseCounts& a, const SparseCounts& b) {
    if (a.empty() && b.empty()) return 1.0;
    if (a.empty() || b.empty()) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [_, c] : a) na += double(c) * double(c);
    for (const auto& [_, c] : b) nb += double(c) * double(c);
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first)
            ++ia;
        else if (ib->first < ia->first)
            ++ib;
        else {
            dot += double(ia->second) * double(ib->second);
            ++ia;
            ++ib;
        }
    }
    return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

double scalar_similarity(double a, double b) { return 1.0 / (1.0 + std::log1p(std::fabs(a - b))); }

double similarity(FeatureId feature, const FeatureVector& a, const FeatureVector& b) {
    if (a.index() != b.index()) throw ContractViolation("similarity: mixed sparse and scalar feature vectors");
    if (is_scalar(feature) != std::holds_alternative<double>(a))
        throw ContractViolation("similarity: vector kind does not match feature " + std::string(to_string(feature)));
    if (const auto* x = std::get_if<double>(&a)) return scalar_similarity(*x, std::get<double>(b));
    return cosine(std::get<SparseCounts>(a), std::get<SparseCounts>(b));
}

double os_scalar(OsFeature feature, std::span<const TokenizedReview> window, const Lexicon& lexicon) {
    if (window.empty()) throw ContractViolation("os_scalar: empty window");
    ReviewStats total;
    for (const auto& r : window) total += review_stats(r, lexicon);
    return os_value(feature, total);
}

}  // namespace chd
