#include "chd/chd.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "chd/corpus.hpp"
#include "chd/datasetgen.hpp"
#include "chd/error.hpp"
#include "chd/evaluation.hpp"
#include "chd/json_io.hpp"
#include "chd/parallel.hpp"
#include "chd/pipeline.hpp"
#include "chd/textfeat.hpp"

struct chd_lexicon {
    chd::Lexicon lexicon;
};

struct chd_corpus {
    std::vector<chd::Account> accounts;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

class InvalidArgument : public chd::Error {
public:
    using chd::Error::Error;
};

class IoError : public chd::Error {
public:
    using chd::Error::Error;
};

template <typename Fn>
chd_status guarded(Fn&& fn) {
    try {
        fn();
        return CHD_OK;
    } catch (const InvalidArgument& e) {
        g_last_error = e.what();
        return CHD_ERR_INVALID_ARGUMENT;
    } catch (const IoError& e) {
        g_last_error = e.what();
        return CHD_ERR_IO;
    } catch (const chd::ParseError& e) {
        g_last_error = e.what();
        return CHD_ERR_PARSE;
    } catch (const chd::SequenceTooShort& e) {
        g_last_error = e.what();
        return CHD_ERR_TOO_SHORT;
    } catch (const chd::ContractViolation& e) {
        g_last_error = e.what();
        return CHD_ERR_CONTRACT;
    } catch (const chd::InsufficientPool& e) {
        g_last_error = e.what();
        return CHD_ERR_POOL;
    } catch (const json::exception& e) {
        g_last_error = std::string("JSON: ") + e.what();
        return CHD_ERR_PARSE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CHD_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return CHD_ERR_INTERNAL;
    }
}

template <typename T>
const T& require(const T* p, const char* what) {
    if (!p) throw InvalidArgument(std::string(what) + " must not be NULL");
    return *p;
}

template <typename T>
T** require_out(T** p) {
    if (!p) throw InvalidArgument("output pointer must not be NULL");
    *p = nullptr;
    return p;
}

const chd::Lexicon& lexicon_of(const chd_lexicon* lex) { return lex ? lex->lexicon : chd::Lexicon::builtin(); }

json parse_json_arg(const char* text, const char* what) {
    if (!text || !*text) return json::object();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw chd::ParseError(std::string(what) + ": " + e.what());
    }
}

chd::DetectorConfig config_of(const char* config_json) {
    return chd::config_from_json(parse_json_arg(config_json, "config"));
}

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::ofstream open_out(const char* path) {
    if (!path) throw InvalidArgument("output path must not be NULL");
    std::ofstream out(path);
    if (!out) throw IoError(std::string("cannot write ") + path);
    return out;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    return it == j.end() || it->is_null() ? fallback : it->get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* what) {
    const std::set<std::string> keys(known.begin(), known.end());
    for (const auto& [key, _] : j.items())
        if (!keys.count(key)) throw chd::ParseError(std::string(what) + ": unknown key " + key);
}

}  // namespace

extern "C" {

const char* chd_version(void) { return CHD_VERSION_STRING; }

const char* chd_last_error(void) { return g_last_error.c_str(); }

const char* chd_status_name(chd_status status) {
    switch (status) {
        case CHD_OK: return "ok";
        case CHD_ERR_INVALID_ARGUMENT: return "invalid argument";
        case CHD_ERR_PARSE: return "parse error";
        case CHD_ERR_CONTRACT: return "contract violation";
        case CHD_ERR_TOO_SHORT: return "sequence too short";
        case CHD_ERR_POOL: return "insufficient pool";
        case CHD_ERR_IO: return "i/o error";
        case CHD_ERR_INTERNAL: return "internal error";
        default: return "unknown status";
    }
}

void chd_string_free(char* s) { std::free(s); }

chd_status chd_lexicon_load(const char* function_words_path, const char* abbreviations_path, chd_lexicon** out) {
    return guarded([&] {
        require_out(out);
        auto lex = std::make_unique<chd_lexicon>();
        lex->lexicon = chd::Lexicon::from_files(function_words_path ? function_words_path : "",
                                                abbreviations_path ? abbreviations_path : "");
        *out = lex.release();
    });
}

void chd_lexicon_free(chd_lexicon* lexicon) { delete lexicon; }

chd_status chd_corpus_load(const char* path, chd_corpus** out) {
    return guarded([&] {
        require_out(out);
        if (!path) throw InvalidArgument("path must not be NULL");
        auto c = std::make_unique<chd_corpus>();
        c->accounts = chd::load_corpus(path);
        *out = c.release();
    });
}

chd_status chd_corpus_attach_manifest(chd_corpus* corpus, const char* manifest_path) {
    return guarded([&] {
        if (!corpus) throw InvalidArgument("corpus must not be NULL");
        if (!manifest_path) throw InvalidArgument("manifest path must not be NULL");
        std::vector<std::string> warnings;
        const auto manifest = chd::load_manifest(manifest_path, &warnings);
        auto accounts = corpus->accounts;
        chd::attach_labels(accounts, manifest);
        corpus->accounts = std::move(accounts);
    });
}

void chd_corpus_free(chd_corpus* corpus) { delete corpus; }

size_t chd_corpus_account_count(const chd_corpus* corpus) { return corpus ? corpus->accounts.size() : 0; }

size_t chd_corpus_review_count(const chd_corpus* corpus, size_t account) {
    if (!corpus || account >= corpus->accounts.size()) return 0;
    return corpus->accounts[account].size();
}

const char* chd_corpus_account_id(const chd_corpus* corpus, size_t account) {
    if (!corpus || account >= corpus->accounts.size()) return nullptr;
    return corpus->accounts[account].account_id.c_str();
}

chd_status chd_corpus_write(const chd_corpus* corpus, const char* reviews_path, const char* manifest_path) {
    return guarded([&] {
        const auto& c = require(corpus, "corpus");
        auto out = open_out(reviews_path);
        chd::write_corpus(out, c.accounts);
        if (manifest_path) {
            auto m = open_out(manifest_path);
            chd::write_manifest(m, c.accounts);
        }
    });
}

chd_status chd_detect(const chd_corpus* corpus, const chd_lexicon* lexicon, const char* config_json, int verbose,
                      size_t threads, const char* out_path) {
    return guarded([&] {
        const auto& c = require(corpus, "corpus");
        const auto config = config_of(config_json);
        auto out = open_out(out_path);
        const auto results = chd::detect_all(c.accounts, config, lexicon_of(lexicon), threads);
        for (const auto& r : results) out << chd::to_json(r, verbose != 0).dump() << '\n';
        if (!out) throw IoError(std::string("write failed: ") + out_path);
    });
}

chd_status chd_detect_account(const chd_corpus* corpus, const chd_lexicon* lexicon, size_t account,
                              const char* config_json, int verbose, char** out_json) {
    return guarded([&] {
        require_out(out_json);
        const auto& c = require(corpus, "corpus");
        if (account >= c.accounts.size()) throw InvalidArgument("account index out of range");
        const auto config = config_of(config_json);
        const auto r = chd::detect_account(c.accounts[account], config, lexicon_of(lexicon));
        *out_json = duplicate(chd::to_json(r, verbose != 0).dump());
    });
}

chd_status chd_dump_sequences(const chd_corpus* corpus, const chd_lexicon* lexicon, const char* config_json,
                              const char* out_path) {
    return guarded([&] {
        const auto& c = require(corpus, "corpus");
        const auto config = config_of(config_json);
        if (config.method == chd::Method::OneSequence)
            throw chd::ContractViolation("dump-sequences needs a pivot-based method");
        const auto features = config.active_features();
        auto out = open_out(out_path);
        chd::write_sequences_csv_header(out);
        for (const auto& a : c.accounts) {
            if (a.size() < config.required_reviews()) continue;
            const auto seqs = chd::build_sequences(a, config.window, features, config.min_length, lexicon_of(lexicon));
            chd::write_sequences_csv(out, seqs);
        }
    });
}

chd_status chd_preselect(const chd_corpus* dev, const chd_lexicon* lexicon, const char* config_json, size_t threads,
                         char** out_json) {
    return guarded([&] {
        require_out(out_json);
        const auto& c = require(dev, "dev corpus");
        const auto config = config_of(config_json);
        const auto result = chd::preselect(c.accounts, config, {5, threads}, lexicon_of(lexicon));
        *out_json = duplicate(chd::to_json(result).dump(2));
    });
}

chd_status chd_evaluate(const chd_corpus* dataset, const chd_lexicon* lexicon, const char* config_json,
                        const char* protocol_json, char** out_json) {
    return guarded([&] {
        require_out(out_json);
        const auto& c = require(dataset, "dataset");
        const auto config = config_of(config_json);
        const json p = parse_json_arg(protocol_json, "protocol");
        reject_unknown(p, {"runs", "dev_per_class", "y", "seed", "threads", "skip_undetectable"}, "protocol");
        chd::ProtocolOptions opts;
        opts.runs = get_or<std::size_t>(p, "runs", opts.runs);
        opts.dev_per_class = get_or<std::size_t>(p, "dev_per_class", opts.dev_per_class);
        opts.ys = get_or<std::vector<std::size_t>>(p, "y", opts.ys);
        opts.seed = get_or<std::uint64_t>(p, "seed", opts.seed);
        opts.threads = get_or<std::size_t>(p, "threads", opts.threads);
        opts.scoring.skip_undetectable = get_or<bool>(p, "skip_undetectable", false);
        const auto report = chd::run_protocol(c.accounts, config, opts, lexicon_of(lexicon));
        json j = chd::to_json(report);
        j["config"] = chd::to_json(config);
        *out_json = duplicate(j.dump(2));
    });
}

chd_status chd_score(const chd_corpus* labelled, const char* detections_path, const char* scheme, size_t y,
                     char** out_json) {
    return guarded([&] {
        require_out(out_json);
        const auto& c = require(labelled, "corpus");
        if (!detections_path || !scheme) throw InvalidArgument("detections path and scheme must not be NULL");
        chd::Scheme s;
        if (std::strcmp(scheme, "eval_cha") == 0)
            s = chd::Scheme::Cha;
        else if (std::strcmp(scheme, "eval_cp") == 0)
            s = chd::Scheme::Cp;
        else
            throw InvalidArgument(std::string("unknown scheme ") + scheme);

        std::ifstream in(detections_path);
        if (!in) throw IoError(std::string("cannot open ") + detections_path);
        std::vector<chd::DetectionResult> results;
        std::string line;
        std::size_t n = 0;
        while (std::getline(in, line)) {
            ++n;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            json j;
            try {
                j = json::parse(line);
            } catch (const json::parse_error& e) {
                throw chd::ParseError("malformed detection record at line " + std::to_string(n));
            }
            chd::DetectionResult r;
            r.account_id = j.at("account_id").get<std::string>();
            const auto outcome = j.at("outcome").get<std::string>();
            if (outcome == "changed") {
                r.outcome = chd::Outcome::ChangedAt;
                r.change_index = j.at("change_index").get<std::size_t>();
            } else if (outcome == "none") {
                r.outcome = chd::Outcome::None;
            } else if (outcome == "undetectable") {
                r.outcome = chd::Outcome::Undetectable;
            } else {
                throw chd::ParseError("unknown outcome " + outcome + " at line " + std::to_string(n));
            }
            results.push_back(std::move(r));
        }
        const auto report = chd::score(results, chd::manifest_of(c.accounts), s, y);
        *out_json = duplicate(chd::to_json(report, true).dump(2));
    });
}

chd_status chd_build_dataset(const chd_corpus* raw, const char* options_json, chd_corpus** out_dataset,
                             char** out_stats_json) {
    return guarded([&] {
        require_out(out_dataset);
        if (out_stats_json) *out_stats_json = nullptr;
        const auto& c = require(raw, "corpus");
        const json o = parse_json_arg(options_json, "dataset options");
        reject_unknown(o, {"mode", "n", "seed", "min_half", "min_account"}, "dataset options");
        const auto mode = get_or<std::string>(o, "mode", "matched");
        const auto n = get_or<std::size_t>(o, "n", 350);
        const auto seed = get_or<std::uint64_t>(o, "seed", 0);
        chd::BuildOptions build;
        build.min_half = get_or<std::size_t>(o, "min_half", build.min_half);
        build.min_account = get_or<std::size_t>(o, "min_account", build.min_account);

        chd::Dataset ds;
        if (mode == "matched")
            ds = chd::build_matched(c.accounts, n, seed, build);
        else if (mode == "unmatched")
            ds = chd::build_unmatched(c.accounts, n, seed, build);
        else
            throw InvalidArgument("mode must be matched or unmatched");

        auto out = std::make_unique<chd_corpus>();
        out->accounts = std::move(ds.accounts);
        if (out_stats_json) *out_stats_json = duplicate(chd::to_json(ds.report).dump(2));
        *out_dataset = out.release();
    });
}

chd_status chd_split_dev_test(const chd_corpus* dataset, size_t dev_per_class, uint64_t seed, chd_corpus** out_dev,
                              chd_corpus** out_test) {
    return guarded([&] {
        require_out(out_dev);
        require_out(out_test);
        const auto& c = require(dataset, "dataset");
        auto split = chd::split_dev_test(c.accounts, dev_per_class, seed);
        auto dev = std::make_unique<chd_corpus>();
        auto test = std::make_unique<chd_corpus>();
        dev->accounts = std::move(split.dev);
        test->accounts = std::move(split.test);
        *out_dev = dev.release();
        *out_test = test.release();
    });
}

}  // extern "C"
