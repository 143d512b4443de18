// chd: command-line front end over the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chd/chd.h"

namespace {

using nlohmann::json;

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(chd_status status, const std::string& what) {
    if (status != CHD_OK)
        throw CliError(what + ": " + chd_status_name(status) + ": " + chd_last_error());
}

struct CorpusDeleter {
    void operator()(chd_corpus* c) const { chd_corpus_free(c); }
};
struct LexiconDeleter {
    void operator()(chd_lexicon* l) const { chd_lexicon_free(l); }
};
struct StringDeleter {
    void operator()(char* s) const { chd_string_free(s); }
};
using CorpusPtr = std::unique_ptr<chd_corpus, CorpusDeleter>;
using LexiconPtr = std::unique_ptr<chd_lexicon, LexiconDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

CorpusPtr load(const std::string& path, const std::string& manifest = "") {
    chd_corpus* raw = nullptr;
    check(chd_corpus_load(path.c_str(), &raw), "loading " + path);
    CorpusPtr corpus(raw);
    if (!manifest.empty()) check(chd_corpus_attach_manifest(corpus.get(), manifest.c_str()), "loading " + manifest);
    return corpus;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw CliError("cannot write " + path);
    out << text << '\n';
}

// Shared options that shape the detector configuration.
struct ConfigArgs {
    std::string config_path;
    std::string features_path;
    std::string method;
    std::string function_words;
    std::string abbreviations;

    void attach(CLI::App* cmd, bool with_method) {
        cmd->add_option("--config", config_path, "Detector configuration JSON file");
        cmd->add_option("--features", features_path, "Feature list JSON (output of preselect)");
        if (with_method) cmd->add_option("--method", method, "CHAD, CHAD-PFS, CHAD-F, OF-<feature> or OS-<feature>");
        cmd->add_option("--function-words", function_words, "Function-word lexicon, one entry per line");
        cmd->add_option("--abbreviations", abbreviations, "Abbreviation list, one entry per line");
    }

    std::string config_json() const {
        json config = config_path.empty() ? json::object() : json::parse(slurp(config_path));
        if (!features_path.empty()) {
            json f = json::parse(slurp(features_path));
            config["features"] = f.is_object() ? f.at("features") : f;
        }
        if (!method.empty()) config["method"] = method;
        return config.dump();
    }

    LexiconPtr lexicon() const {
        if (function_words.empty() && abbreviations.empty()) return nullptr;
        chd_lexicon* raw = nullptr;
        check(chd_lexicon_load(function_words.empty() ? nullptr : function_words.c_str(),
                               abbreviations.empty() ? nullptr : abbreviations.c_str(), &raw),
              "loading lexicon");
        return LexiconPtr(raw);
    }
};

std::vector<std::size_t> parse_ys(const std::string& text) {
    std::vector<std::size_t> ys;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            ys.push_back(std::stoul(item));
        } catch (const std::exception&) {
            throw CliError("invalid --y entry '" + item + "'");
        }
    }
    if (ys.empty()) throw CliError("--y needs at least one value");
    return ys;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Changed-hands account detection"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(chd_version()));

    // detect
    auto* detect = app.add_subcommand("detect", "Detect changed-hands accounts and their change points");
    std::string corpus_path, manifest_path, out_path;
    bool verbose = false;
    std::size_t threads = 0;
    ConfigArgs cfg;
    detect->add_option("--corpus", corpus_path, "Review JSON Lines file")->required();
    detect->add_option("--out", out_path, "Output JSON Lines file")->required();
    detect->add_flag("--verbose", verbose, "Include per-pivot decisions");
    detect->add_option("--threads", threads, "Worker threads (0 = all)");
    cfg.attach(detect, true);

    // dump-sequences
    auto* dump = app.add_subcommand("dump-sequences", "Write every pivot similarity sequence as CSV");
    dump->add_option("--corpus", corpus_path, "Review JSON Lines file")->required();
    dump->add_option("--out", out_path, "Output CSV file")->required();
    cfg.attach(dump, true);

    // preselect
    auto* pre = app.add_subcommand("preselect", "Global feature pre-selection on a labelled dev set");
    pre->add_option("--dev", corpus_path, "Dev review JSON Lines file")->required();
    pre->add_option("--manifest", manifest_path, "Dev manifest JSON Lines file")->required();
    pre->add_option("--out", out_path, "Output features JSON")->required();
    pre->add_option("--threads", threads, "Worker threads (0 = all)");
    cfg.attach(pre, false);

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "Run the repeated split / fit / score protocol");
    std::size_t runs = 5, dev_per_class = 100;
    std::string ys_text = "1,3,5,7";
    std::uint64_t seed = 0;
    bool skip_undetectable = false;
    eval->add_option("--corpus", corpus_path, "Labelled dataset review file")->required();
    eval->add_option("--manifest", manifest_path, "Dataset manifest")->required();
    eval->add_option("--runs", runs, "Number of runs")->capture_default_str();
    eval->add_option("--dev-per-class", dev_per_class, "Dev accounts per class")->capture_default_str();
    eval->add_option("--y", ys_text, "Comma-separated eval_cp windows")->capture_default_str();
    eval->add_option("--seed", seed, "Split seed")->capture_default_str();
    eval->add_option("--threads", threads, "Worker threads (0 = all)");
    eval->add_flag("--skip-undetectable", skip_undetectable, "Exclude too-short accounts from scoring");
    eval->add_option("--out", out_path, "Report JSON (default stdout)");
    cfg.attach(eval, true);

    // score
    auto* sc = app.add_subcommand("score", "Score a detect output against gold labels");
    std::string detections_path, scheme = "eval_cp";
    std::size_t y = 5;
    sc->add_option("--corpus", corpus_path, "Review JSON Lines file")->required();
    sc->add_option("--manifest", manifest_path, "Manifest JSON Lines file")->required();
    sc->add_option("--detections", detections_path, "Output of detect")->required();
    sc->add_option("--scheme", scheme, "eval_cha or eval_cp")->capture_default_str();
    sc->add_option("--y", y, "Localization window for eval_cp")->capture_default_str();
    sc->add_option("--out", out_path, "Report JSON (default stdout)");

    // build-dataset
    auto* build = app.add_subcommand("build-dataset", "Construct a labelled synthetic CH/NCH dataset");
    std::string mode = "matched", out_manifest, out_stats;
    std::size_t n = 350, min_half = 10, min_account = 20;
    build->add_option("--corpus", corpus_path, "Raw review JSON Lines file")->required();
    build->add_option("--mode", mode, "matched or unmatched")->capture_default_str();
    build->add_option("--n", n, "Accounts per class")->capture_default_str();
    build->add_option("--seed", seed, "Sampling seed")->capture_default_str();
    build->add_option("--min-half", min_half, "Minimum reviews per CH source account")->capture_default_str();
    build->add_option("--min-account", min_account, "Minimum reviews per NCH account")->capture_default_str();
    build->add_option("--out", out_path, "Output review JSON Lines file")->required();
    build->add_option("--out-manifest", out_manifest, "Output manifest JSON Lines file")->required();
    build->add_option("--out-stats", out_stats, "Output size statistics JSON");

    // split
    auto* split = app.add_subcommand("split", "Class-stratified dev/test split of a labelled dataset");
    std::string dev_prefix, test_prefix;
    split->add_option("--corpus", corpus_path, "Labelled review file")->required();
    split->add_option("--manifest", manifest_path, "Manifest")->required();
    split->add_option("--dev-per-class", dev_per_class, "Dev accounts per class")->capture_default_str();
    split->add_option("--seed", seed, "Split seed")->capture_default_str();
    split->add_option("--dev-prefix", dev_prefix, "Writes <prefix>.jsonl and <prefix>.manifest.jsonl")->required();
    split->add_option("--test-prefix", test_prefix, "Writes <prefix>.jsonl and <prefix>.manifest.jsonl")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*detect) {
            auto corpus = load(corpus_path);
            auto lex = cfg.lexicon();
            check(chd_detect(corpus.get(), lex.get(), cfg.config_json().c_str(), verbose, threads, out_path.c_str()),
                  "detect");
        } else if (*dump) {
            auto corpus = load(corpus_path);
            auto lex = cfg.lexicon();
            check(chd_dump_sequences(corpus.get(), lex.get(), cfg.config_json().c_str(), out_path.c_str()),
                  "dump-sequences");
        } else if (*pre) {
            auto corpus = load(corpus_path, manifest_path);
            auto lex = cfg.lexicon();
            char* raw = nullptr;
            check(chd_preselect(corpus.get(), lex.get(), cfg.config_json().c_str(), threads, &raw), "preselect");
            StringPtr result(raw);
            spit(out_path, result.get());
        } else if (*eval) {
            auto corpus = load(corpus_path, manifest_path);
            auto lex = cfg.lexicon();
            json protocol{{"runs", runs},
                          {"dev_per_class", dev_per_class},
                          {"y", parse_ys(ys_text)},
                          {"seed", seed},
                          {"threads", threads},
                          {"skip_undetectable", skip_undetectable}};
            char* raw = nullptr;
            check(chd_evaluate(corpus.get(), lex.get(), cfg.config_json().c_str(), protocol.dump().c_str(), &raw),
                  "evaluate");
            StringPtr result(raw);
            spit(out_path, result.get());
        } else if (*sc) {
            auto corpus = load(corpus_path, manifest_path);
            char* raw = nullptr;
            check(chd_score(corpus.get(), detections_path.c_str(), scheme.c_str(), y, &raw), "score");
            StringPtr result(raw);
            spit(out_path, result.get());
        } else if (*build) {
            auto corpus = load(corpus_path);
            json options{{"mode", mode}, {"n", n}, {"seed", seed}, {"min_half", min_half}, {"min_account", min_account}};
            chd_corpus* raw_ds = nullptr;
            char* raw_stats = nullptr;
            check(chd_build_dataset(corpus.get(), options.dump().c_str(), &raw_ds, &raw_stats), "build-dataset");
            CorpusPtr dataset(raw_ds);
            StringPtr stats(raw_stats);
            check(chd_corpus_write(dataset.get(), out_path.c_str(), out_manifest.c_str()), "writing dataset");
            if (!out_stats.empty()) spit(out_stats, stats.get());
            std::cerr << "wrote " << chd_corpus_account_count(dataset.get()) << " accounts to " << out_path << '\n';
        } else if (*split) {
            auto corpus = load(corpus_path, manifest_path);
            chd_corpus *dev = nullptr, *test = nullptr;
            check(chd_split_dev_test(corpus.get(), dev_per_class, seed, &dev, &test), "split");
            CorpusPtr dev_ptr(dev), test_ptr(test);
            check(chd_corpus_write(dev, (dev_prefix + ".jsonl").c_str(), (dev_prefix + ".manifest.jsonl").c_str()),
                  "writing dev split");
            check(chd_corpus_write(test, (test_prefix + ".jsonl").c_str(), (test_prefix + ".manifest.jsonl").c_str()),
                  "writing test split");
        }
    } catch (const std::exception& e) {
        std::cerr << "chd: " << e.what() << '\n';
        return EXIT_FAILURE;
    }
    return EXIT_SUCCESS;
}
