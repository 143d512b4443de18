/*
 * chd: changed-hands account detection.
 *
 * C interface. Every function returning chd_status reports CHD_OK on success;
 * on failure the message is available from chd_last_error() on the same
 * thread until the next failing call. Objects are opaque handles released
 * with their matching *_free function. Strings returned through char** out
 * parameters are heap-allocated and must be released with chd_string_free.
 *
 * JSON arguments:
 *   config_json   detector configuration, e.g.
 *                 {"method":"CHAD","K":5,"lambda_s":2,"theta_conf":0.99,
 *                  "features":["WordUnigrams",...],"rng_seed":0,
 *                  "permutations":200}
 *                 NULL or "" selects the defaults. method is one of CHAD,
 *                 CHAD-PFS, CHAD-F, OF-<feature>, OS-<scalar feature>.
 */
#ifndef CHD_CHD_H
#define CHD_CHD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CHD_BUILDING_LIBRARY)
#    define CHD_API __declspec(dllexport)
#  else
#    define CHD_API __declspec(dllimport)
#  endif
#else
#  define CHD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int chd_status;

#define CHD_OK 0
#define CHD_ERR_INVALID_ARGUMENT 1 /* null handle, bad option value */
#define CHD_ERR_PARSE 2            /* malformed file, record or JSON */
#define CHD_ERR_CONTRACT 3         /* precondition violated */
#define CHD_ERR_TOO_SHORT 4        /* account / sequence below minimum length */
#define CHD_ERR_POOL 5             /* dataset pool cannot satisfy the request */
#define CHD_ERR_IO 6               /* file could not be opened or written */
#define CHD_ERR_INTERNAL 7

typedef struct chd_lexicon chd_lexicon;
typedef struct chd_corpus chd_corpus;

CHD_API const char* chd_version(void);
CHD_API const char* chd_last_error(void);
CHD_API const char* chd_status_name(chd_status status);
CHD_API void chd_string_free(char* s);

/* Resources. Either path may be NULL to keep the built-in list. Functions
 * taking a const chd_lexicon* accept NULL for the built-in lexicon. */
CHD_API chd_status chd_lexicon_load(const char* function_words_path, const char* abbreviations_path,
                                    chd_lexicon** out);
CHD_API void chd_lexicon_free(chd_lexicon* lexicon);

/* Corpora: review JSON Lines, optionally labelled by a manifest. */
CHD_API chd_status chd_corpus_load(const char* path, chd_corpus** out);
CHD_API chd_status chd_corpus_attach_manifest(chd_corpus* corpus, const char* manifest_path);
CHD_API void chd_corpus_free(chd_corpus* corpus);
CHD_API size_t chd_corpus_account_count(const chd_corpus* corpus);
CHD_API size_t chd_corpus_review_count(const chd_corpus* corpus, size_t account);
/* The returned pointer stays valid for the lifetime of the corpus. */
CHD_API const char* chd_corpus_account_id(const chd_corpus* corpus, size_t account);
/* manifest_path may be NULL. */
CHD_API chd_status chd_corpus_write(const chd_corpus* corpus, const char* reviews_path, const char* manifest_path);

/* Detection. Writes one JSON record per account (JSON Lines). verbose adds
 * the per-pivot decisions. threads = 0 uses all hardware threads. */
CHD_API chd_status chd_detect(const chd_corpus* corpus, const chd_lexicon* lexicon, const char* config_json,
                              int verbose, size_t threads, const char* out_path);
CHD_API chd_status chd_detect_account(const chd_corpus* corpus, const chd_lexicon* lexicon, size_t account,
                                      const char* config_json, int verbose, char** out_json);

/* CSV rows account_id,pivot_start,feature,t,original_index,value for every
 * pivot and every active feature of the configured method. */
CHD_API chd_status chd_dump_sequences(const chd_corpus* corpus, const chd_lexicon* lexicon, const char* config_json,
                                      const char* out_path);

/* Feature pre-selection on a labelled dev corpus. Result JSON:
 * {"features":[...],"trace":[...]}. */
CHD_API chd_status chd_preselect(const chd_corpus* dev, const chd_lexicon* lexicon, const char* config_json,
                                 size_t threads, char** out_json);

/* Repeated split/fit/score protocol on a labelled corpus.
 * protocol_json: {"runs":5,"dev_per_class":100,"y":[1,3,5,7],"seed":0,
 *                 "threads":0,"skip_undetectable":false} (all optional). */
CHD_API chd_status chd_evaluate(const chd_corpus* dataset, const chd_lexicon* lexicon, const char* config_json,
                                const char* protocol_json, char** out_json);

/* Scores a detection JSON Lines file against the corpus labels.
 * scheme: "eval_cha" or "eval_cp". */
CHD_API chd_status chd_score(const chd_corpus* labelled, const char* detections_path, const char* scheme, size_t y,
                             char** out_json);

/* Synthetic dataset construction from a raw corpus.
 * options_json: {"mode":"matched"|"unmatched","n":350,"seed":0,
 *                "min_half":10,"min_account":20}.
 * The dataset handle carries labels; stats_json receives the size summary. */
CHD_API chd_status chd_build_dataset(const chd_corpus* raw, const char* options_json, chd_corpus** out_dataset,
                                     char** out_stats_json);

CHD_API chd_status chd_split_dev_test(const chd_corpus* dataset, size_t dev_per_class, uint64_t seed,
                                      chd_corpus** out_dev, chd_corpus** out_test);

#ifdef __cplusplus
}
#endif

#endif /* CHD_CHD_H */
