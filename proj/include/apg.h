/*
 * apg - automated prompt generation and evaluation for code models.
 *
 * C API over the C++ core: opaque handles, integer status codes, and
 * library-owned strings released with apg_string_free(). Thread-safe
 * except where noted; apg_last_error() is per-thread.
 */
#ifndef APG_H
#define APG_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum apg_status {
    APG_OK = 0,
    APG_ERR_INVALID_ARGUMENT = 1,
    APG_ERR_CONFIG = 2,
    APG_ERR_IO = 3,
    APG_ERR_TRANSPORT = 4,   /* network failure after retries */
    APG_ERR_PROVIDER = 5,    /* permanent provider rejection */
    APG_ERR_CAPABILITY = 6,  /* provider lacks a required feature */
    APG_ERR_OPTIMIZATION = 7,
    APG_ERR_PARTIAL = 8,     /* partial artifacts were persisted */
    APG_ERR_INTERNAL = 9
} apg_status;

const char* apg_version(void);

/* Message for the last failing call on this thread ("" when none). */
const char* apg_last_error(void);

/* Frees any char* returned through an out-parameter. NULL is a no-op. */
void apg_string_free(char* s);

/*
 * Experiment configuration: string key=value pairs layered from files and
 * explicit sets (later wins). Keys are documented in README.md; they match
 * the config-file format (task, method, train/valid/test, repeats, seed,
 * temperature, top_p, max_tokens, endpoint, model, mock, ...).
 */
typedef struct apg_config apg_config;

apg_status apg_config_create(apg_config** out);
void apg_config_destroy(apg_config* config);
apg_status apg_config_load_file(apg_config* config, const char* path);
apg_status apg_config_set(apg_config* config, const char* key, const char* value);
/* Value for a key into *value_out (caller frees); APG_ERR_CONFIG when unset. */
apg_status apg_config_get(const apg_config* config, const char* key, char** value_out);

/*
 * Dataset validation. Returns a JSON array of violation descriptions in
 * *violations_json_out (empty array when the dataset is clean). Violations
 * are data, not failures: the call succeeds either way.
 */
apg_status apg_validate_dataset(const char* jsonl_path, char** violations_json_out);

/*
 * Instruction optimization (method = ape | opro). Writes the candidate or
 * trajectory log plus best_instruction.txt under out_dir and returns the
 * selected instruction. On APG_ERR_PARTIAL the artifacts written so far
 * are valid.
 */
apg_status apg_optimize(const apg_config* config, const char* out_dir,
                        char** best_instruction_out);

/*
 * Full evaluation: repeated runs, per-sample metrics and reports in a run
 * directory under out_dir. *run_dir_out receives the run directory path.
 * APG_ERR_PARTIAL: a run failed mid-way; completed samples are retained.
 */
apg_status apg_evaluate(const apg_config* config, const char* out_dir, char** run_dir_out);

/*
 * Paired comparison of two evaluation run directories sharing a task and
 * test set. format is "markdown", "csv" or "json".
 */
apg_status apg_compare(const char* run_dir_a, const char* run_dir_b, const char* format,
                       char** document_out);

/*
 * Rebuilds the report for a run directory from its persisted per-sample
 * records (the audit path).
 */
apg_status apg_report(const char* run_dir, const char* format, char** document_out);

/* Convenience metric entry points for embedders. */
apg_status apg_codebleu(const char* candidate, const char* reference, const char* language,
                        double* value_out);

/*
 * Renders the stock prompt template for a task. task is "summarization",
 * "translation" or "api-rec"; unused language arguments may be NULL.
 */
apg_status apg_basic_prompt(const char* task, const char* lang, const char* source_lang,
                            const char* target_lang, char** prompt_out);

#ifdef __cplusplus
}
#endif

#endif /* APG_H */
