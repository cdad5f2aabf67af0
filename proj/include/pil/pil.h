/* C interface to the pseudoinverse-learning library.
 *
 * Every object is an opaque handle created by a pil_*_create / producer call
 * and released with the matching pil_*_destroy. Functions that can fail
 * return a pil_status; on failure pil_last_error() describes the problem
 * for the calling thread. Output arrays are caller-allocated and their
 * length is always passed explicitly. */
#ifndef PIL_PIL_H
#define PIL_PIL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PIL_BUILDING_SHARED)
#    define PIL_API __declspec(dllexport)
#  else
#    define PIL_API __declspec(dllimport)
#  endif
#else
#  define PIL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pil_status {
    PIL_OK = 0,
    PIL_ERR_SINGULAR_MATRIX = 1,
    PIL_ERR_RANK_DEFICIENT = 2,
    PIL_ERR_NOT_SYMMETRIC = 3,
    PIL_ERR_NO_CONVERGENCE = 4,
    PIL_ERR_DIMENSION_MISMATCH = 5,
    PIL_ERR_INVALID_ARGUMENT = 6,
    PIL_ERR_LENGTH_MISMATCH = 7,
    PIL_ERR_INVALID_LABEL = 8,
    PIL_ERR_LAYOUT_MISMATCH = 9,
    PIL_ERR_SHAPE_MISMATCH = 10,
    PIL_ERR_PARSE = 11,
    PIL_ERR_SCHEMA = 12,
    PIL_ERR_IO = 13,
    PIL_ERR_NULL_ARGUMENT = 64,
    PIL_ERR_OUT_OF_MEMORY = 65,
    PIL_ERR_INTERNAL = 66
} pil_status;

typedef enum pil_solver {
    PIL_SOLVER_SVD = 0,
    PIL_SOLVER_LU = 1,
    PIL_SOLVER_MGS_QR = 2,
    PIL_SOLVER_HH_QR = 3,
    PIL_SOLVER_HESSENBERG = 4,
    PIL_SOLVER_SCHUR = 5
} pil_solver;

#define PIL_SOLVER_COUNT 6

typedef enum pil_activation {
    PIL_ACTIVATION_SIGMOID = 0,
    PIL_ACTIVATION_TANH = 1,
    PIL_ACTIVATION_IDENTITY = 2
} pil_activation;

PIL_API const char* pil_status_name(pil_status status);
/* Message of the last failed call on this thread; empty string if none. */
PIL_API const char* pil_last_error(void);

PIL_API const char* pil_solver_name(pil_solver solver);
PIL_API pil_status pil_solver_from_name(const char* name, pil_solver* out);

/* ---- matrices ---------------------------------------------------------- */

typedef struct pil_matrix pil_matrix;

/* data is row-major rows*cols values, or NULL for a zero matrix. */
PIL_API pil_status pil_matrix_create(size_t rows, size_t cols, const double* data, pil_matrix** out);
PIL_API void pil_matrix_destroy(pil_matrix* m);
PIL_API size_t pil_matrix_rows(const pil_matrix* m);
PIL_API size_t pil_matrix_cols(const pil_matrix* m);
/* Borrowed pointer to rows*cols row-major values, valid until destroy. */
PIL_API const double* pil_matrix_data(const pil_matrix* m);

/* ---- solvers ----------------------------------------------------------- */

/* w (length m = cols of h) for h w = targets (length n = rows of h). */
PIL_API pil_status pil_solve_output_weights(const pil_matrix* h, const double* targets, size_t n,
                                            pil_solver solver, double ridge_lambda, double* w, size_t m);

/* 1 - diag(H (H^T H + lambda I)^-1 H^T), written to out (length rows of h). */
PIL_API pil_status pil_hat_diagnostic(const pil_matrix* h, double ridge_lambda, pil_solver route,
                                      double* out, size_t n);

PIL_API pil_status pil_flop_estimate(pil_solver solver, int64_t m, int64_t n, int64_t* out);

/* ---- ELM training ------------------------------------------------------ */

typedef struct pil_elm_config {
    size_t hidden_neurons;
    pil_activation activation;
    pil_solver solver;
    uint64_t rng_seed;
    double ridge_lambda;
} pil_elm_config;

PIL_API void pil_elm_config_default(pil_elm_config* cfg);

typedef struct pil_model pil_model;

/* targets are 0/1, one per row of features. train_seconds may be NULL. */
PIL_API pil_status pil_train(const pil_matrix* features, const double* targets, size_t n,
                             const pil_elm_config* cfg, pil_model** out, double* train_seconds);
PIL_API void pil_model_destroy(pil_model* model);
PIL_API size_t pil_model_hidden_neurons(const pil_model* model);
PIL_API size_t pil_model_features(const pil_model* model);
PIL_API pil_status pil_model_output_weights(const pil_model* model, double* out, size_t len);
/* scores and labels may each be NULL; n must equal rows of features. */
PIL_API pil_status pil_predict(const pil_model* model, const pil_matrix* features, double* scores,
                               int* labels, size_t n);

/* ---- metrics and folds ------------------------------------------------- */

typedef struct pil_confusion {
    uint64_t tp, fp, fn, tn;
} pil_confusion;

typedef struct pil_metrics {
    double sensitivity;
    double precision;
    double f_measure;
    double specificity;
    double mcc;
    double accuracy;
    double train_duration_s;
    double test_duration_s;
} pil_metrics;

PIL_API pil_status pil_confusion_counts(const int* pred, const int* truth, size_t n, pil_confusion* out);
PIL_API pil_status pil_metric_report(const pil_confusion* cm, pil_metrics* out);

typedef struct pil_fold_plan pil_fold_plan;

/* n_samples = 0 skips the layout size check. */
PIL_API pil_status pil_session_kfold(size_t n_sessions, size_t runs, size_t n_images, size_t n_samples,
                                     pil_fold_plan** out);
PIL_API void pil_fold_plan_destroy(pil_fold_plan* plan);
PIL_API size_t pil_fold_plan_count(const pil_fold_plan* plan);
PIL_API size_t pil_fold_plan_test_size(const pil_fold_plan* plan, size_t fold);
PIL_API size_t pil_fold_plan_train_size(const pil_fold_plan* plan, size_t fold);
PIL_API pil_status pil_fold_plan_test_indices(const pil_fold_plan* plan, size_t fold, size_t* out, size_t len);
PIL_API pil_status pil_fold_plan_train_indices(const pil_fold_plan* plan, size_t fold, size_t* out, size_t len);

/* ---- datasets ---------------------------------------------------------- */

typedef struct pil_synth_options {
    uint64_t seed;
    size_t n_sessions;
    size_t runs;
    size_t n_images;
    double snr;
    size_t channels;
    size_t samples;
} pil_synth_options;

PIL_API void pil_synth_options_default(pil_synth_options* opts);

typedef struct pil_dataset pil_dataset;

/* Synthetic epochs, grand averaged over channels into one row per trial. */
PIL_API pil_status pil_dataset_synthesize(const pil_synth_options* opts, pil_dataset** out);
/* layout holds (session, run, image) triples, 3*rows(features) values. */
PIL_API pil_status pil_dataset_create(const pil_matrix* features, const int* labels, const uint32_t* layout,
                                      size_t n, pil_dataset** out);
PIL_API pil_status pil_dataset_load_csv(const char* path, pil_dataset** out);
PIL_API pil_status pil_dataset_write_csv(const pil_dataset* ds, const char* path);
PIL_API void pil_dataset_destroy(pil_dataset* ds);
PIL_API size_t pil_dataset_trials(const pil_dataset* ds);
PIL_API size_t pil_dataset_features(const pil_dataset* ds);
/* Borrowed feature matrix, valid until the dataset is destroyed. */
PIL_API const pil_matrix* pil_dataset_feature_matrix(const pil_dataset* ds);
PIL_API pil_status pil_dataset_labels(const pil_dataset* ds, int* out, size_t len);

/* ---- benchmark --------------------------------------------------------- */

typedef struct pil_bench_options {
    const pil_solver* solvers; /* NULL with n_solvers = 0 means all six */
    size_t n_solvers;
    size_t hidden_neurons;
    uint64_t seed;
    double ridge_lambda;
    size_t repeats;
    pil_activation activation;
    int has_snr;
    double snr;
} pil_bench_options;

PIL_API void pil_bench_options_default(pil_bench_options* opts);

typedef struct pil_bench_row {
    pil_solver solver;
    pil_status error; /* PIL_OK when the solver ran on every fold */
    pil_metrics metrics;
    double train_s;
    double test_s;
    int64_t flops;
} pil_bench_row;

typedef struct pil_bench_report pil_bench_report;

PIL_API pil_status pil_evaluate(const pil_dataset* ds, const pil_bench_options* opts, pil_bench_report** out);
PIL_API void pil_bench_report_destroy(pil_bench_report* report);
PIL_API size_t pil_bench_report_rows(const pil_bench_report* report);
PIL_API pil_status pil_bench_report_row(const pil_bench_report* report, size_t i, pil_bench_row* out);
/* Borrowed strings, valid until the report is destroyed. */
PIL_API const char* pil_bench_report_row_error(const pil_bench_report* report, size_t i);
PIL_API const char* pil_bench_report_json(const pil_bench_report* report);
/* Hash of the training H of one fold for one row (0 if out of range). */
PIL_API uint64_t pil_bench_report_fold_hash(const pil_bench_report* report, size_t row, size_t fold);

#ifdef __cplusplus
}
#endif

#endif /* PIL_PIL_H */
