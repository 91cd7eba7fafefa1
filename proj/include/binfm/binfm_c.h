/*
 * C interface of the binarized factorization machine library.
 *
 * All functions return a bfm_status. On failure a human-readable message is
 * available from bfm_last_error() on the calling thread until the next call
 * into the library from that thread. Handles are opaque; every handle
 * returned through an out-parameter must be released with its _free
 * function. Handles are immutable after creation and may be shared between
 * threads for reading.
 */
#ifndef BINFM_C_H
#define BINFM_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BFM_API __declspec(dllexport)
#else
#define BFM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bfm_status {
  BFM_OK = 0,
  BFM_ERR_USAGE = 1,      /* invalid argument or option */
  BFM_ERR_DATA = 2,       /* malformed or incompatible data */
  BFM_ERR_DIVERGENCE = 3, /* training produced a non-finite loss */
  BFM_ERR_IO = 4,         /* file could not be opened, read or written */
  BFM_ERR_FORMAT = 5,     /* model file failed validation */
  BFM_ERR_INTERNAL = 6
} bfm_status;

typedef enum bfm_model_kind { BFM_MODEL_FM = 0, BFM_MODEL_SEFM = 1, BFM_MODEL_BINFM = 2 } bfm_model_kind;
typedef enum bfm_bin_strategy { BFM_BINS_EQUAL_WIDTH = 0, BFM_BINS_QUANTILE = 1 } bfm_bin_strategy;
typedef enum bfm_loss { BFM_LOSS_LOGISTIC = 0, BFM_LOSS_HINGE = 1, BFM_LOSS_SQUARED = 2 } bfm_loss;
typedef enum bfm_optimizer { BFM_OPT_ADAGRAD = 0, BFM_OPT_SGD = 1 } bfm_optimizer;

typedef struct bfm_dataset bfm_dataset;
typedef struct bfm_model bfm_model;

typedef struct bfm_train_options {
  int32_t model_kind;   /* bfm_model_kind */
  uint64_t bins;        /* ignored for BFM_MODEL_FM */
  int32_t bin_strategy; /* bfm_bin_strategy */
  uint64_t rank;
  double eta;
  double lambda1;
  double lambda2;
  double eps;
  int32_t loss;      /* bfm_loss */
  int32_t optimizer; /* bfm_optimizer, binfm only */
  uint64_t epochs;
  double tol;          /* relative loss improvement for early stop, 0 = off */
  int32_t use_scaling; /* binfm only; 0 fixes alpha = beta = 1 */
  uint64_t seed;
  uint64_t jobs; /* threads across one-vs-all heads */
} bfm_train_options;

typedef struct bfm_model_info {
  int32_t kind; /* bfm_model_kind */
  uint64_t input_dim;
  uint64_t bins; /* 0 for BFM_MODEL_FM */
  uint64_t rank;
  uint64_t classes;
  uint64_t heads;
  uint64_t parameter_bits; /* coefficient storage, summed over heads */
  uint64_t file_bytes;     /* size of the serialized model */
} bfm_model_info;

/* One row of the memory table; method is a static string. */
typedef struct bfm_memory_row {
  const char* method;
  double bits;
  double ratio_to_fm;
} bfm_memory_row;

#define BFM_MEMORY_ROWS 4

BFM_API const char* bfm_last_error(void);
BFM_API const char* bfm_version(void);

/* ---- datasets ---------------------------------------------------------- */

BFM_API bfm_status bfm_dataset_load_libsvm(const char* path, uint64_t min_dim, bfm_dataset** out);
BFM_API bfm_status bfm_dataset_save_libsvm(const bfm_dataset* ds, const char* path);
/* kind: "circles", "moons" or "hetero". */
BFM_API bfm_status bfm_dataset_generate(const char* kind, uint64_t n, double noise, uint64_t seed, bfm_dataset** out);
BFM_API bfm_status bfm_dataset_split(const bfm_dataset* ds, double train_frac, uint64_t seed, bfm_dataset** train,
                                     bfm_dataset** test);
BFM_API bfm_status bfm_dataset_kfold(const bfm_dataset* ds, uint64_t k, uint64_t fold, uint64_t seed,
                                     bfm_dataset** train, bfm_dataset** held_out);
BFM_API uint64_t bfm_dataset_size(const bfm_dataset* ds);
BFM_API uint64_t bfm_dataset_dim(const bfm_dataset* ds);
BFM_API uint64_t bfm_dataset_classes(const bfm_dataset* ds);
/* Original label of sample i. */
BFM_API bfm_status bfm_dataset_label(const bfm_dataset* ds, uint64_t i, double* label);
BFM_API void bfm_dataset_free(bfm_dataset* ds);

/* ---- training and models ------------------------------------------------ */

BFM_API void bfm_train_options_default(bfm_train_options* opts);
BFM_API bfm_status bfm_train(const bfm_dataset* train, const bfm_train_options* opts, bfm_model** out);
/* Copies up to cap losses of head `head` (entry 0 = before training) and sets
 * *len to the full history length. Loaded models have no history. */
BFM_API bfm_status bfm_model_loss_history(const bfm_model* model, uint64_t head, double* out, uint64_t cap,
                                          uint64_t* len);
BFM_API bfm_status bfm_model_save(const bfm_model* model, const char* path);
BFM_API bfm_status bfm_model_load(const char* path, bfm_model** out);
BFM_API bfm_status bfm_model_get_info(const bfm_model* model, bfm_model_info* info);
BFM_API void bfm_model_free(bfm_model* model);

/* Original-label predictions for every sample of ds into out[0..size). */
BFM_API bfm_status bfm_model_predict(const bfm_model* model, const bfm_dataset* ds, double* out);
BFM_API bfm_status bfm_model_accuracy(const bfm_model* model, const bfm_dataset* ds, double* accuracy);
/* Scores a dense point x[0..dim). *score is the winning head's score. */
BFM_API bfm_status bfm_model_score_dense(const bfm_model* model, const double* x, uint64_t dim, double* score,
                                         double* label);

/* ---- memory accounting --------------------------------------------------- */

/* Fills rows[0..BFM_MEMORY_ROWS): FM, SEFM, DFM, Binarized FM. */
BFM_API bfm_status bfm_memory_report(uint64_t d, uint64_t b, uint64_t m, bfm_memory_row* rows);

#ifdef __cplusplus
}
#endif

#endif /* BINFM_C_H */
