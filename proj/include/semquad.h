#ifndef SEMQUAD_H_
#define SEMQUAD_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/*
 * C interface to the semquad metric-learning library.
 *
 * All functions return a status code; on failure semquad_last_error() holds
 * a thread-local human-readable message. Handles returned through out
 * parameters are owned by the caller and released with the matching *_free.
 *
 * Configuration is passed as flat key=value text (one pair per line, '#'
 * comments allowed). Unknown keys are rejected. Every entry point that uses
 * randomness reads a `seed` key; identical config text yields identical
 * results.
 */

typedef enum {
  SEMQUAD_OK = 0,
  SEMQUAD_ERR_INVALID_ARGUMENT = 1,
  SEMQUAD_ERR_IO = 2,
  SEMQUAD_ERR_PARSE = 3,
  SEMQUAD_ERR_DIMENSION = 4,
  SEMQUAD_ERR_PROTOCOL = 5,
  SEMQUAD_ERR_DEGENERATE = 6,
  SEMQUAD_ERR_INTERNAL = 7
} semquad_status;

typedef struct semquad_dataset semquad_dataset;
typedef struct semquad_model semquad_model;
typedef struct semquad_embeddings semquad_embeddings;
typedef struct semquad_report semquad_report;

const char* semquad_version(void);
const char* semquad_last_error(void);

/* Rewrites config text with duplicate keys resolved (last wins) and keys
 * sorted. The result is heap-allocated; release with semquad_string_free. */
semquad_status semquad_config_normalize(const char* config, char** out_text);
void semquad_string_free(char* text);

/* ---- datasets ---------------------------------------------------------- */

semquad_status semquad_dataset_load(const char* path, semquad_dataset** out_dataset);
semquad_status semquad_dataset_save(const semquad_dataset* dataset, const char* path);

/* Synthetic multi-label data. Keys: seed, identities, soft_dims,
 * soft_cardinality, samples_per_identity, feature_dim, noise_sigma,
 * semantic_correlation, spread, identity_sigma. */
semquad_status semquad_dataset_generate(const char* config,
                                        semquad_dataset** out_dataset);

semquad_status semquad_dataset_split(const semquad_dataset* dataset,
                                     double train_fraction, int stratify,
                                     uint64_t seed, semquad_dataset** out_train,
                                     semquad_dataset** out_test);

size_t semquad_dataset_size(const semquad_dataset* dataset);
size_t semquad_dataset_feature_dim(const semquad_dataset* dataset);
size_t semquad_dataset_label_dims(const semquad_dataset* dataset);
void semquad_dataset_free(semquad_dataset* dataset);

/* ---- models ------------------------------------------------------------ */

/* Trains an embedding network. Keys: seed, loss (quadruplet|triplet|center|
 * softmax), learning_rate, momentum, weight_decay, batch_size,
 * minibatch_size, patience, max_epochs, margin, validation_fraction,
 * iters_per_epoch, semi_hard, center_lambda, center_learning_rate,
 * lr_step_epochs, lr_step_factor, hidden (comma list), embedding_dim,
 * activation (relu|tanh), normalize_output. A non-null `resume` continues
 * from that model's weights. */
semquad_status semquad_train(const semquad_dataset* dataset, const char* config,
                             const semquad_model* resume,
                             semquad_model** out_model);

semquad_status semquad_model_load(const char* path, semquad_model** out_model);
semquad_status semquad_model_save(const semquad_model* model, const char* path);

/* Per-epoch loss CSV from the producing training run; empty for loaded
 * models. Owned by the handle. */
const char* semquad_model_history_csv(const semquad_model* model);
size_t semquad_model_input_dim(const semquad_model* model);
size_t semquad_model_embedding_dim(const semquad_model* model);
void semquad_model_free(semquad_model* model);

/* ---- embeddings -------------------------------------------------------- */

semquad_status semquad_embed(const semquad_model* model,
                             const semquad_dataset* dataset,
                             semquad_embeddings** out_embeddings);
semquad_status semquad_embeddings_load(const char* path,
                                       semquad_embeddings** out_embeddings);
semquad_status semquad_embeddings_save(const semquad_embeddings* embeddings,
                                       const char* path);
size_t semquad_embeddings_count(const semquad_embeddings* embeddings);
size_t semquad_embeddings_dim(const semquad_embeddings* embeddings);

/* Borrowed view of one row; the value pointer stays valid until the handle
 * is freed. */
semquad_status semquad_embeddings_row(const semquad_embeddings* embeddings,
                                      size_t row, uint64_t* out_id,
                                      const double** out_values,
                                      size_t* out_dim);
void semquad_embeddings_free(semquad_embeddings* embeddings);

/* ---- evaluation -------------------------------------------------------- */

/* Splits the embedded samples into gallery and probes, then runs the
 * verification, identification, soft-label and retrieval protocols. Keys:
 * seed, open_set, gallery_fraction, impostor_fraction, soft_dims (comma
 * list), filter_dims (comma list), dir_thresholds (comma list),
 * bootstrap_trials, bootstrap_fraction. Embedding rows are matched to
 * dataset samples by id. */
semquad_status semquad_evaluate(const semquad_embeddings* embeddings,
                                const semquad_dataset* dataset,
                                const char* config, semquad_report** out_report);

/* Writes roc.csv, cmc.csv, hit_penetration.csv, scalars.txt and, when
 * present, dir.csv and hit_penetration_baseline.csv into out_dir. */
semquad_status semquad_report_write(const semquad_report* report,
                                    const char* out_dir);

/* The scalars.txt body; owned by the handle. */
const char* semquad_report_scalars(const semquad_report* report);
void semquad_report_free(semquad_report* report);

/* ---- plots ------------------------------------------------------------- */

/* Renders every two-column CSV in report_dir as an SVG in out_dir; stores
 * the number written in out_count when it is non-null. */
semquad_status semquad_plot_report(const char* report_dir, const char* out_dir,
                                   size_t* out_count);

/* Scatter of the embeddings colored by one label dimension, projected onto
 * two principal components when the embedding dimension exceeds two. */
semquad_status semquad_plot_embeddings(const semquad_embeddings* embeddings,
                                       const semquad_dataset* dataset,
                                       size_t label_dim, const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* SEMQUAD_H_ */
