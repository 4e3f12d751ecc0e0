#ifndef NERFORGE_H
#define NERFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum NfStatus {
  NF_STATUS_OK = 0,
  NF_STATUS_NULL_ARGUMENT = 1,
  NF_STATUS_INVALID_UTF8 = 2,
  NF_STATUS_PARSE = 3,
  NF_STATUS_MISMATCH = 4,
  NF_STATUS_INVALID_INPUT = 5,
  NF_STATUS_PANIC = 99,
} NfStatus;

/**
 * A dictionary annotator: match index, lemmatizer and abbreviation list.
 */
typedef struct NfAnnotator NfAnnotator;

/**
 * A parsed CoNLL dataset.
 */
typedef struct NfDataset NfDataset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *nf_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *nf_version(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed. Null is ignored.
 */
void nf_string_free(char *s);

/**
 * Parse CoNLL bytes into a new dataset.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `out` must be writable.
 */
enum NfStatus nf_dataset_parse(const uint8_t *data, size_t len, struct NfDataset **out);

/**
 * # Safety
 * `ds` must come from this library and not have been freed. Null is ignored.
 */
void nf_dataset_free(struct NfDataset *ds);

/**
 * Number of sentences; 0 for null.
 *
 * # Safety
 * `ds` must be null or a live handle.
 */
size_t nf_dataset_len(const struct NfDataset *ds);

/**
 * # Safety
 * `ds` must be null or a live handle.
 */
size_t nf_dataset_token_count(const struct NfDataset *ds);

/**
 * Number of sentences whose tags are not IOB-valid.
 *
 * # Safety
 * `ds` must be null or a live handle.
 */
size_t nf_dataset_iob_invalid_count(const struct NfDataset *ds);

/**
 * Serialize to CoNLL text.
 *
 * # Safety
 * `ds` must be a live handle; `out` must be writable.
 */
enum NfStatus nf_dataset_write(const struct NfDataset *ds, char **out);

/**
 * New dataset with dangling Inside tags promoted to Begin.
 *
 * # Safety
 * `ds` must be a live handle; `out` must be writable.
 */
enum NfStatus nf_dataset_repair(const struct NfDataset *ds, struct NfDataset **out);

/**
 * New dataset with duplicate token sequences removed (first copy kept).
 *
 * # Safety
 * `ds` must be a live handle; `out` must be writable.
 */
enum NfStatus nf_dataset_dedup(const struct NfDataset *ds, struct NfDataset **out);

/**
 * New dataset without all-`O` sentences.
 *
 * # Safety
 * `ds` must be a live handle; `out` must be writable.
 */
enum NfStatus nf_dataset_drop_all_outside(const struct NfDataset *ds, struct NfDataset **out);

/**
 * New dataset holding `a`'s sentences followed by `b`'s.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum NfStatus nf_dataset_concat(const struct NfDataset *a,
                                const struct NfDataset *b,
                                struct NfDataset **out);

/**
 * Seeded train/dev/test split.
 *
 * # Safety
 * `ds` must be a live handle; the three output pointers must be writable.
 */
enum NfStatus nf_dataset_split(const struct NfDataset *ds,
                               double train_ratio,
                               double dev_ratio,
                               double test_ratio,
                               uint64_t seed,
                               struct NfDataset **train,
                               struct NfDataset **dev,
                               struct NfDataset **test);

/**
 * Build an annotator from a vocabulary (JSON Lines), an optional lemma
 * table (TSV) and an optional abbreviation list (one per line). Pass a null
 * pointer or zero length to omit an optional input.
 *
 * # Safety
 * Every non-null data pointer must reference the stated number of bytes;
 * `out` must be writable.
 */
enum NfStatus nf_annotator_new(const uint8_t *vocab_jsonl,
                               size_t vocab_len,
                               const uint8_t *lemma_tsv,
                               size_t lemma_len,
                               const uint8_t *abbrev,
                               size_t abbrev_len,
                               bool predefined_labels,
                               struct NfAnnotator **out);

/**
 * # Safety
 * `ann` must come from this library and not have been freed. Null is ignored.
 */
void nf_annotator_free(struct NfAnnotator *ann);

/**
 * Number of distinct lemma patterns in the annotator's index.
 *
 * # Safety
 * `ann` must be null or a live handle.
 */
size_t nf_annotator_pattern_count(const struct NfAnnotator *ann);

/**
 * Segment, tokenize and tag raw UTF-8 text.
 *
 * # Safety
 * `ann` must be a live handle; `text_ptr` must reference `len` bytes;
 * `out` must be writable.
 */
enum NfStatus nf_annotate_text(const struct NfAnnotator *ann,
                               const uint8_t *text_ptr,
                               size_t len,
                               struct NfDataset **out);

/**
 * Tag the tokens of an existing dataset, ignoring its current tags.
 *
 * # Safety
 * `ann` and `ds` must be live handles; `out` must be writable.
 */
enum NfStatus nf_annotate_dataset(const struct NfAnnotator *ann,
                                  const struct NfDataset *ds,
                                  struct NfDataset **out);

/**
 * Merge a general-model layer with a dictionary layer.
 *
 * # Safety
 * `general` and `dict` must be live handles; `out` must be writable.
 */
enum NfStatus nf_unify(const struct NfDataset *general,
                       const struct NfDataset *dict,
                       struct NfDataset **out);

/**
 * Score `pred` against `gold`; writes the JSON report to `out_json`.
 *
 * # Safety
 * `gold` and `pred` must be live handles; `out_json` must be writable.
 */
enum NfStatus nf_evaluate(const struct NfDataset *gold,
                          const struct NfDataset *pred,
                          bool unify,
                          char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NERFORGE_H */
