#ifndef WAVESEQ_H
#define WAVESEQ_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WsAlignType {
  WS_ALIGN_TYPE_LOCAL = 0,
  WS_ALIGN_TYPE_GLOBAL = 1,
  WS_ALIGN_TYPE_SEMI_GLOBAL = 2,
} WsAlignType;

typedef enum WsGapModel {
  WS_GAP_MODEL_LINEAR = 0,
  WS_GAP_MODEL_AFFINE = 1,
} WsGapModel;

typedef enum WsStatus {
  WS_STATUS_OK = 0,
  WS_STATUS_NULL_POINTER = 1,
  WS_STATUS_INVALID_ARGUMENT = 2,
  WS_STATUS_EMPTY_SEQUENCE = 3,
  WS_STATUS_INVALID_SCHEME = 4,
  WS_STATUS_INVALID_TUNING = 5,
  WS_STATUS_LENGTH_OVERFLOW = 6,
  WS_STATUS_PACKED_RANGE_OVERFLOW = 7,
  WS_STATUS_EMPTY_BATCH = 8,
  WS_STATUS_PAIR_OUT_OF_RANGE = 9,
  WS_STATUS_BUFFER_TOO_SMALL = 10,
  WS_STATUS_INTERNAL = 11,
  WS_STATUS_PANIC = 12,
} WsStatus;

typedef struct WsAligner WsAligner;

typedef struct WsResult WsResult;

typedef struct WsSequence WsSequence;

/**
 * Aligner parameters. `lanes` or `cols_per_lane` of 0 select defaults by
 * sequence length; `workers` of 0 uses one worker per CPU.
 */
typedef struct WsParams {
  enum WsAlignType align_type;
  enum WsGapModel gap_model;
  int32_t match_score;
  int32_t mismatch_score;
  int32_t gap_open;
  int32_t gap_extend;
  bool traceback;
  uint32_t lanes;
  uint32_t cols_per_lane;
  bool packed;
  uint32_t workers;
} WsParams;

typedef struct WsPair {
  size_t query;
  size_t subject;
} WsPair;

/**
 * Half-open coordinates; starts are -1 when not computed.
 */
typedef struct WsCoords {
  int64_t q_start;
  int64_t q_end;
  int64_t s_start;
  int64_t s_end;
} WsCoords;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *ws_last_error(void);

/**
 * Static description of a status code.
 */
const char *ws_status_str(enum WsStatus status);

/**
 * Creates a sequence from `len` bytes of DNA text. `id` may be null.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `id`, when non-null, to a
 * NUL-terminated string; `out` must be writable.
 */
enum WsStatus ws_sequence_new(const char *id,
                              const uint8_t *data,
                              size_t len,
                              struct WsSequence **out);

/**
 * # Safety
 * `seq` must be null or a handle from [`ws_sequence_new`] not yet freed.
 */
void ws_sequence_free(struct WsSequence *seq);

/**
 * Length in symbols, or 0 for null.
 *
 * # Safety
 * `seq` must be null or a live handle.
 */
size_t ws_sequence_len(const struct WsSequence *seq);

/**
 * # Safety
 * `params` must point to a valid [`WsParams`]; `out` must be writable.
 */
enum WsStatus ws_aligner_new(const struct WsParams *params, struct WsAligner **out);

/**
 * # Safety
 * `aligner` must be null or a live handle.
 */
void ws_aligner_free(struct WsAligner *aligner);

/**
 * Aligns one pair.
 *
 * # Safety
 * All handles must be live; `out` must be writable.
 */
enum WsStatus ws_align(const struct WsAligner *aligner,
                       const struct WsSequence *query,
                       const struct WsSequence *subject,
                       struct WsResult **out);

/**
 * Scores `n_pairs` pairs into `scores` (one per pair, in order).
 *
 * # Safety
 * `queries`/`subjects` must hold `n_queries`/`n_subjects` live handles,
 * `pairs` `n_pairs` entries and `scores` room for `n_pairs` values.
 */
enum WsStatus ws_align_batch(const struct WsAligner *aligner,
                             const struct WsSequence *const *queries,
                             size_t n_queries,
                             const struct WsSequence *const *subjects,
                             size_t n_subjects,
                             const struct WsPair *pairs,
                             size_t n_pairs,
                             int32_t *scores);

/**
 * # Safety
 * `result` must be null or a live handle.
 */
void ws_result_free(struct WsResult *result);

/**
 * # Safety
 * `result` must be a live handle.
 */
int32_t ws_result_score(const struct WsResult *result);

/**
 * # Safety
 * `result` must be a live handle; `out` must be writable.
 */
enum WsStatus ws_result_coords(const struct WsResult *result, struct WsCoords *out);

/**
 * Writes the NUL-terminated CIGAR (empty in score-only mode) into `buf`.
 * `needed`, when non-null, receives the required size including the NUL.
 *
 * # Safety
 * `result` must be a live handle; `buf` must hold `cap` bytes or be null
 * with `cap == 0`.
 */
enum WsStatus ws_result_cigar(const struct WsResult *result, char *buf, size_t cap, size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WAVESEQ_H */
