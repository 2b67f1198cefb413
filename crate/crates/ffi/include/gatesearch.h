#ifndef GATESEARCH_H
#define GATESEARCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GsStatus {
  GS_STATUS_OK = 0,
  GS_STATUS_DOMAIN = 1,
  GS_STATUS_CONFIG = 2,
  GS_STATUS_VALIDATION = 3,
  GS_STATUS_INDEX = 4,
  GS_STATUS_RESOURCE = 5,
  GS_STATUS_PARSE = 6,
  GS_STATUS_IO = 7,
  GS_STATUS_NULL_POINTER = 8,
  // A Rust panic was caught at the boundary; the handle arguments are unchanged.
  GS_STATUS_PANIC = 9,
} GsStatus;

// A built search algorithm, with or without its circuit.
typedef struct GsAlgorithm GsAlgorithm;

// A database with its marked items.
typedef struct GsDatabase GsDatabase;

// A recursion schedule.
typedef struct GsSchedule GsSchedule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null if none failed.
// The pointer stays valid until the next failing call on the same thread.
const char *gs_last_error(void);

// # Safety
// `s` must come from this library and not have been freed; null is a no-op.
void gs_string_free(char *s);

// Rounds needed to amplify `2^-n` to exactly `1/k`.
//
// # Safety
// `out` must be valid for writes.
enum GsStatus gs_compute_w(uint32_t n, uint64_t k, uint64_t *out);

// # Safety
// `out` must be valid for writes.
enum GsStatus gs_schedule_new(uint32_t n,
                              uint64_t k,
                              uint32_t r,
                              bool relaxed,
                              struct GsSchedule **out);

// Number of levels; 0 for a null handle.
//
// # Safety
// `s` must be null or a live schedule handle.
size_t gs_schedule_len(const struct GsSchedule *s);

// Address width of level `i` (0-based).
//
// # Safety
// `s` must be a live schedule handle and `out` valid for writes.
enum GsStatus gs_schedule_width(const struct GsSchedule *s, size_t i, uint32_t *out);

// Whether every hypothesis of the schedule holds.
//
// # Safety
// `s` must be null or a live schedule handle.
bool gs_schedule_preconditions_hold(const struct GsSchedule *s);

// # Safety
// `s` must be null or a handle from [`gs_schedule_new`] not yet freed.
void gs_schedule_free(struct GsSchedule *s);

// A database of `2^n` items with the single marked item `t`.
//
// # Safety
// `out` must be valid for writes.
enum GsStatus gs_database_unique(uint32_t n, uint64_t t, struct GsDatabase **out);

// A database from a hex string of exactly `2^n / 4` digits (`n ≥ 2`).
//
// # Safety
// `hex` must be a nul-terminated string and `out` valid for writes.
enum GsStatus gs_database_from_hex(const char *hex, uint32_t n, struct GsDatabase **out);

// # Safety
// `db` must be null or a database handle not yet freed.
void gs_database_free(struct GsDatabase *db);

// First level: `H^n` amplified to exactly `1/k`.
//
// # Safety
// `out` must be valid for writes.
enum GsStatus gs_build_c1(uint32_t n, uint64_t k, bool count_only, struct GsAlgorithm **out);

// The recursion over `len` hand-picked widths, optionally boosted to certainty.
//
// # Safety
// `widths` must point to `len` readable values and `out` be valid for writes.
enum GsStatus gs_build_pipeline(const uint32_t *widths,
                                size_t len,
                                uint64_t k,
                                bool boost,
                                bool count_only,
                                struct GsAlgorithm **out);

// # Safety
// `alg` must be null or an algorithm handle not yet freed.
void gs_algorithm_free(struct GsAlgorithm *alg);

// Exact query and gate counts as decimal strings; free both with [`gs_string_free`].
//
// # Safety
// `alg` must be a live handle; `queries` and `gates` valid for writes.
enum GsStatus gs_algorithm_counts(const struct GsAlgorithm *alg, char **queries, char **gates);

// The success probability the construction guarantees, as a 40-digit decimal.
//
// # Safety
// `alg` must be a live handle and `out` valid for writes.
enum GsStatus gs_algorithm_a_known(const struct GsAlgorithm *alg, char **out);

// Total wires: address plus one flag per amplification.
//
// # Safety
// `alg` must be null or a live handle.
uint64_t gs_algorithm_wires(const struct GsAlgorithm *alg);

// Runs the circuit on `db` and writes the probability of measuring a good state.
//
// # Safety
// `alg` and `db` must be live handles and `out` valid for writes.
enum GsStatus gs_algorithm_simulate(const struct GsAlgorithm *alg,
                                    const struct GsDatabase *db,
                                    size_t max_wires,
                                    double *out);

// Writes the circuit as line-oriented JSON with its extension record.
//
// # Safety
// `alg` must be a live handle and `path` a nul-terminated string.
enum GsStatus gs_algorithm_export(const struct GsAlgorithm *alg, const char *path);

// Count-only estimate of the recursion for `N = 2^n` as a JSON report.
//
// # Safety
// `out` must be valid for writes; free the result with [`gs_string_free`].
enum GsStatus gs_estimate_json(uint32_t n,
                               uint64_t k,
                               uint32_t r,
                               bool boost,
                               bool relaxed,
                               char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GATESEARCH_H */
