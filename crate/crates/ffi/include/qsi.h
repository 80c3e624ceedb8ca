#ifndef QSI_H
#define QSI_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QsiChannel {
  QSI_CHANNEL_QUANTUM = 0,
  QSI_CHANNEL_CLASSICAL = 1,
} QsiChannel;

typedef enum QsiStatus {
  QSI_STATUS_OK = 0,
  QSI_STATUS_NULL_POINTER = 1,
  QSI_STATUS_INVALID_UTF8 = 2,
  /**
   * The state document is unreadable, violates the schema or does not
   * describe a valid state.
   */
  QSI_STATUS_INVALID_DOCUMENT = 3,
  /**
   * Unknown labels, bad partitions or out-of-range parameters.
   */
  QSI_STATUS_INVALID_ARGUMENT = 4,
  /**
   * Command-line arguments passed to `qsi_run` did not parse.
   */
  QSI_STATUS_USAGE = 5,
  QSI_STATUS_PANIC = 6,
} QsiStatus;

/**
 * Opaque state handle.
 */
typedef struct QsiState QsiState;

/**
 * Channel rate and ebit rate of one transfer.
 */
typedef struct QsiRates {
  double channel_rate;
  double ebit_rate;
} QsiRates;

typedef struct QsiRecovery {
  double qcmi;
  double achieved_fidelity;
  double bound;
  double trace_deficiency;
  bool bound_satisfied;
  bool trace_deficiency_flagged;
} QsiRecovery;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *qsi_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qsi_version(void);

/**
 * Parses a JSON state document. `seed` is used by random kinds that do not
 * set one.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QsiStatus qsi_state_from_json(const char *json, uint64_t seed, struct QsiState **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `state` must come from [`qsi_state_from_json`] and not be freed twice.
 */
void qsi_state_free(struct QsiState *state);

/**
 * Total Hilbert-space dimension, or 0 for a null handle.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
size_t qsi_state_dim(const struct QsiState *state);

/**
 * Von Neumann entropy in bits of the subsystems in `labels`.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum QsiStatus qsi_entropy(const struct QsiState *state, const char *labels, double *out);

/**
 * Mutual information `I(x; y)` in bits.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum QsiStatus qsi_qmi(const struct QsiState *state, const char *x, const char *y, double *out);

/**
 * Conditional mutual information `I(x; y | z)` in bits.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum QsiStatus qsi_qcmi(const struct QsiState *state,
                        const char *x,
                        const char *y,
                        const char *z,
                        double *out);

/**
 * Optimal rates when Alice uses her first `i` and Bob his first `j`
 * side-information systems.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QsiStatus qsi_costs(const struct QsiState *state,
                         size_t i,
                         size_t j,
                         enum QsiChannel channel,
                         struct QsiRates *out);

/**
 * Petz recovery of `c` from `s1` onto `c, s1, s2`. Subsystems outside the
 * three lists are traced out first.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum QsiStatus qsi_recovery(const struct QsiState *state,
                            const char *c,
                            const char *s1,
                            const char *s2,
                            struct QsiRecovery *out);

/**
 * Runs a `qsi` command line (without the program name) and stores the JSON
 * report in `out_json`, to be released with [`qsi_string_free`].
 * `out_pass` receives 1 when every identity check passed, else 0.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings; out pointers must be valid.
 */
enum QsiStatus qsi_run(const char *const *argv, size_t argc, char **out_json, int *out_pass);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void qsi_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSI_H */
