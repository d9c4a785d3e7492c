/* C ABI for sequential CHSH strategy evaluation.
 *
 * Every function returns a status code; 0 means success. On failure a
 * thread-local message is set, readable via seqchsh_last_error. Handles
 * are opaque and must be released with their matching free function.
 */

#ifndef SEQCHSH_H
#define SEQCHSH_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  SEQCHSH_STATUS_OK = 0,
  SEQCHSH_STATUS_NULL_ARGUMENT = 1,
  SEQCHSH_STATUS_INVALID_ARGUMENT = 2,
  SEQCHSH_STATUS_SCHEMA = 3,
  SEQCHSH_STATUS_OUT_OF_DOMAIN = 4,
  SEQCHSH_STATUS_NOT_FOUND = 5,
  SEQCHSH_STATUS_NUMERICAL = 6,
  SEQCHSH_STATUS_IO = 7,
  SEQCHSH_STATUS_BUFFER_TOO_SMALL = 8,
  SEQCHSH_STATUS_PANIC = 9
};

/* Opaque validated strategy handle. */
typedef struct SeqchshStrategy SeqchshStrategy;

/* Copies the most recent failure message on this thread into buffer as a
 * NUL-terminated string and returns the required size including the
 * terminator. Nothing is written when buffer is null or capacity is too
 * small. */
size_t seqchsh_last_error(char *buffer, size_t capacity);

/* Parses and validates a strategy document. On success writes a handle
 * into out; release it with seqchsh_strategy_free. */
int seqchsh_strategy_from_json(const char *json, SeqchshStrategy **out);

/* Builds a named catalog strategy with its canonical parameters. */
int seqchsh_strategy_from_catalog(const char *id, SeqchshStrategy **out);

/* Releases a strategy handle. Null is a no-op. */
void seqchsh_strategy_free(SeqchshStrategy *strategy);

/* Writes the number of sequential CHSH pairs into out. */
int seqchsh_strategy_pair_count(const SeqchshStrategy *strategy, size_t *out);

/* Evaluates the strategy and writes its pair values into values.
 * capacity is the length of values; written receives the number of
 * pairs. Fails with SEQCHSH_STATUS_BUFFER_TOO_SMALL if the buffer cannot
 * hold them. */
int seqchsh_strategy_evaluate(const SeqchshStrategy *strategy, double *values,
                              size_t capacity, size_t *written);

/* Writes the optimal S2 bound at s1 for the maximally entangled state
 * into out. */
int seqchsh_boundary_value(double s1, double *out);

/* Writes the isotropic-noise visibility above which every pair value of
 * the strategy exceeds target. */
int seqchsh_visibility_threshold(const SeqchshStrategy *strategy,
                                 double target, double *out);

#ifdef __cplusplus
}
#endif

#endif /* SEQCHSH_H */
