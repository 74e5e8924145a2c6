/* C API for the quatorder library. Generated by cbindgen; do not edit. */

#ifndef QUATORDER_H
#define QUATORDER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * The call succeeded.
 */
#define QO_STATUS_OK 0

/**
 * An internal invariant failed (including a caught panic).
 */
#define QO_STATUS_INTERNAL 1

/**
 * The input could not be parsed.
 */
#define QO_STATUS_PARSE 2

/**
 * The input parsed but does not describe a valid object.
 */
#define QO_STATUS_SEMANTIC 3

/**
 * A documented precondition was violated (including null pointers).
 */
#define QO_STATUS_PRECONDITION 4

/**
 * An order in a definite quaternion algebra over ℚ.
 */
typedef struct QoOrder QoOrder;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON order file (the same format the CLI reads) into a new
 * handle, written to `*out` on success. The handle must be released
 * with [`qo_order_free`].
 *
 * # Safety
 * `json` must be null or a NUL-terminated string; `out` must be null
 * or point to writable storage for one pointer.
 */
int qo_order_parse_json(const char *json, struct QoOrder **out);

/**
 * Releases a handle returned by [`qo_order_parse_json`]. Null is a
 * no-op.
 *
 * # Safety
 * `order` must be null or a pointer previously returned by
 * [`qo_order_parse_json`] that has not been freed yet.
 */
void qo_order_free(struct QoOrder *order);

/**
 * Writes the order back out as a canonical JSON order file.
 *
 * # Safety
 * `order` must be a live handle; `out` must be null or point to
 * writable storage for one pointer.
 */
int qo_order_to_json(const struct QoOrder *order, char **out);

/**
 * Writes the full invariant sheet of the order — the same text the
 * `quatorder info` subcommand prints.
 *
 * # Safety
 * `order` must be a live handle; `out` must be null or point to
 * writable storage for one pointer.
 */
int qo_order_report(const struct QoOrder *order, char **out);

/**
 * Runs the full classification over ℤ and writes the forty records as
 * JSON lines (one record per line). This recomputes everything and
 * takes a few seconds.
 *
 * # Safety
 * `out` must be null or point to writable storage for one pointer.
 */
int qo_classify_json(char **out);

/**
 * Releases a string returned by any `qo_*` function. Null is a no-op.
 *
 * # Safety
 * `text` must be null or a string previously returned by this library
 * that has not been freed yet.
 */
void qo_string_free(char *text);

/**
 * A description of the most recent failure on the calling thread, or
 * null if there has been none. The pointer stays valid until the next
 * failing call on the same thread; do not free it.
 */
const char *qo_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUATORDER_H */
