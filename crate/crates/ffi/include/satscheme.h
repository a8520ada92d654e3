#ifndef SATSCHEME_H
#define SATSCHEME_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// `satscheme_check_all` verdicts, matching the CLI exit codes.
#define SATSCHEME_INCONCLUSIVE 0

#define SATSCHEME_SAT 10

#define SATSCHEME_UNSAT 20

typedef enum SatStatus {
  SAT_STATUS_OK = 0,
  SAT_STATUS_NULL_POINTER = 1,
  SAT_STATUS_INVALID_UTF8 = 2,
  SAT_STATUS_PARSE = 3,
  SAT_STATUS_INVALID_ARGUMENT = 4,
  SAT_STATUS_LIMIT = 5,
  SAT_STATUS_INTERNAL = 6,
} SatStatus;

// Opaque scheme handle.
typedef struct SatScheme SatScheme;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses DIMACS, scheme text or JSON (auto-detected). Tautological clauses
// are rejected when `drop_tautologies` is false.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum SatStatus satscheme_parse(const char *text, bool drop_tautologies, struct SatScheme **out);

// Loads a built-in formula: `F4`, `F5`, `G` or `Gext`.
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be writable.
enum SatStatus satscheme_fixture(const char *name, struct SatScheme **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `h` must come from this library and not be used afterwards.
void satscheme_free(struct SatScheme *h);

// Number of variables, or 0 for a null handle.
//
// # Safety
// `h` must be null or a live handle.
size_t satscheme_num_vars(const struct SatScheme *h);

// Number of clauses, or 0 for a null handle.
//
// # Safety
// `h` must be null or a live handle.
size_t satscheme_num_clauses(const struct SatScheme *h);

// Evaluates the formula at `signs[0..len]`, each `+1` (true) or `-1`.
//
// # Safety
// `signs` must point to `len` readable bytes; `out` must be writable.
enum SatStatus satscheme_evaluate(const struct SatScheme *h,
                                  const int8_t *signs,
                                  size_t len,
                                  bool *out);

// Exact model count as a decimal string.
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum SatStatus satscheme_count(const struct SatScheme *h, char **out);

// Runs every check. `verdict` receives 10 (SAT), 20 (UNSAT) or 0; `report`,
// if not null, receives the JSON report.
//
// # Safety
// `h` must be a live handle; `verdict` must be writable; `report` null or
// writable.
enum SatStatus satscheme_check_all(const struct SatScheme *h, int32_t *verdict, char **report);

// Minimum number of violated clauses. If `minimizer` is not null it must
// hold `len == satscheme_num_vars(h)` bytes and receives the signs of a
// minimizing assignment.
//
// # Safety
// `h` must be a live handle; `u_min` writable; `minimizer` null or `len`
// writable bytes.
enum SatStatus satscheme_minimize(const struct SatScheme *h,
                                  uint64_t *u_min,
                                  int8_t *minimizer,
                                  size_t len);

// The canonical-weight polynomial, e.g. `8u = 12 + x1 - 2x2 ...`, in ASCII
// or (when `unicode`) with subscripts and minus signs.
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum SatStatus satscheme_pbform(const struct SatScheme *h, bool unicode, char **out);

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the thread.
const char *satscheme_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void satscheme_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SATSCHEME_H */
