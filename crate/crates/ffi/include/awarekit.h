#ifndef AWAREKIT_H
#define AWAREKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a call.
typedef enum AwkStatus {
  AWK_STATUS_OK = 0,
  // A law or invariant failed, or a proof was rejected.
  AWK_STATUS_VIOLATION = 1,
  // Malformed model, formula, state name or argument.
  AWK_STATUS_INVALID_INPUT = 2,
  AWK_STATUS_NULL_ARGUMENT = 3,
  AWK_STATUS_INVALID_UTF8 = 4,
  // A bug inside the library; the message says where.
  AWK_STATUS_INTERNAL = 5,
} AwkStatus;

// Three-valued truth at a state.
typedef enum AwkTruth {
  AWK_TRUTH_FALSE = 0,
  AWK_TRUTH_TRUE = 1,
  AWK_TRUTH_UNDEFINED = 2,
} AwkTruth;

// A model of any family together with its state labels.
typedef struct AwkModel AwkModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, static.
const char *awk_version(void);

// Message for the last failed call on this thread, or null.
const char *awk_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` is null or was returned as `char *` by this library and not yet freed.
void awk_string_free(char *s);

// Parses a model from JSON text into `*out`.
//
// # Safety
// `json` is a NUL-terminated string; `out` is valid for a write.
enum AwkStatus awk_model_parse(const char *json, struct AwkModel **out);

// Reads a model file into `*out`.
//
// # Safety
// `path` is a NUL-terminated string; `out` is valid for a write.
enum AwkStatus awk_model_load(const char *path, struct AwkModel **out);

// Releases a model. Null is ignored.
//
// # Safety
// `m` is null or a live handle, which is dead afterwards.
void awk_model_free(struct AwkModel *m);

// `fh`, `hms`, `complemented-hms` or `implicit-hms`; borrowed from `m`.
// Null if `m` is null.
//
// # Safety
// `m` is null or a live handle.
const char *awk_model_family(const struct AwkModel *m);

// Number of states (worlds for awareness structures).
//
// # Safety
// `m` is a live handle; `out` is valid for a write.
enum AwkStatus awk_model_state_count(const struct AwkModel *m, size_t *out);

// Label of state `index`, borrowed from `m`; null if out of range.
//
// # Safety
// `m` is null or a live handle.
const char *awk_model_state_label(const struct AwkModel *m, size_t index);

// Runs the structural validators. `*violations` receives the count;
// returns `AWK_STATUS_VIOLATION` when it is nonzero.
//
// # Safety
// `m` is a live handle; `violations` is null or valid for a write.
enum AwkStatus awk_model_validate(const struct AwkModel *m, size_t *violations);

// The model as JSON; release with `awk_string_free`. Null if `m` is null.
//
// # Safety
// `m` is null or a live handle.
char *awk_model_render(const struct AwkModel *m);

// Value of `formula` at `state` (`key:id` on lattices, a world name on
// awareness structures).
//
// # Safety
// `m` is a live handle; `formula` and `state` are NUL-terminated; `out` is
// valid for a write.
enum AwkStatus awk_model_check(const struct AwkModel *m,
                               const char *formula,
                               const char *state,
                               enum AwkTruth *out);

// Values of `formula` at every state, in label order. `out` must hold at
// least `awk_model_state_count` entries.
//
// # Safety
// `m` is a live handle; `formula` is NUL-terminated; `out` is valid for
// `len` writes.
enum AwkStatus awk_model_evaluate(const struct AwkModel *m,
                                  const char *formula,
                                  enum AwkTruth *out,
                                  size_t len);

// Applies the transform named `to` (`hms`, `implicit-hms`, `fh` or
// `fh-star`) and stores a new handle in `*out`.
//
// # Safety
// `m` is a live handle; `to` is NUL-terminated; `out` is valid for a write.
enum AwkStatus awk_model_transform(const struct AwkModel *m,
                                   const char *to,
                                   bool minimize,
                                   struct AwkModel **out);

// Compares `a` with `b`, its image under the transform `via`, on every
// formula up to modal depth `depth`. `*counterexamples` receives the number
// of disagreements.
//
// # Safety
// `a` and `b` are live handles; `via` is NUL-terminated; `counterexamples`
// is null or valid for a write.
enum AwkStatus awk_equivalence_check(const struct AwkModel *a,
                                     const struct AwkModel *b,
                                     const char *via,
                                     size_t depth,
                                     size_t *counterexamples);

// Checks a proof given as JSON-lines text. On rejection `*failing_line`
// receives the 1-based first unjustified line; on acceptance, 0.
//
// # Safety
// `proof` is NUL-terminated; `failing_line` is null or valid for a write.
enum AwkStatus awk_proof_check(const char *proof, size_t *failing_line);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AWAREKIT_H */
