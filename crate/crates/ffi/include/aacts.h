/* SPDX-License-Identifier: Apache-2.0 */
/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef AACTS_H
#define AACTS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AactsStatus {
  AACTS_STATUS_OK = 0,
  /**
   * The call succeeded but the answer is negative (languages differ,
   * a process is neither fully-listening nor trivializable).
   */
  AACTS_STATUS_NEGATIVE = 1,
  AACTS_STATUS_INVALID_INPUT = 2,
  AACTS_STATUS_RESOURCE_LIMIT = 3,
  AACTS_STATUS_NULL_POINTER = 4,
  AACTS_STATUS_UTF8 = 5,
  AACTS_STATUS_PANIC = 6,
} AactsStatus;

/**
 * An asynchronous automaton.
 */
typedef struct AactsAutomaton AactsAutomaton;

/**
 * A composed channeled system.
 */
typedef struct AactsSystem AactsSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call into this library on the same thread.
 */
const char *aacts_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void aacts_string_free(char *s);

/**
 * Parses a `cts` or `cts-system` document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum AactsStatus aacts_system_from_json(const char *json, struct AactsSystem **out);

/**
 * Single-switching system with `n` processes.
 *
 * # Safety
 * `out` must be writable.
 */
enum AactsStatus aacts_gen_single(uint32_t n, struct AactsSystem **out);

/**
 * Double-switching system with `n` processes; `disjoint` selects the
 * rotation that keeps switching channels unowned.
 *
 * # Safety
 * `out` must be writable.
 */
enum AactsStatus aacts_gen_double(uint32_t n, bool disjoint, struct AactsSystem **out);

/**
 * # Safety
 * `sys` must be null or a handle from this library, not yet freed.
 */
void aacts_system_free(struct AactsSystem *sys);

/**
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum AactsStatus aacts_system_to_json(const struct AactsSystem *sys, char **out);

/**
 * Parses a `global-aa` or `local-aa` document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum AactsStatus aacts_automaton_from_json(const char *json, struct AactsAutomaton **out);

/**
 * # Safety
 * `aa` must be null or a handle from this library, not yet freed.
 */
void aacts_automaton_free(struct AactsAutomaton *aa);

/**
 * # Safety
 * `aa` must be a live handle; `out` must be writable.
 */
enum AactsStatus aacts_automaton_to_json(const struct AactsAutomaton *aa, char **out);

/**
 * Automaton in which every process takes part in every channel.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum AactsStatus aacts_translate_cts_to_aa(const struct AactsSystem *sys,
                                           struct AactsAutomaton **out);

/**
 * Automaton in which process `executor` simulates the whole system and
 * the others listen to nothing.
 *
 * # Safety
 * `sys` must be a live handle, `executor` a NUL-terminated string and
 * `out` writable.
 */
enum AactsStatus aacts_translate_cts_to_aa_executor(const struct AactsSystem *sys,
                                                    const char *executor,
                                                    struct AactsAutomaton **out);

/**
 * Compares the languages of two documents up to length `max_len`.
 * Returns `AACTS_STATUS_NEGATIVE` when they differ; the distinguishing
 * word (letters separated by spaces) is then written to `word_out` if it
 * is not null.
 *
 * # Safety
 * `a` and `b` must be NUL-terminated strings; `word_out` null or writable.
 */
enum AactsStatus aacts_equiv_documents(const char *a,
                                       const char *b,
                                       uint32_t max_len,
                                       char **word_out);

/**
 * Number of words of length at most `max_len` in the document's language.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum AactsStatus aacts_language_count(const char *json, uint32_t max_len, uint64_t *out);

/**
 * Classifies every process; the JSON report is written to `report_out` if
 * it is not null. Returns `AACTS_STATUS_NEGATIVE` when some process is
 * neither fully-listening nor trivializable.
 *
 * # Safety
 * `aa` must be a live handle; `report_out` null or writable.
 */
enum AactsStatus aacts_analyze(const struct AactsAutomaton *aa, char **report_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AACTS_H */
