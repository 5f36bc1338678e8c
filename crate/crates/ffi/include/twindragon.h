#ifndef TWINDRAGON_H
#define TWINDRAGON_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Cardinality classes of the section's point set.
 */
typedef enum TdCardinality {
  TdCardinalityFinite = 0,
  TdCardinalityCountablyInfinite = 1,
  TdCardinalityUncountable = 2,
} TdCardinality;

/**
 * Export formats of `td_automaton_export`.
 */
typedef enum TdFormat {
  TdFormatGraph = 0,
  TdFormatJson = 1,
} TdFormat;

/**
 * Status codes of every fallible entry point.
 */
typedef enum TdStatus {
  TdStatusOk = 0,
  TdStatusNullArgument = 1,
  TdStatusInvalidArgument = 2,
  TdStatusDegenerateLine = 3,
  TdStatusOverflow = 4,
  TdStatusInternal = 5,
} TdStatus;

/**
 * Opaque automaton handle.
 */
typedef struct TdAutomaton TdAutomaton;

/**
 * Flat dimension report.
 */
typedef struct TdDimension {
  /**
   * Nonzero when the intersection is empty; the numeric fields are
   * then zero.
   */
  uint8_t empty;
  uintptr_t states;
  uintptr_t edges;
  /**
   * Spectral radius β of the dominant component.
   */
  double beta;
  /**
   * Hausdorff dimension log β / log 4.
   */
  double dimension;
  enum TdCardinality cardinality;
  /**
   * Number of points when `cardinality` is finite, 0 otherwise.
   */
  uint64_t finite_count;
  /**
   * Nonzero when the certificate that the dimension differs from
   * 𝔰 − 1 holds (boundary sections).
   */
  uint8_t not_s_minus_1;
} TdDimension;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the automaton of the line p·x + q·y = r (each rational given
 * as numerator/denominator), optionally restricted to the dragon's
 * boundary, trimmed. On success stores a new handle in `out`.
 *
 * # Safety
 * `out` must be a valid pointer to writable memory.
 */
enum TdStatus td_line_automaton_build(int64_t p_num,
                                      int64_t p_den,
                                      int64_t q_num,
                                      int64_t q_den,
                                      int64_t r_num,
                                      int64_t r_den,
                                      uint8_t boundary,
                                      struct TdAutomaton **out);

/**
 * Releases an automaton handle. Null is a no-op.
 *
 * # Safety
 * `a` must be null or a handle obtained from this library that has not
 * been freed already.
 */
void td_automaton_free(struct TdAutomaton *a);

/**
 * Number of states; 0 for a null handle.
 *
 * # Safety
 * `a` must be null or a live handle.
 */
uintptr_t td_automaton_state_count(const struct TdAutomaton *a);

/**
 * Number of labeled edges; 0 for a null handle.
 *
 * # Safety
 * `a` must be null or a live handle.
 */
uintptr_t td_automaton_edge_count(const struct TdAutomaton *a);

/**
 * Serializes the automaton; stores a NUL-terminated UTF-8 string in
 * `out`, to be released with `td_string_free`.
 *
 * # Safety
 * `a` must be a live handle and `out` a valid writable pointer.
 */
enum TdStatus td_automaton_export(const struct TdAutomaton *a, enum TdFormat format, char **out);

/**
 * Releases a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a string obtained from this library that has not
 * been freed already.
 */
void td_string_free(char *s);

/**
 * Computes the dimension report of a trimmed automaton handle.
 *
 * # Safety
 * `a` must be a live handle and `out` a valid writable pointer.
 */
enum TdStatus td_dimension_report(const struct TdAutomaton *a, struct TdDimension *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWINDRAGON_H */
