#ifndef KHLAB_H
#define KHLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes; `Ok` is zero.
typedef enum KhStatus {
  KH_STATUS_OK = 0,
  KH_STATUS_NULL_POINTER = 1,
  KH_STATUS_INVALID_UTF8 = 2,
  KH_STATUS_PANIC = 3,
  KH_STATUS_INDEX_OUT_OF_RANGE = 4,
  KH_STATUS_MALFORMED_PD = 10,
  KH_STATUS_INCONSISTENT_DIAGRAM = 11,
  KH_STATUS_BAD_LETTER = 12,
  KH_STATUS_MALFORMED_BRAID = 13,
  KH_STATUS_BAD_TORUS_PARAMETERS = 14,
  KH_STATUS_NOT_PRIME = 20,
  KH_STATUS_BAD_RING = 21,
  KH_STATUS_RING_NOT_FIELD = 22,
  KH_STATUS_SHAPE_MISMATCH = 23,
  KH_STATUS_RING_MISMATCH = 24,
  KH_STATUS_NOT_DIAGONALIZABLE = 30,
  KH_STATUS_NO_SQUARE_RATIO = 31,
  KH_STATUS_CHAR_TWO_UNSUPPORTED = 32,
  KH_STATUS_NOT_A_UNIT = 33,
  KH_STATUS_INVALID_THEORY = 34,
  KH_STATUS_CUBE_TOO_LARGE = 40,
  KH_STATUS_ZERO_CHAIN = 41,
  KH_STATUS_MIXED_DEGREE = 42,
  KH_STATUS_GAMMA_VANISHES_MOD_P = 50,
  KH_STATUS_NOT_A_KNOT = 51,
  KH_STATUS_HYPOTHESIS_VIOLATED = 52,
  KH_STATUS_UNEXPECTED_PROFILE = 53,
  KH_STATUS_VERIFICATION_FAILED = 54,
  KH_STATUS_FILE_NOT_FOUND = 60,
  KH_STATUS_IO_ERROR = 61,
  KH_STATUS_BAD_INPUT = 62,
} KhStatus;

// A parsed link diagram.
typedef struct KhDiagram KhDiagram;

// Homology and filtration profile of a diagram under one theory.
typedef struct KhHomology KhHomology;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failing call on this thread; empty if none. Valid
// until the next failing call on this thread.
const char *khlab_last_error(void);

// Parse a PD code (`PD[X[...],...]`) or braid closure (`braid:<n>:<letters>`).
//
// # Safety
// `input` is a NUL-terminated string and `out` is writable.
enum KhStatus khlab_diagram_parse(const char *input, struct KhDiagram **out);

// # Safety
// `d` is null or a handle from `khlab_diagram_parse` not yet freed.
void khlab_diagram_free(struct KhDiagram *d);

// Number of link components, or 0 for a null handle.
//
// # Safety
// `d` is null or a live diagram handle.
size_t khlab_diagram_components(const struct KhDiagram *d);

// Number of crossings, or 0 for a null handle.
//
// # Safety
// `d` is null or a live diagram handle.
size_t khlab_diagram_crossings(const struct KhDiagram *d);

// Homology of `d` under `triple`.
//
// # Safety
// `d` is a live diagram handle, `triple` a NUL-terminated string and `out`
// writable.
enum KhStatus khlab_homology(const struct KhDiagram *d,
                             const char *triple,
                             bool reduce,
                             struct KhHomology **out);

// # Safety
// `h` is null or a handle from `khlab_homology` not yet freed.
void khlab_homology_free(struct KhHomology *h);

// Total dimension (free rank over `Z`), or 0 for a null handle.
//
// # Safety
// `h` is null or a live homology handle.
size_t khlab_homology_total(const struct KhHomology *h);

// Number of degrees with non-zero homology.
//
// # Safety
// `h` is null or a live homology handle.
size_t khlab_homology_degree_count(const struct KhHomology *h);

// The `index`-th non-zero degree in ascending order, its rank and its
// number of torsion summands.
//
// # Safety
// `h` is a live homology handle; the out pointers are writable.
enum KhStatus khlab_homology_degree(const struct KhHomology *h,
                                    size_t index,
                                    int64_t *degree,
                                    size_t *rank,
                                    size_t *torsion_count);

// The full result as JSON; release with `khlab_string_free`.
//
// # Safety
// `h` is a live homology handle and `out` writable.
enum KhStatus khlab_homology_json(const struct KhHomology *h, char **out);

// The s-invariant of a knot under `triple`.
//
// # Safety
// `d` is a live diagram handle, `triple` a NUL-terminated string and `s`
// writable.
enum KhStatus khlab_s_invariant(const struct KhDiagram *d, const char *triple, int64_t *s);

// Compute `s` under the default panel. Writes whether all values agree and
// the report as JSON (release with `khlab_string_free`; `json` may be null).
//
// # Safety
// `d` is a live diagram handle; `pass` is writable; `json` is null or
// writable.
enum KhStatus khlab_verify_theorem(const struct KhDiagram *d, bool *pass, char **json);

// # Safety
// `s` is null or a string returned by this library not yet freed.
void khlab_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KHLAB_H */
