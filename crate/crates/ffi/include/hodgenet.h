#ifndef HODGENET_H
#define HODGENET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HnStatus {
  HN_STATUS_OK = 0,
  HN_STATUS_NULL_POINTER = 1,
  HN_STATUS_PARSE = 2,
  HN_STATUS_DIMENSION = 3,
  HN_STATUS_TRAINING = 4,
  HN_STATUS_INVALID_ARGUMENT = 5,
  HN_STATUS_BUFFER_TOO_SMALL = 6,
  HN_STATUS_INTERNAL = 7,
} HnStatus;

typedef enum HnFilter {
  HN_FILTER_IDENTITY = 0,
  HN_FILTER_LOW_PASS = 1,
  HN_FILTER_HIGH_PASS = 2,
} HnFilter;

typedef enum HnArch {
  HN_ARCH_SNN = 0,
  HN_ARCH_SCNN = 1,
  HN_ARCH_BISCNN = 2,
  HN_ARCH_MPNN = 3,
} HnArch;

typedef enum HnActivation {
  HN_ACTIVATION_IDENTITY = 0,
  HN_ACTIVATION_LEAKY_RELU = 1,
  HN_ACTIVATION_TANH = 2,
} HnActivation;

/**
 * Opaque simplicial complex.
 */
typedef struct HnComplex HnComplex;

/**
 * Opaque network bound to one order of one complex.
 */
typedef struct HnNetwork HnNetwork;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t hn_last_error(char *buf, size_t len);

/**
 * Loads a complex from a JSON file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HnStatus hn_complex_load(const char *path, struct HnComplex **out);

/**
 * Parses a complex from JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HnStatus hn_complex_from_json(const char *json, struct HnComplex **out);

/**
 * Builds a complex from maximal simplices given as a flat vertex list:
 * simplex `i` has `sizes[i]` vertices. Missing faces are added.
 *
 * # Safety
 * `sizes` must hold `count` entries and `vertices` their sum.
 */
enum HnStatus hn_complex_from_simplices(const size_t *vertices,
                                        const size_t *sizes,
                                        size_t count,
                                        struct HnComplex **out);

/**
 * # Safety
 * `c` must be null or a handle from this library, not yet freed.
 */
void hn_complex_free(struct HnComplex *c);

/**
 * Highest simplex order `K`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HnStatus hn_complex_order(const struct HnComplex *c, size_t *out);

/**
 * Number of `k`-simplices (0 above the top order).
 *
 * # Safety
 * Pointers must be valid.
 */
enum HnStatus hn_complex_count(const struct HnComplex *c, size_t k, size_t *out);

/**
 * Largest `|entry|` of any `B_k B_{k+1}`; zero for a valid complex.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HnStatus hn_complex_chain_max(const struct HnComplex *c, int64_t *out);

/**
 * Ascending eigenvalues of `L_k`; writes `N_k` values.
 *
 * # Safety
 * `out` must hold `len` doubles.
 */
enum HnStatus hn_laplacian_eigenvalues(const struct HnComplex *c,
                                       size_t k,
                                       double *out,
                                       size_t len);

/**
 * Filters an `N_k x d` signal over the spectrum of `L_k`. `cutoff` applies to
 * the low/high presets.
 *
 * # Safety
 * `x` must hold `rows * cols` doubles and `out` at least as many.
 */
enum HnStatus hn_filter(const struct HnComplex *c,
                        size_t k,
                        enum HnFilter preset,
                        double cutoff,
                        const double *x,
                        size_t rows,
                        size_t cols,
                        double *out);

/**
 * Splits an `N_k x d` signal into its lower-induced (gradient), upper-induced
 * (curl) and harmonic parts. Any output pointer may be null to skip it.
 *
 * # Safety
 * `x` must hold `rows * cols` doubles, each non-null output as many.
 */
enum HnStatus hn_hodge_decompose(const struct HnComplex *c,
                                 size_t k,
                                 const double *x,
                                 size_t rows,
                                 size_t cols,
                                 double *lower,
                                 double *upper,
                                 double *harmonic);

/**
 * Creates a randomly initialized network on order `k` of `c` with layer
 * widths `widths[0..n_widths]`. The network keeps its own operators, so `c`
 * may be freed afterwards.
 *
 * # Safety
 * `widths` must hold `n_widths` entries; pointers must be valid.
 */
enum HnStatus hn_network_new(const struct HnComplex *c,
                             size_t k,
                             enum HnArch arch,
                             const size_t *widths,
                             size_t n_widths,
                             enum HnActivation activation,
                             uint64_t seed,
                             struct HnNetwork **out);

/**
 * # Safety
 * `n` must be null or a handle from this library, not yet freed.
 */
void hn_network_free(struct HnNetwork *n);

/**
 * Number of trainable scalars.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HnStatus hn_network_parameter_count(const struct HnNetwork *n, size_t *out);

/**
 * Forward pass on an `N_k x d_in` input; writes `N_k x d_out` values.
 * `infer` selects exact `Sign` for Bi-SCNN instead of hard-tanh.
 *
 * # Safety
 * `x` must hold `rows * cols` doubles and `out` hold `len`.
 */
enum HnStatus hn_network_forward(const struct HnNetwork *n,
                                 const double *x,
                                 size_t rows,
                                 size_t cols,
                                 bool infer,
                                 double *out,
                                 size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HODGENET_H */
