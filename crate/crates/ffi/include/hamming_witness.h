/* C interface to the hamming-witness library. Generated by cbindgen. */

#ifndef HAMMING_WITNESS_H
#define HAMMING_WITNESS_H

#include <stdint.h>
#include <stdbool.h>
#include <stddef.h>

typedef enum HwStatus {
  HW_STATUS_OK = 0,
  HW_STATUS_NULL_POINTER = 1,
  /*
   Bad parameter, vertex, partition or residue.
   */
  HW_STATUS_INVALID_ARGUMENT = 2,
  /*
   A size guard refused the request.
   */
  HW_STATUS_LIMIT_EXCEEDED = 3,
  HW_STATUS_BUDGET_EXHAUSTED = 4,
  /*
   A mathematical check found an internal contradiction.
   */
  HW_STATUS_INCONSISTENT = 5,
  HW_STATUS_PARSE = 6,
  HW_STATUS_SAMPLING_FAILED = 7,
  HW_STATUS_PANIC = 8,
} HwStatus;

typedef enum HwMode {
  HW_MODE_EXHAUSTIVE = 0,
  HW_MODE_SAMPLED = 1,
  HW_MODE_COUNTS_ONLY = 2,
} HwMode;

/*
 Opaque witness certificate.
 */
typedef struct HwCertificate HwCertificate;

/*
 Opaque Hamming graph parameters.
 */
typedef struct HwParams HwParams;

/*
 Message for the last failing call on this thread, or NULL. Owned by the
 library; valid until the next failing call on the same thread.
 */
const char *hw_last_error_message(void);

/*
 # Safety
 `out` must be valid for writes.
 */
enum HwStatus hw_params_new(uintptr_t n, uint32_t k, struct HwParams **out);

/*
 # Safety
 `params` must come from `hw_params_new` and not be freed twice. NULL is ignored.
 */
void hw_params_free(struct HwParams *params);

/*
 Stores `k^n`; fails with `HW_STATUS_LIMIT_EXCEEDED` if it overflows 64 bits.

 # Safety
 `params` must be a live handle and `out` valid for writes.
 */
enum HwStatus hw_params_vertex_count(const struct HwParams *params, uint64_t *out);

/*
 Rank of the word `digits[0..len]` (coordinate 1 first).

 # Safety
 `digits` must point to `len` readable values; `out` must be valid for writes.
 */
enum HwStatus hw_rank(const struct HwParams *params,
                      const uint32_t *digits,
                      uintptr_t len,
                      uint64_t *out);

/*
 Writes the word of `rank_value` into `digits_out[0..len]`; `len` must equal n.

 # Safety
 `digits_out` must point to `len` writable values.
 */
enum HwStatus hw_unrank(const struct HwParams *params,
                        uint64_t rank_value,
                        uint32_t *digits_out,
                        uintptr_t len);

/*
 Certifies the canonical witness. `limit` of 0 selects the default
 enumeration limit.

 # Safety
 `params` must be a live handle and `out` valid for writes.
 */
enum HwStatus hw_certify(const struct HwParams *params,
                         enum HwMode mode,
                         uintptr_t sample_size,
                         uint64_t seed,
                         uint64_t limit,
                         struct HwCertificate **out);

/*
 # Safety
 `cert` must come from this library and not be freed twice. NULL is ignored.
 */
void hw_certificate_free(struct HwCertificate *cert);

/*
 True when no check failed. False for NULL.

 # Safety
 `cert` must be a live handle or NULL.
 */
bool hw_certificate_passed(const struct HwCertificate *cert);

/*
 Selected residues of the certified witness.

 # Safety
 `cert` must be a live handle; `i1` and `i2` valid for writes.
 */
enum HwStatus hw_certificate_residues(const struct HwCertificate *cert, uint32_t *i1, uint32_t *i2);

/*
 Renders the certificate text. Release the string with `hw_string_free`.

 # Safety
 `cert` must be a live handle and `out` valid for writes.
 */
enum HwStatus hw_certificate_to_text(const struct HwCertificate *cert, char **out);

/*
 Parses certificate text.

 # Safety
 `text` must be a NUL-terminated string and `out` valid for writes.
 */
enum HwStatus hw_certificate_parse(const char *text, struct HwCertificate **out);

/*
 # Safety
 `s` must come from this library and not be freed twice. NULL is ignored.
 */
void hw_string_free(char *s);

/*
 Exact f(H(n,k)) for `k^n <= 64`. A `budget` of 0 selects the default.
 `exhausted` is false when the budget ran out and `value` is only an
 upper bound.

 # Safety
 `params` must be a live handle; `value` and `exhausted` valid for writes.
 */
enum HwStatus hw_exact_f(const struct HwParams *params,
                         uint64_t budget,
                         uintptr_t *value,
                         bool *exhausted);

#endif  /* HAMMING_WITNESS_H */
