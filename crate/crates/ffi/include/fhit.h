#ifndef FHIT_H
#define FHIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Certificate fields readable with [`fhit_certificate_get`].
typedef enum FhitBound {
  FHIT_BOUND_CN_UPPER = 0,
  FHIT_BOUND_EPS = 1,
  FHIT_BOUND_EPS1 = 2,
  FHIT_BOUND_EPS2 = 3,
  FHIT_BOUND_LAMBDA_S = 4,
  FHIT_BOUND_LAMBDA_U = 5,
  FHIT_BOUND_LAMBDA = 6,
  FHIT_BOUND_SIGMA = 7,
  FHIT_BOUND_B_OF_R = 8,
  FHIT_BOUND_R_MINUS = 9,
  FHIT_BOUND_R_PLUS = 10,
} FhitBound;

typedef enum FhitStatus {
  FHIT_STATUS_OK = 0,
  // Validation ran to completion and some condition failed.
  FHIT_STATUS_VALIDATION_FAILED = 1,
  FHIT_STATUS_NULL_POINTER = 2,
  FHIT_STATUS_INVALID_ARGUMENT = 3,
  FHIT_STATUS_PARSE_ERROR = 4,
  FHIT_STATUS_IO_ERROR = 5,
  // Solver or interval failure (no convergence, overflow, ...).
  FHIT_STATUS_NUMERIC_ERROR = 6,
  // Requested certificate field was not computed.
  FHIT_STATUS_NOT_AVAILABLE = 7,
  FHIT_STATUS_PANIC = 8,
} FhitStatus;

typedef struct FhitCandidate FhitCandidate;

typedef struct FhitCertificate FhitCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread. Valid until the next
// failing call on the same thread; never null.
const char *fhit_last_error(void);

// Encloses C_N(rho, rho_hat) on a 1-D grid of size `n`.
//
// # Safety
// `lo` and `hi` must be valid for writes.
enum FhitStatus fhit_cn(double rho, double rho_hat, size_t n, double *lo, double *hi);

// Continues the forced standard map from zero forcing to `eps_end` and
// returns the candidate. `omega <= 0` selects the golden mean.
//
// # Safety
// `schedule` must point to `schedule_len` sizes; `out` must be valid for writes.
enum FhitStatus fhit_continue(double kappa,
                              double omega,
                              double eps_end,
                              size_t steps,
                              const size_t *schedule,
                              size_t schedule_len,
                              struct FhitCandidate **out);

// # Safety
// `path` must be a NUL-terminated string; `out` must be valid for writes.
enum FhitStatus fhit_candidate_load(const char *path, struct FhitCandidate **out);

// # Safety
// `cand` must come from this library; `path` must be NUL-terminated.
enum FhitStatus fhit_candidate_save(const struct FhitCandidate *cand, const char *path);

// Grid size N of the candidate, 0 for a null handle.
//
// # Safety
// `cand` must be null or come from this library.
size_t fhit_candidate_n(const struct FhitCandidate *cand);

// Forcing amplitude stored with the candidate.
//
// # Safety
// `cand` must be null or come from this library.
double fhit_candidate_eps_map(const struct FhitCandidate *cand);

// # Safety
// `cand` must be null or come from this library and not be used afterwards.
void fhit_candidate_free(struct FhitCandidate *cand);

// Runs the rigorous validation. `pad_to == 0` keeps N; `noise_floor <= 0`
// disables noise truncation. Returns `Ok` when validated and
// `ValidationFailed` otherwise; in both cases `*out` holds the certificate.
//
// # Safety
// `cand` must come from this library; `out` must be valid for writes.
enum FhitStatus fhit_validate(const struct FhitCandidate *cand,
                              double rho,
                              double rho_hat,
                              double radius,
                              size_t pad_to,
                              double noise_floor,
                              struct FhitCertificate **out);

// `validated` or `failed:<Tag>`. Owned by the certificate.
//
// # Safety
// `cert` must be null or come from this library.
const char *fhit_certificate_verdict(const struct FhitCertificate *cert);

// Reads one certified bound.
//
// # Safety
// `cert` must come from this library; `value` must be valid for writes.
enum FhitStatus fhit_certificate_get(const struct FhitCertificate *cert,
                                     enum FhitBound which,
                                     double *value);

// # Safety
// `cert` must be null or come from this library and not be used afterwards.
void fhit_certificate_free(struct FhitCertificate *cert);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FHIT_H */
