#ifndef NONCLASSICAL_H
#define NONCLASSICAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stdint.h>

#define NC_BACKEND_CLOSED 0

#define NC_BACKEND_ORACLE 1

#define NC_CRITERION_MANDEL_Q 0

#define NC_CRITERION_HOA 1

#define NC_CRITERION_HOSPS 2

#define NC_CRITERION_HOS 3

#define NC_CRITERION_AGARWAL_TARA 4

#define NC_CRITERION_KLYSHKO 5

#define NC_CRITERION_HUSIMI 6

typedef enum nc_status_t {
  NC_OK = 0,
  NC_INVALID_ARGUMENT = 1,
  NC_DEGENERATE = 2,
  NC_UNDEFINED = 3,
  NC_NUMERICAL = 4,
  NC_NULL_POINTER = 5,
  NC_PANIC = 6,
} nc_status_t;

/*
 Opaque state handle.
 */
typedef struct nc_state_t nc_state_t;

/*
 Outcome of one witness evaluation.
 */
typedef struct nc_witness_t {
  double value;
  /*
   Negative value, or a located zero for the Husimi criterion.
   */
  bool nonclassical;
  /*
   Set when the Agarwal-Tara value sits on its pole; `nonclassical` is
   then meaningless.
   */
  bool singular;
} nc_witness_t;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Creates a SUP-operated coherent state `D(η) (s a a† + t a† a) |α⟩`.

 # Safety
 `out` must be valid for writing one pointer.
 */
enum nc_status_t nc_state_socs_new(double s,
                                   double t,
                                   double alpha_re,
                                   double alpha_im,
                                   double eta,
                                   struct nc_state_t **out);

/*
 Creates a SUP-operated thermal state with mean photon number `nbar`.

 # Safety
 `out` must be valid for writing one pointer.
 */
enum nc_status_t nc_state_sots_new(double s,
                                   double t,
                                   double nbar,
                                   double eta,
                                   struct nc_state_t **out);

/*
 Releases a handle; null is ignored.

 # Safety
 `state` must come from a constructor above and not be used afterwards.
 */
void nc_state_free(struct nc_state_t *state);

/*
 `⟨a†^m a^n⟩`.

 # Safety
 `state` must be a live handle; `out_re` and `out_im` must be writable.
 */
enum nc_status_t nc_state_moment(const struct nc_state_t *state,
                                 uint32_t m,
                                 uint32_t n,
                                 uint32_t backend_code,
                                 double *out_re,
                                 double *out_im);

/*
 Photon-number probability `p_m` from the closed form.

 # Safety
 `state` must be a live handle; `out` must be writable.
 */
enum nc_status_t nc_state_photon_probability(const struct nc_state_t *state,
                                             uint32_t m,
                                             double *out);

/*
 Evaluates one criterion; `order` is `l` for moment criteria and `m` for
 Klyshko, and is ignored for Agarwal-Tara and Husimi.

 # Safety
 `state` must be a live handle; `out` must be writable.
 */
enum nc_status_t nc_state_witness(const struct nc_state_t *state,
                                  uint32_t criterion_code,
                                  uint32_t order,
                                  uint32_t backend_code,
                                  struct nc_witness_t *out);

/*
 Husimi function `Q(β)` from the closed form.

 # Safety
 `state` must be a live handle; `out` must be writable.
 */
enum nc_status_t nc_state_husimi(const struct nc_state_t *state,
                                 double beta_re,
                                 double beta_im,
                                 double *out);

/*
 Message for the last failed call on this thread, or null. The pointer is
 valid until the next call into this library from the same thread.
 */
const char *nc_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *nc_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NONCLASSICAL_H */
