#ifndef FTRL_H
#define FTRL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Learners constructible through the C ABI.
typedef enum FtrlLearnerKind {
  FTRL_LEARNER_KIND_DUAL_AVERAGING = 0,
  FTRL_LEARNER_KIND_CONSTANT_OGD = 1,
  FTRL_LEARNER_KIND_FTRL_PROXIMAL = 2,
  FTRL_LEARNER_KIND_ADAGRAD_PROXIMAL = 3,
  FTRL_LEARNER_KIND_ADAGRAD_DA = 4,
  FTRL_LEARNER_KIND_FTRL_L1 = 5,
  FTRL_LEARNER_KIND_ENTROPIC = 6,
  FTRL_LEARNER_KIND_SC_OGD = 7,
  FTRL_LEARNER_KIND_MD_L1 = 8,
  FTRL_LEARNER_KIND_LAZY_PROJECTION = 9,
  FTRL_LEARNER_KIND_GREEDY_PROJECTION = 10,
} FtrlLearnerKind;

// Result codes shared by every function.
typedef enum FtrlStatus {
  FTRL_STATUS_OK = 0,
  FTRL_STATUS_NULL_POINTER = 1,
  FTRL_STATUS_INVALID_ARGUMENT = 2,
  FTRL_STATUS_DOMAIN = 3,
  FTRL_STATUS_INVARIANT_VIOLATION = 4,
  FTRL_STATUS_UNSUPPORTED = 5,
  FTRL_STATUS_DIMENSION_MISMATCH = 6,
  FTRL_STATUS_INTERNAL_CONSISTENCY = 7,
  FTRL_STATUS_UNBOUNDED = 8,
  FTRL_STATUS_PARSE = 9,
  FTRL_STATUS_PANIC = 10,
} FtrlStatus;

// Opaque learner handle.
typedef struct FtrlLearner FtrlLearner;

// Learner constants. `eta <= 0` selects `R / (G sqrt(rounds))` for the
// fixed-rate learners.
typedef struct FtrlParams {
  size_t n;
  size_t rounds;
  double r;
  double g;
  double r_inf;
  double g_inf;
  double lambda;
  double eta;
} FtrlParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a learner; on success `*out` owns a handle to release with
// `ftrl_learner_free`.
//
// # Safety
// `params` and `out` must be valid pointers.
enum FtrlStatus ftrl_learner_new(enum FtrlLearnerKind kind,
                                 const struct FtrlParams *params,
                                 struct FtrlLearner **out);

// Releases a handle; null is ignored.
//
// # Safety
// `learner` must come from `ftrl_learner_new` and not be used afterwards.
void ftrl_learner_free(struct FtrlLearner *learner);

// Dimension of the learner's iterates, 0 for a null handle.
//
// # Safety
// `learner` must be null or a live handle.
size_t ftrl_learner_dim(const struct FtrlLearner *learner);

// Completed rounds, 0 for a null handle.
//
// # Safety
// `learner` must be null or a live handle.
size_t ftrl_learner_round(const struct FtrlLearner *learner);

// Copies the point to play next into `out[0..len]`.
//
// # Safety
// `learner` must be a live handle and `out` valid for `len` writes.
enum FtrlStatus ftrl_learner_current(const struct FtrlLearner *learner, double *out, size_t len);

// Feeds the gradient `g[0..len]` and writes the next iterate to `out`.
//
// # Safety
// `learner` must be a live handle, `g` valid for `len` reads and `out`
// valid for `len` writes.
enum FtrlStatus ftrl_learner_observe(struct FtrlLearner *learner,
                                     const double *g,
                                     double *out,
                                     size_t len);

// `argmin_x b x + lambda |x| + a x^2 / 2`.
//
// # Safety
// `out` must be a valid pointer.
enum FtrlStatus ftrl_soft_threshold(double b, double lambda, double a, double *out);

// Softmax of `z[0..len]` into `out[0..len]`.
//
// # Safety
// `z` must be valid for `len` reads and `out` for `len` writes.
enum FtrlStatus ftrl_softmax(const double *z, double *out, size_t len);

// Static description of a status code.
const char *ftrl_status_message(enum FtrlStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FTRL_H */
