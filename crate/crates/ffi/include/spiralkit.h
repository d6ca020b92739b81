#ifndef SPIRALKIT_H
#define SPIRALKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SkStatus {
  SK_STATUS_OK = 0,
  SK_STATUS_NULL_ARGUMENT = 1,
  SK_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The configuration admits no transition; the message names the condition.
   */
  SK_STATUS_INFEASIBLE = 3,
  SK_STATUS_NUMERICAL = 4,
  SK_STATUS_INVALID_SCENE = 5,
  SK_STATUS_INDEX_OUT_OF_RANGE = 6,
  SK_STATUS_PANIC = 7,
} SkStatus;

typedef enum SkBranch {
  SK_BRANCH_LEFT = 0,
  SK_BRANCH_RIGHT = 1,
} SkBranch;

/**
 * Opaque solved transition.
 */
typedef struct SkTransition SkTransition;

typedef struct SkVec2 {
  double x;
  double y;
} SkVec2;

/**
 * `radius` is a magnitude; bending senses follow from the shape.
 */
typedef struct SkCircle {
  struct SkVec2 center;
  double radius;
} SkCircle;

/**
 * Junction data of a solved transition. `f0`/`f1` are zero with
 * `has_second == false` for point-to-circle transitions.
 */
typedef struct SkFrame {
  struct SkVec2 b0;
  struct SkVec2 t0;
  struct SkVec2 t1;
  struct SkVec2 f0;
  struct SkVec2 f1;
  bool has_second;
  double theta;
  double alpha0;
} SkFrame;

typedef struct SkSpiral {
  struct SkVec2 points[5];
  /**
   * Signed; the end curvature is its reciprocal.
   */
  double end_radius;
  struct SkVec2 circle_center;
} SkSpiral;

typedef struct SkSpiralParams {
  struct SkVec2 b0;
  /**
   * Start tangent; normalized by the library.
   */
  struct SkVec2 t0;
  double theta;
  double r;
  double alpha0;
  enum SkBranch branch;
} SkSpiralParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Joins `point` to `circle` with one spiral.
 *
 * # Safety
 * `out` must be null or point to writable storage for a handle pointer.
 */
enum SkStatus sk_solve_point_circle(struct SkVec2 point,
                                    struct SkCircle circle,
                                    double alpha0,
                                    enum SkBranch branch,
                                    struct SkTransition **out);

/**
 * S-shape transition between two circles bending in opposite senses.
 *
 * # Safety
 * `out` must be null or point to writable storage for a handle pointer.
 */
enum SkStatus sk_solve_s_shape(struct SkCircle c0,
                               struct SkCircle c1,
                               double alpha0,
                               enum SkBranch branch,
                               struct SkTransition **out);

/**
 * C-shape transition between two circles bending in the same sense.
 *
 * # Safety
 * `out` must be null or point to writable storage for a handle pointer.
 */
enum SkStatus sk_solve_c_shape(struct SkCircle c0,
                               struct SkCircle c1,
                               double alpha0,
                               enum SkBranch branch,
                               struct SkTransition **out);

/**
 * # Safety
 * `t` must be null or a live handle; `out` null or writable.
 */
enum SkStatus sk_transition_frame(const struct SkTransition *t, struct SkFrame *out);

/**
 * Number of spirals in the transition: 1 or 2. Returns 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live handle.
 */
size_t sk_transition_spiral_count(const struct SkTransition *t);

/**
 * # Safety
 * `t` must be null or a live handle; `out` null or writable.
 */
enum SkStatus sk_transition_spiral(const struct SkTransition *t,
                                   size_t index,
                                   struct SkSpiral *out);

/**
 * # Safety
 * `t` must be null or a handle from this library that has not been freed.
 */
void sk_transition_free(struct SkTransition *t);

/**
 * Builds a single spiral's control points into `out[0..5]`.
 *
 * # Safety
 * `out` must be null or point to 5 writable `SkVec2`.
 */
enum SkStatus sk_build_spiral(struct SkSpiralParams params, struct SkVec2 *out);

/**
 * Signed curvature of the quartic with control points `points[0..5]` at `t`.
 *
 * # Safety
 * `points` must be null or point to 5 readable `SkVec2`; `out` null or writable.
 */
enum SkStatus sk_curvature(const struct SkVec2 *points, double t, double *out);

/**
 * Solves a scene document and returns the canonical result document as a
 * NUL-terminated UTF-8 string. Infeasible entries still return `Ok`.
 *
 * # Safety
 * `scene_json` must be null or a NUL-terminated string; `out` null or writable.
 */
enum SkStatus sk_solve_json(const char *scene_json, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void sk_string_free(char *s);

/**
 * Message for the most recent failure on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *sk_last_error_message(void);

const char *sk_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPIRALKIT_H */
