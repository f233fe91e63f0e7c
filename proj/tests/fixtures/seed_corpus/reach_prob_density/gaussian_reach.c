/* Copyright 2026 The memfix Authors. SPDX-License-Identifier: Apache-2.0 */
#include <math.h>
#include <stdlib.h>

extern float __VERIFIER_nondet_float(void);
extern void __VERIFIER_assume(int);
extern void __VERIFIER_assert(int);

#define BINS 8

float density_at(const float *mean, const float *var, int i, float x) {
  float d = x - mean[i];
  return expf(-(d * d) / (2.0f * var[i]));
}

int main(void) {
  float *mean = malloc(BINS * sizeof(float));
  float *var = malloc(BINS * sizeof(float));
  if (mean == NULL || var == NULL) {
    return 0;
  }
  for (int i = 0; i < BINS; i++) {
    mean[i] = (float)i / BINS;
    var[i] = 0.25f + (float)i * 0.01f;
  }
  float x = __VERIFIER_nondet_float();
  __VERIFIER_assume(x >= 0.0f && x <= 1.0f);
  float total = 0.0f;
  for (int i = 0; i < BINS; i++) {
    total = total + density_at(mean, var, i, x);
  }
  float edge = mean[0] + mean[7] - var[1];
  __VERIFIER_assert(total >= 0.0f);
  free(mean);
  free(var);
  return edge > 10.0f;
}
