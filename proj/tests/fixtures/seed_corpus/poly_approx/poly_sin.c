/* Copyright 2026 The memfix Authors. SPDX-License-Identifier: Apache-2.0 */
#include <math.h>

extern float __VERIFIER_nondet_float(void);
extern void __VERIFIER_assume(int);
extern void __VERIFIER_assert(int);

#define DEGREE 4

static const float coeff[DEGREE + 1] = {0.0f, 1.0f, 0.0f, -0.16666667f, 0.0f};

static float layer[3][2] = {
    {0.9f, -0.1f},
    {0.2f, 0.7f},
    {-0.4f, 0.3f},
};

float horner(float x) {
  float acc = coeff[4];
  for (int k = DEGREE - 1; k >= 0; k--) {
    acc = acc * x + coeff[k];
  }
  return acc;
}

float tiny_net(float x) {
  float h0 = layer[0][0] * x + layer[0][1];
  float h1 = layer[1][0] * x + layer[1][1];
  if (h0 < 0.0f) {
    h0 = 0.0f;
  }
  if (h1 < 0.0f) {
    h1 = 0.0f;
  }
  return layer[2][0] * h0 + layer[2][1] * h1;
}

int main(void) {
  float x = __VERIFIER_nondet_float();
  __VERIFIER_assume(x > -1.0f && x < 1.0f);
  float approx = horner(x);
  float net = tiny_net(x);
  float err = approx - net;
  if (err < 0.0f) {
    err = -err;
  }
  __VERIFIER_assert(err <= 2.0f);
  return 0;
}
