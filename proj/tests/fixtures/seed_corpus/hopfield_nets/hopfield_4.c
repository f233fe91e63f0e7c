/* Copyright 2026 The memfix Authors. SPDX-License-Identifier: Apache-2.0 */
#include <math.h>

extern float __VERIFIER_nondet_float(void);
extern void __VERIFIER_assume(int);
extern void __VERIFIER_assert(int);

#define N 4

static const float weights[N][N] = {
    {0.0f, 1.0f, -1.0f, 1.0f},
    {1.0f, 0.0f, -1.0f, 1.0f},
    {-1.0f, -1.0f, 0.0f, -1.0f},
    {1.0f, 1.0f, -1.0f, 0.0f},
};

static float sign_activation(float x) {
  if (x >= 0.0f) {
    return 1.0f;
  }
  return -1.0f;
}

void hopfield_step(const float *state, float *next) {
  for (int i = 0; i < N; i++) {
    float sum = 0.0f;
    for (int j = 0; j < N; j++) {
      sum = sum + weights[i][j] * state[j];
    }
    next[i] = sign_activation(sum);
  }
}

float hopfield_energy(const float *state) {
  float energy = 0.0f;
  for (int i = 0; i < N; i++) {
    for (int j = 0; j < N; j++) {
      energy = energy - 0.5f * weights[i][j] * state[i] * state[j];
    }
  }
  return energy;
}

int main(void) {
  float state[N];
  float next[N];
  for (int i = 0; i < N; i++) {
    state[i] = __VERIFIER_nondet_float();
    __VERIFIER_assume(state[i] >= -1.0f && state[i] <= 1.0f);
  }
  hopfield_step(state, next);
  float corner = next[0] + next[3];
  float middle = next[1] - next[2];
  __VERIFIER_assert(corner >= -2.0f && corner <= 2.0f);
  __VERIFIER_assert(middle >= -2.0f && middle <= 2.0f);
  if (hopfield_energy(next) > hopfield_energy(state) + 8.0f) {
    return 1;
  }
  return 0;
}
