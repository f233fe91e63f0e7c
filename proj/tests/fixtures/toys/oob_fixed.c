/* SPDX-License-Identifier: Apache-2.0 */
int main(void) {
  int a[4] = {0, 1, 2, 3};
  int sum = 0;
  for (int i = 0; i < 4; i++) {
    sum += a[i];
  }
  return sum;
}
