/* SPDX-License-Identifier: Apache-2.0 */
#include <stddef.h>

int main(void) {
  int x = 0;
  int *p = &x;
  *p = 42;
  return 0;
}
