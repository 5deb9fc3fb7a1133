#include <stdlib.h>

int main(void) {
  int i;
  float *p = (float *)malloc(64 * sizeof(float));
#pragma acc kernels copy(p)
#pragma acc loop independent
  for (i = 0; i < 64; ++i)
    p[i] = 1.0f;
  free(p);
  return 0;
}
