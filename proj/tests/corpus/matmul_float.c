#include <stdio.h>
#include <stdlib.h>

int main(void) {
  int n = 64;
  int i, j, k;
  float *a = (float *)malloc(n * n * sizeof(float));
  float *b = (float *)malloc(n * n * sizeof(float));
  float *c = (float *)malloc(n * n * sizeof(float));
  for (i = 0; i < n * n; ++i) {
    a[i] = (float)(i % 17) * 0.25f;
    b[i] = (float)(i % 9) * 0.5f - 1.0f;
  }
#pragma acc data copyin(a[0:n*n], b[0:n*n]) copyout(c[0:n*n])
#pragma acc kernels
#pragma acc loop independent
  for (i = 0; i < n; ++i) {
#pragma acc loop independent
    for (j = 0; j < n; ++j) {
      float sum = 0.0f;
      for (k = 0; k < n; ++k)
        sum += a[i * n + k] * b[k * n + j];
      c[i * n + j] = sum;
    }
  }
  for (i = 0; i < n * n; i += 97)
    printf("%.6e\n", c[i]);
  free(a);
  free(b);
  free(c);
  return 0;
}
