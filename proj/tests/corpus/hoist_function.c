#include <stdio.h>
#include <math.h>

#define N 1000

float xs[N], ys[N];

static float square(float v) { return v * v; }

float norm2(float a, float b) { return sqrtf(square(a) + square(b)); }

int main(void) {
  int i;
  for (i = 0; i < N; ++i)
    xs[i] = (float)(i % 31) - 15.0f;
#pragma acc kernels copyin(xs) copyout(ys)
#pragma acc loop independent
  for (i = 0; i < N; ++i)
    ys[i] = norm2(xs[i], 3.0f);
  for (i = 0; i < N; i += 41)
    printf("%.6e\n", ys[i]);
  return 0;
}
