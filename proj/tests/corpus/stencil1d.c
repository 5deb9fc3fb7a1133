#include <stdio.h>

#define N 2048

float in[N], out[N];

int main(void) {
  int i;
  for (i = 0; i < N; ++i)
    in[i] = (float)((i * 37) % 101) / 10.0f;
#pragma acc kernels copyin(in) copy(out)
#pragma acc loop independent
  for (i = 1; i < N - 1; ++i)
    out[i] = 0.25f * in[i - 1] + 0.5f * in[i] + 0.25f * in[i + 1];
  for (i = 0; i < N; i += 127)
    printf("%.6e\n", out[i]);
  return 0;
}
