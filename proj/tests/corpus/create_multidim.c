#include <stdio.h>

#define R 33
#define C 70

float m[R][C], t[C][R];

int main(void) {
  int i, j;
  float scale = 0.5f;
  for (i = 0; i < R; ++i)
    for (j = 0; j < C; ++j)
      m[i][j] = (float)(i * C + j) / 100.0f;
#pragma acc data copy(m) create(t)
  {
#pragma acc kernels
#pragma acc loop independent
    for (j = 0; j < C; ++j) {
#pragma acc loop independent
      for (i = 0; i < R; ++i)
        t[j][i] = m[i][j] * scale;
    }
#pragma acc kernels
#pragma acc loop independent
    for (i = 0; i < R; ++i) {
#pragma acc loop independent
      for (j = 0; j < C; ++j)
        m[i][j] = t[j][i] + 1.0f;
    }
  }
  for (i = 0; i < R; i += 4)
    printf("%.6e %.6e\n", m[i][0], m[i][C - 1]);
  return 0;
}
