#include <stdio.h>

#define N 500

int a[N], b[N];

int main(void) {
  int i, t;
  for (i = 0; i < N; ++i)
    a[i] = i * i - 3 * i;
#pragma acc kernels copyin(a) copyout(b)
#pragma acc loop independent private(t)
  for (i = 0; i < N; ++i) {
    t = a[i] * 2;
    if (t < 0)
      t = -t;
    b[i] = t + 1;
  }
  for (i = 0; i < N; i += 23)
    printf("%d\n", b[i]);
  return 0;
}
