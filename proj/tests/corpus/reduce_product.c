#include <stdio.h>

#define N 40

long f[N];

int main(void) {
  int i;
  long p = 1;
  for (i = 0; i < N; ++i)
    f[i] = (i % 5 == 0) ? 2 : ((i % 7 == 0) ? -1 : 1);
#pragma acc kernels copyin(f)
#pragma acc loop independent reduction(*:p)
  for (i = 0; i < N; ++i)
    p *= f[i];
  printf("%ld\n", p);
  return 0;
}
