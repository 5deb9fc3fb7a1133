#include <stdio.h>

#define N 777

int v[N];

int main(void) {
  int i;
  int hi = -1000000, lo = 1000000;
  for (i = 0; i < N; ++i)
    v[i] = (i * 7621) % 9973 - 5000;
#pragma acc kernels copyin(v)
#pragma acc loop independent reduction(max:hi)
  for (i = 0; i < N; ++i)
    hi = v[i] > hi ? v[i] : hi;
#pragma acc kernels copyin(v)
#pragma acc loop independent reduction(min:lo)
  for (i = 0; i < N; ++i)
    lo = v[i] < lo ? v[i] : lo;
  printf("%d %d\n", hi, lo);
  return 0;
}
