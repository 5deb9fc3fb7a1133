#include <stdio.h>

int main(void) {
  int i;
  long s = 0;
  int n = 1024;
#pragma acc kernels
#pragma acc loop independent reduction(+:s)
  for (i = 1; i <= n; ++i)
    s += i;
  printf("%ld\n", s);
  return 0;
}
