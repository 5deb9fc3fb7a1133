int a[8];

int main(void) {
  int i;
#pragma acc kernels
#pragma acc loop independent reduction(+:a)
  for (i = 0; i < 8; ++i)
    a[i] += i;
  return 0;
}
