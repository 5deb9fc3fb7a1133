int a[8];

int main(void) {
  int i;
#pragma acc kernels copy(a) turbo(4)
  for (i = 0; i < 8; ++i)
    a[i] = i;
  return 0;
}
