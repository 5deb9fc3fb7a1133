#include <stdio.h>
#include <stdlib.h>

int main() {
  int LEN = 1024;
  int i, j, l;
  float *a = (float *)malloc(LEN * LEN * sizeof(float));
  float *b = (float *)malloc(LEN * LEN * sizeof(float));
  float *c = (float *)malloc(LEN * LEN * sizeof(float));
  for (i = 0; i < LEN * LEN; ++i) {
    a[i] = (float)(i % 7);
    b[i] = (float)(i % 5);
    c[i] = 0;
  }

#pragma acc data copy(a[0:LEN*LEN],b[0:LEN*LEN],c[0:LEN*LEN])
#pragma acc kernels
#pragma acc loop independent
for(i=0; i<LEN; ++i){
#pragma acc loop independent
 for(j=0; j<LEN; ++j){
  float sum=0;
  for(l=0; l<LEN; ++l) sum += a[i*LEN+l]*b[l*LEN+j];
  c[i*LEN+j]=sum;
 }
}

  double check = 0;
  for (i = 0; i < LEN * LEN; ++i)
    check += c[i];
  printf("%.1f\n", check);
  free(a);
  free(b);
  free(c);
  return 0;
}
