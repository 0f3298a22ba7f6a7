#include <curand_kernel.h>

__global__ void fill(double *x, int n, curandState *st)
{
    int i = blockIdx.x * blockDim.x + threadIdx.x;
    if (i < n)
        x[i] = rocrand_uniform_double(&st[i]);
}

void launch(double *x, int n, curandState *st, cudaStream_t s)
{
    rocblas_half h;
    int blocks = (n + 255) / 256;
    hipLaunchKernelGGL(fill,blocks,256,0,s,x, n, st);
    cudaStreamSynchronize(s);
}
