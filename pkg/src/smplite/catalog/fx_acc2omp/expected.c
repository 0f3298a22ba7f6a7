void vadd(float *a, float *b, int n)
{
#pragma omp kernels copy(a)
    for (int i = 0; i < n; i++)
        a[i] += b[i];
#pragma omp simd
    for (int i = 0; i < n; i++)
        b[i] = 0;
#pragma omp kernels copy(a)
    for (int i = 0; i < n; i++)
        a[i] *= b[i];
}
