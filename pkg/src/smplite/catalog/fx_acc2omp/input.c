void vadd(float *a, float *b, int n)
{
#pragma acc kernels copy(a[0:n])
    for (int i = 0; i < n; i++)
        a[i] += b[i];
#pragma omp simd
    for (int i = 0; i < n; i++)
        b[i] = 0;
#pragma acc parallel loop \
    copyin(b[0:n])
    for (int i = 0; i < n; i++)
        a[i] *= b[i];
}
