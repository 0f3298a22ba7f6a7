void vcopy(float *a, float *b, int n)
{
#pragma omp kernels copy(a)
    for (int i = 0; i < n; i++)
        a[i] = b[i];
}
