void vcopy(float *a, float *b, int n)
{
#pragma acc kernels \
    copy(a)
    for (int i = 0; i < n; i++)
        a[i] = b[i];
}
