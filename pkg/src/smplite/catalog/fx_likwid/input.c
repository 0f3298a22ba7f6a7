#include <stdio.h>
#include <omp.h>

void scale(double *x, int n)
{
    #pragma omp parallel
    {
        int t = omp_get_thread_num();
        x[t] *= 2.0;
    }
    #pragma omp parallel for
    for (int i = 0; i < n; i++)
        x[i] += 1.0;
    #pragma omp single
    {
    }
}
