#include <stdio.h>

void work(double *x, int n)
{
    #pragma omp parallel for
    for (int i = 0; i < n; i++)
        x[i] = 0.0;
    #pragma omp parallel
    {
        x[0] = 1.0;
    }
}
