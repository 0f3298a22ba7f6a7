#include <stdio.h>

void work(double *x, int n)
{
    #pragma omp parallel for
    for (int i = 0; i < n; i++)
        x[i] = 0.0;
    #pragma omp parallel
    {
        LIKWID_MARKER_START(__func__);
        x[0] = 1.0;
        LIKWID_MARKER_STOP(__func__);
    }
}
