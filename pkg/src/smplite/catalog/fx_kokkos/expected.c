#include <cstdio>
#include <Kokkos_Core.hpp>
#include <cmath>

void run(double *x, double *y, double *A, double a, int N, int M)
{
    double result = 0;
    parallel_for(RangePolicy<HostExecutionSpace>(0,n), KOKKOS_LAMBDA(const int i){
        y[i] = 1;
    });
    parallel_for(RangePolicy<HostExecutionSpace>(0,n), KOKKOS_LAMBDA(const int i){
        x[j] = 1;
    });
    parallel_reduce(RangePolicy<HostExecutionSpace>(0,n), KOKKOS_LAMBDA(const int i){
        double temp = A[i] * x[i];
        result += y[i] * temp;
    });
    for (int m = 0; m < M; m++) {
        y[m] += a * x[m];
    }
    printf("%f\n", result);
}
