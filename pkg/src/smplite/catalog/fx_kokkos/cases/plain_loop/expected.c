#include <Kokkos_Core.hpp>
#include <cmath>

void init(double *y, int N)
{
    parallel_for(RangePolicy<HostExecutionSpace>(0,n), KOKKOS_LAMBDA(const int i){
        y[j] = sin(j);
    });
}
