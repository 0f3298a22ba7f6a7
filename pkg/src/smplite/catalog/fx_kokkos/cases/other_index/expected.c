#include <Kokkos_Core.hpp>
#include <cmath>

void init(double *y, int N)
{
    for (int m = 0; m < N; m++) {
        y[m] = cos(m);
    }
}
