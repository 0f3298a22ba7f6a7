#include <cmath>

void init(double *y, int N)
{
    for (int j = 0; j < N; ++j) {
        y[j] = sin(j);
    }
}
