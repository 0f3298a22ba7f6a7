#include <cmath>

double dot(const double *x, const double *y, int N)
{
    double result = 0;
    for (int i = 0; i < N; i++) {
        result += x[i] * y[i];
    }
    return sqrt(result);
}
