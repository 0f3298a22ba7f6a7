#include <cstdio>
#include <cmath>

void run(double *x, double *y, double *A, double a, int N, int M)
{
    double result = 0;
    for (int i = 0; i < N; i++) {
        y[i] = 1;
    }
    for (int j = 0; j < M; j++) {
        x[j] = 1;
    }
    for (int i = 0; i < N; i++) {
        double temp = A[i] * x[i];
        result += y[i] * temp;
    }
    for (int m = 0; m < M; m++) {
        y[m] += a * x[m];
    }
    printf("%f\n", result);
}
