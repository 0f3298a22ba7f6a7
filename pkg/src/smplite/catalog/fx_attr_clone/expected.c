__attribute__((target("default")))
void axpy(double a, const double *x, double *y, int n)
{
    for (int i = 0; i < n; i++)
        y[i] += a * x[i];
}

__attribute__((target("arch=skylake", "avx512")))
void axpy(double a, const double *x, double *y, int n)
{
    // add and modify avx512-specific code only
    for (int i = 0; i < n; i++)
        y[i] += a * x[i];
}
