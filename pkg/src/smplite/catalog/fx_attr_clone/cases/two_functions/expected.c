__attribute__((target("avx512")))
void zero(double *x, int n)
{
    // add and modify avx512-specific code only
    for (int i = 0; i < n; i++)
        x[i] = 0;
}

__attribute__((target("popcnt", "avx512")))
int ones(unsigned *x, int n)
{
    // add and modify avx512-specific code only
    int c = 0;
    for (int i = 0; i < n; i++)
        c += x[i] & 1;
    return c;
}
