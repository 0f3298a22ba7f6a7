float sum_kernel(const float *x, int n)
{
    float s = 0;
    for (int i = 0; i < n; i++)
        s += x[i];
    return s;
}

void scale_kernel(float *x, float a, int n)
{
    for (int i = 0; i < n; i++)
        x[i] *= a;
}
