void convert(const float *in, int n)
{
    rocblas_half h;
    float f;
    f = in[0];
}
