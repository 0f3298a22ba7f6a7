void convert(const float *in, int n)
{
    __half h;
    float f;
    f = in[0];
}
