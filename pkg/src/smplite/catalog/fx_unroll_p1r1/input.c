void clear(double *a, int n)
{
    for (int i=0; i+4-1 < n; i+=4)
    {
        a[i+0] = 0.0;
        a[i+1] = 0.0;
        a[i+2] = 0.0;
        a[i+3] = 0.0;
    }
}
