void clear2(double *a, int n)
{
    for (int i=0; i+2-1 < n; i+=2)
    {
        a[i+0] = 0.0;
        a[i+1] = 0.0;
        a[i+2] = 0.0;
        a[i+3] = 0.0;
    }
}
