void mix(double *a, double *b, int n)
{
    for (int i=0; i+4-1 < n; i+=4)
    {
        a[i+0] = b[i+0];
        a[i+1] = 2.0 * b[i+1];
        b[i+2] = a[i+2];
        a[i+3] = 0.0;
    }
}
