double trace3(double *a, int n)
{
    double s = 0;
    for (int i = 0; i < n; i++)
        s += a[i, i, i];
    a[0, 0, 0] = s;
    return s;
}
