double sum3(double *a, double *b, int n)
{
    double s = 0;
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++)
            for (int k = 0; k < n; k++)
                s += a[i, j, k] + b[i][j][k];
    a[f(i), j+1, k*2] = a[0, 1, 2];
    return s;
}
