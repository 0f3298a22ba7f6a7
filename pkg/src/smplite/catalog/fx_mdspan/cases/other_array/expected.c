double peek(double *b, int i, int j, int k)
{
    return b[i][j][k];
}
