#include <math.h>

int rsb__BCSR_spmv_sasa_double_complex_C__tN_r1_c1_uu_sH_dE_uG(const double *VA, double *y, int n)
{
    for (int k = 0; k < n; k++)
        y[k] += VA[k];
    return 0;
}

int rsb__BCSR_spmv_sasa_double_real_C__tN_r1_c1_uu_sH_dE_uG(int n)
{
    return n;
}
