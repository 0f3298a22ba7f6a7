#include <math.h>

int rsb__BCSR_spmv_sasa_double_real_C__tN_r1_c1_uu_sH_dE_uG(int n)
{
    return n;
}
