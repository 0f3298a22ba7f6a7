void run(float *x, dim3 g, dim3 b, cudaStream_t s)
{
    k<<<g,b,0,s>>>(x);
}
