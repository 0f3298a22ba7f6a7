__device__ double draw(curandState *s)
{
    return curand_uniform_double(s);
}
