__device__ double draw(curandState *s)
{
    return rocrand_uniform_double(s);
}
