__attribute__((target("default")))
int count(const int *v, int n)
{
    return n;
}

__attribute__((target("avx2")))
int count(const int *v, int n)
{
    return n;
}
