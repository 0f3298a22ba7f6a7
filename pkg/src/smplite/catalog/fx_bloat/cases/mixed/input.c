static int helper(int x)
{
    return x + 1;
}

__attribute__((target("default"))) int twice(int x) { return 2 * helper(x); }

__attribute__((target("avx2")))
int twice(int x)
{
    return x + x;
}

int main(void)
{
    return twice(3);
}
