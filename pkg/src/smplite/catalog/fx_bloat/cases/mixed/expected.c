static int helper(int x)
{
    return x + 1;
}

int twice(int x) { return 2 * helper(x); }

int main(void)
{
    return twice(3);
}
