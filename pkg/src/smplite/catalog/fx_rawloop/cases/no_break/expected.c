#include <iostream>

int arr[4] = {7, 7, 1, 2};

int sevens()
{
    bool result = false;
    int count = 0;
    for (const int &elem : arr)
        if (elem == 7)
        {
            count++;
            result = true;
        }
    return count;
}
