#include <iostream>

int arr[8] = {3, 1, 4, 1, 5, 9, 2, 6};

bool has_seven()
{
    bool result = false;
    int count = 0;
    for (const int &elem : arr)
        if (7 == elem)
        {
            count++;
            result = true;
            break;
        }
    return result;
}
