#include <iostream>
#include <algorithm>
#include <functional>

int arr[8] = {3, 1, 4, 1, 5, 9, 2, 6};

bool has_seven()
{
    int count = 0;
    const bool result =
      (find(begin(arr),end(arr),7) !=
       end(arr));
    return result;
}
