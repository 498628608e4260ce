#pragma once

// Independent counting oracles shared by the crystal tests and the acceptance run.

#include <algorithm>
#include <functional>
#include <vector>

namespace oracle {

// plane partitions of n, by filling an n x n box row by row
inline long plane_partitions(int n) {
    const int W = std::max(n, 1);
    long count = 0;
    std::vector<int> h(W * W, 0);
    std::function<void(int, int)> go = [&](int cell, int left) {
        if (left == 0) {
            ++count;
            return;
        }
        if (cell == W * W) return;
        int r = cell / W, c = cell % W;
        int cap = left;
        if (r > 0) cap = std::min(cap, h[cell - W]);
        if (c > 0) cap = std::min(cap, h[cell - 1]);
        for (int v = 0; v <= cap; ++v) {
            h[cell] = v;
            go(cell + 1, left - v);
        }
        h[cell] = 0;
    };
    go(0, n);
    return count;
}

inline long integer_partitions(int n) {
    std::vector<long> p(n + 1, 0);
    p[0] = 1;
    for (int k = 1; k <= n; ++k)
        for (int m = k; m <= n; ++m) p[m] += p[m - k];
    return p[n];
}

} // namespace oracle
