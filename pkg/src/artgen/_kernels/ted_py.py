"""Pure-Python Zhang-Shasha tree edit distance (unit costs).

Inputs are postorder arrays: `lmld[i]` is the postorder index of node i's
leftmost leaf descendant, `labels[i]` an integer label code, `keyroots` the
ascending keyroot indices. Must stay value-identical to the compiled kernel.
"""

from __future__ import annotations


def tree_distance(lmld1, labels1, keyroots1, lmld2, labels2, keyroots2) -> int:
    n1 = len(labels1)
    n2 = len(labels2)
    td = [[0] * n2 for _ in range(n1)]
    fd = [[0] * (n2 + 1) for _ in range(n1 + 1)]

    for i in keyroots1:
        li = lmld1[i]
        for j in keyroots2:
            lj = lmld2[j]
            m = i - li + 2
            n = j - lj + 2
            ioff = li - 1
            joff = lj - 1
            fd[0][0] = 0
            for x in range(1, m):
                fd[x][0] = fd[x - 1][0] + 1
            for y in range(1, n):
                fd[0][y] = fd[0][y - 1] + 1
            for x in range(1, m):
                row = fd[x]
                prev = fd[x - 1]
                lx = lmld1[x + ioff]
                for y in range(1, n):
                    if lx == li and lmld2[y + joff] == lj:
                        cost = 0 if labels1[x + ioff] == labels2[y + joff] else 1
                        d = prev[y - 1] + cost
                        if prev[y] + 1 < d:
                            d = prev[y] + 1
                        if row[y - 1] + 1 < d:
                            d = row[y - 1] + 1
                        row[y] = d
                        td[x + ioff][y + joff] = d
                    else:
                        p = lx - 1 - ioff
                        q = lmld2[y + joff] - 1 - joff
                        d = fd[p][q] + td[x + ioff][y + joff]
                        if prev[y] + 1 < d:
                            d = prev[y] + 1
                        if row[y - 1] + 1 < d:
                            d = row[y - 1] + 1
                        row[y] = d
    return td[n1 - 1][n2 - 1]
