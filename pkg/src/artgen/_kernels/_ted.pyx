# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Zhang-Shasha tree edit distance (unit costs).

Same contract as ted_py.tree_distance; scratch arrays are allocated once per
call and reused across keyroot pairs.
"""

import numpy as np


def tree_distance(int[::1] lmld1, int[::1] labels1, int[::1] keyroots1,
                  int[::1] lmld2, int[::1] labels2, int[::1] keyroots2):
    cdef int n1 = labels1.shape[0]
    cdef int n2 = labels2.shape[0]
    td_arr = np.zeros((n1, n2), dtype=np.int32)
    fd_arr = np.zeros((n1 + 1, n2 + 1), dtype=np.int32)
    cdef int[:, ::1] td = td_arr
    cdef int[:, ::1] fd = fd_arr

    cdef int ki, kj, i, j, li, lj, m, n, ioff, joff, x, y, lx, p, q, d, alt, cost

    for ki in range(keyroots1.shape[0]):
        i = keyroots1[ki]
        li = lmld1[i]
        for kj in range(keyroots2.shape[0]):
            j = keyroots2[kj]
            lj = lmld2[j]
            m = i - li + 2
            n = j - lj + 2
            ioff = li - 1
            joff = lj - 1
            fd[0, 0] = 0
            for x in range(1, m):
                fd[x, 0] = fd[x - 1, 0] + 1
            for y in range(1, n):
                fd[0, y] = fd[0, y - 1] + 1
            for x in range(1, m):
                lx = lmld1[x + ioff]
                for y in range(1, n):
                    if lx == li and lmld2[y + joff] == lj:
                        cost = 0 if labels1[x + ioff] == labels2[y + joff] else 1
                        d = fd[x - 1, y - 1] + cost
                        alt = fd[x - 1, y] + 1
                        if alt < d:
                            d = alt
                        alt = fd[x, y - 1] + 1
                        if alt < d:
                            d = alt
                        fd[x, y] = d
                        td[x + ioff, y + joff] = d
                    else:
                        p = lx - 1 - ioff
                        q = lmld2[y + joff] - 1 - joff
                        d = fd[p, q] + td[x + ioff, y + joff]
                        alt = fd[x - 1, y] + 1
                        if alt < d:
                            d = alt
                        alt = fd[x, y - 1] + 1
                        if alt < d:
                            d = alt
                        fd[x, y] = d
    return int(td[n1 - 1, n2 - 1])
