"""Isomorphism classes of small digraphs with a distinguished vertex set.

Vertices are 0..n-1 and the distinguished set B is {0..r-1}.  A graph is a
bitmask over edge slots (t, h), t != h, with t allowed only outside B when
`drop_b_out` is set.  The class representative is the smallest code over
all permutations that map B onto itself.
"""

from itertools import permutations

import numpy as np


def slots(n: int, r: int, drop_b_out: bool) -> list[tuple[int, int]]:
    tails = range(r, n) if drop_b_out else range(n)
    return [(t, h) for t in tails for h in range(n) if h != t]


def class_codes(n: int, r: int, drop_b_out: bool = False) -> tuple[list[tuple[int, int]], np.ndarray]:
    edges = slots(n, r, drop_b_out)
    index = {e: i for i, e in enumerate(edges)}
    codes = np.arange(1 << len(edges), dtype=np.int64)
    best = codes.copy()
    for pb in permutations(range(r)):
        for pn in permutations(range(r, n)):
            sigma = (*pb, *pn)
            image = np.zeros_like(codes)
            for i, (t, h) in enumerate(edges):
                image |= ((codes >> i) & 1) << index[(sigma[t], sigma[h])]
            np.minimum(best, image, out=best)
    return edges, np.unique(best)


def decode(edges: list[tuple[int, int]], code: int) -> list[tuple[int, int]]:
    return [e for i, e in enumerate(edges) if code >> i & 1]
