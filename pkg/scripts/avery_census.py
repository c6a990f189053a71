#!/usr/bin/env python3
"""Census of small score sequences: how many isomorphism classes realise
each Landau-valid multiset, and which ones are simple (unique realization).

Enumeration is exhaustive over all labelled tournaments up to --max-n
(careful beyond 6: the count is 2^(n(n-1)/2)).
"""

import argparse
import sys
from itertools import combinations, combinations_with_replacement, permutations

import numpy as np

from tourlim import ScoreSequence, is_simple_avery


def all_masks(n):
    return range(1 << (n * (n - 1) // 2))


def score_multiset(n, mask, pairs):
    scores = [0] * n
    for p, (i, j) in enumerate(pairs):
        if (mask >> p) & 1:
            scores[i] += 1
        else:
            scores[j] += 1
    return tuple(sorted(scores))


def canonical(n, mask, pairs, index, perms):
    best = mask
    for perm in perms:
        out = 0
        for p, (i, j) in enumerate(pairs):
            a, b = perm[i], perm[j]
            bit = (mask >> p) & 1
            if a < b:
                out |= bit << index[(a, b)]
            else:
                out |= (bit ^ 1) << index[(b, a)]
        if out < best:
            best = out
    return best


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=5)
    args = ap.parse_args()

    for n in range(1, args.max_n + 1):
        pairs = list(combinations(range(n), 2))
        index = {p: i for i, p in enumerate(pairs)}
        perms = list(permutations(range(n)))
        classes = {}
        for mask in all_masks(n):
            key = score_multiset(n, mask, pairs)
            classes.setdefault(key, set()).add(canonical(n, mask, pairs, index, perms))
        print(f"n = {n}: {len(classes)} realizable score multisets")
        for key in sorted(classes):
            simple = is_simple_avery(ScoreSequence(np.array(key), "integer"))
            tag = "simple" if simple else f"{len(classes[key])} classes"
            print(f"   {key}: {tag}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
