"""Independent brute-force reference implementations used only by tests.

These deliberately avoid the library's vectorized code paths: explicit
loops, itertools enumeration, and textbook formulas.
"""

import itertools
import math

import numpy as np


def brute_order(v):
    """Indices by |v| descending, index ascending on ties, via explicit sort."""
    return [i for i, _ in sorted(enumerate(v), key=lambda t: (-abs(t[1]), t[0]))]


def brute_topk_agreement(e, g, k, mode):
    top_e = brute_order(e)[:k]
    top_g = brute_order(g)[:k]
    hits = 0
    if mode == "FA":
        hits = len(set(top_e) & set(top_g))
    elif mode == "RA":
        hits = sum(1 for a, b in zip(top_e, top_g) if a == b)
    elif mode == "SA":
        for feat in set(top_e) & set(top_g):
            hits += int(np.sign(e[feat]) == np.sign(g[feat]))
    elif mode == "SRA":
        for a, b in zip(top_e, top_g):
            if a == b and np.sign(e[a]) == np.sign(g[a]):
                hits += 1
    else:
        raise ValueError(mode)
    return hits / k


def average_ranks(v):
    """1-based ranks of |v| ascending with average tie handling."""
    v = [abs(x) for x in v]
    order = sorted(range(len(v)), key=lambda i: v[i])
    ranks = [0.0] * len(v)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and v[order[j + 1]] == v[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for t in range(i, j + 1):
            ranks[order[t]] = avg
        i = j + 1
    return ranks


def brute_spearman(e, g):
    """Pearson correlation of the average-rank vectors."""
    re, rg = average_ranks(e), average_ranks(g)
    n = len(re)
    me, mg = sum(re) / n, sum(rg) / n
    num = sum((a - me) * (b - mg) for a, b in zip(re, rg))
    de = math.sqrt(sum((a - me) ** 2 for a in re))
    dg = math.sqrt(sum((b - mg) ** 2 for b in rg))
    return num / (de * dg)


def brute_pairwise_rank_agreement(e, g):
    d = len(e)
    match = 0
    total = 0
    for i in range(d):
        for j in range(i + 1, d):
            total += 1
            oe = int(abs(e[i]) > abs(e[j])) - int(abs(e[i]) < abs(e[j]))
            og = int(abs(g[i]) > abs(g[j])) - int(abs(g[i]) < abs(g[j]))
            match += int(oe == og)
    return match / total


def brute_trapezoid(curve):
    curve = list(curve)
    if len(curve) == 1:
        return curve[0]
    area = 0.0
    for a, b in zip(curve[:-1], curve[1:]):
        area += (a + b) / 2
    return area / (len(curve) - 1)


def exact_shapley(value_fn, d):
    """Textbook Shapley values: full subset enumeration with factorial weights."""
    phis = np.zeros(d)
    players = list(range(d))
    for i in players:
        others = [j for j in players if j != i]
        for r in range(d):
            for subset in itertools.combinations(others, r):
                mask = np.zeros(d)
                mask[list(subset)] = 1.0
                with_i = mask.copy()
                with_i[i] = 1.0
                w = math.factorial(r) * math.factorial(d - r - 1) / math.factorial(d)
                phis[i] += w * (value_fn(with_i) - value_fn(mask))
    return phis


def finite_diff_gradient(f, x, h=1e-5):
    x = np.asarray(x, dtype=np.float64)
    g = np.zeros_like(x)
    for j in range(x.size):
        up, down = x.copy(), x.copy()
        up[j] += h
        down[j] -= h
        g[j] = (f(up) - f(down)) / (2 * h)
    return g
