"""Random instance generators shared by the property and acceptance tests."""

import random

from coarsedim.groups import FreeGroup
from coarsedim.metric import group_ball, integer_line
from coarsedim.trees import TreeSlice


def line_family(rng, lo, hi, gap, bound, density=0.7):
    """Random subsets of consecutive intervals of length <= bound + 1,
    separated by at least ``gap``."""
    out = []
    x = lo + rng.randint(0, gap)
    while x <= hi:
        length = rng.randint(0, bound)
        pts = {p for p in range(x, min(x + length, hi) + 1) if rng.random() < density}
        pts.add(x)
        out.append(pts)
        x = max(pts) + gap + rng.randint(0, 2 * gap)
    return out


def greedy_family(rng, window, gap, bound, tries=40):
    """Balls of radius ``bound // 2`` around random centers (thinned at
    random), kept when at least ``gap`` from the sets already chosen."""
    out = []
    taken = []
    for _ in range(tries):
        c = rng.choice(window.points)
        s = {q for q in window.near(c, bound // 2) if rng.random() < 0.8}
        s.add(c)
        if all(min(window.dist(p, q) for p in s for q in t) >= gap for t in taken):
            out.append(s)
            taken.append(s)
    return out


_F2 = None


def f2_window(radius=4):
    global _F2
    if _F2 is None:
        _F2 = group_ball(FreeGroup(["a", "b"]), radius)
    return _F2


def saturation_instance(seed):
    """``(metric, U, V, d, R, D)`` with U d-disjoint R-bounded, R >= d,
    V 5R-disjoint D-bounded."""
    rng = random.Random(seed)
    d = rng.randint(1, 6)
    R = rng.randint(d, 16)
    D = rng.randint(0, 16)
    if seed % 4 == 3:
        win = f2_window()
        d = min(d, 3)
        R = rng.randint(d, 6)
        D = rng.randint(0, 4)
        U = greedy_family(rng, win, d, R)
        V = greedy_family(rng, win, 5 * R, D, tries=6)
        return win, U, V, d, R, D
    win = integer_line(-300, 300)
    U = line_family(rng, -300, 300, d, R)
    V = line_family(rng, -300, 300, 5 * R, D, density=0.5)
    return win, U, V, d, R, D


def random_tree(rng, n):
    parent = {0: None}
    style = rng.choice(["recursive", "deep", "caterpillar"])
    for v in range(1, n):
        if style == "recursive":
            parent[v] = rng.randrange(v)
        elif style == "deep":
            parent[v] = rng.randrange(max(0, v - 3), v)
        else:
            parent[v] = v - 1 if rng.random() < 0.3 else rng.randrange(max(0, v - 30), v)
    return TreeSlice.from_parents(parent, 0)
