"""Norms generated by factor norms, computed by shortest paths on a window."""

import heapq

from ..errors import WindowExhausted


def generated_norm(group, x, radius, factor_radius=None):
    """``min sum |a_k|`` over factorizations ``x = a_1 ... a_k`` into factor
    elements, searched inside the word ball of ``radius``.

    Edges are right multiplications by nontrivial factor elements of factor
    norm at most ``factor_radius`` (default ``radius``), weighted by that
    norm.  Partial products of a factorization of cost ``c`` have word norm
    at most ``c``, so a best cost within ``radius`` is certified; otherwise
    ``WindowExhausted`` is raised.
    """
    fr = radius if factor_radius is None else factor_radius
    steps = []
    for i, F in enumerate(group.factors):
        for a in F.ball_elements(fr):
            if a != F.identity:
                steps.append((F.norm(a), group.embed(i, a)))
    inside = set(group.ball_elements(radius))
    dist = {group.identity: 0}
    heap = [(0, 0, group.identity)]
    tick = 1
    while heap:
        c, _, u = heapq.heappop(heap)
        if c > dist.get(u, c):
            continue
        if u == x:
            return c
        if c > radius:
            break
        for w, s in steps:
            v = group.mul(u, s)
            nc = c + w
            if nc > radius or v not in inside:
                continue
            if nc < dist.get(v, nc + 1):
                dist[v] = nc
                heapq.heappush(heap, (nc, tick, v))
                tick += 1
    raise WindowExhausted(f"no factorization of {group.fmt(x)} with cost <= {radius}",
                          stage="generated_norm")
