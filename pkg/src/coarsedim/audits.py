"""Norm inequalities checked element by element against BFS norms.

Amalgams: ``|x| >= sum_i dist(x_i, C)`` over the letters of the normal form.
HNN extensions: ``|x| >= d(g_n, A)`` when the last stable letter is ``y`` and
``|x| >= d(g_n, phi(A))`` when it is ``y^-1`` (distances in the base group).
"""

from collections import Counter
from dataclasses import dataclass, field

from .errors import InputError
from .groups import AmalgamatedProduct, HNNExtension


@dataclass
class AuditReport:
    kind: str
    checked: int
    violations: list = field(default_factory=list)
    slack: Counter = field(default_factory=Counter)

    @property
    def passed(self):
        return not self.violations

    def as_check(self):
        return {"hypothesis": f"{self.kind} norm inequality on every window element",
                "checked": self.checked, "violations": len(self.violations),
                "slack_histogram": dict(sorted(self.slack.items())), "passed": self.passed}


def subgroup_distance(group, x, member):
    """``min |w|`` over ``w`` with ``x w`` a member, searching the ball of
    radius ``|x|`` (``w = x^-1`` always qualifies)."""
    radius = group.norm(x)
    best = radius
    for w in group.ball_elements(max(radius - 1, 0)):
        nw = group.norm(w)
        if nw < best and member(group.mul(x, w)):
            best = nw
    return best


def inequality_audit(group, points):
    """Check the applicable inequality for every element in ``points``."""
    if isinstance(group, HNNExtension):
        return _hnn_audit(group, points)
    if isinstance(group, AmalgamatedProduct):
        return _amalgam_audit(group, points)
    raise InputError(f"no norm inequality for a {group.kind} group")


def _amalgam_audit(G, points):
    rep = AuditReport("amalgam", 0)
    cache = {}
    for x in points:
        total = 0
        for i, t in G.letters(x):
            key = (i, t)
            if key not in cache:
                cache[key] = subgroup_distance(G, G.embed(i, t), G.in_subgroup)
            total += cache[key]
        nx = G.norm(x)
        rep.checked += 1
        rep.slack[nx - total] += 1
        if nx < total:
            rep.violations.append({"element": G.fmt(x), "norm": nx, "bound": total})
    return rep


def _hnn_audit(G, points):
    rep = AuditReport("hnn", 0)
    B = G.base
    cache = {}
    for x in points:
        pairs = x[1]
        # no stable letter: the bound is the empty one, |x| >= 0
        eps, bound = 0, 0
        if pairs:
            eps, g_n = pairs[-1]
            key = (eps, g_n)
            if key not in cache:
                member = G.in_a if eps == 1 else G.in_phi_a
                cache[key] = subgroup_distance(B, g_n, member)
            bound = cache[key]
        nx = G.norm(x)
        rep.checked += 1
        rep.slack[nx - bound] += 1
        if nx < bound:
            rep.violations.append({"element": G.fmt(x), "norm": nx, "bound": bound,
                                   "epsilon": eps})
    return rep
