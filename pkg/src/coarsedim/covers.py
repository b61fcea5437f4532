"""Families of sets, colored covers and the union constructions.

A cover with ``n + 1`` colors whose families are ``d``-disjoint and share a
diameter bound witnesses ``asdim <= n`` at scale ``d`` on its window.
"""

from dataclasses import dataclass, field

from .errors import HypothesisFailure, InputError
from .metric import (
    INF,
    Violation,
    bounded_geometry_constant,
    check_d_disjoint,
    d_components,
    neighbor_finder,
)

#: sets up to this size get an exact pairwise diameter
EXACT_DIAMETER_LIMIT = 300


@dataclass
class Family:
    sets: list
    declared_bound: int = None
    declared_gap: int = None

    def __post_init__(self):
        self.sets = [frozenset(s) for s in self.sets if s]

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def points(self):
        out = set()
        for s in self.sets:
            out |= s
        return out


@dataclass
class ColoredCover:
    families: list
    scale: int
    window: object
    covered_region: frozenset = None
    bound: int = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.families = [f if isinstance(f, Family) else Family(f) for f in self.families]
        if self.covered_region is None:
            self.covered_region = frozenset(self.window.points)

    @property
    def colors(self):
        return len(self.families)

    def all_sets(self):
        for i, fam in enumerate(self.families):
            for s in fam.sets:
                yield i, s

    def points(self):
        out = set()
        for f in self.families:
            out |= f.points()
        return out

    def families_as_lists(self):
        return [list(f.sets) for f in self.families]

    def sorted_families(self):
        key = self.window.key
        return [sorted(f.sets, key=lambda s: key(min(s, key=key))) for f in self.families]


class UniformCoverProvider:
    """Covers of the pieces of a family with one bound per scale.

    ``label(element, d)`` returns ``(color, block)``; points of one piece
    with equal labels form one set.  ``bound(d)`` is the diameter bound,
    the same for every piece.
    """

    n = 0

    def label(self, element, d):
        raise NotImplementedError

    def bound(self, d):
        raise NotImplementedError

    def families(self, points, to_element, d):
        """Per-color lists of sets for one piece; ``to_element`` maps a
        window point to the element the provider understands."""
        buckets = {}
        for p in points:
            color, block = self.label(to_element(p), d)
            buckets.setdefault((color, block), set()).add(p)
        fams = [[] for _ in range(self.n + 1)]
        for (color, _), s in buckets.items():
            fams[color].append(frozenset(s))
        return fams


# -- measuring ----------------------------------------------------------------

def diameter_bound(points, metric, exact_limit=EXACT_DIAMETER_LIMIT):
    """``(value, exact)``: the exact diameter for small sets, otherwise twice
    the eccentricity of one point (an upper bound)."""
    if hasattr(metric, "set_diameter"):
        return metric.set_diameter(points), True
    pts = metric.sorted(points) if len(points) <= exact_limit else list(points)
    if len(pts) <= 1:
        return 0, True
    if len(pts) <= exact_limit:
        best, exact = 0, True
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                v, ok = metric.dist_upper(pts[i], pts[j])
                exact = exact and ok
                if v > best:
                    best = v
        return best, exact
    c = min(pts, key=metric.key)
    ecc = 0
    for p in pts:
        ecc = max(ecc, metric.dist_upper(c, p)[0])
    best = 2 * ecc
    norm_upper = getattr(metric, "norm_upper", None)
    if norm_upper is not None:
        # d(x, y) <= |x| + |y|: the two largest norms also bound the diameter
        top = sorted((norm_upper(p)[0] for p in pts), reverse=True)[:2]
        best = min(best, sum(top))
    return best, False


def close_pairs(sets_a, sets_b, d, metric):
    """Index pairs ``(i, j)`` with ``dist(A_i, B_j) <= d``."""
    owner_b = {}
    for j, s in enumerate(sets_b):
        for p in s:
            owner_b.setdefault(p, []).append(j)
    out = set()
    if not owner_b or not any(sets_a):
        return out
    cand = neighbor_finder(metric, owner_b, d)
    for i, s in enumerate(sets_a):
        for p in s:
            for q in cand(p):
                js = [j for j in owner_b[q] if (i, j) not in out]
                if js and (p == q or metric.dist_within(p, q, d) is not None):
                    out.update((i, j) for j in js)
    return out


def separated(sets, gap, metric):
    """``None`` if distinct sets are ``>= gap`` apart, else a ``Violation``."""
    sets = [s for s in sets if s]
    if len(sets) < 2 or gap <= 0:
        return None
    if hasattr(metric, "separation"):
        return metric.separation(sets, gap)
    if sum(len(s) for s in sets) <= 4000:
        return check_d_disjoint(sets, gap, metric)
    # large families: find any close pair first, then let check_d_disjoint
    # produce the canonical witness for that pair
    pairs = close_pairs(sets, sets, gap - 1, metric)
    pairs = sorted((i, j) for i, j in pairs if i != j)
    if not pairs:
        return None
    i, j = pairs[0]
    v = check_d_disjoint([sets[i], sets[j]], gap, metric)
    return Violation(min(i, j), max(i, j), v.points, v.distance)


# -- verification ----------------------------------------------------------

@dataclass
class CoverReport:
    scale: int
    colors: int
    disjoint: list
    max_diameter: int
    diameter_exact: bool
    bound: int = None
    missed: object = None
    covered: bool = True
    set_count: int = 0

    @property
    def passed(self):
        ok = all(v is None for v in self.disjoint) and self.covered
        if self.bound is not None:
            ok = ok and self.max_diameter <= self.bound
        return ok

    def failures(self):
        out = []
        for i, v in enumerate(self.disjoint):
            if v is not None:
                out.append(f"family {i} not {self.scale}-disjoint: sets {v.first} and "
                           f"{v.second} at distance {v.distance}")
        if not self.covered:
            out.append(f"point {self.missed!r} is not covered")
        if self.bound is not None and self.max_diameter > self.bound:
            out.append(f"diameter {self.max_diameter} exceeds bound {self.bound}")
        return out


def verify_cover(cover, region=None):
    """Check disjointness per color, measure diameters, check coverage."""
    win = cover.window
    for _, s in cover.all_sets():
        win.require(s)
    fams = cover.sorted_families()
    disjoint = [separated(f, cover.scale, win) for f in fams]
    best, exact = 0, True
    for f in fams:
        for s in f:
            v, ok = diameter_bound(s, win)
            if v > best:
                best = v
            exact = exact and ok
    region = cover.covered_region if region is None else region
    covered = cover.points()
    missed = None
    for p in win.sorted(region):
        if p not in covered:
            missed = p
            break
    return CoverReport(
        scale=cover.scale,
        colors=cover.colors,
        disjoint=disjoint,
        max_diameter=best,
        diameter_exact=exact,
        bound=cover.bound,
        missed=missed,
        covered=missed is None,
        set_count=sum(len(f) for f in fams),
    )


# -- constructions -----------------------------------------------------------

def _sorted_sets(sets, metric):
    key = metric.key
    return sorted((frozenset(s) for s in sets if s), key=lambda s: key(min(s, key=key)))


def saturated_union(V, U, d, metric):
    """``{N_d(V; U)} + {U far from every V}`` with ``N_d(V; U)`` the union of
    ``V`` and all ``U``-sets within ``d`` of it.

    A U-set near several V-sets joins each of them.
    """
    vs = [frozenset(s) for s in V if s]
    us = [frozenset(s) for s in U if s]
    pairs = close_pairs(vs, us, d, metric)
    near = {}
    for i, j in pairs:
        near.setdefault(i, []).append(j)
    used = {j for _, j in pairs}
    out = []
    for i, v in enumerate(vs):
        s = set(v)
        for j in near.get(i, ()):
            s |= us[j]
        out.append(s)
    out.extend(u for j, u in enumerate(us) if j not in used)
    return Family(_sorted_sets(out, metric))


def pad(families, colors):
    fams = [list(f) for f in families]
    while len(fams) < colors:
        fams.append([])
    return fams


def union_combine(pieces, piece_families, y_set, y_families, d, R, metric, r=None,
                  check=True, stage="union_combine"):
    """Combine per-piece covers with a cover of ``Y``.

    ``piece_families[a]`` is a per-color list of sets covering ``pieces[a]``;
    they are restricted off ``y_set`` here.  Hypotheses (pieces off Y are
    r-disjoint, piece families d-disjoint and R-bounded, the Y families
    r-disjoint and covering Y) are checked and a failure raises
    ``HypothesisFailure`` naming the hypothesis.  ``r`` defaults to 5R.
    """
    r = 5 * R if r is None else r
    y_set = frozenset(y_set)
    colors = max([len(f) for f in piece_families] + [len(y_families), 1])
    restricted = []
    for fams in piece_families:
        restricted.append([[frozenset(s - y_set) for s in fam if s - y_set] for fam in pad(fams, colors)])
    checks = []
    if check:
        # piece families: d-disjoint and R-bounded on F minus Y
        for a, fams in enumerate(restricted):
            for i, fam in enumerate(fams):
                v = separated(fam, d, metric)
                if v is not None:
                    raise HypothesisFailure(
                        f"piece {a} color {i} is not {d}-disjoint (distance {v.distance})",
                        stage=f"{stage}:piece-families", witness=v)
                for s in fam:
                    diam, _ = diameter_bound(s, metric)
                    if diam > R:
                        raise HypothesisFailure(
                            f"piece {a} color {i} has a set of diameter {diam} > R={R}",
                            stage=f"{stage}:bound")
        checks.append({"hypothesis": "piece families d-disjoint and R-bounded", "d": d, "R": R,
                       "passed": True})
        outer = [frozenset(set(F) - y_set) for F in pieces]
        v = separated(outer, r, metric)
        if v is not None:
            raise HypothesisFailure(
                f"pieces off Y are not {r}-disjoint (pieces {v.first}, {v.second} at "
                f"distance {v.distance})", stage=f"{stage}:piece-disjointness", witness=v)
        checks.append({"hypothesis": "pieces off Y r-disjoint", "r": r, "passed": True})
        ycov = set()
        for fam in y_families:
            for s in fam:
                ycov |= s
        gap = y_set - ycov
        if gap:
            p = metric.sorted(gap)[0]
            raise HypothesisFailure(f"Y cover misses {p!r}", stage=f"{stage}:y-cover-gap",
                                    witness=p)
        for i, fam in enumerate(y_families):
            v = separated([s for s in fam], r, metric)
            if v is not None:
                raise HypothesisFailure(
                    f"Y family {i} is not {r}-disjoint (distance {v.distance})",
                    stage=f"{stage}:y-disjointness", witness=v)
        checks.append({"hypothesis": "Y families r-disjoint and covering Y", "r": r,
                       "passed": True})
    out = []
    ys = pad(y_families, colors)
    for i in range(colors):
        ubar = [s for fams in restricted for s in fams[i]]
        out.append(saturated_union(ys[i], ubar, d, metric))
    region = frozenset().union(*[frozenset(F) for F in pieces]) if pieces else frozenset()
    cover = ColoredCover(out, d, metric, covered_region=region | y_set)
    cover.meta["checks"] = checks
    cover.meta["r"] = r
    cover.meta["R"] = R
    return cover


def finite_union_cover(a_cover, b_cover, d, r=None):
    """Cover of ``A u B`` from a scale-d cover of A and a cover of B at
    scale at least ``r`` (default ``5 R`` with R the measured bound of the
    A cover, at least d); Y is taken to be B."""
    win = a_cover.window
    if a_cover.scale < d:
        raise InputError(f"A cover has scale {a_cover.scale} < {d}")
    a_pts = a_cover.points()
    b_pts = b_cover.points()
    if not b_pts:
        return a_cover
    R = a_cover.bound
    if R is None:
        R = max((diameter_bound(s, win)[0] for _, s in a_cover.all_sets()), default=0)
    R = max(R, d)
    r = 5 * R if r is None else r
    if b_cover.scale < r:
        raise InputError(f"B cover has scale {b_cover.scale}, need at least {r}")
    cover = union_combine([a_pts, b_pts], [a_cover.families_as_lists(), [[] for _ in b_cover.families]],
                          b_pts, [list(f.sets) for f in b_cover.families], d, R, win, r=r,
                          stage="finite_union")
    cover.covered_region = frozenset(a_pts | b_pts)
    return cover


def pullback_cover(x_cover, f, source, d):
    """Pull a cover of X back through an injective 1-Lipschitz ``f``.

    Per color: the d-components of ``f^-1(V)``.  Diameters are bounded by
    ``d * c(R)`` with ``c`` the measured bounded-geometry constant of the
    X window at the X cover's bound ``R``.
    """
    target = x_cover.window
    if x_cover.scale < d:
        raise InputError(f"X cover scale {x_cover.scale} is below {d}")
    image = {}
    for p in source.points:
        q = f(p)
        if q in image:
            raise InputError(f"map is not injective at {p!r}")
        image[q] = p
    for p in source.points:
        fp = f(p)
        for q in source.near(p, 1):
            if q != p and target.dist(fp, f(q)) > source.dist(p, q):
                raise InputError(f"map is not 1-Lipschitz at ({p!r}, {q!r})", witness=(p, q))
    R = x_cover.bound
    if R is None:
        R = max((diameter_bound(s, target)[0] for _, s in x_cover.all_sets()), default=0)
    c = bounded_geometry_constant(target, R)
    fams = []
    for fam in x_cover.families:
        out = []
        for s in fam.sets:
            pre = [image[q] for q in s if q in image]
            if pre:
                out.extend(d_components(pre, d, source))
        fams.append(Family(_sorted_sets(out, source)))
    cover = ColoredCover(fams, d, source, bound=d * c)
    cover.meta["c(R)"] = c
    cover.meta["R"] = R
    return cover


def distance_between(a, b, metric):
    """Set distance using the cheapest strategy; +inf for empty sets."""
    if not a or not b:
        return INF
    from .metric import set_distance

    return set_distance(a, b, metric.dist)


__all__ = [
    "Family",
    "ColoredCover",
    "CoverReport",
    "UniformCoverProvider",
    "Violation",
    "close_pairs",
    "diameter_bound",
    "distance_between",
    "finite_union_cover",
    "pullback_cover",
    "saturated_union",
    "union_combine",
    "verify_cover",
]
