"""Finite metric windows and the derived constructions built on them.

All distances are nonnegative integers.  A window records an inner radius
(every ambient point that close to the basepoint is present) and an outer
radius (nothing further out is present); computations that could depend on
points outside the window raise ``WindowExhausted``.
"""

from dataclasses import dataclass, field
from itertools import combinations

from .errors import InputError, ResourceError, WindowExhausted

INF = float("inf")


class MetricWindow:
    """Finite pointed metric space with an integer distance oracle.

    ``near(x, k)`` should yield every point within distance ``k`` of ``x``;
    the default scans all points.  ``key`` orders points deterministically.
    """

    def __init__(self, points, dist, basepoint, inner_radius, outer_radius, key=None):
        self.points = tuple(points)
        self._set = frozenset(self.points)
        if len(self._set) != len(self.points):
            raise InputError("window points must be distinct")
        if basepoint not in self._set:
            raise InputError("basepoint must be a window point")
        self._dist = dist
        self.basepoint = basepoint
        self.inner_radius = inner_radius
        self.outer_radius = outer_radius
        self.key = key or (lambda p: p)

    def __contains__(self, p):
        return p in self._set

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def dist(self, x, y):
        return self._dist(x, y)

    def dist_within(self, x, y, k):
        """The distance if it is at most ``k``, else ``None``."""
        v = self._dist(x, y)
        return v if v <= k else None

    def require(self, pts):
        for p in pts:
            if p not in self._set:
                raise InputError(f"unknown point {p!r}")

    def near(self, x, k):
        for y in self.points:
            if self._dist(x, y) <= k:
                yield y

    def radius_of(self, x):
        return self.dist(self.basepoint, x)

    def dist_upper(self, x, y):
        return self.dist(x, y), True

    def sorted(self, pts):
        return sorted(pts, key=self.key)

    def check_axioms(self, max_points=10_000, sample=2000, seed=0):
        """Verify the metric axioms; exhaustive up to ``max_points`` points,
        otherwise on a seeded sample.  Raises ``InputError`` with a witness."""
        import random

        pts = list(self.points)
        if len(pts) > max_points:
            pts = random.Random(seed).sample(pts, sample)
        d = {}
        for x in pts:
            for y in pts:
                v = self._dist(x, y)
                if not isinstance(v, int) or v < 0:
                    raise InputError(f"distance {v!r} is not a nonnegative integer", witness=(x, y))
                if (v == 0) != (x == y):
                    raise InputError("identity of indiscernibles fails", witness=(x, y))
                d[x, y] = v
        for x, y in combinations(pts, 2):
            if d[x, y] != d[y, x]:
                raise InputError("distance is not symmetric", witness=(x, y))
        if len(pts) <= 200:
            for x in pts:
                for y in pts:
                    for z in pts:
                        if d[x, y] + d[y, z] < d[x, z]:
                            raise InputError("triangle inequality fails", witness=(x, y, z))
        else:
            rnd = random.Random(seed + 1)
            for _ in range(20_000):
                x, y, z = rnd.choice(pts), rnd.choice(pts), rnd.choice(pts)
                if d[x, y] + d[y, z] < d[x, z]:
                    raise InputError("triangle inequality fails", witness=(x, y, z))


def integer_line(lo, hi):
    """The integers ``lo..hi`` with ``|x - y|``, based at the point nearest 0."""

    def near_fn(x, k, _lo=lo, _hi=hi):
        return range(max(_lo, x - k), min(_hi, x + k) + 1)

    base = min(max(0, lo), hi)
    w = MetricWindow(range(lo, hi + 1), lambda x, y: abs(x - y), base,
                     min(base - lo, hi - base), max(base - lo, hi - base))
    w.near = near_fn
    w.fast_near = True
    return w


def grid(n, m):
    """``n x m`` grid with the L1 metric, based at (0, 0)."""
    pts = [(i, j) for i in range(n) for j in range(m)]

    def dist(p, q):
        return abs(p[0] - q[0]) + abs(p[1] - q[1])

    w = MetricWindow(pts, dist, (0, 0), 0, n + m - 2)

    def near_fn(p, k):
        i0, j0 = p
        for i in range(max(0, i0 - k), min(n - 1, i0 + k) + 1):
            r = k - abs(i - i0)
            for j in range(max(0, j0 - r), min(m - 1, j0 + r) + 1):
                yield (i, j)

    w.near = near_fn
    w.fast_near = True
    return w


class GroupWindow(MetricWindow):
    """A finite set of group elements with the word metric ``|x^-1 y|``.

    ``near`` translates the cached ball ``B_k`` when that is cheaper than
    scanning the window.
    """

    def __init__(self, group, points, inner_radius=None, outer_radius=None, basepoint=None,
                 norm_bounds=None):
        self.group = group
        # upper bounds on norms for points beyond the BFS table
        self.norm_bounds = norm_bounds or {}
        pts = list(points)
        if basepoint is None:
            basepoint = group.identity
        if outer_radius is None:
            outer_radius = max((group.dist(basepoint, p) for p in pts), default=0)
        if inner_radius is None:
            inner_radius = 0
        pts.sort(key=group.order_key)
        super().__init__(pts, group.dist, basepoint, inner_radius, outer_radius,
                         key=group.order_key)

    def small_ball(self, k):
        """``B_k`` of the group if it is no larger than the window, else ``None``."""
        G = self.group
        limit = max(len(self.points), 64)
        G._ensure_table()
        total = 0
        for r in range(k + 1):
            if r >= len(G._layers):
                if not G._layers[-1]:
                    break
                try:
                    G.extend_table(r, cap=len(G._norms) + limit * len(G.generators()))
                except ResourceError:
                    return None
            total += len(G._layers[r]) if r < len(G._layers) else 0
            if total > limit:
                return None
        return G.ball_elements(k)

    def near(self, x, k):
        G = self.group
        if k < 0:
            return []
        ball = self.small_ball(k)
        if ball is not None:
            out = []
            for g in ball:
                y = G.mul(x, g)
                if y in self._set:
                    out.append(y)
            return out
        return [y for y in self.points if self.dist_upper(x, y)[0] <= k or self._dist(x, y) <= k]

    def dist_within(self, x, y, k):
        # only the ball of radius k is needed, never the full norm
        G = self.group
        if G.exact_norm:
            v = G.dist(x, y)
            return v if v <= k else None
        return G.norm_if_known(G.conj_inv_mul(x, y), k)

    def dist_upper(self, x, y):
        """``(value, exact)``: the distance when it is cheaply known, otherwise
        the triangle bound through the basepoint."""
        G = self.group
        if G.exact_norm:
            return G.dist(x, y), True
        v = G.norm_if_known(G.conj_inv_mul(x, y), G.table_radius())
        if v is not None:
            return v, True
        return self.norm_upper(x)[0] + self.norm_upper(y)[0], False

    def norm_upper(self, x):
        """``(value, exact)`` for the distance from the basepoint."""
        G = self.group
        if self.basepoint == G.identity:
            v = G.norm_if_known(x, G.table_radius())
            if v is not None:
                return v, True
            if x in self.norm_bounds:
                return self.norm_bounds[x], False
        return self.radius_of(x), True

    def radius_of(self, x):
        return self.group.dist(self.basepoint, x)

    def known_radius(self, x):
        """Distance from the basepoint when the BFS table already has it."""
        G = self.group
        if G.exact_norm:
            return self.radius_of(x)
        return G.norm_if_known(G.conj_inv_mul(self.basepoint, x), G.table_radius())


def group_ball(group, radius, cap=None):
    """The closed ball of ``radius`` about the identity as a window."""
    pts = group.ball_elements(radius, cap)
    return GroupWindow(group, pts, inner_radius=radius, outer_radius=radius)


# -- set-level helpers -----------------------------------------------------

def neighbor_finder(metric, pool, k):
    """Function ``p -> candidates in pool`` that contains every pool point
    within ``k`` of ``p`` (possibly more; callers check exact distances).

    Uses ball translation in groups when the ball is small, the window's
    own ``near`` when it is cheap, else buckets by distance to the basepoint.
    """
    pool = pool if isinstance(pool, (set, frozenset, dict)) else set(pool)
    small_ball = getattr(metric, "small_ball", None)
    ball = small_ball(k) if small_ball is not None and k >= 0 else None
    if ball is not None:
        G = metric.group

        def via_ball(p):
            for g in ball:
                q = G.mul(p, g)
                if q in pool:
                    yield q
        return via_ball
    if getattr(metric, "fast_near", False):
        return lambda p: [q for q in metric.near(p, k) if q in pool]
    known = getattr(metric, "known_radius", metric.radius_of)
    radii = {q: known(q) for q in pool}
    if any(v is None for v in radii.values()):
        # some radius would need a search beyond the table: scan everything
        return lambda p: pool
    buckets = {}
    for q, rad in radii.items():
        buckets.setdefault(rad, []).append(q)

    def via_buckets(p):
        rp = known(p)
        if rp is None:
            yield from pool
            return
        for rad in range(rp - k, rp + k + 1):
            yield from buckets.get(rad, ())
    return via_buckets


def set_distance(a, b, dist):
    """Minimum pairwise distance; +inf if either set is empty."""
    best = INF
    for x in a:
        for y in b:
            v = dist(x, y)
            if v < best:
                best = v
                if best == 0:
                    return 0
    return best


def set_distance_below(a, b, d, metric):
    """Set distance of two sets known to be closer than ``d``."""
    best = None
    for x in a:
        for y in b:
            v = metric.dist_within(x, y, d - 1 if best is None else best - 1)
            if v is not None:
                best = v
                if best == 0:
                    return 0
    return best


def diameter(points, dist):
    pts = list(points)
    best = 0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            v = dist(pts[i], pts[j])
            if v > best:
                best = v
    return best


def d_components(points, d, metric):
    """Classes of the chain relation with consecutive gaps at most ``d``.

    Returned as a list of frozensets sorted by their least point.
    """
    if d < 1:
        raise InputError("d must be at least 1")
    pts = list(points)
    metric.require(pts)
    members = set(pts)
    parent = {p: p for p in pts}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    if len(pts) <= 64:
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if metric.dist_within(pts[i], pts[j], d) is not None:
                    ra, rb = find(pts[i]), find(pts[j])
                    if ra != rb:
                        parent[rb] = ra
    else:
        cand = neighbor_finder(metric, members, d)
        for p in pts:
            for q in cand(p):
                if q != p and find(p) != find(q) and metric.dist_within(p, q, d) is not None:
                    parent[find(q)] = find(p)
    blocks = {}
    for p in pts:
        blocks.setdefault(find(p), []).append(p)
    out = [frozenset(b) for b in blocks.values()]
    out.sort(key=lambda s: metric.key(min(s, key=metric.key)))
    return out


@dataclass
class Violation:
    """Two sets of a family closer than the required gap."""

    first: int
    second: int
    points: tuple
    distance: int

    def as_dict(self, fmt=str):
        return {
            "sets": [self.first, self.second],
            "points": [fmt(p) for p in self.points],
            "distance": self.distance,
        }


def check_d_disjoint(family, d, metric):
    """``None`` when distinct sets are at least ``d`` apart, else a ``Violation``.

    The reported distance is the exact set distance of the witness pair.
    """
    sets = [s for s in family]
    if len(sets) < 2 or d <= 0:
        for s in sets:
            metric.require(s)
        return None
    owner = {}
    for idx, s in enumerate(sets):
        metric.require(s)
        for p in s:
            if p in owner and owner[p] != idx:
                return Violation(owner[p], idx, (p, p), 0)
            owner[p] = idx
    total = len(owner)
    cand = neighbor_finder(metric, owner, d - 1) if total > 64 else (lambda p: owner.keys())
    for idx, s in enumerate(sets):
        for p in metric.sorted(s):
            for q in cand(p):
                j = owner.get(q)
                if j is None or j == idx:
                    continue
                if metric.dist_within(p, q, d - 1) is not None:
                    a, b = min(idx, j), max(idx, j)
                    sd = set_distance_below(sets[a], sets[b], d, metric)
                    return Violation(a, b, (p, q) if a == idx else (q, p), sd)
    return None


def coset_distance(window, in_subgroup, x, y):
    """``min_c |x^-1 c y|`` over subgroup elements ``c`` in the window.

    This is the distance between right cosets ``Cx`` and ``Cy``.  Any ``c``
    outside the window has ``d(x, cy) > outer - |x| - |y|``, so a minimum at
    or beyond that threshold is reported as ``WindowExhausted``.
    """
    G = window.group
    window.require([x, y])
    best = INF
    xi = G.inv(x)
    threshold = window.outer_radius - G.norm(x) - G.norm(y)
    for c in window.points:
        if not in_subgroup(c):
            continue
        # values above the threshold are never certified, so skip long searches
        v = G.norm_if_known(G.mul(xi, G.mul(c, y)), max(threshold, 0))
        if v is not None and v < best:
            best = v
    if best == INF or best > threshold:
        raise WindowExhausted(
            f"coset distance minimum {best} not certified (threshold {threshold})",
            stage="coset_distance",
        )
    return best


# -- pointed free products -------------------------------------------------

class PointedProduct:
    """``X *^ Y`` for two pointed metric windows.

    Words are tuples of ``(side, point)`` with side 0 for X and 1 for Y.
    """

    def __init__(self, x_space, y_space):
        self.spaces = (x_space, y_space)

    def letter_norm(self, letter):
        side, p = letter
        sp = self.spaces[side]
        return sp.dist(p, sp.basepoint)

    def validate(self, letters):
        prev = None
        for side, p in letters:
            if side not in (0, 1):
                raise InputError(f"bad alphabet index {side!r}")
            sp = self.spaces[side]
            if p not in sp:
                raise InputError(f"letter {p!r} not in alphabet {side}")
            if p == sp.basepoint:
                raise InputError("a letter may not equal its basepoint")
            if side == prev:
                raise InputError("letters must alternate between the two alphabets")
            prev = side
        return tuple(letters)

    def word(self, letters):
        return PointedWord(self.validate(letters), self)

    def norm(self, letters):
        return sum(self.letter_norm(l) for l in letters)


@dataclass(frozen=True)
class PointedWord:
    letters: tuple
    product: PointedProduct = field(compare=False, repr=False)

    @property
    def norm(self):
        return self.product.norm(self.letters)


def pointed_product_distance(w, w2):
    """Cut the common prefix; if the remainders start in the same alphabet
    charge ``d(x, x')`` for the first letters plus the norms of the rest,
    otherwise the sum of the remainders' norms."""
    if w.product is not w2.product:
        raise InputError("words live in different pointed products")
    P = w.product
    a, b = P.validate(w.letters), P.validate(w2.letters)
    k = 0
    while k < len(a) and k < len(b) and a[k] == b[k]:
        k += 1
    ra, rb = a[k:], b[k:]
    if ra and rb and ra[0][0] == rb[0][0]:
        sp = P.spaces[ra[0][0]]
        return sp.dist(ra[0][1], rb[0][1]) + P.norm(ra[1:]) + P.norm(rb[1:])
    return P.norm(ra) + P.norm(rb)


# -- coarse-map witnesses ----------------------------------------------------

@dataclass
class CoarseWitness:
    lipschitz_lambda: int = None
    adjacent_lambda: int = None
    violation: tuple = None
    xi_table: list = None
    xi_bar_table: list = None
    rho_table: list = None

    def rho(self, s):
        """Lower control function; constant beyond the sampled range."""
        if s < 0:
            return 0
        return self.rho_table[min(s, len(self.rho_table) - 1)]


def lipschitz_witness(f, source, target, adjacent_only=False):
    """Smallest integer ``lam`` with ``d(f x, f y) <= lam d(x, y)``.

    Also reports the adjacent-pairs value, which equals the full value for
    geodesic (word) metrics.  ``violation`` holds a pair attaining ``lam``.
    """
    pts = list(source.points)
    lam, pair = 0, None
    adj = 0
    if adjacent_only:
        for x in pts:
            fx = f(x)
            for y in source.near(x, 1):
                if y == x:
                    continue
                v = target.dist(fx, f(y))
                if v > adj:
                    adj = v
        return CoarseWitness(lipschitz_lambda=None, adjacent_lambda=adj)
    images = {x: f(x) for x in pts}
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            x, y = pts[i], pts[j]
            ds = source.dist(x, y)
            dt = target.dist(images[x], images[y])
            q = -(-dt // ds)
            if q > lam:
                lam, pair = q, (x, y)
            if ds == 1 and dt > adj:
                adj = dt
    return CoarseWitness(lipschitz_lambda=lam, adjacent_lambda=adj, violation=pair)


def majorant(xi):
    """Strictly increasing majorant: ``bar(r) = max(bar(r-1) + 1, xi(r))``."""
    out = []
    prev = -1
    for v in xi:
        cur = max(prev + 1, v)
        out.append(cur)
        prev = cur
    return out


def floor_inverse(bar, upto):
    """``rho(s) = max{r : bar(r) <= s}`` for ``s`` in ``0..upto``."""
    rho = []
    r = 0
    for s in range(upto + 1):
        while r + 1 < len(bar) and bar[r + 1] <= s:
            r += 1
        rho.append(r if bar[0] <= s else 0)
    return rho


def coarse_uniform_witness(psi, source, target, max_radius=None):
    """Lower control ``rho`` for an injective map between windows.

    ``xi(r)`` is the largest source distance among pairs whose images are
    within ``r``; ``rho`` is the floor inverse of its strictly increasing
    majorant, so ``d(psi x, psi y) >= rho(d(x, y))`` on every window pair.
    """
    pts = list(source.points)
    images = {}
    seen = {}
    for x in pts:
        fx = psi(x)
        if fx in seen:
            raise InputError(f"map is not injective: {x!r} and {seen[fx]!r}")
        seen[fx] = x
        images[x] = fx
    pairs = []
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            pairs.append((target.dist(images[pts[i]], images[pts[j]]),
                          source.dist(pts[i], pts[j])))
    top_t = max((p[0] for p in pairs), default=0)
    top_s = max((p[1] for p in pairs), default=0)
    if max_radius is None:
        max_radius = max(top_t, top_s, source.outer_radius)
    xi = [0] * (max_radius + 1)
    for dt, ds in pairs:
        if dt <= max_radius and ds > xi[dt]:
            xi[dt] = ds
    for r in range(1, len(xi)):
        xi[r] = max(xi[r], xi[r - 1])
    bar = majorant(xi)
    rho = floor_inverse(bar, max(max_radius, top_s))
    return CoarseWitness(xi_table=xi, xi_bar_table=bar, rho_table=rho)


def bounded_geometry_constant(window, radius):
    """``c(R)``: the largest R-ball over points whose R-ball lies inside the
    inner radius.  Raises ``WindowExhausted`` if no point qualifies."""
    best = None
    for x in window.points:
        if window.radius_of(x) + radius > window.inner_radius:
            continue
        n = sum(1 for _ in window.near(x, radius))
        if best is None or n > best:
            best = n
    if best is None:
        raise WindowExhausted(f"no point has its {radius}-ball inside the window",
                              stage="bounded_geometry")
    return best
