"""Constructive pipelines: orbit covers times stabilizer covers.

``action_cover`` combines a cover of an orbit in a space the group acts on
with a cover of the stabilizer region; the pipelines instantiate it with
the Bass-Serre tree (free products, amalgams, HNN extensions) or with a
quotient group.
"""

import math
import random
from dataclasses import dataclass, field

from .covers import ColoredCover, verify_cover
from .errors import DegenerateSpecError, HypothesisFailure, InputError, SpecError, WindowExhausted
from .groups import (
    AmalgamatedProduct,
    FreeAbelianGroup,
    FreeProduct,
    HNNExtension,
    group_from_spec,
)
from .groups.base import Group
from .metric import group_ball
from .providers import IntervalProvider, provider_for
from .strata import StrataCoverer, group_subset_window
from .trees import BassSerre, TreeSlice, tree_cover


@dataclass
class PipelineConfig:
    """One pipeline run.  ``spec`` is a spec mapping or a group object;
    ``padding`` scales the enumerated radius above the verified one."""

    spec: object
    d: int
    radius: int
    pipeline: str = None
    r_factor: int = 5
    padding: float = 1.0
    cap: int = 2_000_000
    providers: list = None
    seed: int = 0

    def group(self):
        if isinstance(self.spec, Group):
            return self.spec
        return group_from_spec(self.spec)

    def outer_radius(self):
        return max(self.radius, math.ceil(self.radius * self.padding))


@dataclass
class PipelineResult:
    cover: ColoredCover
    report: object
    checks: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    region: frozenset = None

    @property
    def passed(self):
        return self.report.passed


# -- orbits ------------------------------------------------------------------

class TreeOrbit:
    """Orbit of the root vertex in the Bass-Serre tree."""

    k = 1

    def __init__(self, group):
        self.bs = BassSerre(group)
        self.x0 = self.bs.root
        self.lam = self.bs.max_generator_displacement(self.x0)

    def pi(self, g):
        return self.bs.vertex_of(g, self.x0[0])

    def dist(self, u, v):
        return self.bs.dist(u, v)

    def cover(self, points, scale):
        parent = {}
        for v in points:
            while v is not None and v not in parent:
                p = self.bs.parent(v)
                parent[v] = p
                v = p
        t = TreeSlice.from_parents(parent, self.x0)
        t.weight = {v: self.bs.depth(v) for v in t.vertices}
        cover = tree_cover(t, self.x0, scale)
        return cover, cover.bound

    def check_isometric(self, window, rng, samples=25):
        """Left multiplication preserves tree distance on sampled pairs."""
        pts = window.points
        for _ in range(samples):
            g, a, b = rng.choice(pts), rng.choice(pts), rng.choice(pts)
            u, v = self.pi(a), self.pi(b)
            du = self.dist(self.bs.act(g, u), self.bs.act(g, v))
            if du != self.dist(u, v):
                raise HypothesisFailure("action is not isometric", stage="action:isometry",
                                        witness=(g, a, b))
        return {"hypothesis": "action by isometries (sampled)", "samples": samples,
                "passed": True}


class QuotientOrbit:
    """``G`` acting on ``H`` through an epimorphism ``phi``: ``g(h) = phi(g) h``.
    H carries the metric of the generator images."""

    def __init__(self, G, H, phi, provider=None):
        self.G, self.H, self.phi = G, H, phi
        self.x0 = H.identity
        self.provider = provider or provider_for(H)
        self.k = self.provider.n
        self.lam = max((self.dist(phi(G.letter(*s)), self.x0) for s in G.generators()), default=0)

    def pi(self, g):
        return self.phi(g)

    def dist(self, u, v):
        return self.H.dist(u, v)

    def cover(self, points, scale):
        pts = sorted(set(points), key=self.H.order_key)
        fams = self.provider.families(pts, lambda h: h, scale)
        win = group_subset_window(self.H, pts, {h: self.H.norm(h) for h in pts})
        bound = self.provider.bound(scale)
        return ColoredCover(fams, scale, win, covered_region=frozenset(pts), bound=bound), bound

    def check_isometric(self, window, rng, samples=25):
        return {"hypothesis": "action by isometries (left translation in H)", "passed": True}


# -- the composition ------------------------------------------------------------

def action_cover(window, orbit, stab_cover, d, norms=None, stage="action"):
    """``W^{ij} = {g_F C & pi^-1(F)}`` over orbit families ``i`` and
    stabilizer families ``j``; exactly ``(n+1)(k+1)`` colors.

    ``stab_cover(Q, scale, ub)`` must return a cover of the translated
    region ``Q`` with ``n+1`` families.
    """
    G = window.group
    checks = []
    lam = orbit.lam
    checks.append({"hypothesis": "pi is lambda-Lipschitz, lambda = max generator displacement",
                   "lambda": lam, "passed": True})
    orbit_scale = max(1, lam * d)
    fibers = {}
    for g in window.points:
        fibers.setdefault(orbit.pi(g), []).append(g)
    ocover, R = orbit.cover(list(fibers), orbit_scale)
    orep = verify_cover(ocover)
    if not orep.passed:
        raise HypothesisFailure("orbit cover fails verification: " + "; ".join(orep.failures()),
                                stage=f"{stage}:orbit-cover")
    checks.append({"hypothesis": "orbit cover lambda*d-disjoint and R-bounded",
                   "scale": orbit_scale, "R": R, "measured": orep.max_diameter, "passed": True})
    k1 = ocover.colors
    norms = norms or {}

    def nrm(g):
        v = norms.get(g)
        return G.norm(g) if v is None else v

    # g_F and the translated region Q
    blocks = []
    q_ub = {}
    for i, fam in enumerate(ocover.families):
        for F in fam.sets:
            members = [g for x in F for g in fibers.get(x, ())]
            if not members:
                continue
            g_f = min(members, key=G.order_key)
            inv = G.inv(g_f)
            nf = nrm(g_f)
            trans = {}
            for g in members:
                q = G.mul(inv, g)
                trans[g] = q
                ub = nf + nrm(g)
                if G.exact_norm:
                    ub = G.norm(q)
                q_ub[q] = min(ub, q_ub.get(q, ub))
            blocks.append((i, g_f, trans))
    if not blocks:
        raise WindowExhausted("no orbit set meets the window", stage=f"{stage}:g_F")
    # Q lies in W_R(x0) subset of W_2R(x0)
    for q in q_ub:
        if orbit.dist(orbit.pi(q), orbit.x0) > 2 * R:
            raise HypothesisFailure("translated element outside W_2R", stage=f"{stage}:stabilizer",
                                    witness=q)
    checks.append({"hypothesis": "g_F^-1 (pi^-1(F)) inside W_2R(x0)", "R": R,
                   "points": len(q_ub), "passed": True})
    scover = stab_cover(frozenset(q_ub), d, q_ub)
    n1 = scover.colors
    owner = {}
    for j, C in scover.all_sets():
        for q in C:
            owner[q] = (j, C)
    out = [dict() for _ in range(k1 * n1)]
    for i, g_f, trans in blocks:
        for g, q in trans.items():
            try:
                j, C = owner[q]
            except KeyError:
                raise HypothesisFailure("stabilizer cover misses a translated point",
                                        stage=f"{stage}:stabilizer", witness=q) from None
            out[i * n1 + j].setdefault((g_f, C), set()).add(g)
    fams = [[frozenset(s) for s in f.values()] for f in out]
    cover = ColoredCover(fams, d, window, bound=scover.bound)
    cover.meta.update({"lambda": lam, "orbit_scale": orbit_scale, "R": R, "k+1": k1,
                       "n+1": n1, "stabilizer_bound": scover.bound, "Q": len(q_ub)})
    checks.append({"hypothesis": "color count (n+1)(k+1)", "colors": cover.colors,
                   "expected": k1 * n1, "passed": cover.colors == k1 * n1})
    cover.meta["checks"] = checks
    return cover


# -- pipelines --------------------------------------------------------------------

def _window(config, G, name):
    # below the scale every d-disjoint family is a single set: nothing is certified
    if config.radius < config.d:
        raise WindowExhausted(f"window radius {config.radius} is below the scale {config.d}",
                              stage=f"{name}:window")
    outer = config.outer_radius()
    win = group_ball(G, outer, cap=config.cap)
    region = frozenset(p for p in win.points if G.norm(p) <= config.radius)
    return win, region


def _tree_pipeline(config, G, providers, name):
    if config.d < 1:
        raise InputError("scale d must be at least 1")
    win, region = _window(config, G, name)
    norms = {g: G.norm(g) for g in win.points}
    orbit = TreeOrbit(G)
    checks = [orbit.check_isometric(win, random.Random(config.seed))]
    coverer = StrataCoverer(G, providers, r_factor=config.r_factor, stage=f"{name}:stabilizer")

    def stab(Q, s, ub):
        qwin = group_subset_window(G, Q, ub)
        return coverer.cover(Q, s, qwin, ub)

    cover = action_cover(win, orbit, stab, config.d, norms=norms, stage=name)
    checks += cover.meta["checks"]
    checks += coverer.transcript
    report = verify_cover(cover, region=region)
    params = {"pipeline": name, "d": config.d, "radius": config.radius,
              "outer_radius": config.outer_radius(), "r_factor": config.r_factor,
              "lambda": cover.meta["lambda"], "R": cover.meta["R"],
              "colors": cover.colors, "n": coverer.n, "k": orbit.k}
    return PipelineResult(cover, report, checks, params, region)


def _providers(config, G, count):
    if config.providers is not None:
        if len(config.providers) != count:
            raise InputError(f"expected {count} providers")
        return list(config.providers)
    if isinstance(G, HNNExtension):
        return [provider_for(G.base)]
    return [provider_for(f) for f in G.factors]


def free_product_pipeline(config):
    G = config.group()
    if not isinstance(G, FreeProduct):
        raise InputError("free product pipeline needs a free product spec")
    return _tree_pipeline(config, G, _providers(config, G, len(G.factors)), "free_product")


def amalgam_pipeline(config, audit_radius=None):
    from .audits import inequality_audit

    G = config.group()
    if not isinstance(G, AmalgamatedProduct) or isinstance(G, FreeProduct):
        if isinstance(G, FreeProduct):
            return _tree_pipeline(config, G, _providers(config, G, len(G.factors)), "amalgam")
        raise InputError("amalgam pipeline needs an amalgam spec")
    audit = inequality_audit(G, group_ball(G, audit_radius or config.outer_radius()).points)
    if not audit.passed:
        raise HypothesisFailure("norm inequality fails", stage="amalgam:audit",
                                witness=audit.violations[0])
    result = _tree_pipeline(config, G, _providers(config, G, len(G.factors)), "amalgam")
    result.checks.insert(0, audit.as_check())
    return result


def hnn_pipeline(config, audit_radius=None):
    from .audits import inequality_audit

    G = config.group()
    if not isinstance(G, HNNExtension):
        raise InputError("hnn pipeline needs an hnn spec")
    if G.is_degenerate():
        raise DegenerateSpecError(
            "A and phi(A) are both all of the base group: every stable letter pinches, so no "
            "reduced word has positive length and the tree is not defined", stage="hnn:structure")
    audit = inequality_audit(G, group_ball(G, audit_radius or config.outer_radius()).points)
    if not audit.passed:
        raise HypothesisFailure("norm inequality fails", stage="hnn:audit",
                                witness=audit.violations[0])
    result = _tree_pipeline(config, G, _providers(config, G, 1), "hnn")
    result.checks.insert(0, audit.as_check())
    return result


# -- quotient -----------------------------------------------------------------

def linear_map(G, H, images):
    """Homomorphism of free abelian groups from generator images (words)."""
    if not isinstance(G, FreeAbelianGroup) or not isinstance(H, FreeAbelianGroup):
        raise SpecError("quotient pipeline supports free abelian groups", stage="quotient")
    cols = []
    for lab in G.labels:
        if lab not in images:
            raise InputError(f"no image for generator {lab!r}")
        w = images[lab]
        cols.append(H.parse(w) if isinstance(w, str) else tuple(w))

    def phi(g):
        out = H.identity
        for k, col in zip(g, cols):
            out = H.mul(out, H.power(col, k))
        return out

    if not _generates(H, cols):
        raise InputError("generator images do not generate the target")
    return phi, cols


def _generates(H, cols):
    # rank one target: gcd of the images must be one
    if H.rank == 1:
        g = 0
        for c in cols:
            g = math.gcd(g, c[0])
        return g == 1
    raise SpecError("quotient target of rank above one is not supported", stage="quotient")


def kernel_basis(G, cols):
    """A primitive kernel vector of a map ``Z^2 -> Z`` or ``Z -> Z``; ``None``
    when the kernel is trivial."""
    if G.rank == 1:
        return None if cols[0][0] != 0 else (1,)
    if G.rank == 2:
        a, b = cols[0][0], cols[1][0]
        g = math.gcd(a, b) or 1
        return (b // g, -a // g) if (a, b) != (0, 0) else None
    raise SpecError("kernel computation supports rank at most two", stage="quotient")


def n_r_of_kernel(G, phi, window, R, inner):
    """``N_R(K)`` restricted to the elements of norm at most ``inner``; the
    window must reach ``inner + R`` so every witness is present."""
    if window.inner_radius < inner + R:
        raise WindowExhausted(f"need a window of radius {inner + R}", stage="quotient:N_R(K)")
    H_identity = phi(G.identity)
    kernel = [k for k in window.points if phi(k) == H_identity]
    out = set()
    for g in window.points:
        if G.norm(g) > inner:
            continue
        if any(G.dist(g, k) <= R for k in kernel):
            out.add(g)
    return out


def stabilizer_set(G, phi, H, window, R, inner):
    return {g for g in window.points if G.norm(g) <= inner and H.norm(phi(g)) <= R}


def quotient_pipeline(config, target_spec, images, max_identity_R=4):
    G = config.group()
    H = target_spec if isinstance(target_spec, Group) else group_from_spec(target_spec)
    phi, cols = linear_map(G, H, images)
    win, region = _window(config, G, "quotient")
    checks = []
    # W_R(e) = N_R(K) on the window
    big = group_ball(G, config.radius + max_identity_R)
    for R in range(max_identity_R + 1):
        w = stabilizer_set(G, phi, H, big, R, config.radius)
        nk = n_r_of_kernel(G, phi, big, R, config.radius)
        if w != nk:
            diff = sorted(w ^ nk, key=G.order_key)[0]
            raise HypothesisFailure(f"W_{R}(e) differs from N_{R}(K)", stage="quotient:identity",
                                    witness=diff)
        checks.append({"hypothesis": f"W_{R}(e) = N_{R}(K)", "size": len(w), "passed": True})
    orbit = QuotientOrbit(G, H, phi, IntervalProvider(H) if H.rank == 1 else None)
    v = kernel_basis(G, cols)
    kprov = IntervalProvider(None)

    def stab(Q, s, ub):
        qwin = group_subset_window(G, Q, ub)
        if v is None:
            fams = [[frozenset(Q)]]
            return ColoredCover(fams, s, qwin, covered_region=frozenset(Q),
                                bound=2 * max(ub.values()))
        coord, off = {}, 0
        for q in Q:
            t, dq = _nearest_multiple(G, q, v)
            coord[q], off = t, max(off, dq)
        scale = s + 2 * off
        fams = kprov.families(list(Q), lambda q: (coord[q],), scale)
        bound = kprov.bound(scale) * G.norm(v) + 2 * off
        cover = ColoredCover(fams, s, qwin, covered_region=frozenset(Q), bound=bound)
        cover.meta["kernel_offset"] = off
        return cover

    cover = action_cover(win, orbit, stab, config.d, stage="quotient")
    checks += cover.meta["checks"]
    report = verify_cover(cover, region=region)
    params = {"pipeline": "quotient", "d": config.d, "radius": config.radius,
              "outer_radius": config.outer_radius(), "lambda": cover.meta["lambda"],
              "R": cover.meta["R"], "colors": cover.colors, "kernel": list(v) if v else None,
              "n": 0 if v is None else 1, "k": orbit.k}
    return PipelineResult(cover, report, checks, params, region)


def _nearest_multiple(G, q, v):
    """``(t, |q - t v|)`` minimizing the distance over integers ``t``."""
    m = G.norm(q) + 1
    best = None
    for t in range(-m, m + 1):
        d = G.norm(G.mul(G.inv(G.power(v, t)), q))
        if best is None or (d, abs(t), t) < (best[1], abs(best[0]), best[0]):
            best = (t, d)
    return best


PIPELINES = {
    "free_product": free_product_pipeline,
    "amalgam": amalgam_pipeline,
    "hnn": hnn_pipeline,
}


def run_pipeline(config):
    """Dispatch on ``config.pipeline`` (default: the group kind)."""
    G = config.group()
    name = config.pipeline or G.kind
    if name not in PIPELINES:
        raise InputError(f"no pipeline named {name!r}")
    return PIPELINES[name](config)
