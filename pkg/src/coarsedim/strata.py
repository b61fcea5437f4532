"""Covers of stabilizer regions by induction on normal-form length.

Elements of length ``m`` are written ``z = u t`` with ``u`` of length
``m - 1`` and ``t`` the last factor letter (``y^eps t`` for HNN).  With
``delta(z)`` the distance from ``t`` to the edge subgroup:

* ``delta <= r``: ``z`` is within ``delta`` (``delta + 1`` for HNN) of an
  anchor of length ``m - 1`` and inherits the anchor's set in a cover of
  the anchors at a larger scale;
* ``delta > r``: ``z`` lies in the far part of its coset ``z A_i``, covered
  by translating the factor provider.

The two are merged with ``union_combine`` and strata are merged by
``finite_union_cover``.  Every step checks its own hypotheses.
"""

from .covers import ColoredCover, finite_union_cover, union_combine
from .errors import InputError
from .metric import GroupWindow
from .trees import BassSerre


class StrataCoverer:
    def __init__(self, group, providers, r_factor=5, stage="stabilizer"):
        self.G = group
        self.bs = BassSerre(group)
        self.hnn = self.bs.kind == "hnn"
        self.free = self.bs.kind == "free_product"
        self.providers = list(providers)
        self.n = max(p.n for p in self.providers)
        self.r_factor = r_factor
        self.stage = stage
        self._nearest = {}
        self.transcript = []

    # -- structure --------------------------------------------------------
    def length(self, z):
        return self.G.length(z)

    def last(self, z):
        """``(prefix, type, t, eps)`` for ``z`` of positive length."""
        G = self.G
        if self.hnn:
            eps, t = z[1][-1]
            tail = G.from_pairs(((eps, t),))
            return G.mul(z, G.inv(tail)), "G", t, eps
        i, t = G.letters(z)[-1]
        tail = G.from_letters(((i, t),))
        return G.mul(z, G.inv(tail)), i, t, 0

    def provider(self, typ):
        return self.providers[0] if typ == "G" else self.providers[typ]

    def nearest(self, typ, t, eps):
        """``(delta, w)`` with ``t w`` in the edge subgroup and ``|w|`` minimal;
        ``w`` is a factor (base) element."""
        key = (typ, t, eps)
        hit = self._nearest.get(key)
        if hit is not None:
            return hit
        G = self.G
        if self.free:
            F = G.factors[typ]
            out = (F.norm(t), F.inv(t))
        elif self.hnn:
            B = G.base
            member = G.in_a if eps == 1 else G.in_phi_a
            out = _ball_search(B, t, member)
        else:
            F = G.factors[typ]
            out = _ball_search(F, t, lambda c: _in_c(G, typ, c))
        self._nearest[key] = out
        return out

    def anchor(self, z):
        """``(anchor, offset)``: an element of length ``l(z) - 1`` and an upper
        bound on its distance to ``z``."""
        G = self.G
        prefix, typ, t, eps = self.last(z)
        delta, w = self.nearest(typ, t, eps)
        if self.free:
            return prefix, delta
        if self.hnn:
            B = G.base
            a = B.mul(t, w)
            g = G.phi(a) if eps == 1 else G.phi_inverse(a)
            return G.mul(prefix, G.embed(g)), delta + 1
        c = G.factors[typ].mul(t, w)
        return G.mul(prefix, G.embed(typ, c)), delta

    def delta(self, z):
        _, typ, t, eps = self.last(z)
        return self.nearest(typ, t, eps)[0]

    def piece_key(self, z):
        _, typ, _, _ = self.last(z)
        return self.bs.vertex_of(z, typ)

    def to_factor(self, key, z):
        G = self.G
        e = G.mul(G.inv(self.bs.rep(key)), z)
        if self.hnn:
            if e[1]:
                raise InputError("element is not in the coset of its key")
            return e[0]
        out = G.factor_part(e, key[0])
        if out is None:
            raise InputError("element is not in the coset of its key")
        return out

    def declared_R(self, s):
        return max(p.declared_R(s) for p in self.providers)

    # -- covers -------------------------------------------------------------
    def single(self, pts, s, window, ub):
        fams = [[frozenset(pts)]] + [[] for _ in range(self.n)]
        bound = 0 if len(pts) <= 1 else 2 * max(ub[p] for p in pts)
        return ColoredCover(fams, s, window, covered_region=frozenset(pts), bound=bound)

    def base_cover(self, pts, s, window, ub):
        G = self.G
        if self.free:
            return self.single(pts, s, window, ub)
        if self.hnn:
            p = self.providers[0]
            fams = p.families(pts, lambda z: z[0], s)
        else:
            p = self.providers[0]
            fams = p.families(pts, lambda z: G.factor_part(z, 0), s)
        fams = fams + [[] for _ in range(self.n + 1 - len(fams))]
        bound = min(p.bound(s), 2 * max(ub[q] for q in pts))
        return ColoredCover(fams, s, window, covered_region=frozenset(pts), bound=bound)

    def cover_stratum(self, pts, m, s, window, ub):
        """Scale-``s`` cover of points all of length ``m``."""
        pts = frozenset(pts)
        if not pts:
            return ColoredCover([[] for _ in range(self.n + 1)], s, window,
                                covered_region=frozenset(), bound=0)
        maxub = max(ub[p] for p in pts)
        if len(pts) == 1 or s > 2 * maxub:
            return self.single(pts, s, window, ub)
        if m == 0:
            return self.base_cover(pts, s, window, ub)
        R = self.declared_R(s)
        r = self.r_factor * R
        anchors, far = {}, []
        for z in pts:
            if self.delta(z) > r:
                far.append(z)
            else:
                anchors[z] = self.anchor(z)
        maxoff = max((off for _, off in anchors.values()), default=0)
        sub_ub = {}
        for z, (a, off) in anchors.items():
            v = ub[z] + off
            sub_ub[a] = min(v, sub_ub.get(a, v))
        sub_pts = list(sub_ub)
        sub_scale = r + 2 * maxoff
        if sub_pts:
            sub_win = group_subset_window(self.G, sub_pts, sub_ub)
            sub = self.cover_stratum(sub_pts, m - 1, sub_scale, sub_win, sub_ub)
            owner = {}
            for i, s_ in sub.all_sets():
                for a in s_:
                    owner[a] = (i, s_)
            y_fams = [dict() for _ in range(len(sub.families))]
            for z, (a, _) in anchors.items():
                i, s_ = owner[a]
                y_fams[i].setdefault(s_, set()).add(z)
            y_families = [[frozenset(v) for v in f.values()] for f in y_fams]
            d_y = sub.bound + 2 * maxoff
        else:
            y_families = [[] for _ in range(self.n + 1)]
            d_y = 0
        pieces, piece_fams = [], []
        by_key = {}
        for z in far:
            by_key.setdefault(self.piece_key(z), []).append(z)
        for key in sorted(by_key, key=repr):
            members = by_key[key]
            prov = self.provider(key[0])
            fams = prov.families(members, lambda z, key=key: self.to_factor(key, z), s)
            pieces.append(frozenset(members))
            piece_fams.append(fams)
        cover = union_combine(pieces, piece_fams, frozenset(anchors), y_families, s, R, window,
                              r=r, stage=f"{self.stage}:stratum-{m}")
        cover.covered_region = pts
        bound = max(R, d_y + 2 * (s + R)) if anchors else R
        cover.bound = min(bound, 2 * maxub)
        self.transcript.append({
            "stage": f"{self.stage}:stratum-{m}", "scale": s, "R": R, "r": r,
            "points": len(pts), "far": len(far), "pieces": len(pieces),
            "max_offset": maxoff, "checks": cover.meta.get("checks", []),
        })
        return cover

    def cover(self, pts, s, window, ub):
        """Scale-``s`` cover of ``pts``: strata by length, merged by finite unions."""
        strata = {}
        for z in pts:
            strata.setdefault(self.length(z), []).append(z)
        if not strata:
            return ColoredCover([[] for _ in range(self.n + 1)], s, window,
                                covered_region=frozenset(), bound=0)
        levels = sorted(strata)
        acc = self.cover_stratum(strata[levels[0]], levels[0], s, window, ub)
        done = set(strata[levels[0]])
        for m in levels[1:]:
            R_a = max(acc.bound, s)
            r = self.r_factor * R_a
            b = self.cover_stratum(strata[m], m, r, window, ub)
            merged = finite_union_cover(acc, b, s, r=r)
            done |= set(strata[m])
            maxub = max(ub[p] for p in done)
            d_b = b.bound
            merged.bound = min(max(R_a, d_b + 2 * (s + R_a)), 2 * maxub)
            merged.covered_region = frozenset(done)
            merged.families = _pad_families(merged.families, self.n + 1)
            self.transcript.append({"stage": f"{self.stage}:finite-union-{m}", "scale": s,
                                    "r": r, "checks": merged.meta.get("checks", [])})
            acc = merged
        return acc


def group_subset_window(G, pts, ub):
    """Window on arbitrary group elements, with the identity as basepoint and
    the given norm upper bounds."""
    pts = list(pts)
    if G.identity not in ub:
        pts.append(G.identity)
    bounds = dict(ub)
    bounds[G.identity] = 0
    return GroupWindow(G, pts, inner_radius=0, outer_radius=max(bounds.values()),
                       norm_bounds=bounds)


def _pad_families(families, count):
    from .covers import Family

    out = list(families)
    while len(out) < count:
        out.append(Family([]))
    return out


def _in_c(G, typ, c):
    """Membership of a factor-``typ`` element in the edge subgroup."""
    return G.in_subgroup(G.embed(typ, c))


def _ball_search(F, t, member):
    """Smallest ``w`` (by norm, then shortlex) with ``t w`` a member."""
    radius = F.norm(t)
    best = None
    for w in F.ball_elements(radius):
        if member(F.mul(t, w)):
            key = (F.norm(w), F.order_key(w))
            if best is None or key < best[0]:
                best = (key, w)
    if best is None:
        raise InputError(f"no subgroup element within {radius} of {F.fmt(t)}")
    return best[0][0], best[1]
