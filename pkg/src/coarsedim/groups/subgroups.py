"""Right-coset splitting oracles for subgroups.

A splitter for a subgroup ``C = <c_1, ..., c_k>`` of a group ``X`` writes any
``g`` as ``c * rep`` where ``rep`` is a fixed transversal representative of
the right coset ``C g`` and ``c`` is returned as a word over the subgroup
generator indices (letters ``(i, power)``).  The representative of ``C``
itself is always the identity.

Only subgroups with decidable membership are supported: anything inside a
finite group, sublattices of Z, and the trivial subgroup.
"""

from functools import reduce as _fold
from math import gcd

from ..errors import SpecError
from .simple import FiniteGroup, FreeAbelianGroup


class Splitter:
    def __init__(self, group, gen_values):
        self.group = group
        self.gen_values = list(gen_values)
        self._eval_cache = {}

    def split(self, g):
        raise NotImplementedError

    def rep(self, g):
        return self.split(g)[1]

    def member(self, g):
        return self.split(g)[1] == self.group.identity

    def evaluate(self, cword):
        return evaluate_in(self.group, cword, self.gen_values)

    def index(self):
        """Number of right cosets, or ``None`` when infinite."""
        return None


def evaluate_in(group, cword, images):
    """Evaluate a subgroup word; letters are ``(generator index, power)``."""
    x = group.identity
    for i, n in cword:
        x = group.mul(x, group.power(images[i], n))
    return x


class TrivialSplitter(Splitter):
    def split(self, g):
        return (), g

    def index(self):
        order = getattr(self.group, "order", None)
        return order


class FiniteSplitter(Splitter):
    def __init__(self, group, gen_values):
        super().__init__(group, gen_values)
        G = group
        words = {G.identity: ()}
        frontier = [G.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for i, v in enumerate(self.gen_values):
                    for e, val in ((1, v), (-1, G.inv(v))):
                        y = G.mul(x, val)
                        if y not in words:
                            words[y] = words[x] + ((i, e),)
                            nxt.append(y)
            frontier = nxt
        self.members = words
        self._reps = {}
        for g in range(G.order):
            if g in self._reps:
                continue
            coset = [G.mul(c, g) for c in words]
            rep = G.identity if G.identity in coset else min(coset)
            for h in coset:
                self._reps[h] = rep

    def split(self, g):
        rep = self._reps[g]
        c = self.group.mul(g, self.group.inv(rep))
        return self.members[c], rep

    def index(self):
        return self.group.order // len(self.members)


class LatticeSplitter(Splitter):
    """Subgroup m*Z of Z (rank-one free abelian group)."""

    def __init__(self, group, gen_values):
        super().__init__(group, gen_values)
        exps = [v[0] for v in self.gen_values]
        self.m = _fold(gcd, (abs(e) for e in exps), 0)
        self.coefs = _bezout(exps)

    def split(self, g):
        k = g[0]
        if self.m == 0:
            return (), g
        r = k % self.m
        q = (k - r) // self.m
        word = tuple((i, coef * q) for i, coef in enumerate(self.coefs) if coef * q)
        return word, (r,)

    def index(self):
        return self.m if self.m else None


def _bezout(values):
    """Integer coefficients with sum(coef * v) == gcd(values)."""
    coefs = [0] * len(values)
    g = 0
    for i, v in enumerate(values):
        if v == 0:
            continue
        if g == 0:
            g = abs(v)
            coefs[i] = 1 if v > 0 else -1
            continue
        # extended Euclid on (g, v)
        old_r, r = g, v
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coefs = [c * old_s for c in coefs]
        coefs[i] = old_t
        g = old_r
    return coefs


def make_splitter(group, gen_values):
    gen_values = list(gen_values)
    if all(v == group.identity for v in gen_values):
        return TrivialSplitter(group, gen_values)
    if isinstance(group, FiniteGroup):
        return FiniteSplitter(group, gen_values)
    if isinstance(group, FreeAbelianGroup) and group.rank == 1:
        return LatticeSplitter(group, gen_values)
    raise SpecError(
        f"no membership/transversal oracle for subgroups of a {group.kind} group "
        "(supported: finite groups, Z, trivial subgroups)"
    )


def check_isomorphism(src, src_gens, dst, dst_gens, radius=6):
    """Check on a window that ``src_gens[i] -> dst_gens[i]`` extends to an
    injective homomorphism of the generated subgroups.

    Returns the explored map; raises ``SpecError`` on an inconsistency.
    """
    if len(src_gens) != len(dst_gens):
        raise SpecError("subgroup generator lists differ in length")
    image = {src.identity: dst.identity}
    back = {dst.identity: src.identity}
    frontier = [src.identity]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            fx = image[x]
            for i in range(len(src_gens)):
                for e in (1, -1):
                    sv = src_gens[i] if e == 1 else src.inv(src_gens[i])
                    dv = dst_gens[i] if e == 1 else dst.inv(dst_gens[i])
                    y, fy = src.mul(x, sv), dst.mul(fx, dv)
                    if y in image:
                        if image[y] != fy:
                            raise SpecError(
                                f"subgroup map is not well defined at {src.fmt(y)}"
                            )
                        continue
                    if fy in back:
                        raise SpecError(
                            f"subgroup map is not injective: {src.fmt(y)} and "
                            f"{src.fmt(back[fy])} share an image"
                        )
                    image[y] = fy
                    back[fy] = y
                    nxt.append(y)
        frontier = nxt
        if not frontier:
            break
    return image
