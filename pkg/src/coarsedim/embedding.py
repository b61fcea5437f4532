"""Coarse embedding witnesses for maps out of free and amalgamated products.

A homomorphism that is isometric on every factor is 1-Lipschitz and, on a
window, has a computable lower control ``rho``.  Each hypothesis is checked
on the window rather than assumed.
"""

import random

from .errors import HypothesisFailure, InputError
from .groups import AmalgamatedProduct
from .metric import CoarseWitness, GroupWindow, coarse_uniform_witness, group_ball


class ProductMap:
    """``psi`` defined on generators by words in the target group."""

    def __init__(self, source, target, images):
        self.source, self.target = source, target
        self._gen = {}
        for lab in source.labels:
            if lab not in images:
                raise InputError(f"no image for generator {lab!r}")
            w = images[lab]
            img = target.parse(w) if isinstance(w, str) else w
            self._gen[(lab, 1)] = img
            self._gen[(lab, -1)] = target.inv(img)
        self._cache = {}

    def __call__(self, x):
        hit = self._cache.get(x)
        if hit is not None:
            return hit
        T = self.target
        out = T.identity
        for letter in self.source.word_of(x):
            out = T.mul(out, self._gen[letter])
        self._cache[x] = out
        return out


def embedding_witness(source, target, images, radius, factor_radius=None, samples=400, seed=0):
    """Check ``psi`` on the radius-``radius`` ball of ``source`` and return
    its :class:`CoarseWitness` (``lipschitz_lambda`` is the adjacent-pair
    value, exact for word metrics)."""
    if not isinstance(source, AmalgamatedProduct):
        raise InputError("embedding witness needs a free or amalgamated product source")
    psi = images if callable(images) else ProductMap(source, target, images)
    T = target
    fr = radius if factor_radius is None else factor_radius
    # homomorphism and isometry on every factor
    for i, F in enumerate(source.factors):
        ball = F.ball_elements(fr)
        img = {a: psi(source.embed(i, a)) for a in ball}
        for a in ball:
            if T.norm(img[a]) != F.norm(a):
                raise InputError(
                    f"psi is not isometric on factor {i}: |{F.fmt(a)}| = {F.norm(a)} but its "
                    f"image has norm {T.norm(img[a])}", stage="embedding:factor-isometry",
                    witness=(i, F.fmt(a)))
        small = [a for a in ball if F.norm(a) <= fr // 2]
        for a in small:
            for b in small:
                if psi(source.embed(i, F.mul(a, b))) != T.mul(img[a], img[b]):
                    raise InputError("psi does not respect factor multiplication",
                                     stage="embedding:homomorphism",
                                     witness=(i, F.fmt(a), F.fmt(b)))
    swin = group_ball(source, radius)
    pts = swin.points
    rng = random.Random(seed)
    for _ in range(samples):
        x, y = rng.choice(pts), rng.choice(pts)
        if psi(source.mul(x, y)) != T.mul(psi(x), psi(y)):
            raise InputError("psi is not multiplicative on the window",
                             stage="embedding:homomorphism",
                             witness=(source.fmt(x), source.fmt(y)))
    # 1-Lipschitz: neighbours map within distance one
    lam = 0
    for x in pts:
        for s in source.generators():
            y = source.mul_letter(x, s)
            lam = max(lam, T.dist(psi(x), psi(y)))
    if lam > 1:
        raise HypothesisFailure(f"psi is {lam}-Lipschitz, not 1-Lipschitz",
                                stage="embedding:lipschitz")
    twin = GroupWindow(T, {psi(x) for x in pts})
    w = coarse_uniform_witness(psi, swin, twin)
    return CoarseWitness(lipschitz_lambda=lam, adjacent_lambda=lam, xi_table=w.xi_table,
                         xi_bar_table=w.xi_bar_table, rho_table=w.rho_table)
