"""Uniform cover providers for the factors of a product.

A provider colors the elements of one factor at a given scale; points of a
translated copy with equal labels form one set.  Left translation is an
isometry, so one provider serves every coset of its factor.
"""

from .covers import UniformCoverProvider
from .errors import SpecError
from .groups import CyclicGroup, FiniteGroup, FreeAbelianGroup


class FiniteProvider(UniformCoverProvider):
    """Bounded factors: asdim 0 with one set per copy."""

    n = 0

    def __init__(self, group):
        self.group = group
        self._diam = max(group.norm(g) for g in range(group.order))

    def label(self, element, d):
        return 0, 0

    def bound(self, d):
        # d(x a, x b) = |a^-1 b|, so a copy's diameter is the largest norm
        return self._diam

    def declared_R(self, d):
        return max(self._diam, d)


class IntervalProvider(UniformCoverProvider):
    """Rank one free abelian factor: blocks of ``d`` consecutive powers,
    alternately colored; same-colored blocks are ``d + 1`` apart."""

    n = 1

    def __init__(self, group):
        self.group = group

    def label(self, element, d):
        k = element[0]
        block = k // d
        return block % 2, block

    def bound(self, d):
        return d - 1

    def declared_R(self, d):
        return max(self.bound(d), d)


class SingleColorProvider(UniformCoverProvider):
    """One set per copy; uniformly bounded only for finite factors.  Used
    as an explicit opt-in for testing degenerate cases."""

    n = 0

    def __init__(self, bound):
        self._bound = bound

    def label(self, element, d):
        return 0, 0

    def bound(self, d):
        return self._bound

    def declared_R(self, d):
        return max(self._bound, d)


def provider_for(group):
    if isinstance(group, (CyclicGroup, FiniteGroup)):
        return FiniteProvider(group)
    if isinstance(group, FreeAbelianGroup) and len(group.labels) == 1:
        return IntervalProvider(group)
    raise SpecError(f"no uniform cover provider for a {group.kind} factor", stage="providers")
