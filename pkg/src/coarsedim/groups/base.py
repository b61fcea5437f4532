"""Common machinery for all group constructions.

Every construction exposes canonical normal forms as plain hashable Python
values (ints, tuples); two words represent the same element iff their
canonical values are equal.  ``GroupElement`` wraps a canonical value for
the public API, while the cover pipelines work on the raw values.
"""

from dataclasses import dataclass

from ..errors import InputError, ResourceError, WindowExhausted
from .words import format_word, inverse_word, parse_word

DEFAULT_CAP = 2_000_000


class Group:
    """Base class.  Subclasses implement ``identity``, ``_letter``, ``mul``,
    ``inv`` and ``word_of``; everything else is derived."""

    kind = "abstract"
    #: True when ``norm`` has a closed form and needs no BFS table
    exact_norm = False

    def __init__(self, labels):
        labels = list(labels)
        if len(set(labels)) != len(labels):
            raise InputError(f"duplicate generator labels in {labels}")
        for lab in labels:
            if not lab or "^" in lab or any(ch.isspace() for ch in lab):
                raise InputError(f"invalid generator label {lab!r}")
        self.labels = labels
        self.cap = DEFAULT_CAP
        self._layers = None
        self._norms = None
        self._letter_cache = {}
        self._word_cache = {}

    # -- required by subclasses -------------------------------------------
    identity = None

    def _letter(self, label, exp):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def word_of(self, x):
        """A word over the generators whose reduction is ``x``."""
        raise NotImplementedError

    def to_spec(self):
        raise NotImplementedError

    # -- derived ----------------------------------------------------------
    def generators(self):
        """The symmetric generating set as letters, in a fixed order."""
        return [(lab, e) for lab in self.labels for e in (1, -1)]

    def letter(self, label, exp=1):
        key = (label, exp)
        try:
            return self._letter_cache[key]
        except KeyError:
            pass
        if label not in self.labels:
            raise InputError(f"unknown generator {label!r} for {self.kind} group")
        val = self._letter(label, exp)
        self._letter_cache[key] = val
        return val

    def mul_letter(self, x, letter):
        return self.mul(x, self.letter(*letter))

    def reduce(self, word):
        x = self.identity
        for letter in word:
            x = self.mul_letter(x, letter)
        return x

    def parse(self, text):
        return self.reduce(parse_word(text, self.labels))

    def fmt(self, x):
        try:
            return self._word_cache[x]
        except KeyError:
            s = format_word(self.word_of(x))
            self._word_cache[x] = s
            return s

    def order_key(self, x):
        """Deterministic total order: shortlex on the canonical word text."""
        s = self.fmt(x)
        return (len(self.word_of(x)), s)

    def power(self, x, k):
        base = x if k >= 0 else self.inv(x)
        out = self.identity
        for _ in range(abs(k)):
            out = self.mul(out, base)
        return out

    def conj_inv_mul(self, x, y):
        """x^-1 y."""
        return self.mul(self.inv(x), y)

    def dist(self, x, y):
        return self.norm(self.conj_inv_mul(x, y))

    def element(self, value):
        return GroupElement(self, value)

    # -- word-metric BFS table -------------------------------------------
    def _ensure_table(self):
        if self._layers is None:
            self._layers = [[self.identity]]
            self._norms = {self.identity: 0}

    def extend_table(self, radius, cap=None):
        """Grow the BFS table to ``radius``; finite groups may stop early."""
        cap = self.cap if cap is None else cap
        self._ensure_table()
        gens = self.generators()
        while len(self._layers) <= radius:
            frontier = self._layers[-1]
            if not frontier:
                break
            new = []
            r = len(self._layers)
            for x in frontier:
                for g in gens:
                    y = self.mul_letter(x, g)
                    if y not in self._norms:
                        self._norms[y] = r
                        new.append(y)
                if len(self._norms) > cap:
                    growth = [len(layer) for layer in self._layers] + [len(new)]
                    raise ResourceError(
                        f"ball enumeration exceeded cap {cap} at radius {r}",
                        stage="ball",
                        growth=growth,
                    )
            self._layers.append(new)
        return self._layers

    def table_radius(self):
        self._ensure_table()
        if not self._layers[-1]:
            return float("inf")
        return len(self._layers) - 1

    def ball_elements(self, radius, cap=None):
        layers = self.extend_table(radius, cap)
        out = []
        for layer in layers[: radius + 1]:
            out.extend(layer)
        return out

    def sphere_sizes(self, radius, cap=None):
        layers = self.extend_table(radius, cap)
        sizes = [len(layer) for layer in layers[: radius + 1]]
        return sizes + [0] * (radius + 1 - len(sizes))

    def norm(self, x):
        """Word norm; BFS-table lookup unless the subclass has a closed form."""
        self._ensure_table()
        n = self._norms.get(x)
        if n is not None:
            return n
        while self._layers[-1]:
            r = len(self._layers)
            try:
                self.extend_table(r)
            except ResourceError as exc:
                raise WindowExhausted(
                    f"norm of {self.fmt(x)} exceeds the enumerable radius {r - 1}",
                    stage="norm",
                ) from exc
            n = self._norms.get(x)
            if n is not None:
                return n
        raise InputError(f"{x!r} is not an element of this group")

    def norm_if_known(self, x, radius):
        """Norm when it is at most ``radius``, else ``None`` (no extra search)."""
        if self.exact_norm:
            n = self.norm(x)
            return n if n <= radius else None
        self.extend_table(radius)
        n = self._norms.get(x)
        return n if n is not None and n <= radius else None

    def __repr__(self):
        return f"<{self.kind} group on {self.labels}>"


@dataclass(frozen=True)
class GroupElement:
    group: Group
    canonical: object

    def __mul__(self, other):
        if other.group is not self.group:
            raise InputError("cannot multiply elements of different groups")
        return GroupElement(self.group, self.group.mul(self.canonical, other.canonical))

    def inverse(self):
        return GroupElement(self.group, self.group.inv(self.canonical))

    def __invert__(self):
        return self.inverse()

    def norm(self):
        return self.group.norm(self.canonical)

    def word(self):
        return self.group.word_of(self.canonical)

    def is_identity(self):
        return self.canonical == self.group.identity

    def __str__(self):
        return self.group.fmt(self.canonical)

    def __repr__(self):
        return f"GroupElement({self})"


def multiply(g, h):
    return g * h


def invert(g):
    return g.inverse()


def reduce_word(group, word):
    """Reduce a word (tuple of letters or text) to a ``GroupElement``."""
    if isinstance(word, str):
        word = parse_word(word, group.labels)
    return GroupElement(group, group.reduce(word))


__all__ = [
    "Group",
    "GroupElement",
    "multiply",
    "invert",
    "reduce_word",
    "inverse_word",
]
