"""Leaf constructions: finite tables, free abelian, free, right-angled Coxeter."""

from itertools import product as _product

from ..errors import InputError, SpecError
from .base import Group
from .words import inverse_word


class FiniteGroup(Group):
    """A finite group given by its multiplication table.

    Elements are table indices.  ``gens`` maps each label to an index.
    """

    kind = "finite"

    def __init__(self, table, gens):
        if not isinstance(gens, dict):
            gens = {lab: v for lab, v in gens}
        super().__init__(list(gens))
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise SpecError("finite table must be square and nonempty")
        for row in table:
            for v in row:
                if not (0 <= v < n):
                    raise SpecError(f"table entry {v} out of range")
        self.table = [list(row) for row in table]
        ident = [i for i in range(n) if all(self.table[i][j] == j for j in range(n))]
        if len(ident) != 1 or any(self.table[j][ident[0]] != j for j in range(n)):
            raise SpecError("table has no two-sided identity")
        self.identity = ident[0]
        self._inv = {}
        for i in range(n):
            inv = [j for j in range(n) if self.table[i][j] == self.identity]
            if len(inv) != 1 or self.table[inv[0]][i] != self.identity:
                raise SpecError(f"element {i} has no unique inverse")
            self._inv[i] = inv[0]
        if n <= 64:
            for a, b, c in _product(range(n), repeat=3):
                t = self.table
                if t[t[a][b]][c] != t[a][t[b][c]]:
                    raise SpecError(f"table not associative at {(a, b, c)}")
        self.gen_values = dict(gens)
        for lab, v in self.gen_values.items():
            if not (0 <= v < n):
                raise SpecError(f"generator {lab} maps outside the table")
        self.order = n
        self._pred = None
        self._table_input = table

    def _letter(self, label, exp):
        v = self.gen_values[label]
        return v if exp == 1 else self._inv[v]

    def mul(self, x, y):
        return self.table[x][y]

    def inv(self, x):
        return self._inv[x]

    def _predecessors(self):
        if self._pred is None:
            pred = {self.identity: None}
            frontier = [self.identity]
            while frontier:
                nxt = []
                for x in frontier:
                    for g in self.generators():
                        y = self.mul_letter(x, g)
                        if y not in pred:
                            pred[y] = (x, g)
                            nxt.append(y)
                frontier = nxt
            if len(pred) != self.order:
                raise SpecError("generators do not generate the finite group")
            self._pred = pred
        return self._pred

    def word_of(self, x):
        pred = self._predecessors()
        word = []
        while pred[x] is not None:
            x, g = pred[x]
            word.append(g)
        return tuple(reversed(word))

    def to_spec(self):
        # label order fixes the BFS order behind word_of, so keep it as a list
        gens = [[lab, self.gen_values[lab]] for lab in self.labels]
        return {"kind": "finite", "table": self.table, "generators": gens}


class CyclicGroup(FiniteGroup):
    """Z/n with a single generator."""

    kind = "cyclic"

    def __init__(self, order, label="s"):
        if order < 1:
            raise SpecError("cyclic order must be positive")
        table = [[(i + j) % order for j in range(order)] for i in range(order)]
        super().__init__(table, {label: 1 % order})
        self.n = order

    def norm(self, x):
        return min(x, self.n - x)

    def power(self, x, k):
        return (x * k) % self.n

    exact_norm = True

    def word_of(self, x):
        lab = self.labels[0]
        if x <= self.n - x:
            return ((lab, 1),) * x
        return ((lab, -1),) * (self.n - x)

    def to_spec(self):
        return {"kind": "cyclic", "order": self.n, "generators": list(self.labels)}


class FreeAbelianGroup(Group):
    """Z^k with the standard basis; elements are exponent vectors."""

    kind = "free_abelian"
    exact_norm = True

    def __init__(self, labels):
        super().__init__(labels)
        self.rank = len(self.labels)
        self.identity = (0,) * self.rank
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    def _letter(self, label, exp):
        v = [0] * self.rank
        v[self._index[label]] = exp
        return tuple(v)

    def mul(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def inv(self, x):
        return tuple(-a for a in x)

    def norm(self, x):
        return sum(abs(a) for a in x)

    def power(self, x, k):
        return tuple(a * k for a in x)

    def word_of(self, x):
        word = []
        for lab, k in zip(self.labels, x):
            word.extend([(lab, 1 if k > 0 else -1)] * abs(k))
        return tuple(word)

    def to_spec(self):
        return {"kind": "free_abelian", "generators": list(self.labels)}


class FreeGroup(Group):
    """Free group; elements are freely reduced words."""

    kind = "free"
    exact_norm = True

    def __init__(self, labels):
        super().__init__(labels)
        self.identity = ()

    def _letter(self, label, exp):
        return ((label, exp),)

    def mul_letter(self, x, letter):
        if x and x[-1][0] == letter[0] and x[-1][1] == -letter[1]:
            return x[:-1]
        return x + (letter,)

    def mul(self, x, y):
        i = 0
        n = min(len(x), len(y))
        while i < n and x[-1 - i][0] == y[i][0] and x[-1 - i][1] == -y[i][1]:
            i += 1
        return x[: len(x) - i] + y[i:]

    def inv(self, x):
        return inverse_word(x)

    def norm(self, x):
        return len(x)

    def word_of(self, x):
        return x

    def order_key(self, x):
        return (len(x), self.fmt(x))

    def to_spec(self):
        return {"kind": "free", "generators": list(self.labels)}


class RACG(Group):
    """Right-angled Coxeter group of a graph.

    ``s^2 = 1`` for every vertex and ``(st)^2 = 1`` for every edge.  Elements
    are shortlex-least reduced words (vertex order = ``vertices`` order),
    computed by commuting swaps and ``ss`` deletion.
    """

    kind = "racg"
    exact_norm = True

    def __init__(self, vertices, edges):
        super().__init__(vertices)
        self.identity = ()
        self._rank = {v: i for i, v in enumerate(self.labels)}
        self.edges = set()
        for e in edges:
            if len(e) != 2:
                raise InputError(f"edge {e!r} must have two endpoints")
            s, t = e
            if s not in self._rank or t not in self._rank:
                raise InputError(f"edge {e!r} uses an unknown vertex")
            if s == t:
                raise InputError(f"edge {e!r} is a loop; the graph must be irreflexive")
            self.edges.add(frozenset((s, t)))

    def commute(self, s, t):
        return s == t or frozenset((s, t)) in self.edges

    def _letter(self, label, exp):
        return (label,)

    def _normalize(self, word):
        rest = list(word)
        out = []
        while rest:
            best = None
            seen = set()
            for i, s in enumerate(rest):
                if s in seen:
                    continue
                seen.add(s)
                if all(self.commute(s, t) and t != s for t in rest[:i]):
                    if best is None or self._rank[s] < self._rank[rest[best]]:
                        best = i
            out.append(rest.pop(best))
        return tuple(out)

    def mul_letter(self, x, letter):
        s = letter[0]
        for i in range(len(x) - 1, -1, -1):
            if x[i] == s:
                return self._normalize(x[:i] + x[i + 1:])
            if not self.commute(s, x[i]):
                break
        return self._normalize(x + (s,))

    def mul(self, x, y):
        for s in y:
            x = self.mul_letter(x, (s, 1))
        return x

    def inv(self, x):
        return self._normalize(tuple(reversed(x)))

    def norm(self, x):
        return len(x)

    def word_of(self, x):
        return tuple((s, 1) for s in x)

    def to_spec(self):
        edges = sorted(sorted(e, key=self._rank.get) for e in self.edges)
        return {"kind": "racg", "graph": {"vertices": list(self.labels), "edges": edges}}


def racg_from_graph(vertices, edges):
    """Right-angled Coxeter group whose commuting pairs are ``edges``.

    Edges are unordered; listing both orientations is allowed.  Loops and
    unknown vertices are rejected.
    """
    return RACG(list(vertices), [tuple(e) for e in edges])
