"""Free products and amalgamated products.

Amalgam elements are ``(c, letters)``: ``c`` is an element of the common
subgroup C written in factor 0, and ``letters`` is an alternating tuple of
``(factor index, rep)`` with ``rep`` a nontrivial right-coset
representative of ``C`` in that factor.  The element is
``c * rep_1 * ... * rep_k`` (C on the left, right cosets ``C x_i``).

Free-product elements drop the (always trivial) head and are just the
alternating letter tuple.
"""

from ..errors import InputError, SpecError
from .base import Group
from .subgroups import check_isomorphism, evaluate_in, make_splitter
from .words import format_word, parse_word


class AmalgamatedProduct(Group):
    kind = "amalgam"

    def __init__(self, factors, subgroup_gens=None, check_radius=6):
        factors = list(factors)
        if len(factors) < 2:
            raise SpecError("an amalgam needs at least two factors")
        labels = [lab for f in factors for lab in f.labels]
        super().__init__(labels)
        self.factors = factors
        self._labmap = {}
        for i, f in enumerate(factors):
            for lab in f.labels:
                self._labmap[lab] = i
        subgroup_gens = subgroup_gens or [[] for _ in factors]
        if len(subgroup_gens) != len(factors):
            raise SpecError("one subgroup generator list per factor is required")
        self.subgroup_words = [
            [parse_word(w, f.labels) if isinstance(w, str) else tuple(w) for w in ws]
            for f, ws in zip(factors, subgroup_gens)
        ]
        self.cgens = [
            [f.reduce(w) for w in ws] for f, ws in zip(factors, self.subgroup_words)
        ]
        ngens = {len(g) for g in self.cgens}
        if len(ngens) != 1:
            raise SpecError("subgroup generator lists must have equal length")
        self.splitters = [make_splitter(f, gens) for f, gens in zip(factors, self.cgens)]
        for j in range(1, len(factors)):
            check_isomorphism(factors[0], self.cgens[0], factors[j], self.cgens[j], check_radius)
        self.identity = self._pack((factors[0].identity, ()))
        self._transfer_cache = {}
        self._eval_cache = {}
        self._push_cache = {}

    # internal representation is always (c, letters)
    def _pack(self, x):
        return x

    def _unpack(self, x):
        return x

    def subgroup_trivial(self):
        return all(v == f.identity for f, gens in zip(self.factors, self.cgens) for v in gens)

    def _c_in(self, i, c):
        """Transfer a C-element from factor 0 to factor i."""
        if i == 0:
            return c
        key = (i, c)
        hit = self._transfer_cache.get(key)
        if hit is None:
            cw, rep = self.splitters[0].split(c)
            if rep != self.factors[0].identity:
                raise SpecError("transversal oracle inconsistency: head not in C")
            hit = evaluate_in(self.factors[i], cw, self.cgens[i])
            self._transfer_cache[key] = hit
        return hit

    def _mul_factor_raw(self, x, i, g):
        c, letters = x
        F = self.factors[i]
        if not letters:
            h = F.mul(self._c_in(i, c), g)
            cw, t = self.splitters[i].split(h)
            c = self._eval(0, cw)
            return (c, ((i, t),) if t != F.identity else ())
        if letters[-1][0] == i:
            h = F.mul(letters[-1][1], g)
            rest = letters[:-1]
        else:
            h = g
            rest = letters
        cw, t = self.splitters[i].split(h)
        tail = ((i, t),) if t != F.identity else ()
        if not cw:
            return (c, rest + tail)
        pushed = []
        k = len(rest)
        while k > 0 and cw:
            j, s = rest[k - 1]
            cw, s2 = self._push(j, s, cw)
            pushed.append((j, s2))
            k -= 1
        if cw:
            c = self.factors[0].mul(c, self._eval(0, cw))
        return (c, rest[:k] + tuple(reversed(pushed)) + tail)

    def _eval(self, i, cw):
        key = (i, cw)
        hit = self._eval_cache.get(key)
        if hit is None:
            hit = self._eval_cache[key] = evaluate_in(self.factors[i], cw, self.cgens[i])
        return hit

    def _push(self, j, s, cw):
        """Move the C-word ``cw`` left past the coset rep ``s`` of factor ``j``."""
        key = (j, s, cw)
        hit = self._push_cache.get(key)
        if hit is None:
            Fj = self.factors[j]
            cw2, s2 = self.splitters[j].split(Fj.mul(s, self._eval(j, cw)))
            if s2 == Fj.identity:
                raise SpecError("transversal oracle inconsistency: coset rep absorbed into C")
            hit = self._push_cache[key] = (cw2, s2)
        return hit

    def _mul_raw(self, x, y):
        c, letters = y
        x = self._mul_factor_raw(x, 0, c)
        for i, t in letters:
            x = self._mul_factor_raw(x, i, t)
        return x

    def _inv_raw(self, x):
        c, letters = x
        out = (self.factors[0].identity, ())
        for i, t in reversed(letters):
            out = self._mul_factor_raw(out, i, self.factors[i].inv(t))
        return self._mul_factor_raw(out, 0, self.factors[0].inv(c))

    def _lmul_factor_raw(self, i, g, x):
        """``g x`` for ``g`` in factor ``i``; only the first letter can change."""
        c, letters = x
        F = self.factors[i]
        h = F.mul(g, self._c_in(i, c))
        rest = letters
        if letters and letters[0][0] == i:
            h = F.mul(h, letters[0][1])
            rest = letters[1:]
        cw, t = self.splitters[i].split(h)
        c = self._eval(0, cw)
        return (c, rest) if t == F.identity else (c, ((i, t),) + rest)

    def conj_inv_mul(self, x, y):
        # peel the letters of x off the left of y, so shared prefixes cancel cheaply
        c, letters = self._unpack(x)
        cy, ly = self._unpack(y)
        F0 = self.factors[0]
        z = (F0.mul(F0.inv(c), cy), ly)
        for i, t in letters:
            z = self._lmul_factor_raw(i, self.factors[i].inv(t), z)
        return self._pack(z)

    # -- Group interface -------------------------------------------------
    def _letter(self, label, exp):
        i = self._labmap[label]
        g = self.factors[i].letter(label, exp)
        return self._pack(self._mul_factor_raw((self.factors[0].identity, ()), i, g))

    def mul_letter(self, x, letter):
        label, exp = letter
        i = self._labmap.get(label)
        if i is None:
            raise InputError(f"unknown generator {label!r}")
        g = self.factors[i].letter(label, exp)
        return self._pack(self._mul_factor_raw(self._unpack(x), i, g))

    def mul(self, x, y):
        return self._pack(self._mul_raw(self._unpack(x), self._unpack(y)))

    def inv(self, x):
        return self._pack(self._inv_raw(self._unpack(x)))

    def word_of(self, x):
        c, letters = self._unpack(x)
        word = list(self.factors[0].word_of(c))
        for i, t in letters:
            word.extend(self.factors[i].word_of(t))
        return tuple(word)

    # -- structure used by trees and pipelines ----------------------------
    def letters(self, x):
        return self._unpack(x)[1]

    def head(self, x):
        return self._unpack(x)[0]

    def length(self, x):
        """Length l(x) of the normal presentation."""
        return len(self._unpack(x)[1])

    def from_letters(self, letters):
        return self._pack((self.factors[0].identity, tuple(letters)))

    def embed(self, i, g):
        """Image of the factor-i element ``g``."""
        return self._pack(self._mul_factor_raw((self.factors[0].identity, ()), i, g))

    def factor_part(self, x, i):
        """``x`` as an element of factor i, or ``None`` if it is not in A_i."""
        c, letters = self._unpack(x)
        if not letters:
            return self._c_in(i, c)
        if len(letters) == 1 and letters[0][0] == i:
            return self.factors[i].mul(self._c_in(i, c), letters[0][1])
        return None

    def in_subgroup(self, x):
        return not self._unpack(x)[1]

    def to_spec(self):
        spec = {"kind": "amalgam", "factors": [f.to_spec() for f in self.factors]}
        words = [[format_word(w) for w in ws] for ws in self.subgroup_words]
        if len(self.factors) == 2:
            spec["subgroup"] = {"gens_in_A": list(words[0]), "gens_in_B": list(words[1])}
        else:
            spec["subgroup"] = {"gens_in": [list(w) for w in words]}
        return spec


class FreeProduct(AmalgamatedProduct):
    """Free product; elements are alternating tuples ``((i, g_i), ...)``
    of nontrivial factor normal forms."""

    kind = "free_product"
    exact_norm = True

    def __init__(self, factors):
        super().__init__(factors, None)

    def _pack(self, x):
        return x[1]

    def _unpack(self, x):
        return (self.factors[0].identity, x)

    def norm(self, x):
        return sum(self.factors[i].norm(g) for i, g in x)

    # fast paths: no edge subgroup, so letters only merge at the seam
    def mul(self, x, y):
        if not x:
            return y
        if not y:
            return x
        k = 0
        while k < len(x) and k < len(y):
            (i, a), (j, b) = x[-1 - k], y[k]
            if i != j:
                break
            F = self.factors[i]
            h = F.mul(a, b)
            if h != F.identity:
                return x[:len(x) - 1 - k] + ((i, h),) + y[k + 1:]
            k += 1
        return x[:len(x) - k] + y[k:]

    def inv(self, x):
        return tuple((i, self.factors[i].inv(g)) for i, g in reversed(x))

    def dist(self, x, y):
        k = 0
        while k < len(x) and k < len(y) and x[k] == y[k]:
            k += 1
        rx, ry = x[k:], y[k:]
        if rx and ry and rx[0][0] == ry[0][0]:
            i = rx[0][0]
            F = self.factors[i]
            head = F.dist(rx[0][1], ry[0][1])
            return head + self.norm(rx[1:]) + self.norm(ry[1:])
        return self.norm(rx) + self.norm(ry)

    def to_spec(self):
        return {"kind": "free_product", "factors": [f.to_spec() for f in self.factors]}


def free_product_norm(group, x):
    """Sum of factor norms over the reduced presentation."""
    return sum(group.factors[i].norm(g) for i, g in group.letters(x))
