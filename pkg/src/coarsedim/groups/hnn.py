"""HNN extensions ``<G, y | y a y^-1 = phi(a), a in A>``.

Elements are ``(g0, ((eps_1, t_1), ..., (eps_n, t_n)))`` standing for
``g0 y^eps_1 t_1 ... y^eps_n t_n``.  Each ``t_i`` is a fixed right-coset
representative: of ``A t_i`` when ``eps_i = 1`` and of ``phi(A) t_i`` when
``eps_i = -1``.  Subgroup parts are pushed leftwards with
``y a = phi(a) y`` and ``y^-1 phi(a) = a y^-1``, so the form is Britton
reduced and unique.
"""

from ..errors import InputError, SpecError
from .base import Group
from .subgroups import check_isomorphism, evaluate_in, make_splitter
from .words import format_word, parse_word


def _as_word(w, group):
    return parse_word(w, group.labels) if isinstance(w, str) else tuple(w)


class HNNExtension(Group):
    kind = "hnn"

    def __init__(self, base, a_words, phi_words, stable="y", check_radius=6):
        if stable in base.labels:
            raise SpecError(f"stable letter {stable!r} clashes with a base generator")
        super().__init__(list(base.labels) + [stable])
        self.base = base
        self.stable = stable
        self.a_words = [_as_word(w, base) for w in a_words]
        self.phi_words = [_as_word(w, base) for w in phi_words]
        if len(self.a_words) != len(self.phi_words):
            raise SpecError("phi needs one image per subgroup generator")
        self.a_gens = [base.reduce(w) for w in self.a_words]
        self.phi_gens = [base.reduce(w) for w in self.phi_words]
        check_isomorphism(base, self.a_gens, base, self.phi_gens, check_radius)
        self.split_a = make_splitter(base, self.a_gens)
        self.split_phi = make_splitter(base, self.phi_gens)
        self.identity = (base.identity, ())

    def is_degenerate(self):
        """True when both A and phi(A) are all of G (every y pinches through)."""
        return self.split_a.index() == 1 and self.split_phi.index() == 1

    def _push(self, g0, pairs, h):
        """Canonicalize ``g0 y.. t.. * h`` where ``h`` sits in the last slot."""
        G = self.base
        pairs = list(pairs)
        k = len(pairs)
        carry = h
        while k > 0:
            eps, t = pairs[k - 1]
            prod = G.mul(t, carry) if carry is not None else t
            if eps == 1:
                cw, t2 = self.split_a.split(prod)
                carry = evaluate_in(G, cw, self.phi_gens) if cw else None
            else:
                cw, t2 = self.split_phi.split(prod)
                carry = evaluate_in(G, cw, self.a_gens) if cw else None
            pairs[k - 1] = (eps, t2)
            k -= 1
            if carry is None:
                break
        if carry is not None and k == 0:
            g0 = G.mul(g0, carry)
        return (g0, tuple(pairs))

    def _mul_base(self, x, g):
        g0, pairs = x
        if not pairs:
            return (self.base.mul(g0, g), ())
        return self._push(g0, pairs, g)

    def _mul_stable(self, x, eps):
        g0, pairs = x
        if pairs and pairs[-1][0] == -eps and pairs[-1][1] == self.base.identity:
            return (g0, pairs[:-1])
        return (g0, pairs + ((eps, self.base.identity),))

    def _letter(self, label, exp):
        return self.mul_letter(self.identity, (label, exp))

    def mul_letter(self, x, letter):
        label, exp = letter
        if label == self.stable:
            return self._mul_stable(x, exp)
        if label not in self.base.labels:
            raise InputError(f"unknown generator {label!r}")
        return self._mul_base(x, self.base.letter(label, exp))

    def mul(self, x, y):
        g0, pairs = y
        x = self._mul_base(x, g0)
        for eps, t in pairs:
            x = self._mul_stable(x, eps)
            x = self._mul_base(x, t)
        return x

    def inv(self, x):
        g0, pairs = x
        G = self.base
        out = self.identity
        for eps, t in reversed(pairs):
            out = self._mul_base(out, G.inv(t))
            out = self._mul_stable(out, -eps)
        return self._mul_base(out, G.inv(g0))

    def word_of(self, x):
        g0, pairs = x
        word = list(self.base.word_of(g0))
        for eps, t in pairs:
            word.append((self.stable, eps))
            word.extend(self.base.word_of(t))
        return tuple(word)

    # -- structure --------------------------------------------------------
    def length(self, x):
        return len(x[1])

    def epsilons(self, x):
        return tuple(eps for eps, _ in x[1])

    def embed(self, g):
        return (g, ())

    def from_pairs(self, pairs):
        return (self.base.identity, tuple(pairs))

    def in_base(self, x):
        return not x[1]

    def in_a(self, g):
        return self.split_a.member(g)

    def in_phi_a(self, g):
        return self.split_phi.member(g)

    def phi(self, g):
        """phi on an element of A (raises if ``g`` is not in A)."""
        cw, rep = self.split_a.split(g)
        if rep != self.base.identity:
            raise InputError(f"{self.base.fmt(g)} is not in A")
        return evaluate_in(self.base, cw, self.phi_gens)

    def phi_inverse(self, g):
        cw, rep = self.split_phi.split(g)
        if rep != self.base.identity:
            raise InputError(f"{self.base.fmt(g)} is not in phi(A)")
        return evaluate_in(self.base, cw, self.a_gens)

    def to_spec(self):
        return {
            "kind": "hnn",
            "base": self.base.to_spec(),
            "stable_letter": self.stable,
            "phi": {format_word(a): format_word(p) for a, p in zip(self.a_words, self.phi_words)},
        }


def is_britton_reduced(group, g0, syllables):
    """No ``y g y^-1`` with g in A and no ``y^-1 g y`` with g in phi(A)."""
    for k in range(len(syllables) - 1):
        e1, g = syllables[k]
        e2 = syllables[k + 1][0]
        if e1 == 1 and e2 == -1 and group.in_a(g):
            return False
        if e1 == -1 and e2 == 1 and group.in_phi_a(g):
            return False
    return True


def canonical_from_reduced(group, g0, syllables):
    """Canonical form of a Britton-reduced ``g0 y^e1 g1 ... y^en gn``.

    Walks right to left applying the uniqueness moves ``y a = phi(a) y`` and
    ``y^-1 phi(a) = a y^-1`` so that every ``g_i`` becomes a transversal rep.
    """
    G = group.base
    if not is_britton_reduced(group, g0, syllables):
        raise InputError("presentation is not Britton reduced")
    syl = [list(s) for s in syllables]
    carry = G.identity
    for k in range(len(syl) - 1, -1, -1):
        eps, g = syl[k]
        g = G.mul(g, carry)
        if eps == 1:
            cw, t = group.split_a.split(g)
            carry = evaluate_in(G, cw, group.phi_gens)
        else:
            cw, t = group.split_phi.split(g)
            carry = evaluate_in(G, cw, group.a_gens)
        syl[k][1] = t
    return (G.mul(g0, carry), tuple((e, t) for e, t in syl))


def hnn_equivalent_reduced(group, p, q):
    """Whether two Britton-reduced presentations ``(g0, ((eps, g), ...))``
    are related by the uniqueness moves, i.e. name the same element."""
    if len(p[1]) != len(q[1]):
        canonical_from_reduced(group, *p)
        canonical_from_reduced(group, *q)
        return False
    if tuple(e for e, _ in p[1]) != tuple(e for e, _ in q[1]):
        canonical_from_reduced(group, *p)
        canonical_from_reduced(group, *q)
        return False
    return canonical_from_reduced(group, *p) == canonical_from_reduced(group, *q)
