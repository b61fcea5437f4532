"""Brute-force reference implementations used by the tests.

Each oracle reduces a word by repeatedly applying local rewriting moves
until none applies, without touching the group's own multiplication code.
"""

import random
from itertools import permutations

from coarsedim.groups import (
    RACG,
    CyclicGroup,
    FiniteGroup,
    FreeAbelianGroup,
    FreeGroup,
    baumslag_solitar,
    trefoil,
    z2_star_z3,
)
from coarsedim.groups.hnn import canonical_from_reduced


def s3():
    perms = list(permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(p[q[k]] for k in range(3))] for q in perms] for p in perms]
    return FiniteGroup(table, {"r": idx[(1, 2, 0)], "f": idx[(1, 0, 2)]})


def pentagon():
    v = ["a", "b", "c", "d", "e"]
    return RACG(v, [(v[i], v[(i + 1) % 5]) for i in range(5)])


def all_kinds():
    return {
        "cyclic": CyclicGroup(5, "s"),
        "finite": s3(),
        "free_abelian": FreeAbelianGroup(["a", "b"]),
        "free": FreeGroup(["a", "b"]),
        "free_product": z2_star_z3(),
        "amalgam": trefoil(),
        "hnn": baumslag_solitar(),
        "racg": pentagon(),
    }


def random_word(group, rng, max_len=12):
    gens = group.generators()
    return tuple(rng.choice(gens) for _ in range(rng.randint(0, max_len)))


def free_cancel(word):
    """Delete adjacent ``x x^-1`` pairs until none is left."""
    w = list(word)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i][0] == w[i + 1][0] and w[i][1] == -w[i + 1][1]:
                del w[i:i + 2]
                changed = True
                break
    return tuple(w)


def abelian_exponents(labels, word):
    return tuple(sum(e for lab, e in word if lab == x) for x in labels)


def racg_closure_normal_form(group, word):
    """Shortlex-least word among all words reachable by commuting swaps and
    ``s s`` deletions."""
    rank = {v: i for i, v in enumerate(group.labels)}
    start = tuple(s for s, _ in word)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for w in frontier:
            for i in range(len(w) - 1):
                s, t = w[i], w[i + 1]
                if s == t:
                    cand = [w[:i] + w[i + 2:]]
                elif group.commute(s, t):
                    cand = [w[:i] + (t, s) + w[i + 2:]]
                else:
                    cand = []
                for c in cand:
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
        frontier = nxt
    return min(seen, key=lambda w: (len(w), [rank[s] for s in w]))


def product_syllables(group, word):
    """Reduced presentation of an amalgam word as ``(c, syllables)``.

    Moves: merge adjacent syllables of one factor; a syllable lying in the
    common subgroup is carried into a neighbouring syllable (or becomes the
    head when it is alone).
    """
    from coarsedim.groups.subgroups import evaluate_in

    def transfer(i, j, g):
        cw, _ = group.splitters[i].split(g)
        return evaluate_in(group.factors[j], cw, group.cgens[j])

    syl = []
    for lab, e in word:
        i = group._labmap[lab]
        syl.append([i, group.factors[i].letter(lab, e)])
    changed = True
    while changed:
        changed = False
        for k in range(len(syl)):
            i, g = syl[k]
            if k + 1 < len(syl) and syl[k + 1][0] == i:
                syl[k][1] = group.factors[i].mul(g, syl[k + 1][1])
                del syl[k + 1]
                changed = True
                break
            if len(syl) > 1 and group.splitters[i].member(g):
                if k + 1 < len(syl):
                    j = syl[k + 1][0]
                    syl[k + 1][1] = group.factors[j].mul(transfer(i, j, g), syl[k + 1][1])
                else:
                    j = syl[k - 1][0]
                    syl[k - 1][1] = group.factors[j].mul(syl[k - 1][1], transfer(i, j, g))
                del syl[k]
                changed = True
                break
    if len(syl) == 1 and group.splitters[syl[0][0]].member(syl[0][1]):
        return transfer(syl[0][0], 0, syl[0][1]), []
    return None, syl


def hnn_pinch(group, word):
    """Britton reduction by pinches ``y g y^-1 -> phi(g)`` (g in A) and
    ``y^-1 g y -> phi^-1(g)`` (g in phi(A)), merging base letters."""
    G = group.base
    items = []
    for lab, e in word:
        if lab == group.stable:
            items.append(("y", e))
        else:
            items.append(("g", G.letter(lab, e)))
    changed = True
    while changed:
        changed = False
        for k in range(len(items) - 1):
            if items[k][0] == "g" and items[k + 1][0] == "g":
                items[k] = ("g", G.mul(items[k][1], items[k + 1][1]))
                del items[k + 1]
                changed = True
                break
            if items[k][0] == "y" and items[k + 1][0] == "y" and items[k][1] == -items[k + 1][1]:
                del items[k:k + 2]
                changed = True
                break
            if k + 2 < len(items) and items[k][0] == "y" and items[k + 1][0] == "g" \
                    and items[k + 2][0] == "y" and items[k][1] == -items[k + 2][1]:
                e, g = items[k][1], items[k + 1][1]
                if e == 1 and group.in_a(g):
                    items[k:k + 3] = [("g", group.phi(g))]
                    changed = True
                    break
                if e == -1 and group.in_phi_a(g):
                    items[k:k + 3] = [("g", group.phi_inverse(g))]
                    changed = True
                    break
    g0 = G.identity
    syl = []
    for kind, v in items:
        if kind == "g":
            if syl:
                syl[-1] = (syl[-1][0], G.mul(syl[-1][1], v))
            else:
                g0 = G.mul(g0, v)
        else:
            syl.append((v, G.identity))
    return g0, tuple(syl)


def seeded(seed=0):
    return random.Random(seed)


def oracle_agrees(kind, G, w):
    """Compare ``G.reduce(w)`` with the brute-force oracle for ``kind``."""
    x = G.reduce(w)
    if kind == "free":
        return G.word_of(x) == free_cancel(w)
    if kind == "free_abelian":
        return x == abelian_exponents(G.labels, w)
    if kind == "racg":
        return x == racg_closure_normal_form(G, w)
    if kind in ("free_product", "amalgam"):
        head, syl = product_syllables(G, w)
        if [i for i, _ in syl] != [i for i, _ in G.letters(x)]:
            return False
        return head is None or (G.letters(x) == () and G.head(x) == head)
    if kind == "hnn":
        g0, syl = hnn_pinch(G, w)
        return (tuple(e for e, _ in syl) == G.epsilons(x)
                and canonical_from_reduced(G, g0, syl) == x)
    # finite tables: evaluate letter by letter through the table
    y = G.identity
    for lab, e in w:
        y = G.table[y][G.letter(lab, e)]
    return x == y
