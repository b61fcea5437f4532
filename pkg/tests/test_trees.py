import random
import time

import pytest
from instances import random_tree

from coarsedim.covers import verify_cover
from coarsedim.groups import (
    CyclicGroup,
    FreeProduct,
    baumslag_solitar,
    dihedral_infinite,
    trefoil,
    z2_star_z3,
)
from coarsedim.trees import (
    BassSerre,
    TreeSlice,
    build_bass_serre,
    tree_cover,
    tree_stabilizer,
    validate_tree,
)


def path_tree(n):
    parent = {0: None}
    parent.update({k: k - 1 for k in range(1, n)})
    return TreeSlice.from_parents(parent, 0)


def binary_tree(depth):
    parent = {1: None}
    for v in range(2, 2 ** (depth + 1)):
        parent[v] = v // 2
    return TreeSlice.from_parents(parent, 1)


def brute_dist(t, u, v):
    adj = t.adjacency()
    seen = {u: 0}
    frontier = [u]
    while frontier:
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if y not in seen:
                    seen[y] = seen[x] + 1
                    nxt.append(y)
        frontier = nxt
    return seen[v]


def test_lca_distance_matches_bfs():
    rng = random.Random(3)
    t = random_tree(rng, 300)
    for _ in range(200):
        u, v = rng.choice(t.vertices), rng.choice(t.vertices)
        assert t.dist(u, v) == brute_dist(t, u, v)


def test_validate_single_vertex_and_chord():
    single = TreeSlice.from_parents({"x": None}, "x")
    assert validate_tree(single).passed
    t = path_tree(6)
    t.edges.append((0, 4))
    rep = validate_tree(t)
    assert not rep.acyclic
    # whichever edge falls outside the BFS tree, it closes the cycle 0-1-2-3-4
    assert set(rep.witness["cycle_edge"]) <= {0, 1, 2, 3, 4}
    assert set(rep.witness["cycle"]) == {0, 1, 2, 3, 4}


def test_validate_reports_weight_and_parent_failures():
    t = path_tree(4)
    t.weight[2] = 0
    assert not validate_tree(t).monotone
    t = TreeSlice(["a", "b", "c"], [("a", "c"), ("b", "c")], {"a": 0, "b": 0, "c": 1}, "a")
    rep = validate_tree(t)
    assert not rep.unique_parent and rep.witness["two_parents"][0] == "c"


def test_dihedral_tree_is_a_path():
    t = build_bass_serre(dihedral_infinite(), 4, radius=6)
    assert validate_tree(t).passed
    adj = t.adjacency()
    assert all(len(adj[v]) <= 2 for v in t.vertices)
    # two vertices per depth except the root pair
    assert len(t.vertices) == 1 + 2 * 4
    assert t.boundary == {v for v in t.vertices if t.weight[v] == 4}


def test_three_factor_tree_star_of_stars():
    G = FreeProduct([CyclicGroup(2, "s"), CyclicGroup(3, "t"), CyclicGroup(2, "u")])
    t = build_bass_serre(G, 1, radius=3)
    assert validate_tree(t).passed
    # central vertex C joined to one coset of each factor
    assert len(t.adjacency()[t.root]) == 3
    t2 = build_bass_serre(G, 2, radius=4)
    adj = t2.adjacency()
    # the A_i vertex at depth 1 has |A_i| neighbours among the central vertices
    for v in adj[t2.root]:
        size = G.factors[v[0]].order
        assert len(adj[v]) == size


@pytest.mark.parametrize("group,depth,radius", [
    (z2_star_z3(), 5, 8),
    (trefoil(), 4, 6),
    (baumslag_solitar(), 3, 5),
])
def test_built_slices_validate(group, depth, radius):
    t = build_bass_serre(group, depth, radius)
    rep = validate_tree(t)
    assert rep.passed, rep.witness
    bs = t.structure
    for v in t.vertices:
        g = t.reps[v] if v in t.reps else bs.rep(v)
        assert bs.vertex_of(g, v[0]) == v


def test_bs12_unique_parent():
    t = build_bass_serre(baumslag_solitar(), 3, 6)
    rep = validate_tree(t)
    assert rep.unique_parent and rep.passed


@pytest.mark.parametrize("group", [z2_star_z3(), trefoil(), baumslag_solitar()])
def test_left_multiplication_is_a_tree_automorphism(group):
    bs = BassSerre(group)
    t = build_bass_serre(group, 3, 5)
    rng = random.Random(1)
    pts = group.ball_elements(4)
    for _ in range(40):
        g = rng.choice(pts)
        for u, v in t.edges:
            assert bs.dist(bs.act(g, u), bs.act(g, v)) == 1
        a, b = rng.choice(t.vertices), rng.choice(t.vertices)
        assert bs.dist(bs.act(g, a), bs.act(g, b)) == bs.dist(a, b)


def test_stabilizer_examples():
    G = z2_star_z3()
    pts = G.ball_elements(6)
    w0 = tree_stabilizer(G, pts, 0)
    assert set(w0) == {G.identity, G.parse("s")}
    for R in range(4):
        assert set(tree_stabilizer(G, pts, R)) <= set(tree_stabilizer(G, pts, R + 1))


def in_ba_power(T, x, k):
    letters = T.letters(x)
    if not letters:
        return True
    return len(letters) + (1 if letters[0][0] == 0 else 0) <= 2 * k


def test_trefoil_stabilizer_in_ba_power():
    T = trefoil()
    pts = T.ball_elements(8)
    for k in range(1, 5):
        W = tree_stabilizer(T, pts, k)
        assert all(in_ba_power(T, x, k) for x in W)


def test_bs_stabilizer_in_short_strata():
    B = baumslag_solitar()
    pts = B.ball_elements(8)
    for r in range(0, 5):
        assert all(B.length(x) <= r for x in tree_stabilizer(B, pts, r))


def test_free_product_stabilizer_in_product_set():
    G = z2_star_z3()
    pts = G.ball_elements(7)
    for m in range(0, 5):
        for x in tree_stabilizer(G, pts, m):
            letters = G.letters(x)
            if letters and letters[-1][0] == 0:
                letters = letters[:-1]
            assert len(letters) <= m


def test_tree_cover_single_vertex():
    t = TreeSlice.from_parents({0: None}, 0)
    cover = tree_cover(t, 0, 3)
    assert [len(f) for f in cover.families] == [1, 0]
    assert verify_cover(cover).passed


def test_tree_cover_path():
    t = path_tree(200)
    cover = tree_cover(t, 0, 4)
    rep = verify_cover(cover)
    assert rep.passed and rep.max_diameter <= 2 * (4 + 2)
    for _, s in cover.all_sets():
        assert max(s) - min(s) + 1 == len(s)


@pytest.mark.parametrize("r", [2, 4, 8])
def test_tree_cover_binary(r):
    t = binary_tree(12)
    cover = tree_cover(t, 1, r)
    rep = verify_cover(cover)
    assert rep.colors == 2 and rep.passed
    assert rep.max_diameter <= 2 * (r + -(-r // 2))


def test_tree_cover_off_root():
    t = binary_tree(8)
    cover = tree_cover(t, 37, 3)
    assert verify_cover(cover).passed


def test_tree_cover_random_is_checked_by_brute_force():
    rng = random.Random(11)
    for _ in range(10):
        t = random_tree(rng, 120)
        r = rng.randint(1, 6)
        cover = tree_cover(t, 0, r)
        for fam in cover.families:
            sets = fam.sets
            for i in range(len(sets)):
                for j in range(i + 1, len(sets)):
                    assert min(t.dist(p, q) for p in sets[i] for q in sets[j]) >= r + 1
        for _, s in cover.all_sets():
            assert max(t.dist(p, q) for p in s for q in s) <= 2 * (r + -(-r // 2))


def test_tree_cover_large_random_trees_fast():
    rng = random.Random(5)
    start = time.perf_counter()
    for r in (1, 2, 7, 16, 64):
        t = random_tree(rng, 10_000)
        cover = tree_cover(t, 0, r)
        cover.scale = r + 1
        rep = verify_cover(cover)
        assert rep.passed, rep.failures()
    assert time.perf_counter() - start < 30
