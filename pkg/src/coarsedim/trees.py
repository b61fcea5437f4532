"""Bass-Serre trees of free products, amalgams and HNN extensions.

Vertices are keyed canonically without enumerating cosets:

* products with two factors: the coset ``x A_i`` is the right coset
  ``A_i x^-1``; writing ``x^-1`` in normal form and dropping a leading
  ``A_i`` letter leaves a letter tuple ``K`` with ``A_i x^-1 = A_i K``.  The
  key is ``(i, K)``; its parent is ``(factor of K[0], K[1:])`` and the two
  roots ``(0, ())``, ``(1, ())`` are joined by an edge.
* products with three or more factors: the cosets ``x A_i`` are joined
  through central vertices ``x C`` (key ``("C", K)``), which keeps the graph
  a tree.
* HNN extensions: ``x G`` has key ``("G", P)`` where ``P`` is the stable
  part of the normal form of ``x^-1``; the parent drops ``P[0]``.

The weight of a vertex is its depth below the root.
"""

from collections import deque
from dataclasses import dataclass, field

from .covers import ColoredCover
from .errors import InputError
from .groups.hnn import HNNExtension
from .groups.products import AmalgamatedProduct
from .groups.words import format_word
from .metric import MetricWindow, Violation


class BassSerre:
    """Implicit (infinite) Bass-Serre tree with group action."""

    def __init__(self, group):
        self.group = group
        if isinstance(group, HNNExtension):
            self.kind = "hnn"
            self.root = ("G", ())
            self.central = False
        elif isinstance(group, AmalgamatedProduct):
            self.kind = group.kind
            self.central = len(group.factors) > 2
            self.root = ("C", ()) if self.central else (0, ())
        else:
            raise InputError(f"no Bass-Serre tree for a {group.kind} group")

    # -- keys ---------------------------------------------------------------
    def vertex_of(self, g, typ=None):
        """The vertex of type ``typ`` (default: the root's) containing ``g``."""
        G = self.group
        typ = self.root[0] if typ is None else typ
        if self.kind == "hnn":
            return ("G", G.inv(g)[1])
        letters = G.letters(G.inv(g))
        if typ == "C":
            return ("C", letters)
        if letters and letters[0][0] == typ:
            letters = letters[1:]
        return (typ, letters)

    def parent(self, v):
        typ, seq = v
        if self.kind == "hnn":
            return ("G", seq[1:]) if seq else None
        if self.central:
            if typ != "C":
                return ("C", seq)
            return (seq[0][0], seq[1:]) if seq else None
        if seq:
            return (seq[0][0], seq[1:])
        return (0, ()) if typ == 1 else None

    def depth(self, v):
        typ, seq = v
        if self.kind == "hnn":
            return len(seq)
        if self.central:
            return 2 * len(seq) + (0 if typ == "C" else 1)
        last = seq[-1][0] if seq else typ
        return len(seq) + (1 if last == 1 else 0)

    def rep(self, v):
        """A representative ``x`` of the coset ``v``."""
        G = self.group
        typ, seq = v
        if self.kind == "hnn":
            return G.inv(G.from_pairs(seq))
        return G.inv(G.from_letters(seq))

    def act(self, g, v):
        return self.vertex_of(self.group.mul(g, self.rep(v)), v[0])

    def ancestor(self, v, depth):
        while self.depth(v) > depth:
            v = self.parent(v)
        return v

    def dist(self, u, v):
        du, dv = self.depth(u), self.depth(v)
        steps = 0
        while du > dv:
            u = self.parent(u)
            du = self.depth(u)
            steps += 1
        while dv > du:
            v = self.parent(v)
            dv = self.depth(v)
            steps += 1
        while u != v:
            u, v = self.parent(u), self.parent(v)
            steps += 2
        return steps

    def max_generator_displacement(self, x0=None):
        """``lambda = max_s d(s x0, x0)`` over the generators."""
        x0 = self.root if x0 is None else x0
        G = self.group
        return max((self.dist(self.act(G.letter(*s), x0), x0) for s in G.generators()), default=0)

    def key_text(self, v):
        typ, seq = v
        G = self.group
        if self.kind == "hnn":
            word = G.word_of(G.from_pairs(seq))
        else:
            word = G.word_of(G.from_letters(seq))
        return f"{typ}|{format_word(word)}"


@dataclass
class TreeSlice:
    """A finite rooted tree: vertices, oriented edges, weights."""

    vertices: list
    edges: list
    weight: dict
    root: object
    depth: int = None
    reps: dict = field(default_factory=dict)
    boundary: frozenset = frozenset()
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        self._adj = None
        self._lca = None

    def adjacency(self):
        if self._adj is None:
            adj = {v: [] for v in self.vertices}
            for u, v in self.edges:
                adj[u].append(v)
                adj[v].append(u)
            self._adj = adj
        return self._adj

    @classmethod
    def from_parents(cls, parent, root, **kw):
        """Build from a child -> parent map (root maps to ``None``)."""
        depth = {}

        def dep(v):
            chain = []
            while v not in depth:
                p = parent[v]
                if p is None:
                    depth[v] = 0
                    break
                chain.append(v)
                v = p
            base = depth[v]
            for k, w in enumerate(reversed(chain), 1):
                depth[w] = base + k
            return depth

        for v in parent:
            dep(v)
        verts = sorted(parent, key=lambda v: (depth[v], repr(v)))
        edges = [(parent[v], v) for v in verts if parent[v] is not None]
        weight = dict(depth)
        return cls(verts, edges, weight, root, **kw)

    # -- LCA via Euler tour and a sparse table ------------------------------
    def _build_lca(self):
        adj = self.adjacency()
        first, euler, dep = {}, [], {self.root: 0}
        stack = [(self.root, None, 0)]
        while stack:
            v, par, idx = stack.pop()
            if idx == 0:
                first[v] = len(euler)
            euler.append(v)
            nbrs = adj[v]
            while idx < len(nbrs) and nbrs[idx] == par:
                idx += 1
            if idx < len(nbrs):
                stack.append((v, par, idx + 1))
                w = nbrs[idx]
                dep[w] = dep[v] + 1
                stack.append((w, v, 0))
        if len(first) != len(self.vertices):
            raise InputError("tree slice is not connected")
        n = len(euler)
        table = [list(range(n))]
        k = 1
        while (1 << k) <= n:
            prev = table[-1]
            half = 1 << (k - 1)
            row = []
            for i in range(n - (1 << k) + 1):
                a, b = prev[i], prev[i + half]
                row.append(a if dep[euler[a]] <= dep[euler[b]] else b)
            table.append(row)
            k += 1
        self._lca = (first, euler, dep, table)

    def root_depth(self, v):
        if self._lca is None:
            self._build_lca()
        return self._lca[2][v]

    def dist(self, u, v):
        if u == v:
            return 0
        if self._lca is None:
            self._build_lca()
        first, euler, dep, table = self._lca
        i, j = sorted((first[u], first[v]))
        k = (j - i + 1).bit_length() - 1
        a, b = table[k][i], table[k][j - (1 << k) + 1]
        m = a if dep[euler[a]] <= dep[euler[b]] else b
        return dep[u] + dep[v] - 2 * dep[euler[m]]

    def window(self):
        return TreeWindow(self)


class TreeWindow(MetricWindow):
    """Tree metric on a slice, with exact linear-time set checks."""

    def __init__(self, tree):
        self.tree = tree
        order = {v: i for i, v in enumerate(tree.vertices)}
        super().__init__(tree.vertices, tree.dist, tree.root, 0,
                         max(tree.weight.values(), default=0), key=order.__getitem__)

    def radius_of(self, x):
        return self.tree.root_depth(x)

    def near(self, x, k):
        adj = self.tree.adjacency()
        seen = {x: 0}
        queue = deque([x])
        while queue:
            v = queue.popleft()
            if seen[v] == k:
                continue
            for w in adj[v]:
                if w not in seen:
                    seen[w] = seen[v] + 1
                    queue.append(w)
        return list(seen)

    def set_diameter(self, points):
        """Double sweep; exact for subsets of a tree."""
        pts = list(points)
        if len(pts) <= 1:
            return 0
        a = max(pts, key=lambda p: (self.tree.dist(pts[0], p), self.key(p)))
        return max(self.tree.dist(a, p) for p in pts)

    def closest_distinct_sets(self, sets):
        """``(distance, i, j, p, q)`` for the closest pair of distinct sets,
        via a multi-source BFS and its label-change edges."""
        adj = self.tree.adjacency()
        label, dist, src = {}, {}, {}
        queue = deque()
        for i, s in enumerate(sets):
            for p in s:
                if p in label and label[p] != i:
                    j = label[p]
                    return (0, min(i, j), max(i, j), p, p)
                label[p], dist[p], src[p] = i, 0, p
                queue.append(p)
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in label:
                    label[w], dist[w], src[w] = label[v], dist[v] + 1, src[v]
                    queue.append(w)
        best = None
        for u, v in self.tree.edges:
            if u in label and v in label and label[u] != label[v]:
                c = dist[u] + 1 + dist[v]
                if best is None or c < best[0]:
                    i, j = label[u], label[v]
                    p, q = src[u], src[v]
                    if i > j:
                        i, j, p, q = j, i, q, p
                    best = (c, i, j, p, q)
        return best

    def separation(self, sets, gap):
        best = self.closest_distinct_sets(sets)
        if best is None or best[0] >= gap:
            return None
        c, i, j, p, q = best
        return Violation(i, j, (p, q), c)


# -- building slices -----------------------------------------------------------

def build_bass_serre(group, depth, radius=None):
    """Vertices of weight at most ``depth`` meeting the ball of ``radius``
    (default ``depth + 2``), closed under parents.

    Representatives are the shortlex-least ball elements of each coset.
    """
    if depth < 0:
        raise InputError("depth must be nonnegative")
    bs = BassSerre(group)
    radius = depth + 2 if radius is None else radius
    types = [bs.root[0]]
    if bs.kind != "hnn":
        types = list(range(len(group.factors))) + (["C"] if bs.central else [])
    reps = {}
    for g in group.ball_elements(radius):
        for t in types:
            v = bs.vertex_of(g, t)
            if bs.depth(v) > depth:
                continue
            cur = reps.get(v)
            if cur is None or group.order_key(g) < group.order_key(cur):
                reps[v] = g
    parent = {}
    for v in list(reps):
        while v is not None and v not in parent:
            p = bs.parent(v)
            parent[v] = p
            v = p
    if bs.root not in parent:
        parent[bs.root] = None
    t = TreeSlice.from_parents(parent, bs.root, depth=depth, reps=reps)
    t.weight = {v: bs.depth(v) for v in t.vertices}
    t.boundary = frozenset(v for v in t.vertices if t.weight[v] == depth)
    t.labels = {v: bs.key_text(v) for v in t.vertices}
    t.structure = bs
    return t


@dataclass
class TreeReport:
    connected: bool
    acyclic: bool
    monotone: bool
    unique_parent: bool
    witness: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.connected and self.acyclic and self.monotone and self.unique_parent


def validate_tree(t):
    """Connectivity, acyclicity, weight monotonicity, one parent per vertex."""
    adj = {v: [] for v in t.vertices}
    witness = {}
    for u, v in t.edges:
        if u not in adj or v not in adj:
            raise InputError(f"edge {(u, v)!r} uses an unknown vertex")
        adj[u].append(v)
        adj[v].append(u)
    start = t.root if t.root in adj else (t.vertices[0] if t.vertices else None)
    seen = {}
    if start is not None:
        seen[start] = None
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen[w] = v
                    queue.append(w)
    connected = len(seen) == len(t.vertices)
    if not connected:
        witness["unreached"] = next(v for v in t.vertices if v not in seen)
    acyclic = len(t.edges) == len(t.vertices) - 1 and connected
    if not acyclic and connected:
        tree_edges = {frozenset((v, p)) for v, p in seen.items() if p is not None}
        for u, v in t.edges:
            if frozenset((u, v)) not in tree_edges or u == v:
                witness["cycle_edge"] = (u, v)
                witness["cycle"] = _cycle_through(seen, u, v)
                break
            tree_edges.discard(frozenset((u, v)))
    monotone = True
    for u, v in t.edges:
        if not t.weight[u] < t.weight[v]:
            monotone = False
            witness["non_monotone_edge"] = (u, v)
            break
    heads = {}
    unique = True
    for u, v in t.edges:
        if v in heads and heads[v] != u:
            unique = False
            witness["two_parents"] = (v, heads[v], u)
            break
        heads[v] = u
    return TreeReport(connected, acyclic, monotone, unique, witness)


def _cycle_through(parent, u, v):
    def path(x):
        out = [x]
        while parent[x] is not None:
            x = parent[x]
            out.append(x)
        return out

    pu, pv = path(u), path(v)
    common = set(pu) & set(pv)
    a = [x for x in pu if x not in common]
    b = [x for x in pv if x not in common]
    meet = next(x for x in pu if x in common)
    return a + [meet] + list(reversed(b))


# -- stabilizers -------------------------------------------------------------

def r_stabilizer(points, act, dist, x0, R):
    """``W_R(x0) = {g : d(g x0, x0) <= R}`` among ``points``."""
    out = []
    for g in points:
        if dist(act(g, x0), x0) <= R:
            out.append(g)
    return out


def tree_stabilizer(group, window_points, R, x0=None):
    """R-stabilizer of a Bass-Serre vertex (default the root) in a window."""
    bs = BassSerre(group)
    x0 = bs.root if x0 is None else x0
    return r_stabilizer(window_points, bs.act, bs.dist, x0, R)


# -- the two-color tree cover --------------------------------------------------

def gated_annulus_labels(t, root, r):
    """``vertex -> (layer k, gate)``: layer ``k = |v| // r``; for ``k >= 1`` the
    gate is the ancestor at depth ``k r - ceil(r/2)``, for ``k = 0`` the root."""
    if r < 1:
        raise InputError("r must be at least 1")
    adj = t.adjacency()
    setback = -(-r // 2)
    out = {}
    path = []
    stack = [(root, None, 0)]
    while stack:
        v, par, d = stack.pop()
        del path[d:]
        path.append(v)
        k = d // r
        gate = root if k == 0 else path[k * r - setback]
        out[v] = (k, gate)
        for w in adj[v]:
            if w != par:
                stack.append((w, v, d + 1))
    return out


def tree_cover(t, root, r):
    """Two colors: layer parity; sets are the gate fibers within a layer."""
    if root not in t.adjacency():
        raise InputError("root is not a vertex of the slice")
    labels = gated_annulus_labels(t, root, r)
    buckets = {}
    for v, lab in labels.items():
        buckets.setdefault(lab, set()).add(v)
    fams = [[], []]
    for (k, _), s in buckets.items():
        fams[k % 2].append(frozenset(s))
    win = t.window()
    cover = ColoredCover(fams, r, win, bound=2 * (r + -(-r // 2)))
    cover.meta["labels"] = labels
    return cover
