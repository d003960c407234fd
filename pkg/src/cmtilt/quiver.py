"""Graded quivers, double quivers, sink reflections and admissible sequences."""
from collections import deque
from functools import lru_cache
from itertools import permutations, product
from typing import NamedTuple


class Arrow(NamedTuple):
    name: str
    source: object
    target: object
    degree: int = 0


class Quiver:
    def __init__(self, vertices, arrows=()):
        self.vertices = tuple(vertices)
        self.arrows = tuple(Arrow(*a) for a in arrows)
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be unique")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex labels must be unique")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise ValueError(f"arrow {a.name} has an endpoint outside the vertex set")
            if a.degree < 0:
                raise ValueError(f"arrow {a.name} has negative degree")

    def __repr__(self):
        arrs = ", ".join(f"{a.name}:{a.source}->{a.target}" + (f"[{a.degree}]" if a.degree else "")
                         for a in self.arrows)
        return f"Quiver({list(self.vertices)}; {arrs})"

    def __eq__(self, other):
        return (isinstance(other, Quiver) and self.vertices == other.vertices
                and self.arrows == other.arrows)

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def index(self, v):
        return self.vertices.index(v)

    def arrow(self, name):
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    def is_sink(self, v):
        return not any(a.source == v for a in self.arrows)

    def sinks(self):
        return [v for v in self.vertices if self.is_sink(v)]

    def edge_count(self, i, j):
        return sum(1 for a in self.arrows if {a.source, a.target} == {i, j} and i != j)

    def orientation(self):
        return tuple((a.source, a.target) for a in self.arrows)

    def full_subquiver(self, vs):
        keep = [v for v in self.vertices if v in set(vs)]
        return Quiver(keep, [a for a in self.arrows if a.source in vs and a.target in vs])

    def to_dict(self):
        return {"vertices": list(self.vertices),
                "arrows": [{"name": a.name, "from": a.source, "to": a.target, "degree": a.degree}
                           for a in self.arrows]}


def is_acyclic(Q, degree_zero_only=False):
    arrows = [a for a in Q.arrows if a.degree == 0 or not degree_zero_only]
    indeg = {v: 0 for v in Q.vertices}
    for a in arrows:
        indeg[a.target] += 1
    todo = [v for v in Q.vertices if indeg[v] == 0]
    seen = 0
    while todo:
        v = todo.pop()
        seen += 1
        for a in arrows:
            if a.source == v:
                indeg[a.target] -= 1
                if indeg[a.target] == 0:
                    todo.append(a.target)
    return seen == len(Q.vertices)


def double_quiver(Q):
    """Q with a reversed arrow a* for every arrow a; original arrows degree 0, stars degree 1."""
    if not is_acyclic(Q):
        raise ValueError("double quiver needs an acyclic quiver")
    arrows = [Arrow(a.name, a.source, a.target, 0) for a in Q.arrows]
    arrows += [Arrow(a.name + "*", a.target, a.source, 1) for a in Q.arrows]
    return Quiver(Q.vertices, arrows)


def sink_reflection(Q, i):
    """Reverse every arrow ending at the sink i; a reversed arrow a becomes a'."""
    if i not in Q.vertices:
        raise ValueError(f"{i} is not a vertex")
    if not Q.is_sink(i):
        raise ValueError(f"vertex {i} is not a sink")
    arrows = [Arrow(a.name + "'", i, a.source, a.degree) if a.target == i else a for a in Q.arrows]
    return Quiver(Q.vertices, arrows)


def is_admissible_sequence(Q, seq):
    seq = list(seq)
    if sorted(map(str, seq)) != sorted(map(str, Q.vertices)) or len(set(seq)) != len(seq):
        raise ValueError("sequence must list every vertex exactly once")
    pos = {v: k for k, v in enumerate(seq)}
    return all(pos[a.source] < pos[a.target] for a in Q.arrows)


def admissible_subsequence(Q, word):
    """Positions in ``word`` of an admissible sequence of Q, or None.

    Greedy: in topological order each vertex takes its earliest occurrence after
    all its predecessors. Earliest choices never hurt later vertices, so this
    finds a subsequence whenever one exists.
    """
    word = list(word)
    if not is_acyclic(Q):
        return None
    order = []
    indeg = {v: 0 for v in Q.vertices}
    for a in Q.arrows:
        indeg[a.target] += 1
    todo = sorted((v for v in Q.vertices if indeg[v] == 0), key=Q.index)
    while todo:
        v = todo.pop(0)
        order.append(v)
        for a in Q.arrows:
            if a.source == v:
                indeg[a.target] -= 1
                if indeg[a.target] == 0:
                    todo.append(a.target)
    pos = {}
    for v in order:
        after = max((pos[a.source] for a in Q.arrows if a.target == v), default=-1)
        nxt = next((k for k in range(after + 1, len(word)) if word[k] == v), None)
        if nxt is None:
            return None
        pos[v] = nxt
    return sorted(pos.values())


def admissible_subsequence_bruteforce(Q, word):
    """Independent check: some admissible ordering of all vertices occurs as a subsequence."""
    word = list(word)
    for perm in permutations(Q.vertices):
        if not is_admissible_sequence(Q, perm):
            continue
        k = 0
        for x in word:
            if k < len(perm) and x == perm[k]:
                k += 1
        if k == len(perm):
            return True
    return False


def _reachable(Q, goal, limit=None):
    """Breadth-first search over sink reflections; returns (Q', [sinks]) for the first
    orientation satisfying ``goal``."""
    start = Q
    seen = {start.orientation()}
    queue = deque([(start, [])])
    while queue:
        cur, path = queue.popleft()
        if goal(cur):
            return cur, path
        for v in cur.vertices:
            if cur.is_sink(v) and any(a.target == v for a in cur.arrows):
                nxt = sink_reflection(cur, v)
                key = nxt.orientation()
                if key not in seen:
                    seen.add(key)
                    queue.append((nxt, path + [v]))
        if limit is not None and len(seen) > limit:
            break
    return None


def find_reflection_target(Q, word):
    """(Q', reflections) with Q' obtained from Q by sink reflections and some
    subsequence of ``word`` admissible in Q'; None when no orientation works."""
    if set(word) != set(Q.vertices):
        raise ValueError("word must use every vertex of the quiver")
    return _reachable(Q, lambda q: admissible_subsequence(q, word) is not None)


def tree_reflection_target(Q, word):
    """Constructive variant for trees: orient each edge from the first occurrence of
    one endpoint to the first occurrence of the other, then reach that orientation."""
    if not underlying_graph_is_tree(Q):
        raise ValueError("quiver is not a tree")
    first = {}
    for k, v in enumerate(word):
        first.setdefault(v, k)
    want = tuple((a.source, a.target) if first[a.source] < first[a.target] else (a.target, a.source)
                 for a in Q.arrows)
    return _reachable(Q, lambda q: q.orientation() == want)


def underlying_graph_is_tree(Q):
    n = len(Q.vertices)
    if n == 0 or len(Q.arrows) != n - 1:
        return False
    adj = {v: set() for v in Q.vertices}
    for a in Q.arrows:
        if a.source == a.target:
            return False
        adj[a.source].add(a.target)
        adj[a.target].add(a.source)
    seen = {Q.vertices[0]}
    stack = [Q.vertices[0]]
    while stack:
        v = stack.pop()
        for u in adj[v] - seen:
            seen.add(u)
            stack.append(u)
    return len(seen) == n


def triangle():
    return Quiver([1, 2, 3], [("alpha", 1, 2), ("beta", 2, 3), ("gamma", 1, 3)])


def linear_quiver(n):
    return Quiver(range(1, n + 1), [(f"a{k}", k, k + 1) for k in range(1, n)])


def _canonical_edges(n, edges):
    best = None
    for p in permutations(range(n)):
        key = tuple(sorted((p[s], p[t]) for s, t in edges))
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=None)
def tree_quivers(max_vertices):
    """Every tree quiver with 1..max_vertices vertices, one per isomorphism class
    of oriented tree. Vertices are 1..n, arrows named a1, a2, ..."""
    out = []
    for n in range(1, max_vertices + 1):
        seen = set()
        for code in product(range(n), repeat=max(n - 2, 0)):
            edges = _pruefer_edges(n, code) if n > 1 else []
            for flips in product((False, True), repeat=len(edges)):
                oriented = [(t, s) if f else (s, t) for (s, t), f in zip(edges, flips)]
                key = _canonical_edges(n, oriented)
                if key in seen:
                    continue
                seen.add(key)
                out.append(Quiver(range(1, n + 1),
                                  [(f"a{k + 1}", s + 1, t + 1) for k, (s, t) in enumerate(key)]))
    return tuple(out)


def _pruefer_edges(n, code):
    degree = [1] * n
    for x in code:
        degree[x] += 1
    edges = []
    for x in code:
        leaf = min(v for v in range(n) if degree[v] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [k for k in range(n) if degree[k] == 1]
    edges.append((u, v))
    return edges
