"""Digraphs of matrices, classes (strongly connected components), reduced
graphs carrying the access relation, and DOT export.

Vertices are 1-based.  Class indices are 0-based positions into a
partition's class list; they surface as labels ``C1..Ck`` only in DOT and
CLI output.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .linalg import DEFAULT_TOL, TolerancePolicy, as_square, index_set

__all__ = [
    "Digraph",
    "ClassPartition",
    "ReducedGraph",
    "digraph_of",
    "union",
    "classes",
    "reduced_graph",
    "access_set",
    "digraph_to_dot",
    "reduced_graph_to_dot",
]


@dataclass(frozen=True)
class Digraph:
    """Directed graph on vertices ``1..n``; loops allowed, no multi-edges."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("digraph needs at least one vertex")
        edges = frozenset((int(j), int(k)) for j, k in self.edges)
        object.__setattr__(self, "edges", edges)
        for j, k in edges:
            if not (1 <= j <= self.n and 1 <= k <= self.n):
                raise ValueError(f"edge ({j},{k}) out of range 1..{self.n}")

    @cached_property
    def successors(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for j, k in self.edges:
            out[j].append(k)
        return {v: tuple(sorted(ks)) for v, ks in out.items()}

    @cached_property
    def predecessors(self) -> dict[int, tuple[int, ...]]:
        inc: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for j, k in self.edges:
            inc[k].append(j)
        return {v: tuple(sorted(js)) for v, js in inc.items()}


def digraph_of(X, tol: TolerancePolicy = DEFAULT_TOL) -> Digraph:
    """Digraph of a square matrix: edge (j, k) wherever ``|x_jk|`` exceeds
    the absolute floor (loops included)."""
    m = as_square(X)
    rows, cols = np.nonzero(np.abs(m) > tol.abs_floor)
    return Digraph(
        m.shape[0],
        frozenset(zip((rows + 1).tolist(), (cols + 1).tolist())),
    )


def union(g1: Digraph, g2: Digraph) -> Digraph:
    """Edge-set union of two digraphs on the same vertex set."""
    if g1.n != g2.n:
        raise ValueError(f"vertex counts differ: {g1.n} vs {g2.n}")
    return Digraph(g1.n, g1.edges | g2.edges)


@dataclass(frozen=True)
class ClassPartition:
    """Ordered, pairwise disjoint classes covering ``1..n``."""

    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for c in self.classes:
            if not c:
                raise ValueError("empty class")
            if seen & set(c):
                raise ValueError("classes overlap")
            seen |= set(c)
        if seen != set(range(1, len(seen) + 1)):
            raise ValueError("classes must cover 1..n exactly")

    @cached_property
    def n(self) -> int:
        return sum(len(c) for c in self.classes)

    @cached_property
    def vertex_to_class(self) -> dict[int, int]:
        return {v: i for i, c in enumerate(self.classes) for v in c}

    def class_of(self, v: int) -> int:
        """0-based position of the class containing vertex ``v``."""
        return self.vertex_to_class[v]


def _tarjan_sccs(g: Digraph) -> list[list[int]]:
    # Iterative Tarjan; deterministic because roots and successors are
    # visited in increasing vertex order.
    succ = g.successors
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0
    for root in range(1, g.n + 1):
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work: list[tuple[int, Iterable[int]]] = [(root, iter(succ[root]))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
    return sccs


def classes(g: Digraph) -> ClassPartition:
    """Partition into strongly connected classes.

    Ordering is deterministic: topological order of the condensation
    (edges run from earlier to later classes), ties broken by the smallest
    contained vertex.  A single vertex without a loop is a class.
    """
    comps = [tuple(sorted(c)) for c in _tarjan_sccs(g)]
    cls_of = {v: i for i, c in enumerate(comps) for v in c}
    k = len(comps)
    out_adj: list[set[int]] = [set() for _ in range(k)]
    indeg = [0] * k
    for j, kk in g.edges:
        a, b = cls_of[j], cls_of[kk]
        if a != b and b not in out_adj[a]:
            out_adj[a].add(b)
            indeg[b] += 1
    heap = [(comps[i][0], i) for i in range(k) if indeg[i] == 0]
    heapq.heapify(heap)
    ordered: list[int] = []
    while heap:
        _, i = heapq.heappop(heap)
        ordered.append(i)
        for b in sorted(out_adj[i]):
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, (comps[b][0], b))
    return ClassPartition(tuple(comps[i] for i in ordered))


@dataclass(frozen=True)
class ReducedGraph:
    """Access relation between classes.

    Edge ``(i, j)`` means class ``i`` has access to class ``j`` (some
    vertex of ``i`` reaches some vertex of ``j``).  Stored transitively
    closed; reflexive access is implicit, so only distinct pairs appear.
    """

    partition: ClassPartition
    edges: frozenset[tuple[int, int]]

    def accesses(self, i: int, j: int) -> bool:
        return i == j or (i, j) in self.edges


def reduced_graph(g: Digraph) -> ReducedGraph:
    """Condense ``g`` to its classes and close the between-class edges
    transitively."""
    part = classes(g)
    k = len(part.classes)
    adj: list[set[int]] = [set() for _ in range(k)]
    for j, kk in g.edges:
        a, b = part.class_of(j), part.class_of(kk)
        if a != b:
            adj[a].add(b)
    closed: set[tuple[int, int]] = set()
    for start in range(k):
        seen: set[int] = set()
        frontier = list(adj[start])
        while frontier:
            b = frontier.pop()
            if b in seen:
                continue
            seen.add(b)
            frontier.extend(adj[b])
        closed.update((start, b) for b in seen if b != start)
    return ReducedGraph(part, frozenset(closed))


def access_set(g: Digraph, J: Iterable[int]) -> tuple[int, ...]:
    """All vertices with access to some vertex of ``J``, including ``J``
    itself: access is reflexive even without loops."""
    targets = index_set(J, g.n)
    pred = g.predecessors
    seen = set(targets)
    frontier = list(targets)
    while frontier:
        v = frontier.pop()
        for u in pred[v]:
            if u not in seen:
                seen.add(u)
                frontier.append(u)
    return tuple(sorted(seen))


def digraph_to_dot(g: Digraph, name: str = "pencil") -> str:
    """DOT text with stable vertex labels ``v1..vn``."""
    lines = [f"digraph {name} {{"]
    lines += [f"  v{v};" for v in range(1, g.n + 1)]
    lines += [f"  v{j} -> v{k};" for j, k in sorted(g.edges)]
    lines.append("}")
    return "\n".join(lines) + "\n"


def reduced_graph_to_dot(r: ReducedGraph, name: str = "classes") -> str:
    """DOT text with stable class labels ``C1..Ck`` (members listed in the
    node label); edges are the stored access closure."""
    lines = [f"digraph {name} {{"]
    for i, c in enumerate(r.partition.classes):
        members = ",".join(str(v) for v in c)
        lines.append(f'  C{i + 1} [label="C{i + 1} = {{{members}}}"];')
    lines += [f"  C{a + 1} -> C{b + 1};" for a, b in sorted(r.edges)]
    lines.append("}")
    return "\n".join(lines) + "\n"
