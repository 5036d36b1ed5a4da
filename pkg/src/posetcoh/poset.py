"""Finite posets, their order/disjointness relations and the bundled models.

Elements are the dense integers ``0..n-1``; ``leq[i, j]`` means ``i <= j``.
An optional symmetric ``disjoint`` matrix plays the role of causal
disjointness and must be inherited by smaller elements.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import networkx as nx
import numpy as np

from . import _kernels


class PosetError(ValueError):
    """Raised for malformed order/disjointness data or invalid builder parameters."""


@dataclass(frozen=True, eq=False)
class Poset:
    labels: tuple
    leq: np.ndarray
    disjoint: Optional[np.ndarray] = None
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        n = len(labels)
        if len(set(labels)) != n:
            raise PosetError("element labels must be unique")
        leq = np.array(self.leq, dtype=bool)
        if leq.shape != (n, n):
            raise PosetError(f"leq must be {n}x{n}, got {leq.shape}")
        if _kernels.transitivity_violations(leq):
            raise PosetError("leq is not reflexive and transitive")
        if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
            raise PosetError("leq is not antisymmetric")
        leq.setflags(write=False)
        disjoint = self.disjoint
        if disjoint is not None:
            disjoint = np.array(disjoint, dtype=bool)
            if disjoint.shape != (n, n):
                raise PosetError(f"disjoint must be {n}x{n}")
            if np.any(disjoint != disjoint.T):
                raise PosetError("disjoint is not symmetric")
            if np.any(np.diag(disjoint)):
                raise PosetError("disjoint is not irreflexive")
            # a ⊥ b, a' <= a, b' <= b  =>  a' ⊥ b'
            inherited = leq.astype(np.int64) @ disjoint.astype(np.int64) @ leq.T.astype(np.int64) > 0
            if np.any(inherited & ~disjoint):
                raise PosetError("disjoint is not inherited by smaller elements")
            disjoint.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "leq", leq)
        object.__setattr__(self, "disjoint", disjoint)
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})

    @classmethod
    def from_pairs(cls, labels: Sequence, leq_pairs: Iterable, disjoint_pairs=None, close=False) -> "Poset":
        """Build from explicit ``(i, j)`` pairs meaning ``i <= j``.

        Reflexive pairs are added automatically; with ``close=True`` the
        transitive closure is taken instead of being required.
        """
        n = len(labels)
        leq = np.eye(n, dtype=bool)
        for i, j in leq_pairs:
            leq[i, j] = True
        if close:
            leq = _transitive_closure(leq)
        disjoint = None
        if disjoint_pairs is not None:
            disjoint = np.zeros((n, n), dtype=bool)
            for i, j in disjoint_pairs:
                disjoint[i, j] = disjoint[j, i] = True
        return cls(tuple(labels), leq, disjoint)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        return self._index[str(label)]

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def comparable(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b] or self.leq[b, a])

    def is_disjoint(self, a: int, b: int) -> bool:
        if self.disjoint is None:
            raise PosetError("poset carries no disjointness relation")
        return bool(self.disjoint[a, b])

    def below(self, s: int) -> np.ndarray:
        """Elements ``a <= s`` in increasing ID order."""
        return np.flatnonzero(self.leq[:, s])

    def above(self, a: int) -> np.ndarray:
        return np.flatnonzero(self.leq[a, :])

    def comparable_pairs(self, strict=False) -> list:
        """All ``(upper, lower)`` with ``lower <= upper``, sorted lexicographically."""
        lo, up = np.nonzero(self.leq)
        pairs = sorted(zip(up.tolist(), lo.tolist()))
        if strict:
            pairs = [(u, l) for u, l in pairs if u != l]
        return pairs

    def chains(self, strict=False) -> list:
        """All ``(s, b, a)`` with ``a <= b <= s``."""
        out = []
        for s in range(self.n):
            for b in self.below(s):
                for a in self.below(b):
                    if strict and (a == b or b == s):
                        continue
                    out.append((s, int(b), int(a)))
        return out

    def comparability_neighbors(self, a: int) -> list:
        row = (self.leq[a] | self.leq[:, a])
        row = row.copy()
        row[a] = False
        return np.flatnonzero(row).tolist()

    def subposet(self, keep: Sequence[int]) -> "Poset":
        keep = list(keep)
        dis = None if self.disjoint is None else self.disjoint[np.ix_(keep, keep)]
        return Poset(tuple(self.labels[i] for i in keep), self.leq[np.ix_(keep, keep)], dis)

    def to_json(self) -> dict:
        lo, up = np.nonzero(self.leq & ~np.eye(self.n, dtype=bool))
        out = {
            "elements": list(self.labels),
            "leq": sorted([int(i), int(j)] for i, j in zip(lo, up)),
        }
        if self.disjoint is not None:
            i, j = np.nonzero(np.triu(self.disjoint))
            out["disjoint"] = sorted([int(a), int(b)] for a, b in zip(i, j))
        return out

    @classmethod
    def from_json(cls, data) -> "Poset":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_pairs(data["elements"], data.get("leq", []), data.get("disjoint"))


def _transitive_closure(leq):
    m = leq.copy()
    while True:
        nxt = m | ((m.astype(np.int64) @ m.astype(np.int64)) > 0)
        if np.array_equal(nxt, m):
            return m
        m = nxt


def disjoint_union(p: Poset, q: Poset) -> Poset:
    n, m = p.n, q.n
    leq = np.zeros((n + m, n + m), dtype=bool)
    leq[:n, :n] = p.leq
    leq[n:, n:] = q.leq
    labels = [f"L:{x}" for x in p.labels] + [f"R:{x}" for x in q.labels]
    return Poset(tuple(labels), leq)


# ---------------------------------------------------------------------------
# builders


def build_circle_poset(n_points: int, max_len: int) -> Poset:
    """Arcs of a circle cut into ``n_points`` unit segments, ordered by containment.

    ``arc(i, l)`` covers segments ``i, ..., i+l-1`` (mod ``n_points``), hence
    the closed point set ``i, ..., i+l``.  Two arcs are disjoint when their
    closed point sets are.
    """
    if n_points < 4:
        raise PosetError("n_points must be >= 4")
    if not 1 <= max_len <= n_points - 2:
        raise PosetError("max_len must satisfy 1 <= max_len <= n_points - 2")
    arcs = [(i, l) for i in range(n_points) for l in range(1, max_len + 1)]
    segs = [frozenset((i + k) % n_points for k in range(l)) for i, l in arcs]
    pts = [frozenset((i + k) % n_points for k in range(l + 1)) for i, l in arcs]
    n = len(arcs)
    leq = np.array([[segs[a] <= segs[b] for b in range(n)] for a in range(n)], dtype=bool)
    disjoint = np.array([[not (pts[a] & pts[b]) for b in range(n)] for a in range(n)], dtype=bool)
    return Poset(tuple(f"arc({i},{l})" for i, l in arcs), leq, disjoint)


def build_directed_interval_poset(n_points: int) -> Poset:
    """Intervals ``[i, j]`` of ``0..n_points-1`` ordered by inclusion; ``[0, n-1]`` is the top."""
    if n_points < 2:
        raise PosetError("n_points must be >= 2")
    ivals = [(i, j) for i in range(n_points) for j in range(i, n_points)]
    n = len(ivals)
    leq = np.array(
        [[ivals[b][0] <= ivals[a][0] and ivals[a][1] <= ivals[b][1] for b in range(n)] for a in range(n)],
        dtype=bool,
    )
    disjoint = np.array(
        [[ivals[a][1] < ivals[b][0] or ivals[b][1] < ivals[a][0] for b in range(n)] for a in range(n)],
        dtype=bool,
    )
    return Poset(tuple(f"[{i},{j}]" for i, j in ivals), leq, disjoint)


def build_graph_interval_poset(graph, max_len: int) -> Poset:
    """Open star neighbourhoods of small vertex trees in a graph.

    Elements are single open edges, plus for every connected vertex set ``W``
    with ``1 <= |W| <= max_len - 1`` whose induced subgraph is a tree the open
    set ``W ∪ {edges incident to W}``.  On a cycle these are exactly the
    edge-paths of length ``<= max_len``; at branch vertices they stay open,
    which plain edge-paths would not.  Order is inclusion, disjointness is
    vertex-disjointness of closures.

    ``graph`` is a networkx (multi)graph or an iterable of ``(u, v)`` edges.
    """
    if max_len < 1:
        raise PosetError("max_len must be >= 1")
    g = _as_multigraph(graph)
    if g.number_of_edges() == 0:
        raise PosetError("graph has no edges")
    if not nx.is_connected(g):
        raise PosetError("graph must be connected")
    edges = sorted(g.edges(keys=True), key=lambda e: (str(e[0]), str(e[1]), e[2]))
    eid = {}
    for k, (u, v, key) in enumerate(edges):
        eid[(u, v, key)] = eid[(v, u, key)] = k
    ends = [frozenset((u, v)) for u, v, _ in edges]
    loops = {u for u, v, _ in edges if u == v}

    elements = []  # (interior vertex set, edge id set)
    for k in range(len(edges)):
        elements.append((frozenset(), frozenset([k])))
    vertices = sorted(g.nodes, key=str)
    for size in range(1, max_len):
        for w in itertools.combinations(vertices, size):
            ws = frozenset(w)
            if ws & loops:
                continue
            sub = g.subgraph(ws)
            if not nx.is_connected(sub) or sub.number_of_edges() != size - 1:
                continue
            es = frozenset(eid[(u, v, key)] for x in ws for u, v, key in g.edges(x, keys=True))
            elements.append((ws, es))

    n = len(elements)
    leq = np.array(
        [[elements[a][0] <= elements[b][0] and elements[a][1] <= elements[b][1] for b in range(n)] for a in range(n)],
        dtype=bool,
    )
    closure = [ws.union(*(ends[k] for k in es)) for ws, es in elements]
    disjoint = np.array([[not (closure[a] & closure[b]) for b in range(n)] for a in range(n)], dtype=bool)
    labels = []
    for ws, es in elements:
        if ws:
            labels.append("star{" + ",".join(sorted(map(str, ws))) + "}")
        else:
            u, v, key = edges[next(iter(es))]
            labels.append(f"edge({u},{v},{key})")
    return Poset(tuple(labels), leq, disjoint)


def _as_multigraph(graph):
    if isinstance(graph, nx.Graph):
        return nx.MultiGraph(graph)
    g = nx.MultiGraph()
    g.add_edges_from((u, v) for u, v in graph)
    return g


def cycle_graph(n: int) -> nx.MultiGraph:
    return nx.MultiGraph(nx.cycle_graph(n))


def figure_eight_graph(loop_len: int = 3) -> nx.MultiGraph:
    """Two cycles of ``loop_len`` edges glued at vertex 0."""
    g = nx.MultiGraph()
    nx.add_cycle(g, [0] + [f"a{i}" for i in range(1, loop_len)])
    nx.add_cycle(g, [0] + [f"b{i}" for i in range(1, loop_len)])
    return g


def graph_from_json(data) -> nx.MultiGraph:
    if isinstance(data, str):
        data = json.loads(data)
    g = nx.MultiGraph()
    g.add_edges_from((u, v) for u, v in data["edges"])
    return g


# ---------------------------------------------------------------------------


def is_pathwise_connected(p: Poset) -> bool:
    """Whether the comparability graph is connected (the empty poset counts as not)."""
    if p.n == 0:
        return False
    return len(_reachable(p, 0)) == p.n


def _reachable(p: Poset, start: int) -> set:
    seen = {start}
    todo = deque([start])
    while todo:
        a = todo.popleft()
        for b in p.comparability_neighbors(a):
            if b not in seen:
                seen.add(b)
                todo.append(b)
    return seen


def has_upper_bounds(p: Poset) -> bool:
    """Whether every pair of elements has a common upper bound."""
    m = p.leq.astype(np.int64)
    return bool(np.all(m @ m.T > 0))
