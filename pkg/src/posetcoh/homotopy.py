"""Path-frames, loop generators, the edge-path presentation of pi_1 and H_1.

Group words are tuples of nonzero ints: letter ``i + 1`` is generator ``i``
and ``-(i + 1)`` its inverse.  Words are read in matrix order, so the word
of ``q * p`` is ``word(q) + word(p)`` and a representation evaluates a word
as the left-to-right product of its letters.

Generator ``i`` of a presentation belongs to the ``i``-th strictly comparable
pair ``(upper, lower)`` of the poset; on a 1-simplex ``(s; f0, f1)`` the word
is ``g(s, f0)^-1 g(s, f1)``, with ``g(s, s)`` the empty word.
"""

from __future__ import annotations

import heapq
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .poset import Poset, PosetError, is_pathwise_connected
from .simplicial import (
    Path,
    Simplex1,
    SimplexError,
    concat,
    path_from_vertices,
    reverse_path,
    trivial_path,
)
from .smith import abelian_invariants

DEFAULT_BUDGET = 100_000


# ---------------------------------------------------------------------------
# path-frames


@dataclass(frozen=True, eq=False)
class PathFrame:
    """A pole and, for every element ``a``, a tree path ``p_(a,o)`` from the pole to ``a``."""

    poset: Poset
    pole: int
    tree: tuple  # (upper, lower) edges
    parent: dict = field(repr=False)
    paths: dict = field(repr=False)

    @classmethod
    def from_tree(cls, poset: Poset, pole: int, tree) -> "PathFrame":
        tree = tuple(sorted((int(u), int(l)) for u, l in tree))
        adj = {a: [] for a in range(poset.n)}
        for u, l in tree:
            if u == l or not poset.le(l, u):
                raise PosetError(f"tree edge {(u, l)} is not a strict comparable pair")
            adj[u].append(l)
            adj[l].append(u)
        parent = {pole: None}
        todo = deque([pole])
        while todo:
            a = todo.popleft()
            for b in sorted(adj[a]):
                if b not in parent:
                    parent[b] = a
                    todo.append(b)
        if len(parent) != poset.n or len(tree) != poset.n - 1:
            raise PosetError("edges do not form a spanning tree of the comparability graph")
        paths = {}
        for a in range(poset.n):
            verts = [a]
            while parent[verts[-1]] is not None:
                verts.append(parent[verts[-1]])
            verts.reverse()
            paths[a] = trivial_path(pole) if a == pole else path_from_vertices(poset, verts)
        return cls(poset, pole, tree, parent, paths)

    def path(self, a: int) -> Path:
        return self.paths[a]

    @property
    def tree_set(self) -> frozenset:
        return frozenset(self.tree)

    def off_tree_pairs(self) -> list:
        tree = self.tree_set
        return [e for e in self.poset.comparable_pairs(strict=True) if e not in tree]

    def translate(self, new_pole: int) -> dict:
        """Paths ``p_(a,o) * reverse(p_(o1,o))`` of the translated frame, keyed by element."""
        back = reverse_path(self.paths[new_pole])
        return {a: concat(back, self.paths[a]) for a in range(self.poset.n)}

    def to_json(self) -> dict:
        return {"pole": int(self.pole), "tree": [[u, l] for u, l in self.tree]}

    @classmethod
    def from_json(cls, poset: Poset, data) -> "PathFrame":
        return cls.from_tree(poset, int(data["pole"]), data["tree"])


def build_path_frame(p: Poset, pole: int, seed: Optional[int] = None, strategy: str = "bfs") -> PathFrame:
    """Spanning tree of the comparability graph rooted at ``pole``.

    Neighbours are visited in increasing ID order; a ``seed`` shuffles that
    order instead, and ``strategy="dfs"`` grows a depth-first tree.  Both
    are only needed to produce alternative frames with the same pole.
    """
    if not is_pathwise_connected(p):
        raise PosetError("poset is not pathwise connected")
    rng = random.Random(seed) if seed is not None else None
    seen = {pole}
    tree = []

    def nbrs(a):
        out = p.comparability_neighbors(a)
        if rng is not None:
            rng.shuffle(out)
        return out

    if strategy == "bfs":
        todo = deque([pole])
        while todo:
            a = todo.popleft()
            for b in nbrs(a):
                if b not in seen:
                    seen.add(b)
                    tree.append(_edge(p, a, b))
                    todo.append(b)
    elif strategy == "dfs":
        stack = [(pole, iter(nbrs(pole)))]
        while stack:
            a, it = stack[-1]
            b = next((x for x in it if x not in seen), None)
            if b is None:
                stack.pop()
                continue
            seen.add(b)
            tree.append(_edge(p, a, b))
            stack.append((b, iter(nbrs(b))))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return PathFrame.from_tree(p, pole, tree)


def _edge(p: Poset, a: int, b: int) -> tuple:
    return (b, a) if p.le(a, b) else (a, b)


def loop_generator(f: PathFrame, b: Simplex1) -> Path:
    """``reverse(p_(f0,o)) * b * p_(f1,o)``: the loop at the pole through ``b``."""
    b = Simplex1(*b)
    return concat(f.path(b.face1), Path((b,)), reverse_path(f.path(b.face0)))


# ---------------------------------------------------------------------------
# words


def inverse_word(w) -> tuple:
    return tuple(-x for x in reversed(w))


def free_reduce(w) -> tuple:
    out = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w) -> tuple:
    w = list(free_reduce(w))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def word_to_str(w, names=None) -> str:
    if not w:
        return "e"
    parts = []
    for x in w:
        name = names[abs(x) - 1] if names else f"g{abs(x) - 1}"
        parts.append(name if x > 0 else f"{name}^-1")
    return "*".join(parts)


# ---------------------------------------------------------------------------
# presentation


@dataclass(frozen=True, eq=False)
class GroupPresentation:
    """Edge-path presentation of pi_1(K, o) after Tietze elimination.

    ``pairs[i]`` is the strict comparable pair behind raw generator ``i``.
    ``generators`` lists the raw generator indices that survive elimination;
    ``relations`` are the remaining relators, written in the surviving
    generators' raw indices.  ``substitution[i]`` expresses every raw
    generator through surviving ones.
    """

    pairs: tuple
    tree: tuple
    raw_relations: tuple
    generators: tuple
    relations: tuple
    substitution: dict = field(repr=False)

    @cached_property
    def pair_index(self) -> dict:
        return {e: i for i, e in enumerate(self.pairs)}

    @property
    def generator_pairs(self) -> list:
        return [self.pairs[i] for i in self.generators]

    @property
    def is_free(self) -> bool:
        return not self.relations

    def pair_word(self, upper: int, lower: int) -> tuple:
        """Reduced word of the loop generator of the inclusion ``(upper; upper, lower)``."""
        if upper == lower:
            return ()
        return self.substitution[self.pair_index[(upper, lower)]]

    def simplex_word(self, b: Simplex1) -> tuple:
        return free_reduce(inverse_word(self.pair_word(b.support, b.face0)) + self.pair_word(b.support, b.face1))

    def path_word(self, path: Path) -> tuple:
        w = ()
        for b in path.steps:
            w = self.simplex_word(b) + w
        return free_reduce(w)

    def generator_names(self) -> list:
        """Name of each raw generator index (``"upper,lower"``)."""
        return [f"{u},{l}" for u, l in self.pairs]

    def to_text(self, labels=None) -> str:
        names = self.generator_names()
        if labels is not None:
            names = [f"{labels[u]}>{labels[l]}" for u, l in self.pairs]
        lines = [f"generators {len(self.generators)}"]
        lines += [f"  {names[i]}" for i in self.generators]
        lines.append(f"relations {len(self.relations)}")
        lines += [f"  {word_to_str(r, names)}" for r in self.relations]
        return "\n".join(lines) + "\n"


def presentation(p: Poset, f: PathFrame) -> GroupPresentation:
    """Generators per strict pair, a relator per strict chain and per tree edge, then Tietze."""
    pairs = tuple(p.comparable_pairs(strict=True))
    idx = {e: i for i, e in enumerate(pairs)}
    raw = [(idx[(s, b)] + 1, idx[(b, a)] + 1, -(idx[(s, a)] + 1)) for s, b, a in p.chains(strict=True)]
    raw += [(idx[e] + 1,) for e in f.tree]
    survivors, relations, subst = _tietze(len(pairs), raw)
    return GroupPresentation(pairs, f.tree, tuple(raw), survivors, relations, subst)


def _tietze(n_gens: int, raw):
    rels = {k: cyclic_reduce(r) for k, r in enumerate(raw)}
    rels = {k: r for k, r in rels.items() if r}
    occ = {g: set() for g in range(1, n_gens + 1)}
    for k, r in rels.items():
        for x in r:
            occ[abs(x)].add(k)
    heap = [(len(r), k) for k, r in rels.items()]
    heapq.heapify(heap)
    subst = {}
    stuck = set()

    def single(r):
        counts = {}
        for x in r:
            counts[abs(x)] = counts.get(abs(x), 0) + 1
        once = [g for g, c in counts.items() if c == 1]
        return max(once) if once else None

    while heap:
        length, k = heapq.heappop(heap)
        r = rels.get(k)
        if r is None or len(r) != length:
            continue
        g = single(r)
        if g is None:
            stuck.add(k)
            continue
        # rotate so that g leads: g^e W = 1  =>  g = W^-1 (e=1) or W (e=-1)
        pos = next(i for i, x in enumerate(r) if abs(x) == g)
        rot = r[pos:] + r[:pos]
        rest = rot[1:]
        expr = inverse_word(rest) if rot[0] > 0 else rest
        subst[g] = expr
        del rels[k]
        for x in r:
            occ[abs(x)].discard(k)
        for j in list(occ[g]):
            new = []
            for x in rels[j]:
                if x == g:
                    new.extend(expr)
                elif x == -g:
                    new.extend(inverse_word(expr))
                else:
                    new.append(x)
            new = cyclic_reduce(new)
            for x in rels[j]:
                occ[abs(x)].discard(j)
            stuck.discard(j)
            if new:
                rels[j] = new
                for x in new:
                    occ[abs(x)].add(j)
                heapq.heappush(heap, (len(new), j))
            else:
                del rels[j]
        occ[g] = set()

    survivors = tuple(g - 1 for g in range(1, n_gens + 1) if g not in subst)
    resolved = {}

    def resolve(g):
        if g in resolved:
            return resolved[g]
        if g not in subst:
            out = (g,)
        else:
            out = []
            for x in subst[g]:
                sub = resolve(abs(x))
                out.extend(sub if x > 0 else inverse_word(sub))
            out = free_reduce(out)
        resolved[g] = tuple(out)
        return resolved[g]

    # resolve in elimination order so recursion depth stays shallow
    for g in subst:
        resolve(g)
    substitution = {g - 1: resolve(g) for g in range(1, n_gens + 1)}
    relations = sorted({_canonical_relator(rels[k]) for k in rels})
    return survivors, tuple(relations), substitution


def _canonical_relator(r):
    r = cyclic_reduce(r)
    rots = [r[i:] + r[:i] for i in range(len(r))]
    inv = inverse_word(r)
    rots += [inv[i:] + inv[:i] for i in range(len(inv))]
    return min(rots)


def h1_invariants(g: GroupPresentation) -> tuple:
    """Abelianized ``(rank, torsion)`` of the reduced presentation via Smith normal form."""
    col = {gen + 1: k for k, gen in enumerate(g.generators)}
    rows = []
    for r in g.relations:
        row = [0] * len(col)
        for x in r:
            row[col[abs(x)]] += 1 if x > 0 else -1
        rows.append(row)
    return abelian_invariants(rows, len(col))


def raw_h1_invariants(g: GroupPresentation) -> tuple:
    """Same invariants computed from the unreduced relation matrix (independent route)."""
    n = len(g.pairs)
    rows = []
    for r in g.raw_relations:
        row = [0] * n
        for x in r:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    return abelian_invariants(rows, n)


def loop_class(g: GroupPresentation, loop: Path) -> tuple:
    """Freely reduced word of a loop in the surviving generators.

    Two loops at the same base are homotopic iff their classes agree when
    ``g.is_free``; otherwise equal classes still imply homotopy.
    """
    return g.path_word(loop)


# ---------------------------------------------------------------------------
# elementary deformations


def _deformations(p: Poset, steps: tuple, max_len: int):
    """All paths one elementary deformation away from ``steps`` (traversal order)."""
    leq = p.leq
    n = len(steps)
    # contract consecutive b1 then b2 into a single face
    for i in range(n - 1):
        b1, b2 = steps[i], steps[i + 1]
        ubs = np.flatnonzero(leq[b1.support] & leq[b2.support])
        if len(ubs) == 0:
            continue
        under = leq[:, ubs].any(axis=1) & leq[b2.face0] & leq[b1.face1]
        for s1 in np.flatnonzero(under):
            yield steps[:i] + (Simplex1(int(s1), b2.face0, b1.face1),) + steps[i + 2 :]
    # shrink a support: expand b into (s'; f0, f1) * σ0(f1), then contract back
    # to a single face with support s' (two elementary deformations)
    for i, b in enumerate(steps):
        for s1 in np.flatnonzero(leq[:, b.support] & leq[b.face0] & leq[b.face1]):
            if s1 != b.support:
                yield steps[:i] + (Simplex1(int(s1), b.face0, b.face1),) + steps[i + 1 :]
    if n + 1 > max_len:
        return
    # expand b into a pair inside the down-set of its support
    for i, b in enumerate(steps):
        below = p.below(b.support)
        for mid in below:
            mid = int(mid)
            s2s = below[leq[mid, below] & leq[b.face1, below]]
            s0s = below[leq[mid, below] & leq[b.face0, below]]
            for s2 in s2s:
                first = Simplex1(int(s2), mid, b.face1)
                for s0 in s0s:
                    yield steps[:i] + (first, Simplex1(int(s0), b.face0, mid)) + steps[i + 1 :]


@dataclass(frozen=True)
class HomotopyVerdict:
    verdict: str  # "yes" | "no-within-budget"
    depth: Optional[int]
    expanded: int

    def __bool__(self):
        return self.verdict == "yes"


def homotopic_bfs(p: Poset, p1: Path, p2: Path, budget: int = DEFAULT_BUDGET, max_len: Optional[int] = None) -> HomotopyVerdict:
    """Bidirectional breadth-first search over elementary deformations.

    ``budget`` bounds the number of distinct paths expanded; paths longer
    than ``max_len`` (default: longest input + 2) are not generated.  "yes"
    is definitive, "no-within-budget" is not a proof of anything.
    """
    if (p1.start, p1.end) != (p2.start, p2.end):
        raise SimplexError("paths have different endpoints")
    a, b = p1.steps, p2.steps
    if a == b:
        return HomotopyVerdict("yes", 0, 0)
    if max_len is None:
        max_len = max(len(a), len(b)) + 2
    dist = [{a: 0}, {b: 0}]
    frontier = [deque([a]), deque([b])]
    expanded = 0
    while frontier[0] and frontier[1]:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        here, there = dist[side], dist[1 - side]
        # expand one full BFS layer on the chosen side
        for _ in range(len(frontier[side])):
            if expanded >= budget:
                return HomotopyVerdict("no-within-budget", None, expanded)
            cur = frontier[side].popleft()
            expanded += 1
            for nxt in _deformations(p, cur, max_len):
                if nxt in here:
                    continue
                here[nxt] = here[cur] + 1
                if nxt in there:
                    return HomotopyVerdict("yes", here[nxt] + there[nxt], expanded)
                frontier[side].append(nxt)
    return HomotopyVerdict("no-within-budget", None, expanded)


@dataclass(frozen=True)
class ComplementSearch:
    verdict: str  # "found" | "no-within-budget"
    path: Optional[Path]
    expanded: int


def deform_into_complement(p: Poset, loop: Path, o: int, budget: int = DEFAULT_BUDGET, max_len: Optional[int] = None) -> ComplementSearch:
    """Best-first search for a path homotopic to ``loop`` whose support is disjoint from ``o``.

    Candidates are ordered by the number of steps whose support meets ``o``,
    then by length, then by the total size of the supports' down-sets.  Only paths reached through elementary deformations are
    ever returned.
    """
    if p.disjoint is None:
        raise PosetError("poset carries no disjointness relation")
    dis = p.disjoint[o]
    if not (dis[loop.start] and dis[loop.end]):
        raise SimplexError("loop endpoints are not disjoint from o")
    if max_len is None:
        max_len = len(loop) + 4

    size = p.leq.sum(axis=0)

    def bad(steps):
        return sum(1 for b in steps if not dis[b.support])

    def key(steps, nb):
        return (nb, len(steps), int(sum(size[b.support] for b in steps)))

    start = loop.steps
    if bad(start) == 0:
        return ComplementSearch("found", loop, 0)
    seen = {start}
    tick = 0
    heap = [(key(start, bad(start)), tick, start)]
    expanded = 0
    while heap and expanded < budget:
        _, _, cur = heapq.heappop(heap)
        expanded += 1
        for nxt in _deformations(p, cur, max_len):
            if nxt in seen:
                continue
            seen.add(nxt)
            nb = bad(nxt)
            if nb == 0:
                return ComplementSearch("found", Path(nxt), expanded)
            tick += 1
            heapq.heappush(heap, (key(nxt, nb), tick, nxt))
    return ComplementSearch("no-within-budget", None, expanded)
