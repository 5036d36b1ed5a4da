"""Singular 1- and 2-simplices of a poset and paths built from them.

A 1-simplex ``(s; f0, f1)`` has support ``s`` and faces ``f0, f1 <= s``; it
runs from ``f1`` to ``f0``.  Paths store their steps in traversal order, so
``Path((b1, b2, b3))`` is the composite ``b3 * b2 * b1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .poset import Poset


class SimplexError(ValueError):
    pass


class Simplex1(NamedTuple):
    support: int
    face0: int
    face1: int

    @property
    def start(self) -> int:
        return self.face1

    @property
    def end(self) -> int:
        return self.face0

    @property
    def is_degenerate(self) -> bool:
        return self.support == self.face0 == self.face1


@dataclass(frozen=True)
class Simplex2:
    support: int
    d0: Simplex1
    d1: Simplex1
    d2: Simplex1

    def check(self, p: Poset) -> None:
        for b in (self.d0, self.d1, self.d2):
            check_simplex(p, b)
            if not p.le(b.support, self.support):
                raise SimplexError(f"face support {b.support} not below {self.support}")
        if not (self.d0.face1 == self.d2.face0 and self.d1.face1 == self.d2.face1 and self.d1.face0 == self.d0.face0):
            raise SimplexError("faces of the 2-simplex are not vertex compatible")


def check_simplex(p: Poset, b: Simplex1) -> None:
    if not (p.le(b.face0, b.support) and p.le(b.face1, b.support)):
        raise SimplexError(f"faces of {b} are not below its support")


def inclusion_simplex(p: Poset, upper: int, lower: int) -> Simplex1:
    """The simplex ``(upper; upper, lower)`` running up from ``lower`` to ``upper``."""
    if not p.le(lower, upper):
        raise SimplexError(f"{p.labels[lower]} is not below {p.labels[upper]}")
    return Simplex1(upper, upper, lower)


def degenerate(a: int) -> Simplex1:
    return Simplex1(a, a, a)


def reverse_simplex(b: Simplex1) -> Simplex1:
    return Simplex1(b.support, b.face1, b.face0)


@dataclass(frozen=True)
class Path:
    steps: tuple

    def __post_init__(self):
        steps = tuple(Simplex1(*b) for b in self.steps)
        if not steps:
            raise SimplexError("a path needs at least one 1-simplex")
        for prev, nxt in zip(steps, steps[1:]):
            if prev.face0 != nxt.face1:
                raise SimplexError(f"{nxt} does not start where {prev} ends")
        object.__setattr__(self, "steps", steps)

    @property
    def start(self) -> int:
        return self.steps[0].face1

    @property
    def end(self) -> int:
        return self.steps[-1].face0

    @property
    def is_loop(self) -> bool:
        return self.start == self.end

    @property
    def support(self) -> frozenset:
        return frozenset(b.support for b in self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    def to_json(self) -> list:
        return [[int(b.support), int(b.face0), int(b.face1)] for b in self.steps]

    @classmethod
    def from_json(cls, data) -> "Path":
        return cls(tuple(Simplex1(*map(int, t)) for t in data))


def trivial_path(a: int) -> Path:
    return Path((degenerate(a),))


def reverse_path(p: Path) -> Path:
    return Path(tuple(reverse_simplex(b) for b in reversed(p.steps)))


def compose_paths(q: Path, p: Path) -> Path:
    """``q * p``: first ``p``, then ``q``."""
    if p.end != q.start:
        raise SimplexError(f"cannot compose: path ends at {p.end}, next starts at {q.start}")
    return Path(p.steps + q.steps)


def concat(*paths: Path) -> Path:
    """``concat(p1, p2, ...)`` is ``... * p2 * p1``, i.e. paths in traversal order."""
    out = paths[0]
    for q in paths[1:]:
        out = compose_paths(q, out)
    return out


def check_path(p: Poset, path: Path) -> None:
    for b in path.steps:
        check_simplex(p, b)


def inclusion_two_simplex(s: int, b: int, a: int) -> Simplex2:
    """The 2-simplex of the chain ``a <= b <= s``."""
    return Simplex2(s, Simplex1(s, s, b), Simplex1(s, s, a), Simplex1(b, b, a))


def enumerate_two_simplices(p: Poset, mode: str = "inclusion", k: int = 1000, seed=0) -> list:
    """2-simplices for validation.

    ``mode="inclusion"`` returns one simplex per chain ``a <= b <= s``
    (degenerate chains included).  ``mode="sampled"`` returns ``k`` random
    general 2-simplices drawn with ``numpy.random.default_rng(seed)``.
    """
    if mode == "inclusion":
        return [inclusion_two_simplex(s, b, a) for s, b, a in p.chains()]
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(k):
        s = int(rng.integers(p.n))
        below = p.below(s)
        a, b, c = (int(x) for x in rng.choice(below, size=3))

        def pick(x, y):
            cand = below[p.leq[x, below] & p.leq[y, below]]
            return int(rng.choice(cand))

        d0 = Simplex1(pick(c, b), c, b)
        d2 = Simplex1(pick(b, a), b, a)
        d1 = Simplex1(pick(c, a), c, a)
        out.append(Simplex2(s, d0, d1, d2))
    return out


def random_path(p: Poset, start: int, length: int, rng) -> Path:
    """Random walk of inclusion steps along the comparability graph."""
    steps = []
    a = start
    for _ in range(length):
        nbrs = p.comparability_neighbors(a)
        if not nbrs:
            steps.append(degenerate(a))
            continue
        b = int(rng.choice(nbrs))
        steps.append(Simplex1(b if p.le(a, b) else a, b, a))
        a = b
    return Path(tuple(steps))


def random_general_path(p: Poset, start: int, length: int, rng) -> Path:
    """Random walk through general 1-simplices ``(s; f0, f1)`` with random support."""
    steps = []
    a = start
    for _ in range(length):
        s = int(rng.choice(p.above(a)))
        f0 = int(rng.choice(p.below(s)))
        steps.append(Simplex1(s, f0, a))
        a = f0
    return Path(tuple(steps))


def path_from_vertices(p: Poset, vertices: Sequence[int]) -> Path:
    """Inclusion-step path visiting ``vertices``; consecutive entries must be comparable."""
    steps = []
    for a, b in zip(vertices, vertices[1:]):
        if p.le(a, b):
            steps.append(Simplex1(b, b, a))
        elif p.le(b, a):
            steps.append(Simplex1(a, b, a))
        else:
            raise SimplexError(f"{p.labels[a]} and {p.labels[b]} are not comparable")
    if not steps:
        return trivial_path(vertices[0])
    return Path(tuple(steps))
