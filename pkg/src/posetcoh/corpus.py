"""Seeded models and cocycles used by the acceptance run and the test-suite."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .cocycle import Cocycle, gauge_transform, random_unitary, trivial_cocycle
from .holonomy import connect_charge, from_rep
from .homotopy import (
    GroupPresentation,
    PathFrame,
    _deformations,
    build_path_frame,
    loop_class,
    presentation,
)
from .poset import (
    Poset,
    build_circle_poset,
    build_directed_interval_poset,
    build_graph_interval_poset,
    figure_eight_graph,
)
from .simplicial import Path, concat, path_from_vertices, random_general_path, random_path

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class Model:
    name: str
    poset: Poset
    frame: PathFrame
    presentation: GroupPresentation

    @classmethod
    def build(cls, name: str, poset: Poset, pole: int = 0) -> "Model":
        f = build_path_frame(poset, pole)
        return cls(name, poset, f, presentation(poset, f))

    def sigma(self, *mats) -> dict:
        """Map the surviving generators, in order, to ``mats``."""
        gens = self.presentation.generator_pairs
        if len(mats) != len(gens):
            raise ValueError(f"{self.name} has {len(gens)} free generators, got {len(mats)} matrices")
        return dict(zip(gens, mats))


@dataclass(frozen=True, eq=False)
class Entry:
    name: str
    model: Model
    cocycle: Cocycle


def circle_model(n_points: int = 6, max_len: int = 4) -> Model:
    return Model.build(f"circle({n_points},{max_len})", build_circle_poset(n_points, max_len))


def figure_eight_model(max_len: int = 2) -> Model:
    return Model.build(f"figure-eight({max_len})", build_graph_interval_poset(figure_eight_graph(), max_len))


def directed_model(n_points: int = 5) -> Model:
    return Model.build(f"directed({n_points})", build_directed_interval_poset(n_points))


def random_cocycle(model: Model, d: int, rng) -> Cocycle:
    """Random holonomy on the free generators, then a random gauge transform.

    Only meaningful for models whose reduced presentation is free.
    """
    if not model.presentation.is_free:
        raise ValueError("random holonomy needs a free presentation")
    mats = [random_unitary(d, rng) for _ in model.presentation.generators]
    z = from_rep(model.poset, model.frame, model.sigma(*mats), model.presentation, dim=d)
    v = np.stack([random_unitary(d, rng) for _ in range(model.poset.n)])
    return gauge_transform(z, v)


def phase_cocycle(model: Model, theta: float) -> Cocycle:
    return from_rep(model.poset, model.frame, model.sigma(np.exp(1j * theta)), model.presentation)


def pauli_cocycle(model: Model) -> Cocycle:
    return from_rep(model.poset, model.frame, model.sigma(PAULI_X, PAULI_Z), model.presentation)


def build_corpus(seed: int = 0, n_random: int = 20) -> list:
    """Trivial, phase, Pauli/figure-eight and ``n_random`` random cocycles (d <= 3)."""
    rng = np.random.default_rng(seed)
    circle = circle_model(6, 4)
    fig8 = figure_eight_model(2)
    out = [
        Entry("trivial-circle-d1", circle, trivial_cocycle(circle.poset, 1)),
        Entry("trivial-circle-d2", circle, trivial_cocycle(circle.poset, 2)),
        Entry("trivial-fig8-d3", fig8, trivial_cocycle(fig8.poset, 3)),
        Entry("phase-2pi/3-circle", circle, phase_cocycle(circle, 2 * np.pi / 3)),
        Entry("phase-pi/3-circle", circle, phase_cocycle(circle, np.pi / 3)),
        Entry("pauli-fig8", fig8, pauli_cocycle(fig8)),
        Entry("pauli-fig8-gauged", fig8, gauge_transform(pauli_cocycle(fig8), _random_gauge(fig8, 2, rng))),
        Entry("abelian-fig8", fig8, from_rep(fig8.poset, fig8.frame, fig8.sigma(PAULI_Z, np.diag([1, 1j])), fig8.presentation)),
    ]
    # a 1-dim coboundary charge joined with the Pauli holonomy
    u = gauge_transform(trivial_cocycle(fig8.poset, 1), _random_gauge(fig8, 1, rng))
    out.append(Entry("pauli-fig8-charged", fig8, connect_charge(pauli_cocycle(fig8), u, fig8.frame)))
    for k in range(n_random):
        model = circle if k % 2 == 0 else fig8
        d = 1 + k % 3
        out.append(Entry(f"random-{k}-{model.name}-d{d}", model, random_cocycle(model, d, rng)))
    return out


def _random_gauge(model: Model, d: int, rng) -> np.ndarray:
    return np.stack([random_unitary(d, rng) for _ in range(model.poset.n)])


# ---------------------------------------------------------------------------
# paths and loops


def shortest_vertex_path(p: Poset, a: int, b: int) -> list:
    prev = {a: None}
    todo = deque([a])
    while todo:
        x = todo.popleft()
        if x == b:
            break
        for y in p.comparability_neighbors(x):
            if y not in prev:
                prev[y] = x
                todo.append(y)
    verts = [b]
    while prev[verts[-1]] is not None:
        verts.append(prev[verts[-1]])
    return verts[::-1]


def random_loop(p: Poset, base: int, walk_len: int, rng) -> Path:
    """Random inclusion walk from ``base`` closed up by a shortest path back."""
    walk = random_path(p, base, walk_len, rng)
    back = path_from_vertices(p, shortest_vertex_path(p, walk.end, base))
    return concat(walk, back)


def winding_zero_loops(model: Model, o: int, count: int, rng, walk_len=(6, 17)) -> list:
    """``count`` loops based at elements disjoint from ``o`` whose homotopy class is trivial.

    Loops that stay inside the complement of ``o`` already are skipped so
    every returned loop needs an actual deformation.
    """
    p = model.poset
    bases = np.flatnonzero(p.disjoint[o])
    out = []
    while len(out) < count:
        base = int(rng.choice(bases))
        loop = random_loop(p, base, int(rng.integers(*walk_len)), rng)
        if loop_class(model.presentation, loop) != ():
            continue
        if all(p.disjoint[o, b.support] for b in loop.steps):
            continue
        out.append(loop)
    return out


def homotopic_pairs(p: Poset, count: int, rng, moves=(1, 4), length=(2, 5)) -> list:
    """Pairs ``(path, path')`` with ``path'`` obtained by random elementary deformations."""
    out = []
    while len(out) < count:
        start = int(rng.integers(p.n))
        path = random_general_path(p, start, int(rng.integers(*length)), rng)
        steps = path.steps
        for _ in range(int(rng.integers(*moves))):
            nbrs = list(_deformations(p, steps, len(steps) + 1))
            steps = nbrs[int(rng.integers(len(nbrs)))]
        if steps != path.steps:
            out.append((path, Path(steps)))
    return out
