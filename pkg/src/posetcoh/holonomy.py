"""Holonomy of cocycles: representation matrices, factor data, characters, and cocycles from representations."""

from __future__ import annotations

import itertools
from typing import Mapping, Optional

import numpy as np

from .algebra import HolonomyAlgebra, NotAFactorError, generated_algebra, trace_state
from .cocycle import CROSS_TOL, Cocycle, CocycleError, direct_sum, evaluate, is_coboundary, validate
from .homotopy import (
    GroupPresentation,
    PathFrame,
    free_reduce,
    h1_invariants,
    loop_generator,
    presentation,
    word_to_str,
)
from .poset import Poset
from .simplicial import Path, Simplex1
from .splitting import join, topological_component

SQRT_TOL = 1e-6


class RelationError(ValueError):
    """Matrices assigned to generators violate a relation of the presentation."""


def holonomy_matrices(z: Cocycle, f: PathFrame) -> dict:
    """``{(upper, lower): z(loop_generator(f, (upper; upper, lower)))}`` over off-tree pairs."""
    return {e: evaluate(z, loop_generator(f, Simplex1(e[0], e[0], e[1]))) for e in f.off_tree_pairs()}


def holonomy_algebra(z: Cocycle, f: PathFrame) -> HolonomyAlgebra:
    mats = list(holonomy_matrices(z, f).values())
    return generated_algebra(mats or [np.eye(z.dim)])


def topological_dimension(z: Cocycle, f: PathFrame, algebra: Optional[HolonomyAlgebra] = None) -> int:
    alg = algebra or holonomy_algebra(z, f)
    if not alg.is_factor:
        raise NotAFactorError(f"holonomy algebra has centre of dimension {alg.center_dim}; tau is undefined")
    root = np.sqrt(alg.dim)
    tau = int(round(root))
    if abs(root - tau) >= SQRT_TOL:
        raise NotAFactorError(f"factor dimension {alg.dim} is not a perfect square")
    return tau


def character(z: Cocycle, f: PathFrame, loop: Path, algebra: Optional[HolonomyAlgebra] = None) -> complex:
    """Normalized trace of the holonomy of a loop at the pole."""
    if loop.start != f.pole or loop.end != f.pole:
        raise ValueError("loop is not based at the pole")
    alg = algebra or holonomy_algebra(z, f)
    return trace_state(alg, evaluate(z, loop))


def word_matrix(word, mats: Mapping[int, np.ndarray], d: int) -> np.ndarray:
    """Left-to-right product of letter matrices; letter ``k+1`` uses ``mats[k]``, ``-(k+1)`` its inverse."""
    out = np.eye(d, dtype=np.complex128)
    for x in word:
        m = mats[abs(x) - 1]
        out = out @ (m if x > 0 else m.conj().T)
    return out


def reduced_words(n_gens: int, max_len: int):
    """Freely reduced words of length ``<= max_len`` over ``n_gens`` generators (local numbering)."""
    letters = [k for g in range(1, n_gens + 1) for k in (g, -g)]
    yield ()
    layer = [()]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        yield from nxt
        layer = nxt


def character_table(z: Cocycle, f: PathFrame, g: Optional[GroupPresentation] = None, max_len: int = 4) -> dict:
    """``{word string: tr(hol(word))/d}`` over reduced words in the surviving generators.

    Generators are named ``g0, g1, ...`` in the order of ``g.generators``.
    """
    g = g or presentation(f.poset, f)
    hol = holonomy_matrices(z, f)
    mats = {k: hol[g.pairs[gen]] for k, gen in enumerate(g.generators)}
    out = {}
    for w in reduced_words(len(mats), max_len):
        out[word_to_str(w)] = complex(np.trace(word_matrix(w, mats, z.dim)) / z.dim)
    return out


def conjugate_cocycle(z: Cocycle) -> Cocycle:
    """Entrywise complex conjugate."""
    return Cocycle(z.poset, np.conj(z.values))


def _sigma_by_raw_index(g: GroupPresentation, sigma: Mapping) -> dict:
    idx = g.pair_index
    out = {}
    for key, m in sigma.items():
        if isinstance(key, str):
            key = tuple(int(x) for x in key.split(","))
        out[idx[tuple(key)]] = np.atleast_2d(np.asarray(m, dtype=np.complex128))
    missing = [g.pairs[k] for k in g.generators if k not in out]
    if missing:
        raise RelationError(f"no matrix given for generators {missing}")
    extra = sorted(set(out) - set(g.generators))
    if extra:
        raise RelationError(f"{[g.pairs[k] for k in extra]} are not free generators of the presentation")
    return out


def from_rep(
    p: Poset,
    f: PathFrame,
    sigma: Mapping,
    g: Optional[GroupPresentation] = None,
    tol: float = CROSS_TOL,
    dim: Optional[int] = None,
) -> Cocycle:
    """Cocycle whose holonomy on each surviving generator is the given matrix.

    ``sigma`` maps surviving generator pairs ``(upper, lower)`` (or ``"upper,lower"``)
    to unitaries; ``dim`` is only needed when there are no generators.
    Every relation of the reduced and of the raw presentation
    is checked after substitution.
    """
    g = g or presentation(p, f)
    mats = _sigma_by_raw_index(g, sigma)
    dims = {m.shape for m in mats.values()}
    if len(dims) > 1:
        raise RelationError(f"matrices of different shapes: {dims}")
    d = dims.pop()[0] if dims else (dim or 1)
    if dim is not None and d != dim:
        raise RelationError(f"matrices are {d}x{d}, expected dim {dim}")
    for m in mats.values():
        if np.linalg.norm(m @ m.conj().T - np.eye(d), ord=2) > tol:
            raise RelationError("generator matrices must be unitary")
    worst = 0.0
    for r in itertools.chain(g.relations, g.raw_relations):
        letters = [x for gen in r for x in _expand(g, gen)]
        worst = max(worst, float(np.linalg.norm(word_matrix(letters, mats, d) - np.eye(d), ord=2)))
    if worst > tol:
        raise RelationError(f"relation violated by {worst:.3g}")
    values = {}
    for u, l in p.comparable_pairs():
        values[(u, l)] = word_matrix(g.pair_word(u, l), mats, d)
    return Cocycle.from_pair_values(p, values, d)


def _expand(g: GroupPresentation, letter: int):
    w = g.substitution[abs(letter) - 1]
    return w if letter > 0 else tuple(-x for x in reversed(w))


def connect_charge(z_sigma: Cocycle, u: Cocycle, f: PathFrame) -> Cocycle:
    """Join the topological component of ``z_sigma`` with ``n`` copies of ``u`` (``n = dim z_sigma``).

    ``u`` must be topologically trivial.  For ``dim u > 1`` the topological
    values act on the copy index, i.e. as ``phi (x) 1``.
    """
    n = z_sigma.dim
    chi = topological_component(z_sigma, f)
    charge = u
    for _ in range(n - 1):
        charge = direct_sum(charge, u)
    phi = Cocycle(chi.poset, np.stack([np.kron(x, np.eye(u.dim)) for x in chi.values]))
    return join(phi, charge, f)


def holonomy_report(z: Cocycle, f: PathFrame, max_word_len: int = 4, samples: int = 1000, seed=0) -> dict:
    g = presentation(f.poset, f)
    alg = holonomy_algebra(z, f)
    rank, torsion = h1_invariants(g)
    report = {
        "algebra_dim": alg.dim,
        "factor": alg.is_factor,
        "center_dim": alg.center_dim,
        "commutant_dim": alg.commutant_dim,
        "tau": None,
        "blocks": [list(b) for b in alg.blocks],
        "validation": validate(z, samples=samples, seed=seed).to_json(),
        "coboundary": is_coboundary(z, f) is not None,
        "h1": {"rank": rank, "torsion": torsion},
        "pole": int(f.pole),
        "generators": {f"g{k}": f"{g.pairs[gen][0]},{g.pairs[gen][1]}" for k, gen in enumerate(g.generators)},
        "characters": {},
    }
    if alg.is_factor:
        report["tau"] = topological_dimension(z, f, alg)
        table = character_table(z, f, g, max_word_len)
        report["characters"] = {w: [c.real, c.imag] for w, c in table.items()}
    return report
