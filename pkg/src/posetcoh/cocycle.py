"""Unitary 1-cocycles stored in connection form.

A cocycle keeps one unitary ``u[upper, lower]`` per comparable pair
``lower <= upper`` (``u[a, a] = 1``).  Its value on a general 1-simplex
``(s; f0, f1)`` is ``u[s, f0]^* u[s, f1]``, and the cocycle identity on
2-simplices reduces to the connection law ``u[s, b] u[b, a] = u[s, a]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
import scipy.linalg

from . import _kernels
from .algebra import null_space
from .homotopy import PathFrame
from .poset import Poset
from .simplicial import Path, Simplex1, enumerate_two_simplices

VALIDATE_TOL = 1e-9
CROSS_TOL = 1e-8


class CocycleError(ValueError):
    pass


def op_norm(a) -> float:
    """Largest singular value (0 for empty input)."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, ord=2))


def max_op_norm(stack) -> float:
    stack = np.asarray(stack)
    if stack.size == 0:
        return 0.0
    return float(np.max(np.linalg.norm(stack, ord=2, axis=(-2, -1))))


@lru_cache(maxsize=64)
def _pair_table(p: Poset):
    pairs = p.comparable_pairs()
    index = {e: k for k, e in enumerate(pairs)}
    return tuple(pairs), index


@lru_cache(maxsize=64)
def _chain_table(p: Poset) -> np.ndarray:
    _, index = _pair_table(p)
    rows = [(index[(s, b)], index[(b, a)], index[(s, a)]) for s, b, a in p.chains()]
    return np.array(rows, dtype=np.int64).reshape(-1, 3)


@dataclass(frozen=True, eq=False)
class Cocycle:
    poset: Poset
    values: np.ndarray  # (n_pairs, d, d), rows follow poset.comparable_pairs()

    def __post_init__(self):
        pairs, _ = _pair_table(self.poset)
        v = np.array(self.values, dtype=np.complex128)
        if v.ndim != 3 or v.shape[0] != len(pairs) or v.shape[1] != v.shape[2]:
            raise CocycleError(f"values must have shape ({len(pairs)}, d, d), got {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def pairs(self) -> tuple:
        return _pair_table(self.poset)[0]

    def pair_index(self, upper: int, lower: int) -> int:
        try:
            return _pair_table(self.poset)[1][(upper, lower)]
        except KeyError:
            raise CocycleError(f"{lower} is not below {upper}") from None

    def u(self, upper: int, lower: int) -> np.ndarray:
        return self.values[self.pair_index(upper, lower)]

    def __call__(self, b) -> np.ndarray:
        """Value on a 1-simplex or a path."""
        if isinstance(b, Path):
            return evaluate(self, b)
        b = Simplex1(*b)
        return self.u(b.support, b.face0).conj().T @ self.u(b.support, b.face1)

    @classmethod
    def from_pair_values(cls, p: Poset, values: dict, dim: Optional[int] = None) -> "Cocycle":
        """Build from ``{(upper, lower): matrix}``; missing reflexive pairs default to 1."""
        pairs, _ = _pair_table(p)
        if dim is None:
            dim = np.atleast_2d(next(iter(values.values()))).shape[0] if values else 1
        out = np.empty((len(pairs), dim, dim), dtype=np.complex128)
        for k, (u, l) in enumerate(pairs):
            if (u, l) in values:
                out[k] = np.atleast_2d(values[(u, l)])
            elif u == l:
                out[k] = np.eye(dim)
            else:
                raise CocycleError(f"missing value for pair {(u, l)}")
        return cls(p, out)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "values": {f"{u},{l}": matrix_to_json(self.values[k]) for k, (u, l) in enumerate(self.pairs)},
        }

    @classmethod
    def from_json(cls, p: Poset, data) -> "Cocycle":
        if isinstance(data, str):
            data = json.loads(data)
        vals = {}
        for key, m in data["values"].items():
            u, l = (int(x) for x in key.split(","))
            vals[(u, l)] = matrix_from_json(m)
        return cls.from_pair_values(p, vals, int(data["dim"]))


def matrix_to_json(m) -> list:
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.asarray(m)]


def matrix_from_json(data) -> np.ndarray:
    a = np.asarray(data, dtype=float)
    return a[..., 0] + 1j * a[..., 1]


# ---------------------------------------------------------------------------


def trivial_cocycle(p: Poset, d: int = 1) -> Cocycle:
    if d < 1:
        raise CocycleError("dimension must be >= 1")
    n = len(_pair_table(p)[0])
    return Cocycle(p, np.broadcast_to(np.eye(d, dtype=np.complex128), (n, d, d)))


def gauge_transform(z: Cocycle, v) -> Cocycle:
    """``u[a~, a] -> v[a~]^* u[a~, a] v[a]``; ``v`` is an ``(n, d, d)`` array of unitaries."""
    v = np.asarray(v)
    up = np.array([e[0] for e in z.pairs])
    lo = np.array([e[1] for e in z.pairs])
    return Cocycle(z.poset, np.conj(np.swapaxes(v[up], 1, 2)) @ z.values @ v[lo])


def direct_sum(z: Cocycle, z2: Cocycle) -> Cocycle:
    if z.poset is not z2.poset:
        raise CocycleError("cocycles live on different posets")
    d1, d2 = z.dim, z2.dim
    out = np.zeros((len(z.pairs), d1 + d2, d1 + d2), dtype=np.complex128)
    out[:, :d1, :d1] = z.values
    out[:, d1:, d1:] = z2.values
    return Cocycle(z.poset, out)


def evaluate(z: Cocycle, path: Path) -> np.ndarray:
    """``z(b_n) ... z(b_1)`` for the path ``b_n * ... * b_1``."""
    upper = [z.pair_index(b.support, b.face0) for b in path.steps]
    lower = [z.pair_index(b.support, b.face1) for b in path.steps]
    return _kernels.path_product(z.values, upper, lower)


def frame_transport(z: Cocycle, f: PathFrame) -> np.ndarray:
    """``W[a] = z(p_(a,o))`` for every element, as an ``(n, d, d)`` array."""
    return np.stack([evaluate(z, f.path(a)) for a in range(z.poset.n)])


def pole_holonomies(z: Cocycle, f: PathFrame, pairs=None) -> np.ndarray:
    """``z(loop_generator(f, (u; u, l)))`` for off-tree pairs, via frame transport."""
    if pairs is None:
        pairs = f.off_tree_pairs()
    w = frame_transport(z, f)
    if not pairs:
        return np.zeros((0, z.dim, z.dim), dtype=np.complex128)
    return np.stack([w[u].conj().T @ z.u(u, l) @ w[l] for u, l in pairs])


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    valid: bool
    max_unitarity: float
    max_chain_deviation: float
    max_general_deviation: float
    n_chains: int
    n_samples: int
    offending: Optional[dict] = None

    @property
    def max_deviation(self) -> float:
        return max(self.max_unitarity, self.max_chain_deviation, self.max_general_deviation)

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "max_deviation": self.max_deviation,
            "max_unitarity": self.max_unitarity,
            "max_chain_deviation": self.max_chain_deviation,
            "max_general_deviation": self.max_general_deviation,
            "n_chains": self.n_chains,
            "n_samples": self.n_samples,
            "offending": self.offending,
        }


def validate(z: Cocycle, samples: int = 1000, seed=0, tol: float = VALIDATE_TOL) -> ValidationReport:
    """Unitarity, the connection law on every chain, and the cocycle identity on sampled 2-simplices."""
    eye = np.eye(z.dim)
    unit = np.linalg.norm(z.values @ np.conj(np.swapaxes(z.values, 1, 2)) - eye, ord=2, axis=(1, 2))
    refl = [k for k, (u, l) in enumerate(z.pairs) if u == l]
    refl_dev = np.linalg.norm(z.values[refl] - eye, ord=2, axis=(1, 2))
    chains = _chain_table(z.poset)
    chain_dev = _kernels.chain_deviation(z.values, chains)
    simplices = enumerate_two_simplices(z.poset, "sampled", k=samples, seed=seed) if samples else []
    rows = np.array(
        [
            [
                z.pair_index(c.d0.support, c.d0.face0), z.pair_index(c.d0.support, c.d0.face1),
                z.pair_index(c.d2.support, c.d2.face0), z.pair_index(c.d2.support, c.d2.face1),
                z.pair_index(c.d1.support, c.d1.face0), z.pair_index(c.d1.support, c.d1.face1),
            ]
            for c in simplices
        ],
        dtype=np.int64,
    ).reshape(-1, 6)
    gen_dev = _kernels.general_deviation(z.values, rows)

    max_unit = float(max(unit.max(initial=0.0), refl_dev.max(initial=0.0)))
    max_chain = float(chain_dev.max(initial=0.0))
    max_gen = float(gen_dev.max(initial=0.0))
    offending = None
    if max_unit > tol:
        k = int(np.argmax(unit)) if unit.max(initial=0.0) > tol else refl[int(np.argmax(refl_dev))]
        offending = {"kind": "unitarity", "pair": list(z.pairs[k])}
    elif max_chain > tol:
        k = int(np.argmax(chain_dev))
        i, j, _ = chains[k]
        s, b = z.pairs[i]
        offending = {"kind": "chain", "chain": [int(s), int(b), int(z.pairs[j][1])], "deviation": float(chain_dev[k])}
    elif max_gen > tol:
        c = simplices[int(np.argmax(gen_dev))]
        offending = {
            "kind": "general",
            "support": c.support,
            "d0": list(c.d0), "d1": list(c.d1), "d2": list(c.d2),
            "deviation": float(gen_dev.max()),
        }
    return ValidationReport(offending is None, max_unit, max_chain, max_gen, len(chains), len(simplices), offending)


# ---------------------------------------------------------------------------
# coboundaries, intertwiners, equivalence


def coboundary_residual(z: Cocycle, v) -> float:
    """``max ||u[a~, a] - v[a~]^* v[a]||`` over stored pairs."""
    v = np.asarray(v)
    up = np.array([e[0] for e in z.pairs])
    lo = np.array([e[1] for e in z.pairs])
    return max_op_norm(z.values - np.conj(np.swapaxes(v[up], 1, 2)) @ v[lo])


def is_coboundary(z: Cocycle, frame: PathFrame, tol: float = CROSS_TOL) -> Optional[np.ndarray]:
    """Witness ``v`` with ``z(b) = v[f0]^* v[f1]``, or ``None``.

    The candidate is ``v[a] = z(p_(a,o))^-1``; any witness agrees with it up
    to a global unitary, so failure of this one means none exists.
    """
    v = np.conj(np.swapaxes(frame_transport(z, frame), 1, 2))
    return v if coboundary_residual(z, v) <= tol else None


def intertwiner_residual(t, z: Cocycle, z2: Cocycle) -> float:
    """``max ||t[a~] u[a~, a] - u2[a~, a] t[a]||`` over stored pairs (enough for all 1-simplices)."""
    t = np.asarray(t)
    up = np.array([e[0] for e in z.pairs])
    lo = np.array([e[1] for e in z.pairs])
    return max_op_norm(t[up] @ z.values - z2.values @ t[lo])


@dataclass(frozen=True, eq=False)
class IntertwinerSpace:
    source: Cocycle
    target: Cocycle
    basis: list = field(repr=False)  # each (n, d_target, d_source)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def at(self, a: int) -> list:
        return [t[a] for t in self.basis]

    def max_residual(self) -> float:
        return max((intertwiner_residual(t, self.source, self.target) for t in self.basis), default=0.0)


def intertwiner_space(z: Cocycle, z2: Cocycle, frame: PathFrame, rcond: float = 1e-9) -> IntertwinerSpace:
    """Basis of ``(z, z2)``: solve the loop constraints at the pole, then transport.

    ``t_o z(l) = z2(l) t_o`` for every off-tree loop generator ``l``, and
    ``t_a = z2(p_(a,o)) t_o z(p_(a,o))^*``.
    """
    if z.poset is not z2.poset:
        raise CocycleError("cocycles live on different posets")
    d1, d2 = z.dim, z2.dim
    pairs = frame.off_tree_pairs()
    h1 = pole_holonomies(z, frame, pairs)
    h2 = pole_holonomies(z2, frame, pairs)
    # row-major vec: vec(A X B) = (A kron B^T) vec(X)
    blocks = [np.kron(np.eye(d2), a.T) - np.kron(b, np.eye(d1)) for a, b in zip(h1, h2)]
    if blocks:
        null = null_space(np.vstack(blocks), rcond)
    else:
        null = np.eye(d1 * d2)
    w1 = frame_transport(z, frame)
    w2 = frame_transport(z2, frame)
    basis = []
    for k in range(null.shape[1]):
        t_o = null[:, k].reshape(d2, d1)
        basis.append(w2 @ t_o @ np.conj(np.swapaxes(w1, 1, 2)))
    return IntertwinerSpace(z, z2, basis)


def equivalent(z: Cocycle, z2: Cocycle, frame: PathFrame, seed=0, retries: int = 16, tol: float = CROSS_TOL) -> Optional[np.ndarray]:
    """Unitary intertwiner ``t`` from ``z`` to ``z2`` if one is found, else ``None``.

    Random combinations of an intertwiner basis are polar-decomposed; for
    intertwiners between unitary cocycles the unitary polar factor is again
    an intertwiner.  ``None`` after all retries is not a proof.
    """
    if z.dim != z2.dim:
        return None
    if z is z2:
        return np.broadcast_to(np.eye(z.dim, dtype=np.complex128), (z.poset.n, z.dim, z.dim)).copy()
    space = intertwiner_space(z, z2, frame)
    if space.dim == 0:
        return None
    rng = np.random.default_rng(seed)
    o = frame.pole
    basis_o = np.stack(space.at(o))
    w1 = frame_transport(z, frame)
    w2 = frame_transport(z2, frame)
    for _ in range(retries):
        c = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
        t_o = np.tensordot(c, basis_o, axes=1)
        if np.linalg.svd(t_o, compute_uv=False).min() < 1e-10:
            continue
        u_o, _ = scipy.linalg.polar(t_o)
        t = w2 @ u_o @ np.conj(np.swapaxes(w1, 1, 2))
        if intertwiner_residual(t, z, z2) <= tol:
            return t
    return None


def is_unitary_family(t, tol: float = CROSS_TOL) -> bool:
    t = np.asarray(t)
    eye = np.eye(t.shape[-1])
    return max_op_norm(t @ np.conj(np.swapaxes(t, -1, -2)) - eye) <= tol


def random_unitary(d: int, rng) -> np.ndarray:
    """Haar-random unitary (QR of a complex Ginibre matrix with phase fix)."""
    a = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))
