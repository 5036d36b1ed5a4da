"""Finite-dimensional *-algebras generated by unitary matrices."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

PIVOT_TOL = 1e-9
MEMBER_TOL = 1e-8


class NotAFactorError(ValueError):
    """The generated algebra has a nontrivial centre."""


class NotInAlgebraError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class HolonomyAlgebra:
    generators: np.ndarray = field(repr=False)  # (k, d, d)
    basis: np.ndarray = field(repr=False)  # Hilbert-Schmidt orthonormal, (m, d, d)
    center_dim: int
    commutant_dim: int
    blocks: tuple  # ((irrep dim, multiplicity), ...)

    @property
    def d(self) -> int:
        return self.basis.shape[1]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def is_factor(self) -> bool:
        return self.center_dim == 1

    def residual(self, x) -> float:
        """Relative Hilbert-Schmidt distance of ``x`` from the algebra."""
        x = np.asarray(x, dtype=np.complex128)
        coeff = np.einsum("kij,ij->k", self.basis.conj(), x)
        proj = np.tensordot(coeff, self.basis, axes=1)
        return float(np.linalg.norm(x - proj) / max(1.0, np.linalg.norm(x)))

    def contains(self, x, tol: float = MEMBER_TOL) -> bool:
        return self.residual(x) <= tol

    def center_basis(self) -> np.ndarray:
        return _center(self.basis)


def _orthonormalize(existing: list, candidates, tol: float) -> list:
    added = []
    for c in candidates:
        v = np.array(c, dtype=np.complex128)
        scale = max(1.0, np.linalg.norm(v))
        for _ in range(2):
            for b in existing + added:
                v = v - np.vdot(b, v) * b
        nv = np.linalg.norm(v)
        if nv > tol * scale:
            added.append(v / nv)
    return added


def generated_algebra(mats, tol: float = PIVOT_TOL) -> HolonomyAlgebra:
    """Span closure of words in ``mats`` and their adjoints, plus centre and block data.

    Rounds multiply every basis element on the left by every generator and
    adjoint; the loop stops when a round adds nothing.
    """
    mats = [np.asarray(m, dtype=np.complex128) for m in mats]
    if not mats:
        raise ValueError("need at least one matrix (pass the identity for the trivial algebra)")
    d = mats[0].shape[0]
    gens = mats + [m.conj().T for m in mats]
    basis = _orthonormalize([], [np.eye(d)] + gens, tol)
    frontier = list(basis)
    while frontier and len(basis) < d * d:
        new = _orthonormalize(basis, [g @ b for b in frontier for g in gens], tol)
        basis += new
        frontier = new
    basis = np.stack(basis)
    center = _center(basis)
    comm = _commutant_dim(gens, d)
    blocks = _blocks(basis, center)
    return HolonomyAlgebra(np.stack(mats), basis, center.shape[0], comm, blocks)


def null_space(a, tol: float = 1e-9) -> np.ndarray:
    """Null space with the cut ``tol * max(1, s_max)``; an all-rounding-noise ``a`` has full null space."""
    _, s, vh = scipy.linalg.svd(a, full_matrices=True)
    cut = tol * max(1.0, s[0] if s.size else 0.0)
    rank = int(np.sum(s > cut))
    return vh[rank:].conj().T


def _center(basis) -> np.ndarray:
    m = basis.shape[0]
    if m == 1:
        return basis.copy()
    # sum_i c_i [B_i, B_j] = 0 for every j
    cols = []
    for bi in basis:
        cols.append(np.concatenate([(bi @ bj - bj @ bi).ravel() for bj in basis]))
    null = null_space(np.stack(cols, axis=1))
    return np.tensordot(null.T, basis, axes=1)


def _commutant_dim(gens, d) -> int:
    eye = np.eye(d)
    rows = np.vstack([np.kron(eye, g.T) - np.kron(g, eye) for g in gens])
    return null_space(rows).shape[1]


def _blocks(basis, center) -> tuple:
    d = basis.shape[1]
    rng = np.random.default_rng(12345)
    herm = [c + c.conj().T for c in center] + [1j * (c - c.conj().T) for c in center]
    h = sum(rng.normal() * x for x in herm)
    w, v = np.linalg.eigh(h)
    groups = []
    for k in np.argsort(w):
        if groups and abs(w[k] - groups[-1][0]) < 1e-6 * max(1.0, abs(w[k])):
            groups[-1][1].append(k)
        else:
            groups.append((w[k], [k]))
    out = []
    for _, idx in groups:
        vecs = v[:, idx]
        proj = vecs @ vecs.conj().T
        cut = np.stack([(proj @ b @ proj).ravel() for b in basis])
        sub_dim = int(np.linalg.matrix_rank(cut, tol=1e-8))
        n = int(round(np.sqrt(sub_dim)))
        out.append((n, len(idx) // max(n, 1)))
    return tuple(sorted(out))


def trace_state(alg: HolonomyAlgebra, x, tol: float = MEMBER_TOL) -> complex:
    """Normalized trace ``tr(x)/d``: the unique tracial state on a factor."""
    if not alg.is_factor:
        raise NotAFactorError("trace_state is only defined on factors")
    if not alg.contains(x, tol):
        raise NotInAlgebraError(f"matrix lies outside the algebra (residual {alg.residual(x):.3g})")
    return complex(np.trace(x) / alg.d)
