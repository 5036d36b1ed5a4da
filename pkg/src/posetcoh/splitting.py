"""Charge and topological components of a cocycle, the join, and the embedding of holonomy.

With ``W[a] = z(p_(a,o))`` the frame transport of ``z``:

* charge component:      ``u^[a~, a] = W[a~] W[a]^*``
* topological component: ``chi[a~, a] = W[a~]^* u[a~, a] W[a]``
* join of ``phi`` with a topologically trivial ``z``:
  ``(phi >< z)[a~, a] = u[a~, a] W[a] phi[a~, a] W[a]^*``

Both components are gauge transforms of stored data, so they are cocycles by
construction; ``join(chi_z, charge(z)) == z`` holds exactly up to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import HolonomyAlgebra, NotInAlgebraError, generated_algebra
from .cocycle import (
    CROSS_TOL,
    Cocycle,
    CocycleError,
    frame_transport,
    gauge_transform,
    intertwiner_space,
    is_coboundary,
    max_op_norm,
    pole_holonomies,
)
from .homotopy import PathFrame


class JoinError(ValueError):
    """Join preconditions failed (charge part not trivial, or not joinable)."""


@dataclass(frozen=True, eq=False)
class TopologicalComponent(Cocycle):
    pole: int = 0


def _dagger(a):
    return np.conj(np.swapaxes(a, -1, -2))


def charge_component(z: Cocycle, f: PathFrame) -> Cocycle:
    w = frame_transport(z, f)
    up = np.array([e[0] for e in z.pairs])
    lo = np.array([e[1] for e in z.pairs])
    return Cocycle(z.poset, w[up] @ _dagger(w[lo]))


def topological_component(z: Cocycle, f: PathFrame) -> TopologicalComponent:
    chi = gauge_transform(z, frame_transport(z, f))
    return TopologicalComponent(z.poset, chi.values, pole=f.pole)


def joinability_residual(phi: Cocycle, z: Cocycle, f: PathFrame) -> float:
    """Largest relative distance of a value of ``phi`` from the pole algebra ``(z, z)_o``."""
    space = intertwiner_space(z, z, f)
    basis = np.stack(space.at(f.pole)).reshape(space.dim, -1)
    q, _ = np.linalg.qr(basis.T)
    flat = phi.values.reshape(phi.values.shape[0], -1)
    resid = flat - (flat @ q.conj()) @ q.T
    norms = np.maximum(1.0, np.linalg.norm(flat, axis=1))
    return float(np.max(np.linalg.norm(resid, axis=1) / norms))


def join(phi: Cocycle, z: Cocycle, f: PathFrame, tol: float = CROSS_TOL, check: bool = True) -> Cocycle:
    """Reassemble a cocycle from a pole-valued ``phi`` and a topologically trivial ``z``."""
    if phi.poset is not z.poset:
        raise CocycleError("cocycles live on different posets")
    if phi.dim != z.dim:
        raise JoinError(f"dimension mismatch: phi is {phi.dim}, z is {z.dim}")
    if check:
        if is_coboundary(z, f, tol) is None:
            raise JoinError("charge cocycle is not topologically trivial")
        r = joinability_residual(phi, z, f)
        if r > tol:
            raise JoinError(f"phi is not joinable with z (residual {r:.3g})")
    w = frame_transport(z, f)
    lo = np.array([e[1] for e in z.pairs])
    return Cocycle(z.poset, z.values @ w[lo] @ phi.values @ _dagger(w[lo]))


def split_join_roundtrip(z: Cocycle, f: PathFrame) -> float:
    """``max ||join(chi_z, charge(z)) - z||`` over stored pairs."""
    rebuilt = join(topological_component(z, f), charge_component(z, f), f, check=False)
    return max_op_norm(rebuilt.values - z.values)


def frame_change(z: Cocycle, f: PathFrame, g: PathFrame) -> np.ndarray:
    """``s[a] = z(q_(a,o) * reverse(p_(a,o)))``: intertwines the charge components for ``f`` and ``g``."""
    if f.pole != g.pole:
        raise ValueError("frames must share the pole")
    return frame_transport(z, g) @ _dagger(frame_transport(z, f))


def holonomy_algebra_of(z: Cocycle, f: PathFrame) -> HolonomyAlgebra:
    hol = pole_holonomies(z, f)
    return generated_algebra(list(hol) if len(hol) else [np.eye(z.dim)])


def embed_rho(z: Cocycle, f: PathFrame, x, algebra: HolonomyAlgebra = None, tol: float = CROSS_TOL) -> np.ndarray:
    """``rho_a(x) = z(p_(a,o)) x z(p_(a,o))^*`` for ``x`` in the holonomy algebra at the pole."""
    x = np.asarray(x, dtype=np.complex128)
    if algebra is None:
        algebra = holonomy_algebra_of(z, f)
    r = algebra.residual(x)
    if r > tol:
        raise NotInAlgebraError(f"x lies outside the holonomy algebra (residual {r:.3g})")
    w = frame_transport(z, f)
    return w @ x @ _dagger(w)
