"""Unitary net representations reduced to their connection maps ``psi``.

Only the comparison unitaries ``psi[a, a~]`` (``a~ <= a``) are modelled; the
representations of local algebras that accompany them in a full net
representation need an ambient net and are left out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .cocycle import Cocycle, is_coboundary, max_op_norm, validate, VALIDATE_TOL
from .homotopy import GroupPresentation, PathFrame, presentation
from .holonomy import RelationError, from_rep
from .poset import Poset


class NetConnectionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class NetConnection:
    """Connection maps on comparable pairs, keyed like cocycle values (``upper, lower``)."""

    poset: Poset
    psi: np.ndarray

    def __post_init__(self):
        rep = validate(Cocycle(self.poset, self.psi), samples=0)
        if not rep.valid:
            raise NetConnectionError(f"composition law violated: {rep.offending}")
        object.__setattr__(self, "psi", Cocycle(self.poset, self.psi).values)

    @property
    def dim(self) -> int:
        return self.psi.shape[1]

    @classmethod
    def from_pair_values(cls, p: Poset, values: dict, dim: Optional[int] = None) -> "NetConnection":
        return cls(p, Cocycle.from_pair_values(p, values, dim).values)


def induced_cocycle(c: NetConnection) -> Cocycle:
    """``z(b) = psi[|b|, f0]^* psi[|b|, f1]``; in connection form the values are ``psi`` itself."""
    return Cocycle(c.poset, c.psi)


def trivialize(c: NetConnection, f: PathFrame, tol: float = 1e-8) -> Optional[np.ndarray]:
    """Unitaries ``W`` with ``W[a] psi[a, a~] = W[a~]``, or ``None`` when the holonomy is nontrivial."""
    w = is_coboundary(induced_cocycle(c), f, tol)
    if w is None:
        return None
    up = np.array([e[0] for e in induced_cocycle(c).pairs])
    lo = np.array([e[1] for e in induced_cocycle(c).pairs])
    if max_op_norm(w[up] @ c.psi - w[lo]) > tol:
        return None
    return w


def transform_connection(c: NetConnection, t) -> NetConnection:
    """``phi[a, a~] = T[a] psi[a, a~] T[a~]^*`` for a family of unitaries ``T``."""
    t = np.asarray(t)
    z = induced_cocycle(c)
    up = np.array([e[0] for e in z.pairs])
    lo = np.array([e[1] for e in z.pairs])
    return NetConnection(c.poset, t[up] @ c.psi @ np.conj(np.swapaxes(t[lo], 1, 2)))


def chi_twist(p: Poset, f: PathFrame, chi: Mapping, g: Optional[GroupPresentation] = None, tol: float = VALIDATE_TOL) -> NetConnection:
    """Scalar connection whose holonomy on each surviving generator is ``chi[generator]``."""
    scalars = {}
    for key, val in chi.items():
        val = complex(np.asarray(val).reshape(-1)[0])
        if abs(abs(val) - 1) > tol:
            raise RelationError(f"chi({key}) = {val} is not a unit scalar")
        scalars[key] = np.array([[val]])
    z = from_rep(p, f, scalars, g or presentation(p, f))
    return NetConnection(p, z.values)
