"""Norm and structural classification of weighted generalized shifts.

All predicates work directly on ``(phi, w)`` in O(n) and never densify.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .core import Tolerance, WgsOperator, as_index_map, default_tolerance

__all__ = [
    "ClassificationReport",
    "fiber_sums",
    "fiber_norm",
    "max_fiber_cardinality",
    "is_bijective",
    "is_self_adjoint",
    "is_invertible",
    "is_isometry",
    "is_unitary",
    "invertibility_bound",
    "classify",
]


@dataclass(frozen=True)
class ClassificationReport:
    norm: float
    max_fiber_cardinality: int
    is_self_adjoint: bool
    is_invertible: bool
    is_isometry: bool
    is_unitary: bool
    invertibility_bound: Optional[float]

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["invertibility_bound"] is not None and not np.isfinite(d["invertibility_bound"]):
            # JSON has no infinity
            d["invertibility_bound"] = None
        return d


def fiber_sums(op: WgsOperator) -> np.ndarray:
    """``sum |w[a]|**2`` over ``a`` in ``phi^-1(b)``, for every ``b``."""
    return np.bincount(op.phi, weights=np.abs(op.weights) ** 2, minlength=op.n)


def fiber_norm(op: WgsOperator) -> float:
    """Operator norm: the largest 2-norm of the weights over a fiber of ``phi``."""
    return float(np.sqrt(fiber_sums(op).max()))


def max_fiber_cardinality(phi) -> int:
    if isinstance(phi, WgsOperator):
        phi = phi.phi
    phi = as_index_map(phi)
    return int(np.bincount(phi, minlength=phi.shape[0]).max())


def is_bijective(phi) -> bool:
    if isinstance(phi, WgsOperator):
        phi = phi.phi
    return max_fiber_cardinality(phi) == 1


def is_self_adjoint(op: WgsOperator, tol: Optional[Tolerance] = None) -> bool:
    """True iff for every ``t``: ``w[t] == 0`` when ``phi(phi(t)) != t``,
    and ``w[t] == conj(w[phi(t)])`` when ``phi(phi(t)) == t``."""
    tol = tol or default_tolerance()
    phi = op.phi
    w = op.weights
    for theta in range(op.n):
        image = phi[theta]
        if phi[image] != theta:
            if not tol.is_zero(w[theta]):
                return False
        elif not tol.close(w[theta], np.conj(w[image])):
            return False
    return True


def is_invertible(op: WgsOperator) -> bool:
    return is_bijective(op.phi) and bool(np.all(op.weights != 0))


def is_isometry(op: WgsOperator, tol: Optional[Tolerance] = None) -> bool:
    """``||Tx|| == ||x||`` for all ``x``: every fiber carries unit squared weight mass."""
    tol = tol or default_tolerance()
    return bool(np.all(tol.allclose(fiber_sums(op), 1.0)))


def is_unitary(op: WgsOperator, tol: Optional[Tolerance] = None) -> bool:
    tol = tol or default_tolerance()
    return is_bijective(op.phi) and bool(np.all(tol.allclose(np.abs(op.weights), 1.0)))


def invertibility_bound(op: WgsOperator) -> Optional[float]:
    """``max(|w| + 1/|w|)`` over the nonzero weights, or None if every weight is zero."""
    mod = np.abs(op.weights)
    mod = mod[mod > 0]
    if mod.size == 0:
        return None
    # subnormal weights overflow to inf, which is the honest bound
    with np.errstate(over="ignore"):
        return float(np.max(mod + 1.0 / mod))


def classify(op: WgsOperator, tol: Optional[Tolerance] = None) -> ClassificationReport:
    tol = tol or default_tolerance()
    invertible = is_invertible(op)
    return ClassificationReport(
        norm=fiber_norm(op),
        max_fiber_cardinality=max_fiber_cardinality(op.phi),
        is_self_adjoint=is_self_adjoint(op, tol),
        is_invertible=invertible,
        is_isometry=is_isometry(op, tol),
        is_unitary=is_unitary(op, tol),
        invertibility_bound=invertibility_bound(op) if np.all(op.weights != 0) else None,
    )
