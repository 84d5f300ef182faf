"""Adjoints of weighted generalized shifts as finite sums of weighted generalized shifts.

For ``T = (phi, w)`` the adjoint acts by ``(T* y)[b] = sum over a in phi^-1(b) of
conj(w[a]) * y[a]``.  Enumerating the nonzero-weight part of every fiber,
``C_b = [a in phi^-1(b) : w[a] != 0]`` in ascending order, the ``i``-th term of
the decomposition reads ``y`` at the ``i``-th element of ``C_b`` with weight
``conj(w)`` there, and carries weight 0 (reading the anchor index) where
``C_b`` has fewer than ``i`` elements.  Each term is again a weighted
generalized shift, and the number of terms is the largest ``|C_b|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np

from .analysis import fiber_norm
from .core import DomainError, SumOperator, WgsOperator, zero_operator

__all__ = [
    "ANCHOR",
    "FiberTable",
    "DecompositionResult",
    "build_fibers",
    "adjoint_decompose",
    "min_term_count",
    "term_bound_from_separation",
    "adjoint_of_sum",
]

# Index read by padded (zero-weight) positions of a term.  Any index works.
ANCHOR = 0


@dataclass(frozen=True)
class FiberTable:
    """Preimages of an index map, each listed in ascending order.

    ``fibers[b]`` is ``phi^-1(b)``; ``nonzero_fibers[b]`` keeps only the
    indices whose weight is nonzero.
    """

    n: int
    fibers: Tuple[Tuple[int, ...], ...]
    nonzero_fibers: Tuple[Tuple[int, ...], ...]

    @property
    def counts(self) -> List[int]:
        return [len(c) for c in self.nonzero_fibers]

    @property
    def max_count(self) -> int:
        return max(self.counts, default=0)


@dataclass(frozen=True)
class DecompositionResult:
    """Adjoint of a weighted generalized shift as an explicit list of terms.

    Attributes
    ----------
    n : int
        Dimension of the source operator.
    terms : tuple of WgsOperator
        Terms whose sum is the adjoint; empty for the zero operator.
    anchor : int
        Index read by the zero-weight padding positions.
    fiber_counts : tuple of int
        ``|C_b|`` for every ``b``: the number of nonzero weights in each fiber.
    source_norm : float
        Norm of the source operator (largest fiber 2-norm of the weights).
    """

    n: int
    terms: Tuple[WgsOperator, ...]
    anchor: int
    fiber_counts: Tuple[int, ...]
    source_norm: float

    @property
    def index_bounds(self) -> Tuple[int, ...]:
        """Per-fiber count plus one: the strict upper bound on term indices (1-based) that carry weight."""
        return tuple(c + 1 for c in self.fiber_counts)

    def __len__(self):
        return len(self.terms)

    def as_sum(self) -> SumOperator:
        """The adjoint as a :class:`SumOperator` (the zero operator if there are no terms)."""
        if not self.terms:
            return SumOperator([zero_operator(self.n)])
        return SumOperator(self.terms)

    def apply(self, y) -> np.ndarray:
        return self.as_sum()(y)


def build_fibers(op: WgsOperator) -> FiberTable:
    fibers: List[List[int]] = [[] for _ in range(op.n)]
    nonzero: List[List[int]] = [[] for _ in range(op.n)]
    # ascending alpha gives ascending order within each fiber
    for alpha, beta in enumerate(op.phi.tolist()):
        fibers[beta].append(alpha)
        if op.weights[alpha] != 0:
            nonzero[beta].append(alpha)
    return FiberTable(op.n, tuple(map(tuple, fibers)), tuple(map(tuple, nonzero)))


def adjoint_decompose(op: WgsOperator) -> DecompositionResult:
    """Decompose the adjoint of ``op`` into weighted generalized shifts.

    Term ``i`` (0-based) maps ``b`` to the ``i``-th element ``a`` of the
    nonzero part of ``phi^-1(b)`` with weight ``conj(w[a])``.  Fibers with
    fewer elements map ``b`` to :data:`ANCHOR` with weight 0.  Only entries
    are copied and conjugated, so the dense sum of the terms equals the
    conjugate transpose of ``op`` exactly.

    Examples
    --------
    >>> res = adjoint_decompose(WgsOperator([0, 0, 0], [1, 2, 3]))
    >>> [t.phi.tolist() for t in res.terms]
    [[0, 0, 0], [1, 0, 0], [2, 0, 0]]
    >>> [t.weights.real.tolist() for t in res.terms]
    [[1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [3.0, 0.0, 0.0]]
    """
    table = build_fibers(op)
    n = op.n
    conj_w = np.conj(op.weights)
    terms = []
    for i in range(table.max_count):
        phi_i = np.full(n, ANCHOR, dtype=np.intp)
        w_i = np.zeros(n, dtype=np.complex128)
        for beta, members in enumerate(table.nonzero_fibers):
            if i < len(members):
                alpha = members[i]
                phi_i[beta] = alpha
                w_i[beta] = conj_w[alpha]
        terms.append(WgsOperator(phi_i, w_i))
    return DecompositionResult(
        n=n,
        terms=tuple(terms),
        anchor=ANCHOR,
        fiber_counts=tuple(table.counts),
        source_norm=fiber_norm(op),
    )


def min_term_count(op: WgsOperator) -> int:
    """Number of terms in the adjoint decomposition: the largest nonzero-fiber size."""
    nonzero = op.weights != 0
    if not nonzero.any():
        return 0
    return int(np.bincount(op.phi[nonzero], minlength=op.n).max())


def term_bound_from_separation(M: float, delta: float) -> int:
    """``floor(M**2 / delta**2) + 2``.

    Strict upper bound on :func:`min_term_count` for operators of norm at most
    ``M`` whose nonzero weights all have modulus at least ``delta``: a fiber
    with ``k`` such weights has ``k * delta**2 <= M**2``.
    """
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    if not M >= 0:
        raise DomainError(f"M must be nonnegative, got {M}")
    return math.floor(M**2 / delta**2) + 2


def adjoint_of_sum(s: Union[SumOperator, Sequence[WgsOperator]]) -> List[WgsOperator]:
    """Adjoint of a finite sum: the concatenated decompositions of its terms."""
    terms = s.terms if isinstance(s, SumOperator) else s
    out: List[WgsOperator] = []
    for term in terms:
        out.extend(adjoint_decompose(term).terms)
    return out
