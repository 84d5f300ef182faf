"""Dense-matrix ground truth for weighted generalized shifts.

Everything here works on explicit ``n x n`` complex matrices and shares no
code path with the fiber-based routines in :mod:`wgshift.adjoint` and
:mod:`wgshift.analysis`, so the two can be cross-checked.
"""

from __future__ import annotations

import warnings
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from .core import DomainError, ShapeError, SumOperator, WgsOperator, as_vector

__all__ = [
    "DEFAULT_MAX_DIM",
    "ConvergenceWarning",
    "PowerIterationResult",
    "as_dense",
    "to_dense",
    "to_dense_sum",
    "conjugate_transpose",
    "matvec",
    "power_iteration",
    "spectral_norm",
    "hermitian_test",
    "unitary_test",
    "random_operator",
]

DEFAULT_MAX_DIM = 2048
POWER_SEED = 20240229


class ConvergenceWarning(RuntimeWarning):
    pass


class PowerIterationResult(NamedTuple):
    value: float
    converged: bool
    iterations: int


def _check_dim(n: int, max_dim: Optional[int]):
    if max_dim is not None and n > max_dim:
        raise DomainError(f"dimension {n} exceeds the dense oracle cap {max_dim}")


def as_dense(m) -> np.ndarray:
    """Validate ``m`` as a finite square complex matrix."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ShapeError(f"expected a nonempty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix has non-finite entries")
    return a


def to_dense(op: WgsOperator, max_dim: Optional[int] = DEFAULT_MAX_DIM) -> np.ndarray:
    """Row ``a`` carries ``w[a]`` in column ``phi[a]``; everything else is zero."""
    n = op.n
    _check_dim(n, max_dim)
    m = np.zeros((n, n), dtype=np.complex128)
    for row in range(n):
        m[row, op.phi[row]] = op.weights[row]
    return m


def to_dense_sum(
    s: Union[SumOperator, Sequence[WgsOperator]],
    n: Optional[int] = None,
    max_dim: Optional[int] = DEFAULT_MAX_DIM,
) -> np.ndarray:
    """Entrywise sum of :func:`to_dense` over the terms.

    An empty sequence is the zero operator and then requires ``n``.
    """
    terms = list(s.terms if isinstance(s, SumOperator) else s)
    if not terms:
        if n is None:
            raise DomainError("dimension required for an empty sum")
        _check_dim(n, max_dim)
        return np.zeros((n, n), dtype=np.complex128)
    if n is None:
        n = terms[0].n
    total = np.zeros((n, n), dtype=np.complex128)
    for i, t in enumerate(terms):
        if t.n != n:
            raise ShapeError(f"term {i} has dimension {t.n}, expected {n}")
        total += to_dense(t, max_dim=max_dim)
    return total


def conjugate_transpose(m) -> np.ndarray:
    return np.ascontiguousarray(as_dense(m).conj().T)


def matvec(m, x) -> np.ndarray:
    m = as_dense(m)
    x = as_vector(x)
    if m.shape[1] != x.shape[0]:
        raise ShapeError(f"matrix is {m.shape[0]}x{m.shape[1]}, vector has length {x.shape[0]}")
    out = np.zeros(m.shape[0], dtype=np.complex128)
    for j in range(m.shape[1]):
        out += m[:, j] * x[j]
    return out


def power_iteration(m, max_iters: int = 10000, tol: float = 1e-12, seed: int = POWER_SEED) -> PowerIterationResult:
    """Largest singular value of ``m`` by power iteration on ``m^H m``.

    The start vector is drawn from a seeded generator.  Iteration stops once
    successive Rayleigh quotients agree to relative ``tol``; otherwise the
    last estimate is returned with ``converged=False``.
    """
    if max_iters < 1:
        raise DomainError("max_iters must be at least 1")
    if not tol > 0:
        raise DomainError("tol must be positive")
    m = as_dense(m)
    gram = conjugate_transpose(m) @ m
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(m.shape[1]) + 1j * rng.standard_normal(m.shape[1])
    v /= np.linalg.norm(v)
    rq = 0.0
    for it in range(1, max_iters + 1):
        u = gram @ v
        new_rq = float(np.vdot(v, u).real)
        size = np.linalg.norm(u)
        if size == 0.0:
            # zero matrix
            return PowerIterationResult(float(np.sqrt(max(new_rq, 0.0))), True, it)
        v = u / size
        if it > 1 and abs(new_rq - rq) <= tol * abs(new_rq):
            return PowerIterationResult(float(np.sqrt(max(new_rq, 0.0))), True, it)
        rq = new_rq
    return PowerIterationResult(float(np.sqrt(max(rq, 0.0))), False, max_iters)


def spectral_norm(m, max_iters: int = 10000, tol: float = 1e-12) -> float:
    """Operator 2-norm of ``m``; warns with :class:`ConvergenceWarning` if iteration stalls."""
    res = power_iteration(m, max_iters=max_iters, tol=tol)
    if not res.converged:
        warnings.warn(
            f"power iteration did not converge in {res.iterations} iterations", ConvergenceWarning, stacklevel=2
        )
    return res.value


def hermitian_test(m, tol: float = 1e-9) -> bool:
    if tol < 0:
        raise DomainError("tol must be nonnegative")
    m = as_dense(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def unitary_test(m, tol: float = 1e-9) -> bool:
    if tol < 0:
        raise DomainError("tol must be nonnegative")
    m = as_dense(m)
    eye = np.eye(m.shape[0])
    mh = m.conj().T
    return bool(np.max(np.abs(mh @ m - eye)) <= tol and np.max(np.abs(m @ mh - eye)) <= tol)


def random_operator(n: int, seed: int, zero_weight_probability: float = 0.0) -> WgsOperator:
    """Seeded random operator for test instances.

    ``phi`` is uniform over all self-maps; each weight is zero with the given
    probability and otherwise uniform (by area) in the annulus
    ``0.1 <= |z| <= 2``.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    if not 0.0 <= zero_weight_probability <= 1.0:
        raise DomainError("zero_weight_probability must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    phi = rng.integers(0, n, size=n)
    radius = np.sqrt(rng.uniform(0.1**2, 2.0**2, size=n))
    angle = rng.uniform(0.0, 2 * np.pi, size=n)
    weights = radius * np.exp(1j * angle)
    weights[rng.random(n) < zero_weight_probability] = 0.0
    return WgsOperator(phi, weights)
