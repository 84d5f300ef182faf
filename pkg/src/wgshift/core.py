"""Weighted generalized shift operators on finite-dimensional complex l2 spaces.

The index set is always ``{0, ..., n-1}``.  A weighted generalized shift is
the pair of an index map ``phi`` (a self-map of the index set) and a complex
weight vector ``w``; it acts as ``x -> (w[a] * x[phi[a]])_a``.

Vectors are plain one-dimensional ``complex128`` numpy arrays.  Operators are
immutable: their arrays are stored read-only and every operation returns a new
value.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

__all__ = [
    "WgsError",
    "ShapeError",
    "DomainError",
    "Tolerance",
    "default_tolerance",
    "as_vector",
    "as_index_map",
    "as_weights",
    "WgsOperator",
    "SumOperator",
    "identity",
    "zero_operator",
    "basis_vector",
    "inner_product",
    "norm",
    "apply",
    "apply_sum",
]

TOLERANCE_ENV = "WGS_TOLERANCE"


class WgsError(Exception):
    """Base class for errors raised by this package."""


class ShapeError(WgsError, ValueError):
    """Dimensions of operands do not match."""


class DomainError(WgsError, ValueError):
    """An argument lies outside the domain of an operation."""


@dataclass(frozen=True)
class Tolerance:
    """Mixed absolute/relative comparison policy for complex scalars.

    ``a`` and ``b`` compare equal iff
    ``|a - b| <= atol + rtol * max(|a|, |b|)``.
    """

    atol: float = 1e-12
    rtol: float = 1e-9

    def __post_init__(self):
        if not (self.atol >= 0 and self.rtol >= 0):
            raise DomainError(f"tolerances must be nonnegative, got {self}")

    def close(self, a, b) -> bool:
        return abs(a - b) <= self.atol + self.rtol * max(abs(a), abs(b))

    def allclose(self, a, b) -> np.ndarray:
        """Elementwise version of :meth:`close`."""
        a = np.asarray(a)
        b = np.asarray(b)
        return np.abs(a - b) <= self.atol + self.rtol * np.maximum(np.abs(a), np.abs(b))

    def is_zero(self, a) -> bool:
        return abs(a) <= self.atol


def default_tolerance() -> Tolerance:
    """The comparison policy, honouring a ``WGS_TOLERANCE`` override of ``rtol``."""
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None or raw.strip() == "":
        return Tolerance()
    try:
        rtol = float(raw)
    except ValueError:
        raise DomainError(f"{TOLERANCE_ENV}={raw!r} is not a number") from None
    if not np.isfinite(rtol) or rtol < 0:
        raise DomainError(f"{TOLERANCE_ENV}={raw!r} must be a finite nonnegative number")
    return Tolerance(rtol=rtol)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def as_vector(x, n: Optional[int] = None, name: str = "x") -> np.ndarray:
    """Validate ``x`` as a finite complex vector, optionally of length ``n``."""
    v = np.asarray(x, dtype=np.complex128)
    if v.ndim != 1:
        raise ShapeError(f"{name} must be one-dimensional, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise ShapeError(f"{name} has length {v.shape[0]}, expected {n}")
    if not np.all(np.isfinite(v)):
        bad = int(np.flatnonzero(~np.isfinite(v))[0])
        raise DomainError(f"{name}[{bad}] is not finite")
    return v


def as_index_map(phi, n: Optional[int] = None) -> np.ndarray:
    """Validate ``phi`` as a total self-map of ``{0..n-1}`` (``n`` defaults to ``len(phi)``)."""
    raw = np.asarray(phi)
    if raw.ndim != 1:
        raise ShapeError(f"phi must be one-dimensional, got shape {raw.shape}")
    if raw.size and not np.issubdtype(raw.dtype, np.integer):
        if not np.all(np.equal(np.mod(raw, 1), 0)):
            raise DomainError("phi must contain integers")
    arr = raw.astype(np.intp)
    if n is None:
        n = arr.shape[0]
    if arr.shape[0] != n:
        raise ShapeError(f"phi has length {arr.shape[0]}, expected {n}")
    if n < 1:
        raise DomainError("dimension must be a positive integer")
    bad = np.flatnonzero((arr < 0) | (arr >= n))
    if bad.size:
        i = int(bad[0])
        raise DomainError(f"phi[{i}]={int(arr[i])} out of range [0,{n})")
    return arr


def as_weights(w, n: Optional[int] = None) -> np.ndarray:
    return as_vector(w, n, name="weights")


class WgsOperator:
    """Weighted generalized shift ``x -> (w[a] * x[phi[a]])_a``.

    Parameters
    ----------
    phi : array_like of int
        Index map; ``phi[a]`` is the coordinate read by output coordinate ``a``.
    weights : array_like of complex, optional
        Weight vector; defaults to all ones (the unweighted shift).
    """

    __slots__ = ("_phi", "_weights")

    def __init__(self, phi, weights=None):
        phi = as_index_map(phi)
        n = phi.shape[0]
        if weights is None:
            weights = np.ones(n, dtype=np.complex128)
        object.__setattr__(self, "_phi", _frozen(phi))
        object.__setattr__(self, "_weights", _frozen(as_weights(weights, n)))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def phi(self) -> np.ndarray:
        return self._phi

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def n(self) -> int:
        return int(self._phi.shape[0])

    def __call__(self, x) -> np.ndarray:
        return apply(self, x)

    def __add__(self, other):
        if isinstance(other, (WgsOperator, SumOperator)):
            return SumOperator([self]) + other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, WgsOperator):
            return NotImplemented
        return np.array_equal(self._phi, other._phi) and np.array_equal(self._weights, other._weights)

    def __hash__(self):
        return hash((self._phi.tobytes(), self._weights.tobytes()))

    def __repr__(self):
        return f"WgsOperator(phi={self._phi.tolist()}, weights={self._weights.tolist()})"

    def is_zero(self) -> bool:
        return not np.any(self._weights)


class SumOperator:
    """Finite nonempty sum of weighted generalized shifts sharing one dimension."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[WgsOperator]):
        terms = tuple(terms)
        if not terms:
            raise DomainError("a SumOperator needs at least one term; use zero_operator(n)")
        for i, t in enumerate(terms):
            if not isinstance(t, WgsOperator):
                raise TypeError(f"term {i} is {type(t).__name__}, expected WgsOperator")
        n = terms[0].n
        for i, t in enumerate(terms):
            if t.n != n:
                raise ShapeError(f"term {i} has dimension {t.n}, expected {n}")
        object.__setattr__(self, "_terms", terms)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def terms(self) -> tuple:
        return self._terms

    @property
    def n(self) -> int:
        return self._terms[0].n

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __call__(self, x) -> np.ndarray:
        return apply_sum(self, x)

    def __add__(self, other):
        if isinstance(other, WgsOperator):
            return SumOperator(self._terms + (other,))
        if isinstance(other, SumOperator):
            return SumOperator(self._terms + other._terms)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, SumOperator):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __repr__(self):
        return f"SumOperator({list(self._terms)!r})"


def identity(n: int) -> WgsOperator:
    return WgsOperator(np.arange(n))


def zero_operator(n: int) -> WgsOperator:
    return WgsOperator(np.zeros(n, dtype=np.intp), np.zeros(n, dtype=np.complex128))


def basis_vector(n: int, theta: int) -> np.ndarray:
    """The standard basis vector with a single 1 at coordinate ``theta``."""
    if n < 1:
        raise DomainError("dimension must be a positive integer")
    if not 0 <= theta < n:
        raise IndexError(f"theta={theta} out of range [0,{n})")
    e = np.zeros(n, dtype=np.complex128)
    e[theta] = 1.0
    return e


def inner_product(x, y) -> complex:
    """``<x, y> = sum_a x[a] * conj(y[a])``; linear in the first argument."""
    x = as_vector(x, name="x")
    y = as_vector(y, name="y")
    if x.shape != y.shape:
        raise ShapeError(f"cannot pair vectors of lengths {x.shape[0]} and {y.shape[0]}")
    return complex(np.vdot(y, x))


def norm(x) -> float:
    return float(np.linalg.norm(as_vector(x)))


def apply(op: WgsOperator, x) -> np.ndarray:
    x = as_vector(x, name="x")
    if x.shape[0] != op.n:
        raise ShapeError(f"operator has dimension {op.n}, vector has length {x.shape[0]}")
    return op.weights * x[op.phi]


def apply_sum(s: Union[SumOperator, Sequence[WgsOperator]], x) -> np.ndarray:
    if not isinstance(s, SumOperator):
        s = SumOperator(s)
    x = as_vector(x, name="x")
    if x.shape[0] != s.n:
        raise ShapeError(f"operator has dimension {s.n}, vector has length {x.shape[0]}")
    out = np.zeros(s.n, dtype=np.complex128)
    for term in s.terms:
        out += term.weights * x[term.phi]
    return out
