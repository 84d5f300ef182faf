"""Adjoint invariance of additive semigroups of alphabet-weighted shifts.

Fix a weight alphabet ``A`` (a subset of the complex plane that is closed
under conjugation) and consider all finite sums of weighted generalized
shifts whose weights lie in ``A`` or are zero.  Adjoints of such sums are again
such sums when the dimension is finite or when ``A`` stays away from 0.  When 0
is a limit point of ``A``, the adjoint of a single shift needs arbitrarily
many terms as the dimension grows; :func:`run_truncation_study` exhibits
this on a family of truncations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .adjoint import adjoint_of_sum, min_term_count
from .analysis import fiber_norm, invertibility_bound
from .core import DomainError, SumOperator, Tolerance, WgsOperator, default_tolerance

__all__ = [
    "WeightAlphabet",
    "FiniteSet",
    "Annulus",
    "NullSequence",
    "ClosureReport",
    "TruncationStudy",
    "is_conjugate_invariant",
    "zero_is_limit_point",
    "predict_adjoint_invariance",
    "check_closure",
    "counterexample_operator",
    "run_truncation_study",
]


class WeightAlphabet:
    """A set of admissible nonzero weights.  Zero is always admitted separately."""

    kind: str = ""

    def contains(self, z: complex, tol: Optional[Tolerance] = None) -> bool:
        raise NotImplementedError

    def admits(self, z: complex, tol: Optional[Tolerance] = None) -> bool:
        """Membership in the alphabet with zero adjoined."""
        tol = tol or default_tolerance()
        return tol.is_zero(z) or self.contains(z, tol)


@dataclass(frozen=True)
class FiniteSet(WeightAlphabet):
    elements: Tuple[complex, ...]
    kind = "finite"

    def __post_init__(self):
        elems = tuple(complex(z) for z in self.elements)
        if not elems:
            raise DomainError("a finite alphabet needs at least one element")
        for i, z in enumerate(elems):
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise DomainError(f"element {i} is not finite")
            if z == 0:
                raise DomainError("0 must not be listed; it is always admitted")
        if len(set(elems)) != len(elems):
            raise DomainError("alphabet elements must be distinct")
        object.__setattr__(self, "elements", elems)

    def contains(self, z, tol=None):
        tol = tol or default_tolerance()
        return any(tol.close(z, e) for e in self.elements)


@dataclass(frozen=True)
class Annulus(WeightAlphabet):
    """All ``z`` with ``|z| >= delta``."""

    delta: float
    kind = "annulus"

    def __post_init__(self):
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise DomainError(f"delta must be a positive finite number, got {self.delta}")

    def contains(self, z, tol=None):
        tol = tol or default_tolerance()
        r = abs(z)
        return r >= self.delta or tol.close(r, self.delta)


@dataclass(frozen=True)
class NullSequence(WeightAlphabet):
    """The elements ``t_1, t_2, ...`` of a closed-form sequence tending to 0.

    Rules
    -----
    ``"reciprocal"``
        ``t_k = 1 / (k + 1)``.
    ``"geometric"``
        ``t_k = scale * ratio**k`` with ``0 < ratio < 1``.  ``scale`` defaults
        to half the largest value keeping ``|t_k| < 1/k`` for every ``k``.

    Every emitted prefix is checked for ``0 < |t_{k+1}| < |t_k| < 1/k``.
    """

    rule: str = "reciprocal"
    ratio: Optional[float] = None
    scale: Optional[complex] = None
    kind = "null_sequence"

    def __post_init__(self):
        if self.rule == "reciprocal":
            if self.ratio is not None or self.scale is not None:
                raise DomainError("the reciprocal rule takes no parameters")
        elif self.rule == "geometric":
            if self.ratio is None or not 0 < self.ratio < 1:
                raise DomainError(f"geometric rule needs 0 < ratio < 1, got {self.ratio}")
            if self.scale is None:
                object.__setattr__(self, "scale", 0.5 / _max_k_rk(self.ratio))
            else:
                object.__setattr__(self, "scale", complex(self.scale))
                if self.scale == 0:
                    raise DomainError("scale must be nonzero")
                if abs(self.scale) * _max_k_rk(self.ratio) >= 1:
                    raise DomainError(f"scale {self.scale} violates |t_k| < 1/k")
        else:
            raise DomainError(f"unknown null-sequence rule {self.rule!r}")

    def element(self, k: int) -> complex:
        if k < 1:
            raise IndexError(f"sequence index starts at 1, got {k}")
        if self.rule == "reciprocal":
            return complex(1.0 / (k + 1))
        return complex(self.scale * self.ratio**k)

    def prefix(self, count: int) -> List[complex]:
        """``[t_1, ..., t_count]``, validated against the decay constraint."""
        out = [self.element(k) for k in range(1, count + 1)]
        for k, t in enumerate(out, start=1):
            if not 0 < abs(t) < 1.0 / k:
                raise DomainError(f"t_{k}={t} violates 0 < |t_k| < 1/k")
            if k > 1 and not abs(t) < abs(out[k - 2]):
                raise DomainError(f"t_{k}={t} is not strictly smaller in modulus than t_{k - 1}")
        return out

    def square_sum_limit(self) -> float:
        """``sum_{k>=1} |t_k|**2`` in closed form."""
        if self.rule == "reciprocal":
            return math.pi**2 / 6 - 1
        r2 = self.ratio**2
        return abs(self.scale) ** 2 * r2 / (1 - r2)

    def _candidate_index(self, modulus: float) -> int:
        if self.rule == "reciprocal":
            return round(1.0 / modulus - 1)
        return round(math.log(modulus / abs(self.scale)) / math.log(self.ratio))

    def contains(self, z, tol=None):
        tol = tol or default_tolerance()
        r = abs(z)
        if r == 0 or r >= 1:
            return False
        k0 = self._candidate_index(r)
        return any(k >= 1 and tol.close(z, self.element(k)) for k in (k0 - 1, k0, k0 + 1))


def _max_k_rk(ratio: float) -> float:
    # k * r**k peaks near k = -1/ln(r)
    peak = -1.0 / math.log(ratio)
    ks = {1, max(1, math.floor(peak)), math.ceil(peak)}
    return max(k * ratio**k for k in ks)


@dataclass(frozen=True)
class ClosureReport:
    closed: bool
    witnesses: List[Tuple[int, int, complex]] = field(default_factory=list)
    adjoint_terms: List[WgsOperator] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "closed": self.closed,
            "adjoint_term_count": len(self.adjoint_terms),
            "witnesses": [
                {"term": t, "index": b, "weight": [w.real, w.imag]} for t, b, w in self.witnesses
            ],
        }


@dataclass(frozen=True)
class TruncationStudy:
    dimensions: List[int]
    term_counts: List[int]
    norm_bounds: List[float]
    invertibility_bounds: List[float]

    def __post_init__(self):
        lengths = {len(self.dimensions), len(self.term_counts), len(self.norm_bounds), len(self.invertibility_bounds)}
        if len(lengths) != 1:
            raise DomainError("study columns must have equal length")
        if any(b <= a for a, b in zip(self.dimensions, self.dimensions[1:])):
            raise DomainError("dimensions must be strictly ascending")

    def rows(self):
        return list(zip(self.dimensions, self.term_counts, self.norm_bounds, self.invertibility_bounds))

    def to_dict(self) -> dict:
        return {
            "dimensions": list(self.dimensions),
            "term_counts": list(self.term_counts),
            "norm_bounds": list(self.norm_bounds),
            "invertibility_bounds": list(self.invertibility_bounds),
        }

    def format_table(self) -> str:
        header = ("n", "terms", "norm", "sup(|w|+1/|w|)")
        body = [(str(n), str(c), f"{nb:.10f}", f"{ib:.6f}") for n, c, nb, ib in self.rows()]
        widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]
        lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in [header, *body]]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return "\n".join(lines)


def is_conjugate_invariant(a: WeightAlphabet, samples: int = 64, tol: Optional[Tolerance] = None) -> bool:
    """Whether ``conj(z)`` lies in ``a`` for every ``z`` in ``a``.

    Null sequences are spot-checked on their first ``samples`` elements.
    """
    if samples < 1:
        raise DomainError("samples must be at least 1")
    tol = tol or default_tolerance()
    if isinstance(a, FiniteSet):
        return all(a.contains(z.conjugate(), tol) for z in a.elements)
    if isinstance(a, Annulus):
        return True
    if isinstance(a, NullSequence):
        return all(a.contains(t.conjugate(), tol) for t in a.prefix(samples))
    raise TypeError(f"unsupported alphabet {type(a).__name__}")


def zero_is_limit_point(a: WeightAlphabet) -> bool:
    if isinstance(a, (FiniteSet, Annulus)):
        return False
    if isinstance(a, NullSequence):
        return True
    raise TypeError(f"unsupported alphabet {type(a).__name__}")


def predict_adjoint_invariance(a: WeightAlphabet, tau_finite: bool) -> bool:
    """Whether sums of ``a``-weighted shifts are closed under adjoints.

    True iff the index set is finite or 0 is not a limit point of ``a``.
    """
    if not is_conjugate_invariant(a):
        raise DomainError(f"alphabet {a!r} is not closed under conjugation")
    return bool(tau_finite) or not zero_is_limit_point(a)


def check_closure(
    s: Union[SumOperator, Sequence[WgsOperator]], a: WeightAlphabet, tol: Optional[Tolerance] = None
) -> ClosureReport:
    """Decompose the adjoint of ``s`` and check its weights stay in ``a`` or zero.

    Raises :class:`DomainError` if ``s`` itself has a weight outside the
    alphabet.  Alphabets that are not conjugation-closed are accepted; their
    failures show up as witnesses ``(term index, coordinate, weight)``.
    """
    tol = tol or default_tolerance()
    terms = s.terms if isinstance(s, SumOperator) else tuple(s)
    for i, term in enumerate(terms):
        for b, w in enumerate(term.weights.tolist()):
            if not a.admits(w, tol):
                raise DomainError(f"term {i} weights[{b}]={w} is not in the alphabet or zero")
    adj = adjoint_of_sum(terms)
    witnesses = [
        (i, b, w)
        for i, term in enumerate(adj)
        for b, w in enumerate(term.weights.tolist())
        if not a.admits(w, tol)
    ]
    return ClosureReport(closed=not witnesses, witnesses=witnesses, adjoint_terms=adj)


def counterexample_operator(n: int, rule: NullSequence) -> WgsOperator:
    """Every coordinate reads coordinate 1; weights ``(0, t_1, ..., t_{n-1})``.

    Its adjoint has a single fiber with ``n - 1`` nonzero weights, so it needs
    ``n - 1`` terms, while its norm stays bounded in ``n``.
    """
    if n < 2:
        raise DomainError(f"n must be at least 2, got {n}")
    weights = np.zeros(n, dtype=np.complex128)
    weights[1:] = rule.prefix(n - 1)
    return WgsOperator(np.ones(n, dtype=np.intp), weights)


def run_truncation_study(rule: NullSequence, dimensions: Sequence[int]) -> TruncationStudy:
    dims = [int(d) for d in dimensions]
    if not dims:
        raise DomainError("at least one dimension is required")
    if any(d < 2 for d in dims):
        raise DomainError("every dimension must be at least 2")
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise DomainError("dimensions must be strictly ascending")
    counts, norms, inv = [], [], []
    for n in dims:
        op = counterexample_operator(n, rule)
        counts.append(min_term_count(op))
        norms.append(fiber_norm(op))
        inv.append(invertibility_bound(op))
    return TruncationStudy(dims, counts, norms, inv)
