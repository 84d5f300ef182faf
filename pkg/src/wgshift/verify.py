"""Cross-check the fiber-based results for one operator against the dense oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from . import analysis, oracle
from .adjoint import adjoint_decompose, adjoint_of_sum, min_term_count
from .core import ShapeError, Tolerance, WgsOperator, apply, apply_sum, default_tolerance, inner_product

__all__ = ["Check", "VerificationReport", "verify_operator"]

NORM_RTOL = 1e-6


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.threshold)


@dataclass(frozen=True)
class VerificationReport:
    checks: List[Check]
    tolerance: Tolerance
    trials: int
    seed: int

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "trials": self.trials,
            "seed": self.seed,
            "tolerance": {"atol": self.tolerance.atol, "rtol": self.tolerance.rtol},
            "checks": [
                {"name": c.name, "residual": c.residual, "threshold": c.threshold, "passed": c.passed}
                for c in self.checks
            ],
        }

    def format_table(self) -> str:
        width = max(len(c.name) for c in self.checks)
        lines = [
            f"{c.name.ljust(width)}  residual={c.residual:.3e}  threshold={c.threshold:.1e}  "
            f"{'ok' if c.passed else 'FAIL'}"
            for c in self.checks
        ]
        lines.append(f"{'all'.ljust(width)}  {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def _random_vector(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def verify_operator(
    op: WgsOperator,
    adjoint_terms: Optional[Sequence[WgsOperator]] = None,
    trials: int = 20,
    seed: int = 0,
    tol: Optional[Tolerance] = None,
) -> VerificationReport:
    """Run the oracle checks on ``op``.

    ``adjoint_terms`` defaults to a fresh decomposition; pass stored terms to
    audit a decomposition produced elsewhere.
    """
    tol = tol or default_tolerance()
    if adjoint_terms is None:
        adjoint_terms = list(adjoint_decompose(op).terms)
    adjoint_terms = list(adjoint_terms)
    for i, t in enumerate(adjoint_terms):
        if t.n != op.n:
            raise ShapeError(f"adjoint term {i} has dimension {t.n}, operator has {op.n}")
    n = op.n
    rng = np.random.default_rng(seed)
    dense = oracle.to_dense(op)
    dense_h = oracle.conjugate_transpose(dense)
    adj_dense = oracle.to_dense_sum(adjoint_terms, n=n)

    # <Tx, y> == <x, T*y>
    worst = 0.0
    for _ in range(trials):
        x = _random_vector(rng, n)
        y = _random_vector(rng, n)
        t_star_y = apply_sum(adjoint_terms, y) if adjoint_terms else np.zeros(n, dtype=np.complex128)
        gap = abs(inner_product(apply(op, x), y) - inner_product(x, t_star_y))
        worst = max(worst, gap / (1.0 + np.linalg.norm(x) * np.linalg.norm(y)))
    checks = [Check("adjoint_identity", float(worst), tol.rtol)]

    # copies and conjugations only: must match bit for bit
    checks.append(Check("oracle_equality", float(np.max(np.abs(adj_dense - dense_h))), 0.0))
    redone = oracle.to_dense_sum(adjoint_of_sum(adjoint_terms), n=n) if adjoint_terms else np.zeros_like(dense)
    checks.append(Check("involution", float(np.max(np.abs(redone - dense))), 0.0))

    count = len([t for t in adjoint_terms if not t.is_zero()])
    checks.append(Check("term_count", float(abs(count - min_term_count(op))), 0.0))

    fib = analysis.fiber_norm(op)
    dense_norm = oracle.spectral_norm(dense)
    checks.append(Check("norm_agreement", abs(fib - dense_norm) / max(dense_norm, np.finfo(float).tiny), NORM_RTOL))

    sa = analysis.is_self_adjoint(op, tol) != oracle.hermitian_test(dense, tol.rtol)
    checks.append(Check("self_adjoint_agreement", float(sa), 0.0))
    un = analysis.is_unitary(op, tol) != oracle.unitary_test(dense, tol.rtol)
    checks.append(Check("unitary_agreement", float(un), 0.0))
    return VerificationReport(checks, tol, trials, seed)
