import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from wgshift import (
    Annulus,
    DomainError,
    FiniteSet,
    NullSequence,
    SumOperator,
    WgsOperator,
    adjoint_of_sum,
    check_closure,
    conjugate_transpose,
    counterexample_operator,
    fiber_norm,
    is_conjugate_invariant,
    min_term_count,
    predict_adjoint_invariance,
    run_truncation_study,
    term_bound_from_separation,
    to_dense_sum,
    zero_is_limit_point,
)
from wgshift.adjoint import adjoint_decompose


def _random_sum(rng, alphabet_elements, max_terms=4, max_n=12):
    n = int(rng.integers(1, max_n + 1))
    pool = [0] + list(alphabet_elements)
    terms = []
    for _ in range(int(rng.integers(1, max_terms + 1))):
        phi = rng.integers(0, n, n)
        w = [pool[k] for k in rng.integers(0, len(pool), n)]
        terms.append(WgsOperator(phi, w))
    return SumOperator(terms)


def test_finite_set_validation():
    with pytest.raises(DomainError):
        FiniteSet([0, 1])
    with pytest.raises(DomainError):
        FiniteSet([1, 1])
    with pytest.raises(DomainError):
        FiniteSet([])


@pytest.mark.parametrize(
    "alphabet, expected",
    [
        (FiniteSet([1, -1]), True),
        (FiniteSet([1j]), False),
        (FiniteSet([1 + 1j, 1 - 1j]), True),
        (Annulus(0.5), True),
        (NullSequence(), True),
        (NullSequence("geometric", 0.5), True),
        (NullSequence("geometric", 0.5, 0.5j), False),
    ],
)
def test_is_conjugate_invariant(alphabet, expected):
    assert is_conjugate_invariant(alphabet, samples=32) is expected


@pytest.mark.parametrize(
    "alphabet, expected",
    [(FiniteSet([1]), False), (NullSequence(), True), (Annulus(0.1), False)],
)
def test_zero_is_limit_point(alphabet, expected):
    assert zero_is_limit_point(alphabet) is expected


def test_predict_adjoint_invariance():
    assert predict_adjoint_invariance(FiniteSet([1, -1]), tau_finite=False)
    assert not predict_adjoint_invariance(NullSequence(), tau_finite=False)
    assert predict_adjoint_invariance(NullSequence(), tau_finite=True)
    assert predict_adjoint_invariance(Annulus(2.0), tau_finite=False)
    with pytest.raises(DomainError):
        predict_adjoint_invariance(FiniteSet([1j]), tau_finite=True)


def test_null_sequence_rules():
    rec = NullSequence()
    assert rec.prefix(3) == [0.5, 1 / 3, 0.25]
    assert rec.contains(1 / 7) and not rec.contains(0.3) and not rec.contains(1.0)
    geo = NullSequence("geometric", 0.9)
    ts = geo.prefix(200)
    assert all(0 < abs(t) < 1 / k for k, t in enumerate(ts, start=1))
    assert geo.contains(ts[57]) and not geo.contains(ts[57] * 1.01)
    with pytest.raises(DomainError):
        NullSequence("geometric", 0.5, 3.0)
    with pytest.raises(DomainError):
        NullSequence("geometric", 1.5)
    with pytest.raises(DomainError):
        NullSequence("fibonacci")
    assert rec.square_sum_limit() == pytest.approx(math.pi**2 / 6 - 1)
    assert geo.square_sum_limit() == pytest.approx(sum(abs(t) ** 2 for t in geo.prefix(2000)), rel=1e-12)


def test_alphabet_membership():
    assert Annulus(0.5).contains(0.5j) and not Annulus(0.5).contains(0.49)
    assert FiniteSet([1j]).admits(0) and not FiniteSet([1j]).contains(0)


def test_closure_zero_one_weights():
    rng = np.random.default_rng(2)
    alphabet = FiniteSet([1])
    for _ in range(30):
        s = _random_sum(rng, [1])
        report = check_closure(s, alphabet)
        assert report.closed and report.witnesses == []
        assert all(set(t.weights.tolist()) <= {0, 1} for t in report.adjoint_terms)


@pytest.mark.parametrize("elements", [[1j, -1j], [1 + 1j, 1 - 1j]])
def test_closure_conjugate_invariant_sets(elements):
    rng = np.random.default_rng(5)
    for _ in range(30):
        s = _random_sum(rng, elements)
        report = check_closure(s, FiniteSet(elements))
        assert report.closed
        np.testing.assert_array_equal(
            to_dense_sum(report.adjoint_terms, n=s.n), conjugate_transpose(to_dense_sum(s))
        )


def test_closure_reports_witnesses_for_non_invariant_alphabet():
    s = SumOperator([WgsOperator([1, 0], [1j, 0])])
    report = check_closure(s, FiniteSet([1j]))
    assert not report.closed
    assert report.witnesses == [(0, 1, -1j)]


def test_closure_precondition():
    with pytest.raises(DomainError, match="weights\\[1\\]"):
        check_closure(SumOperator([WgsOperator([0, 0], [1, 0.5])]), FiniteSet([1]))


def test_closure_exhaustive_small():
    # every sum of up to two {0,1}-weighted shifts on n <= 3
    alphabet = FiniteSet([1])
    for n in (1, 2, 3):
        ops = [
            WgsOperator(phi, w)
            for phi in itertools.product(range(n), repeat=n)
            for w in itertools.product([0, 1], repeat=n)
        ]
        for op in ops:
            assert check_closure([op], alphabet).closed
        rng = np.random.default_rng(n)
        for i, j in rng.integers(0, len(ops), (200, 2)):
            assert check_closure([ops[i], ops[j]], alphabet).closed


@pytest.mark.parametrize("delta", [0.5, 1.0, 2.0])
def test_separation_bound_on_annulus(delta):
    rng = np.random.default_rng(int(delta * 10))
    alphabet = Annulus(delta)
    for _ in range(40):
        n = int(rng.integers(1, 30))
        modulus = delta * rng.uniform(1, 3, n) * (rng.random(n) < 0.8)
        op = WgsOperator(rng.integers(0, max(1, n // 3), n), modulus * np.exp(2j * np.pi * rng.random(n)))
        assert check_closure([op], alphabet).closed
        assert min_term_count(op) < term_bound_from_separation(fiber_norm(op), delta)


def test_counterexample_operator():
    op = counterexample_operator(3, NullSequence())
    assert op.phi.tolist() == [1, 1, 1]
    np.testing.assert_array_equal(op.weights, [0, 0.5, 1 / 3])
    op2 = counterexample_operator(2, NullSequence())
    np.testing.assert_array_equal(op2.weights, [0, 0.5])
    assert fiber_norm(op2) == 0.5
    with pytest.raises(DomainError):
        counterexample_operator(1, NullSequence())


def test_counterexample_norm_at_100():
    # exact partial sum: sum_{k=1}^{99} 1/(k+1)^2
    exact = sum(Fraction(1, (k + 1) ** 2) for k in range(1, 100))
    assert float(exact) == pytest.approx(0.63498, abs=5e-6)
    op = counterexample_operator(100, NullSequence())
    assert fiber_norm(op) ** 2 == pytest.approx(float(exact), rel=1e-13)


def test_counterexample_adjoint_needs_n_minus_one_terms():
    for n in (2, 5, 17):
        op = counterexample_operator(n, NullSequence())
        res = adjoint_decompose(op)
        assert len(res.terms) == n - 1
        assert check_closure([op], NullSequence()).closed


def test_truncation_study():
    study = run_truncation_study(NullSequence(), [2, 3, 4])
    assert study.term_counts == [1, 2, 3]
    again = run_truncation_study(NullSequence(), [2, 3, 4])
    assert study == again
    big = run_truncation_study(NullSequence(), [2, 8, 32, 128, 512])
    assert big.term_counts == [n - 1 for n in big.dimensions]
    assert all(a <= b for a, b in zip(big.norm_bounds, big.norm_bounds[1:]))
    assert all(nb < math.sqrt(math.pi**2 / 6 - 1) for nb in big.norm_bounds)
    assert all(ib > n for ib, n in zip(big.invertibility_bounds, big.dimensions))
    geo = run_truncation_study(NullSequence("geometric", 0.8), [2, 4, 8])
    assert geo.term_counts == [1, 3, 7]
    table = study.format_table()
    assert table.splitlines()[0].split()[:2] == ["n", "terms"]
    assert len(table.splitlines()) == 5


@pytest.mark.parametrize("dims", [[], [1, 2], [4, 3], [2, 2]])
def test_truncation_study_rejects_bad_dimensions(dims):
    with pytest.raises(DomainError):
        run_truncation_study(NullSequence(), dims)


def test_prediction_matches_observation():
    rng = np.random.default_rng(13)
    for elements in ([1], [1, -1], [1j, -1j]):
        a = FiniteSet(elements)
        assert predict_adjoint_invariance(a, tau_finite=True)
        for _ in range(10):
            s = _random_sum(rng, elements)
            assert check_closure(s, a).closed
            assert len(adjoint_of_sum(s)) <= sum(min_term_count(t) for t in s)
    assert not predict_adjoint_invariance(NullSequence(), tau_finite=False)
    counts = run_truncation_study(NullSequence(), [2, 16, 128, 1024]).term_counts
    assert counts == sorted(counts) and counts[-1] == 1023
