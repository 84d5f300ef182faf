"""Independent reference routines and hypothesis strategies shared by the tests."""

import numpy as np
from hypothesis import strategies as st

from wgshift import WgsOperator


def brute_adjoint_matrix(op):
    """Adjoint matrix from the defining identity, entry by entry:
    A*[i, j] = <e_i, A* e_j> = conj(<A e_i, e_j>) = conj((A e_i)[j])."""
    n = op.n
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        e_i = np.zeros(n, dtype=complex)
        e_i[i] = 1
        image = [op.weights[a] * e_i[op.phi[a]] for a in range(n)]
        for j in range(n):
            out[i, j] = np.conj(image[j])
    return out


def brute_norm(op):
    """Largest singular value from LAPACK, for comparison only."""
    m = np.zeros((op.n, op.n), dtype=complex)
    for a in range(op.n):
        m[a, op.phi[a]] = op.weights[a]
    return float(np.linalg.svd(m, compute_uv=False)[0])


complex_weights = st.builds(
    complex,
    st.floats(-3, 3, allow_nan=False, allow_infinity=False),
    st.floats(-3, 3, allow_nan=False, allow_infinity=False),
)


@st.composite
def operators(draw, max_n=12, weights=None):
    n = draw(st.integers(1, max_n))
    phi = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    elem = weights if weights is not None else st.one_of(st.just(0j), complex_weights)
    w = draw(st.lists(elem, min_size=n, max_size=n))
    return WgsOperator(phi, w)


@st.composite
def vectors(draw, n):
    return np.array(draw(st.lists(complex_weights, min_size=n, max_size=n)), dtype=complex)


unit_complex = st.builds(
    complex,
    st.floats(-1, 1, allow_nan=False),
    st.floats(-1, 1, allow_nan=False),
)


def random_involution_operator(rng, n):
    """Self-adjoint by construction: phi is an involution, 2-cycles carry
    conjugate pairs, fixed points carry real weights (some weights zero)."""
    perm = rng.permutation(n)
    phi = np.arange(n)
    n_pairs = int(rng.integers(0, n // 2 + 1))
    for k in range(n_pairs):
        a, b = perm[2 * k], perm[2 * k + 1]
        phi[a], phi[b] = b, a
    w = np.zeros(n, dtype=complex)
    for a in range(n):
        if rng.random() < 0.15:
            continue
        b = phi[a]
        if b == a:
            w[a] = rng.uniform(-2, 2)
        elif a < b:
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            w[a], w[b] = z, np.conj(z)
    return WgsOperator(phi, w)


def near_miss(rng, op, size=1e-3):
    """Perturb one nonzero weight by ``size`` in a direction that breaks self-adjointness."""
    w = op.weights.copy()
    support = np.flatnonzero(w)
    a = int(rng.choice(support)) if support.size else int(rng.integers(op.n))
    w[a] += size * 1j
    return WgsOperator(op.phi, w)


def random_permutation_operator(rng, n):
    """Permutation phi; each weight unimodular (exactly) or of modulus in [0.5, 2]."""
    phi = rng.permutation(n)
    angle = rng.uniform(0, 2 * np.pi, n)
    modulus = np.where(rng.random(n) < 0.7, 1.0, rng.uniform(0.5, 2, n))
    return WgsOperator(phi, modulus * np.exp(1j * angle))
