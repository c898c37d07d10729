from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tamegauge.engine.field import CONWAY, companion, gf, matpow_mod, teichmuller_matrix
from tamegauge.engine.modp import (
    annihilator,
    intersect,
    inverse,
    nullspace,
    rank,
    row_basis,
)

# -- Conway polynomials by brute force ---------------------------------------


def polymod_mul(a, b, g, p):
    """a * b mod the monic polynomial g (coefficient lists, low degree first)."""
    n = len(g) - 1
    out = [0] * (2 * n)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    for d in range(2 * n - 1, n - 1, -1):
        c = out[d]
        if c:
            for i in range(n + 1):
                out[d - n + i] = (out[d - n + i] - c * g[i]) % p
    return out[:n]


def polymod_pow(a, e, g, p):
    n = len(g) - 1
    r = [1] + [0] * (n - 1)
    while e:
        if e & 1:
            r = polymod_mul(r, a, g, p)
        a = polymod_mul(a, a, g, p)
        e >>= 1
    return r


def prime_factors(n):
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def is_primitive(g, p):
    n = len(g) - 1
    x = [0, 1] + [0] * (n - 2) if n > 1 else [(-g[0]) % p]
    one = [1] + [0] * (n - 1)
    order = p**n - 1
    if polymod_pow(x, order, g, p) != one:
        return False
    return all(polymod_pow(x, order // r, g, p) != one for r in prime_factors(order))


def conway_oracle(p, n, known):
    """Least primitive polynomial in Conway's ordering compatible with the
    polynomials of every proper subfield."""

    def key(coeffs):
        # x^n - a_{n-1} x^{n-1} + a_{n-2} x^{n-2} - ...: compare (a_{n-1}, ..., a_0)
        return tuple(((-1) ** (n - i)) * coeffs[i] % p for i in range(n - 1, -1, -1))

    for coeffs in sorted(product(range(p), repeat=n), key=key):
        g = list(coeffs) + [1]
        if coeffs[0] == 0 or not is_primitive(g, p):
            continue
        ok = True
        for m in range(1, n):
            if n % m:
                continue
            h = list(known[m]) + [1]
            x = [0, 1] + [0] * (n - 2) if n > 1 else [(-g[0]) % p]
            y = polymod_pow(x, (p**n - 1) // (p**m - 1), g, p)
            # evaluate h at y
            acc = [0] * n
            power = [1] + [0] * (n - 1)
            for c in h:
                acc = [(u + c * v) % p for u, v in zip(acc, power)]
                power = polymod_mul(power, y, g, p)
            if any(acc):
                ok = False
                break
        if ok:
            return tuple(coeffs)
    raise AssertionError("no Conway polynomial found")


@pytest.mark.parametrize("p", [3, 5, 7])
def test_conway_table_matches_definition(p):
    known = {}
    for n in range(1, 5):
        known[n] = conway_oracle(p, n, known)
        assert CONWAY[(p, n)] == known[n]


# -- F_q arithmetic ----------------------------------------------------------


@given(st.sampled_from([(3, 2), (5, 1), (5, 2), (7, 2), (5, 3)]), st.data())
def test_field_axioms(pf, data):
    F = gf(*pf)
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1
    # Frobenius is a ring map
    assert F.frob(F.add(a, b), 1) == F.add(F.frob(a, 1), F.frob(b, 1))
    assert F.frob(a, F.f) == a
    M = F.mult_matrix(a)
    assert list(M @ np.array(F.vec(b)) % F.p) == F.vec(F.mul(a, b))


@pytest.mark.parametrize("p, f, N", [(5, 1, 6), (5, 2, 8), (7, 2, 8), (3, 3, 10)])
def test_teichmuller_lift(p, f, N):
    Z = teichmuller_matrix(p, f, N)
    P, q = p**N, p**f
    I = np.eye(f, dtype=np.int64)
    assert np.array_equal(Z % p, companion(p, f, p))
    assert np.array_equal(matpow_mod(Z, q - 1, P), I)
    assert np.array_equal(matpow_mod(Z, q, P), Z)


# -- linear algebra over F_p -------------------------------------------------


def span(rows, p, n=4):
    out = {(0,) * n}
    for coeffs in product(range(p), repeat=len(rows)):
        out.add(tuple(int(x) for x in (np.array(coeffs, dtype=np.int64) @ rows) % p))
    return out


matrices = st.integers(1, 4).flatmap(
    lambda r: st.lists(st.lists(st.integers(0, 2), min_size=4, max_size=4), min_size=r, max_size=r)
)


@given(matrices, matrices)
def test_modp_routines_against_enumeration(A, B):
    p = 3
    A = np.array(A, dtype=np.int64).reshape(-1, 4)
    B = np.array(B, dtype=np.int64).reshape(-1, 4)
    SA = span(A, p)
    assert p ** rank(A, p) == len(SA)
    assert span(row_basis(A, p), p) == SA
    SK = span(nullspace(A, p), p)
    for v in product(range(p), repeat=4):
        assert (not (A @ np.array(v) % p).any()) == (v in SK)
    assert span(intersect(A, B, p), p) == SA & span(B, p)
    Ann = annihilator(A, 4, p)
    assert Ann.shape[0] == 4 - rank(A, p)
    for v in span(Ann, p):
        assert all(int(np.dot(v, a)) % p == 0 for a in A)


def test_inverse():
    A = np.array([[1, 2], [3, 4]])
    Ai = inverse(A, 5)
    assert np.array_equal(A @ Ai % 5, np.eye(2, dtype=np.int64))
    with pytest.raises(ZeroDivisionError):
        inverse(np.array([[1, 2], [2, 4]]), 5)
