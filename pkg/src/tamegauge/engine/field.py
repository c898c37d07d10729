"""F_q and truncated Witt vectors W(F_q)/p^N, both in the power basis of a
Conway polynomial.

Elements of F_q are ints 0..q-1 whose base-p digits are the coefficients.
Elements of W(F_q)/p^N are handled only through their f x f multiplication
matrices over Z/p^N.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..errors import UnsupportedError

# coefficients c_0, ..., c_{f-1} of the monic Conway polynomial
CONWAY = {
    (3, 1): (1,),
    (3, 2): (2, 2),
    (3, 3): (1, 2, 0),
    (3, 4): (2, 0, 0, 2),
    (5, 1): (3,),
    (5, 2): (2, 4),
    (5, 3): (3, 3, 0),
    (5, 4): (2, 4, 4, 0),
    (7, 1): (4,),
    (7, 2): (3, 6),
    (7, 3): (4, 0, 6),
    (7, 4): (3, 4, 5, 0),
}


def conway(p: int, f: int) -> tuple[int, ...]:
    try:
        return CONWAY[(p, f)]
    except KeyError:
        raise UnsupportedError(f"no Conway polynomial stored for p={p}, f={f}") from None


def companion(p: int, f: int, modulus: int) -> np.ndarray:
    """Matrix of multiplication by x on the power basis, entries mod modulus."""
    c = conway(p, f)
    C = np.zeros((f, f), dtype=np.int64)
    for i in range(1, f):
        C[i, i - 1] = 1
    for i in range(f):
        C[i, f - 1] = (-c[i]) % modulus
    return C


class GF:
    """The field F_q with generator gamma = x (a root of the Conway polynomial)."""

    def __init__(self, p: int, f: int):
        self.p, self.f, self.q = p, f, p**f
        C = companion(p, f, p)
        q = self.q
        self.exp = np.zeros(2 * (q - 1), dtype=np.int64)
        self.log = np.full(q, -1, dtype=np.int64)
        v = np.zeros(f, dtype=np.int64)
        v[0] = 1
        for k in range(q - 1):
            n = self._encode(v)
            if self.log[n] >= 0:
                raise AssertionError("Conway polynomial is not primitive")
            self.log[n] = k
            self.exp[k] = self.exp[k + q - 1] = n
            v = C @ v % p

    def _encode(self, v) -> int:
        n = 0
        for d in reversed(list(v)):
            n = n * self.p + int(d)
        return n

    def vec(self, a: int) -> list[int]:
        out = []
        for _ in range(self.f):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def add(self, a: int, b: int) -> int:
        return self._encode([(x + y) % self.p for x, y in zip(self.vec(a), self.vec(b))])

    def neg(self, a: int) -> int:
        return self._encode([(-x) % self.p for x in self.vec(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            return 0 if n else 1
        return int(self.exp[(self.log[a] * n) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError
        return int(self.exp[(-self.log[a]) % (self.q - 1)])

    def gen_pow(self, k: int) -> int:
        return int(self.exp[k % (self.q - 1)])

    def frob(self, a: int, j: int) -> int:
        return self.pow(a, self.p**j)

    def elements(self):
        return range(self.q)

    def mult_matrix(self, a: int) -> np.ndarray:
        """f x f matrix over F_p of multiplication by a."""
        M = np.zeros((self.f, self.f), dtype=np.int64)
        for i in range(self.f):
            M[:, i] = self.vec(self.mul(a, self.gen_pow(i)) if a else 0)
        return M


@lru_cache(maxsize=None)
def gf(p: int, f: int) -> GF:
    return GF(p, f)


@lru_cache(maxsize=None)
def teichmuller_matrix(p: int, f: int, N: int) -> np.ndarray:
    """Multiplication matrix over Z/p^N of the Teichmueller lift of gamma."""
    mod = p**N
    C = companion(p, f, mod)
    q = p**f
    Z = C.copy()
    # [gamma] = lim x^(q^k); each Frobenius power gains one p-adic digit
    for _ in range(N + 1):
        Z = matpow_mod(Z, q, mod)
    return Z


def matmul_mod(A: np.ndarray, B: np.ndarray, mod: int) -> np.ndarray:
    """A @ B mod m for int64 inputs already reduced mod m < 2^31."""
    if mod < 1 << 20 and A.shape[1] <= 1 << 20:
        return (A @ B) % mod
    lo = B & 0xFFFF
    hi = B >> 16
    return ((((A @ hi) % mod) << 16) + A @ lo) % mod


def matpow_mod(A: np.ndarray, n: int, mod: int) -> np.ndarray:
    R = np.eye(A.shape[0], dtype=np.int64)
    while n:
        if n & 1:
            R = matmul_mod(R, A, mod)
        A = matmul_mod(A, A, mod)
        n >>= 1
    return R
