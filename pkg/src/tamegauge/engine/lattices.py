"""Lattices in the induced representation, computed modulo p^N.

The ambient is a fixed free Z_p-module with basis L0 (the induced lattice).
A lattice is stored as a sublattice of L0 containing p^N L0, in Howell form,
together with an exponent ``e``: the lattice meant is p^(-e) times the stored
one. Every stored lattice must have depth < N (that is, contain p^(N-1) L0)
for its reduction mod p and its containments to be decided exactly.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..core import Weight
from ..errors import KindError, PrecisionError, UnsupportedError
from ..tame import PS, TameType, jh_factor, p_tau
from . import modp
from .field import gf, matmul_mod, teichmuller_matrix
from .modules import (
    GModule,
    cosocle_parts,
    group_generators,
    jh_multiset,
    quotient,
    radical_filtration,
    radical_series,
    socle,
    socle_parts,
    submodule,
    two_layer_quotient,
)

MAX_STEPS = 64


def default_precision(f: int) -> int:
    env = os.environ.get("TAMEGAUGE_PRECISION")
    if env:
        return int(env)
    return f + 3


def _valuation(x: np.ndarray, p: int, N: int) -> np.ndarray:
    """p-adic valuation of entries of x mod p^N, with 0 having valuation N."""
    v = np.zeros(x.shape, dtype=np.int64)
    y = x.copy()
    live = y != 0
    for _ in range(N):
        step = live & (y % p == 0)
        if not step.any():
            break
        v[step] += 1
        y[step] //= p
        live = step
    v[x == 0] = N
    return v


def howell(rows: np.ndarray, p: int, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Triangular Howell basis of the span of rows plus p^N Z^n.

    Returns (T, k): T is n x n upper triangular mod p^N with T[c, c] = p^k[c]
    (k[c] = N means the column has no pivot below precision).
    """
    P = p**N
    A = np.asarray(rows, dtype=np.int64) % P
    n = A.shape[1]
    T = np.zeros((n, n), dtype=np.int64)
    k = np.full(n, N, dtype=np.int64)
    for c in range(n):
        if A.shape[0] == 0:
            break
        A = A[np.any(A != 0, axis=1)]
        if A.shape[0] == 0:
            break
        vals = _valuation(A[:, c], p, N)
        r = int(np.argmin(vals))
        kc = int(vals[r])
        if kc == N:
            continue
        pk = p**kc
        unit = int(A[r, c]) // pk
        row = A[r] * pow(unit, -1, P) % P
        A = np.delete(A, r, axis=0)
        col = A[:, c]
        nz = np.nonzero(col)[0]
        if nz.size:
            A[nz] = (A[nz] - np.outer(col[nz] // pk, row)) % P
        if kc:
            extra = row * (P // pk) % P
            if extra.any():
                A = np.vstack([A, extra])
        T[c], k[c] = row, kc
    # reduce above the pivots
    for c in range(n):
        if k[c] < N:
            pk = p ** int(k[c])
            above = T[:c, c] // pk
            nz = np.nonzero(above)[0]
            if nz.size:
                T[nz] = (T[nz] - np.outer(above[nz], T[c])) % P
    return T, k


def reduce_rows(T, k, V, p, N):
    """Reduce the rows of V by the Howell basis; returns (remainder, coords)."""
    P = p**N
    V = np.asarray(V, dtype=np.int64) % P
    X = np.zeros((V.shape[0], T.shape[0]), dtype=np.int64)
    for c in range(T.shape[0]):
        if k[c] == N:
            continue
        pk = p ** int(k[c])
        ok = V[:, c] % pk == 0
        x = np.where(ok, V[:, c] // pk, 0)
        X[:, c] = x
        nz = np.nonzero(x)[0]
        if nz.size:
            V[nz] = (V[nz] - np.outer(x[nz], T[c]) % P) % P
    return V, X


@dataclass
class Lattice:
    """p^(-e) * span(T) inside the ambient lattice; see the module docstring."""

    amb: "Ambient"
    T: np.ndarray
    k: np.ndarray
    e: int = 0

    @classmethod
    def span(cls, amb, rows, e=0, normalize=True) -> "Lattice":
        T, k = howell(rows, amb.p, amb.N)
        L = cls(amb, T, k, e)
        return L.primitive() if normalize else L

    @property
    def p(self):
        return self.amb.p

    @property
    def N(self):
        return self.amb.N

    def contains_rows(self, V) -> bool:
        R, _ = reduce_rows(self.T, self.k, V, self.p, self.N)
        return not R.any()

    @property
    def depth(self) -> int:
        """Least d with p^d L0 inside the stored lattice (N if undecided)."""
        n = self.T.shape[0]
        I = np.eye(n, dtype=np.int64)
        for d in range(self.N):
            if self.contains_rows(I * self.p**d):
                return d
        return self.N

    def guard(self, slack: int = 0) -> "Lattice":
        if self.depth + slack >= self.N:
            raise PrecisionError(
                f"lattice depth {self.depth} (+{slack}) reaches precision N={self.N}; raise N"
            )
        return self

    def basis(self) -> np.ndarray:
        self.guard()
        return self.T

    def scaled(self, j: int) -> "Lattice":
        """Same lattice, stored as p^j times the current stored lattice."""
        if j == 0:
            return self
        return Lattice.span(self.amb, self.T * self.p**j, self.e + j, normalize=False)

    def primitive(self) -> "Lattice":
        """Divide the stored lattice by the largest possible power of p."""
        a = int(_valuation(self.T, self.p, self.N).min())
        if a == 0 or a == self.N:
            return self
        self.guard()
        n = self.T.shape[0]
        rows = np.vstack([self.T // self.p**a, np.eye(n, dtype=np.int64) * self.p ** (self.N - a)])
        return Lattice.span(self.amb, rows, self.e - a, normalize=False)

    def times_p(self, n: int = 1) -> "Lattice":
        return Lattice(self.amb, self.T, self.k, self.e - n)

    def same(self, other: "Lattice") -> bool:
        a, b = _common(self, other)
        return a.contains_rows(b.T) and b.contains_rows(a.T)

    def same_up_to_homothety(self, other: "Lattice") -> bool:
        a, b = self.primitive(), other.primitive()
        return a.contains_rows(b.T) and b.contains_rows(a.T)

    def reduction(self) -> GModule:
        """The G-module L / pL over F_p, in the Howell basis."""
        T = self.basis()
        p, N = self.p, self.N
        P = p**N

        def act(A):
            img = matmul_mod(T, A.T.copy(), P)  # rows: g applied to basis rows
            R, X = reduce_rows(T, self.k, img, p, N)
            assert not R.any(), "lattice is not G-stable"
            return (X.T % p).copy()

        return GModule(
            p, self.amb.f, [act(A) for A in self.amb.gens], [act(A) for A in self.amb.invs]
        )

    def sublattice(self, V: np.ndarray) -> "Lattice":
        """pL + (lift of the F_p-subspace V of L/pL, rows in basis coordinates)."""
        T = self.basis()
        P = self.p**self.N
        lifted = matmul_mod(np.asarray(V, dtype=np.int64) % self.p, T, P)
        return Lattice.span(self.amb, np.vstack([T * self.p % P, lifted]), self.e)


def _common(a: Lattice, b: Lattice) -> tuple[Lattice, Lattice]:
    E = max(a.e, b.e)
    return a.scaled(E - a.e), b.scaled(E - b.e)


def least_power(X: Lattice, Y: Lattice) -> int:
    """Least integer n with p^n X contained in Y."""
    # compare the stored lattices and shift by the exponents, so that a large
    # gap between X.e and Y.e costs no precision
    return _least_power_stored(X, Y) + X.e - Y.e


def _least_power_stored(X: Lattice, Y: Lattice) -> int:
    Y.guard()
    p = X.p
    if Y.contains_rows(X.T):
        n = 0
        # try negative powers: X inside p^j Y
        while True:
            j = n + 1
            Yj = Lattice.span(X.amb, Y.T * p**j, normalize=False)
            Yj.guard()
            if not Yj.contains_rows(X.T):
                return -n
            n = j
    for n in range(1, X.N + 1):
        if Y.contains_rows(X.T * p**n):
            return n
    raise PrecisionError("containment undecided within precision")


def lattice_sum(*Ls: Lattice) -> Lattice:
    E = max(L.e for L in Ls)
    rows = np.vstack([L.scaled(E - L.e).T for L in Ls])
    return Lattice.span(Ls[0].amb, rows, E)


# -- the induced lattice -----------------------------------------------------


@dataclass
class Ambient:
    p: int
    f: int
    N: int
    gens: list  # four n x n matrices over Z/p^N acting on column vectors
    invs: list  # their inverses
    tau: TameType | None = None

    @property
    def n(self) -> int:
        return self.gens[0].shape[0]

    def whole(self) -> Lattice:
        return Lattice.span(self, np.eye(self.n, dtype=np.int64))

    def closure(self, rows) -> Lattice:
        """The G-stable lattice generated by rows (integer vectors)."""
        L = Lattice.span(self, rows, normalize=False)
        P = self.p**self.N
        while True:
            new = np.vstack([matmul_mod(L.T, A.T.copy(), P) for A in self.gens])
            if L.contains_rows(new):
                return L.primitive()
            L = Lattice.span(self, np.vstack([L.T, new]), normalize=False)


def _mat2(F, x, y):
    a, b, c, d = x
    e, f_, g, h = y
    m, s = F.mul, F.add
    return (s(m(a, e), m(b, g)), s(m(a, f_), m(b, h)), s(m(c, e), m(d, g)), s(m(c, f_), m(d, h)))


@lru_cache(maxsize=None)
def induced_lattice(tau: TameType, N: int | None = None) -> Ambient:
    """Functions on B\\G twisted by the Teichmueller lift of
    b -> eta(b11) eta'(b22), with G acting by right translation.

    Coset representatives: index x in F_q for [[0, 1], [1, x]], index q for
    the identity. Block (l, k) of g is chi(r_l g r_k^-1) when r_l g lies in
    B r_k.
    """
    if tau.kind != PS:
        raise KindError("the engine only builds principal series lattices")
    p, f = tau.p, tau.f
    if N is None:
        N = default_precision(f)
    if p**N >= 1 << 31:
        raise UnsupportedError(f"p^N = {p}^{N} exceeds the int64-safe range")
    F = gf(p, f)
    q = p**f
    a1, a2 = tau.exponents
    Z = teichmuller_matrix(p, f, N)
    P = p**N
    Zpow = [np.eye(f, dtype=np.int64)]
    for _ in range(q - 2):
        Zpow.append(matmul_mod(Zpow[-1], Z, P))
    reps = [(0, 1, 1, x) for x in range(q)] + [(1, 0, 0, 1)]

    def coset(h):
        a, b, c, d = h
        if c == 0:
            return q, a, d
        x = F.mul(d, F.inv(c))
        return x, F.sub(b, F.mul(x, a)), c

    n = f * (q + 1)

    def build(g):
        A = np.zeros((n, n), dtype=np.int64)
        for l, r in enumerate(reps):
            k, b11, b22 = coset(_mat2(F, r, g))
            e = (int(F.log[b11]) * a1 + int(F.log[b22]) * a2) % (q - 1)
            A[l * f : l * f + f, k * f : k * f + f] = Zpow[e]
        return A

    def scalar(Y):
        A = np.zeros((n, n), dtype=np.int64)
        for l in range(q + 1):
            A[l * f : l * f + f, l * f : l * f + f] = Y
        return A

    g1, g2, g3 = group_generators(F)
    gens = [build(g) for g in (g1, g2, g3)] + [scalar(Z)]
    g1i = (F.inv(g1[0]), 0, 0, 1)
    g2i = (1, F.neg(1), 0, 1)
    invs = [build(g) for g in (g1i, g2i, g3)] + [scalar(Zpow[q - 2])]
    return Ambient(p, f, N, gens, invs, tau)


# -- distinguished lattices --------------------------------------------------


def _check_multiplicity_free(M: GModule):
    if any(m > 1 for m in jh_multiset(M).values()):
        raise UnsupportedError("reduction is not multiplicity free")


def sublattice_with_cosocle(L: Lattice, w: Weight, order=None, check=True) -> Lattice:
    """The lattice inside L, up to homothety, whose reduction has cosocle w.

    Repeatedly replace L by the preimage of the kernel of L/pL onto the part
    of its cosocle away from w. ``order`` permutes how the unwanted cosocle
    pieces are cut (the result does not depend on it).
    """
    if check:
        _check_multiplicity_free(L.reduction())
    for _ in range(MAX_STEPS):
        M = L.reduction()
        parts = cosocle_parts(M)
        others = [u for u in parts if u != w]
        if not others:
            if w not in parts:
                raise PrecisionError("weight vanished from the cosocle")
            return L.primitive()
        if order is not None:
            others = sorted(others, key=order)[:1]
        K = modp.annihilator(np.vstack([parts[u] for u in others]), M.dim, M.p)
        L = L.sublattice(K).guard()
    raise PrecisionError("cosocle iteration did not stabilize")


def superlattice_with_socle(L: Lattice, w: Weight, order=None, check=True) -> Lattice:
    """The lattice containing L, up to homothety, whose reduction has socle w.

    Repeatedly replace L by L + p^-1 (lift of the socle of L/pL away from w).
    """
    if check:
        _check_multiplicity_free(L.reduction())
    for _ in range(MAX_STEPS):
        M = L.reduction()
        parts = socle_parts(M)
        others = [u for u in parts if u != w]
        if not others:
            if w not in parts:
                raise PrecisionError("weight vanished from the socle")
            return L.primitive()
        if order is not None:
            others = sorted(others, key=order)[:1]
        U = modp.row_basis(np.vstack([parts[u] for u in others]), M.p)
        L2 = L.sublattice(U)
        L = Lattice(L.amb, L2.T, L2.k, L2.e + 1).primitive().guard()
    raise PrecisionError("socle iteration did not stabilize")


@dataclass
class LatticeFamily:
    """Cosocle lattices L_J and socle lattices L^J for J in P_tau, each
    normalized so that the cosocle lattice at the empty set is inside it
    and not inside p times it."""

    amb: Ambient
    cosocle: dict
    socle: dict

    def gauge(self, L: Lattice) -> dict:
        """J -> least n with p^n L_J inside L, shifted to vanish at J = empty."""
        raw = {J: least_power(LJ, L) for J, LJ in self.cosocle.items()}
        return {J: v - raw[0] for J, v in raw.items()}


def _normalize(base: Lattice, L: Lattice) -> Lattice:
    n = least_power(base, L)
    return L.times_p(-n)


@lru_cache(maxsize=None)
def lattice_family(tau: TameType, N: int | None = None) -> LatticeFamily:
    amb = induced_lattice(tau, N)
    L0 = amb.whole()
    P = p_tau(tau)
    _check_multiplicity_free(L0.reduction())
    cos = {J: sublattice_with_cosocle(L0, jh_factor(tau, J), check=False) for J in P}
    soc = {J: superlattice_with_socle(L0, jh_factor(tau, J), check=False) for J in P}
    base = cos[0]
    cos = {J: _normalize(base, L) for J, L in cos.items()}
    soc = {J: _normalize(base, L) for J, L in soc.items()}
    return LatticeFamily(amb, cos, soc)


def measure_gauge(family: LatticeFamily, L: Lattice) -> dict:
    return family.gauge(L)


# -- subquotients ------------------------------------------------------------


def image_in_reduction(X: Lattice, Y: Lattice) -> np.ndarray:
    """Image of X in Y / pY (requires pY inside X inside Y), basis coordinates."""
    Xs, Ys = _common(X, Y)
    Ys.guard()
    p, N = X.p, X.N
    R, C = reduce_rows(Ys.T, Ys.k, Xs.T, p, N)
    if R.any():
        raise ValueError("X is not contained in Y")
    return modp.row_basis(C % p, p)


def cokernel_jh(X: Lattice, Y: Lattice) -> Counter:
    """JH multiset of Y / X for pY inside X inside Y."""
    M = Y.reduction()
    V = image_in_reduction(X, Y)
    if V.shape[0] == 0:
        return jh_multiset(M)
    Q, _ = quotient(M, V)
    return jh_multiset(Q) if Q.dim else Counter()


def reduction_jh(L: Lattice) -> Counter:
    return jh_multiset(L.reduction())


def cosocle_layers(L: Lattice) -> list[Counter]:
    return radical_series(L.reduction())


def nonsplit_pair(M: GModule, w1: Weight, w2: Weight) -> bool:
    """Whether the unique subquotient of M with JH factors {w1, w2} is
    non-split. Assumes M multiplicity free.

    A is the largest submodule with neither w1 nor w2 as a JH factor; in M/A
    the socle layers up to the one containing w1 and w2 cut out the
    subquotient."""
    pair = {w1, w2}
    p = M.p
    # grow A through socle layers avoiding the pair
    A = np.zeros((0, M.dim), dtype=np.int64)
    while True:
        Q, rest = quotient(M, A) if A.shape[0] else (M, list(range(M.dim)))
        parts = socle_parts(Q)
        good = [V for u, V in parts.items() if u not in pair]
        if not good:
            break
        lifted = np.zeros((sum(V.shape[0] for V in good), M.dim), dtype=np.int64)
        lifted[:, rest] = np.vstack(good)
        A = modp.row_basis(np.vstack([A, lifted]), p)
    # inside Q = M/A take the largest submodule with factors in the pair
    Q = M if A.shape[0] == 0 else quotient(M, A)[0]
    B = np.zeros((0, Q.dim), dtype=np.int64)
    while True:
        if B.shape[0]:
            R, rest = quotient(Q, B)
        else:
            R, rest = Q, list(range(Q.dim))
        parts = socle_parts(R)
        good = [V for u, V in parts.items() if u in pair]
        if not good:
            break
        lifted = np.zeros((sum(V.shape[0] for V in good), Q.dim), dtype=np.int64)
        lifted[:, rest] = np.vstack(good)
        B = modp.row_basis(np.vstack([B, lifted]), p)
    sub = submodule(Q, B)
    if set(jh_multiset(sub)) != pair:
        raise ValueError("the two weights do not form a subquotient")
    return socle(sub).shape[0] < sub.dim


def cosocle_filtration_report(L: Lattice, pairs) -> tuple[list[Counter], dict]:
    """Cosocle layers of L/pL and, for each (upper, lower) weight pair taken
    from adjacent layers, whether their two-factor subquotient is non-split.

    The pair test runs inside rad^i / rad^(i+2), which contains the
    subquotient whenever upper sits in layer i and lower in layer i+1."""
    filt = radical_filtration(L.reduction())
    layers = [c for _, c in filt]
    where = {w: i for i, c in enumerate(layers) for w in c}
    out = {}
    for up, low in pairs:
        i = where.get(up)
        if i is None or where.get(low) != i + 1:
            out[(up, low)] = False
            continue
        out[(up, low)] = nonsplit_pair(two_layer_quotient(filt[i][0]), up, low)
    return layers, out
