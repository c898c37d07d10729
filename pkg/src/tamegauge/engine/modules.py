"""Modules for GL2(F_q) over F_q, stored by restriction of scalars over F_p.

A module of F_q-dimension n is an F_p-space of dimension f*n with four
generator matrices acting on column vectors:

    g1 = diag(gamma, 1),  g2 = [[1, 1], [0, 1]],  g3 = [[0, 1], [1, 0]],

and ``zeta``, multiplication by gamma, which carries the F_q-structure.
Homomorphisms are required to commute with all four.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..core import Weight, digits
from . import modp
from .field import gf

G1, G2, G3, ZETA = range(4)


@dataclass
class GModule:
    p: int
    f: int
    gens: list  # four (n x n) int64 arrays
    invs: list | None = field(default=None, repr=False)

    def inverses(self) -> list:
        if self.invs is None:
            self.invs = [modp.inverse(A, self.p) for A in self.gens]
        return self.invs

    @property
    def dim(self) -> int:
        return self.gens[0].shape[0]

    @property
    def q(self) -> int:
        return self.p**self.f


# -- constructors ------------------------------------------------------------


def fq_to_fp(F, A) -> np.ndarray:
    """Expand an F_q matrix (entries as field ints) into F_p blocks."""
    n, m = len(A), len(A[0])
    f = F.f
    out = np.zeros((n * f, m * f), dtype=np.int64)
    for i in range(n):
        for j in range(m):
            if A[i][j]:
                out[i * f : i * f + f, j * f : j * f + f] = F.mult_matrix(A[i][j])
    return out


def _sym_matrix(F, g, s: int, j: int):
    """Sym^s of the 2x2 matrix g, Frobenius-twisted by p^j.

    Basis X^(s-i) Y^i; (gP)(X, Y) = P(aX + cY, bX + dY)."""
    a, b, c, d = (F.frob(x, j) for x in g)

    def polymul(u, v):
        out = [0] * (len(u) + len(v) - 1)
        for i, x in enumerate(u):
            if x:
                for k, y in enumerate(v):
                    out[i + k] = F.add(out[i + k], F.mul(x, y))
        return out

    def polypow(u, n):
        out = [1]
        for _ in range(n):
            out = polymul(out, u)
        return out

    # polynomials in Y/X: aX + cY -> [a, c], bX + dY -> [b, d]
    M = [[0] * (s + 1) for _ in range(s + 1)]
    for i in range(s + 1):
        col = polymul(polypow([a, c], s - i), polypow([b, d], i))
        for k, x in enumerate(col):
            M[k][i] = x
    return M


def _kron(F, A, B):
    n, m = len(A), len(B)
    out = [[0] * (n * m) for _ in range(n * m)]
    for i in range(n):
        for j in range(n):
            if A[i][j]:
                for k in range(m):
                    for l in range(m):
                        if B[k][l]:
                            out[i * m + k][j * m + l] = F.mul(A[i][j], B[k][l])
    return out


def group_generators(F):
    """The three generators as (a, b, c, d) tuples over F_q."""
    gamma = F.gen_pow(1)
    return [(gamma, 0, 0, 1), (1, 1, 0, 1), (0, 1, 1, 0)]


@lru_cache(maxsize=None)
def simple_module(p: int, f: int, w: Weight) -> GModule:
    """det^d tensor (tensor over j of Sym^(s_j), twisted by Frobenius p^j)."""
    F = gf(p, f)
    gens = []
    for g in group_generators(F):
        A = [[1]]
        for j in range(f):
            A = _kron(F, A, _sym_matrix(F, g, w.s[j], j))
        a, b, c, d = g
        det = F.sub(F.mul(a, d), F.mul(b, c))
        dt = F.pow(det, w.d)
        A = [[F.mul(dt, x) for x in row] for row in A]
        gens.append(fq_to_fp(F, A))
    n = len(gens[0]) // f
    gamma = F.gen_pow(1)
    gens.append(fq_to_fp(F, [[gamma if i == k else 0 for k in range(n)] for i in range(n)]))
    return GModule(p, f, gens)


def direct_sum(*mods: GModule) -> GModule:
    gens = []
    for k in range(4):
        n = sum(M.dim for M in mods)
        A = np.zeros((n, n), dtype=np.int64)
        o = 0
        for M in mods:
            A[o : o + M.dim, o : o + M.dim] = M.gens[k]
            o += M.dim
        gens.append(A)
    return GModule(mods[0].p, mods[0].f, gens)


# -- sub, quotient, dual -----------------------------------------------------


def _pivots(V: np.ndarray) -> list[int]:
    return [int(np.nonzero(row)[0][0]) for row in V]


def submodule(M: GModule, V: np.ndarray) -> GModule:
    """Action on the span of the RREF rows V (assumed stable)."""
    piv = _pivots(V)
    invs = None if M.invs is None else [(A @ V.T % M.p)[piv, :] for A in M.invs]
    return GModule(M.p, M.f, [(A @ V.T % M.p)[piv, :] for A in M.gens], invs)


def quotient(M: GModule, V: np.ndarray) -> tuple[GModule, list[int]]:
    """Action on M / span(V); returns the module and the coordinate columns."""
    p = M.p
    piv = _pivots(V)
    rest = [c for c in range(M.dim) if c not in set(piv)]

    def act(A):
        R = (A - V.T @ A[piv, :]) % p if piv else A
        return R[np.ix_(rest, rest)] % p

    invs = None if M.invs is None else [act(A) for A in M.invs]
    return GModule(p, M.f, [act(A) for A in M.gens], invs), rest


def lift(V: np.ndarray, rest: list[int], n: int) -> np.ndarray:
    out = np.zeros((V.shape[0], n), dtype=np.int64)
    out[:, rest] = V
    return out


def dual(M: GModule) -> GModule:
    """F_p-dual; the field acts by transpose, group elements by inverse transpose."""
    inv = M.inverses()
    gens = [A.T.copy() for A in inv[:3]] + [M.gens[ZETA].T.copy()]
    invs = [A.T.copy() for A in M.gens[:3]] + [inv[ZETA].T.copy()]
    return GModule(M.p, M.f, gens, invs)


def dual_weight(w: Weight) -> Weight:
    q = w.p**w.f
    return Weight(w.p, w.s, (-w.d - w.S) % (q - 1))


def spin(M: GModule, vecs: np.ndarray) -> np.ndarray:
    """RREF basis of the submodule generated by the rows of vecs."""
    p = M.p
    B = modp.row_basis(vecs, p)
    while True:
        new = [B] + [(A @ B.T % p).T for A in M.gens]
        B2 = modp.row_basis(np.vstack(new), p)
        if B2.shape[0] == B.shape[0]:
            return B2
        B = B2


# -- highest weight vectors --------------------------------------------------


def u_invariants(M: GModule) -> np.ndarray:
    p, f = M.p, M.f
    A1, A2 = M.gens[G1], M.gens[G2]
    A1i = M.inverses()[G1]
    I = np.eye(M.dim, dtype=np.int64)
    blocks = []
    L, R = I, I
    for _ in range(f):
        # u(gamma^k) = g1^k u(1) g1^-k
        blocks.append((L @ A2 % p @ R - I) % p)
        L, R = L @ A1 % p, R @ A1i % p
    return modp.row_basis(modp.nullspace(np.vstack(blocks), p), p)


def _restrict(X: np.ndarray, E: np.ndarray, p: int) -> np.ndarray:
    """Matrix of X on the stable span of the RREF rows E (column convention)."""
    return (X @ E.T % p)[_pivots(E), :]


def _eigen_split(C: np.ndarray, Cz: np.ndarray, q: int, p: int, f: int) -> dict[int, np.ndarray]:
    """Eigenspaces of C for eigenvalues gamma^a, gamma acting through Cz."""
    k = C.shape[0]
    powers = [np.eye(k, dtype=np.int64)]
    for _ in range(q - 2):
        powers.append(powers[-1] @ Cz % p)
    if k == f:
        # one-dimensional over F_q: C is a scalar
        for a, Z in enumerate(powers):
            if np.array_equal(C, Z):
                return {a: np.eye(k, dtype=np.int64)}
        raise AssertionError("torus element is not F_q-scalar")
    out = {}
    found = 0
    for a, Z in enumerate(powers):
        E = modp.nullspace((C - Z) % p, p)
        if E.shape[0]:
            out[a] = modp.row_basis(E, p)
            found += E.shape[0]
            if found == k:
                break
    return out


def torus_eigenspaces(M: GModule) -> dict[tuple[int, int], np.ndarray]:
    """Joint eigenspaces in M^U of diag(gamma,1) and diag(1,gamma).

    Keys (alpha, beta) mean diag(a, delta) acts by a^alpha delta^beta."""
    p, q, f = M.p, M.q, M.f
    V = u_invariants(M)
    if V.shape[0] == 0:
        return {}
    A3 = M.gens[G3]
    Ad = A3 @ M.gens[G1] % p @ A3 % p
    C1, Cd, Cz = (_restrict(A, V, p) for A in (M.gens[G1], Ad, M.gens[ZETA]))
    out = {}
    for alpha, Ea in _eigen_split(C1, Cz, q, p, f).items():
        Dd, Dz = _restrict(Cd, Ea, p), _restrict(Cz, Ea, p)
        for beta, Eb in _eigen_split(Dd, Dz, q, p, f).items():
            out[(alpha, beta)] = modp.row_basis(Eb @ Ea % p @ V % p, p)
    return out


def candidate_weights(p: int, f: int, alpha: int, beta: int) -> list[Weight]:
    q = p**f
    S = (alpha - beta) % (q - 1)
    if S == 0:
        return [Weight(p, (0,) * f, beta), Weight(p, (p - 1,) * f, beta)]
    return [Weight(p, digits(S, p, f), beta)]


# -- homomorphisms -----------------------------------------------------------


@lru_cache(maxsize=None)
def spinning_data(p: int, f: int, w: Weight):
    """Words spanning S_w from its highest weight vector, with the
    coefficients of each generator applied to each word."""
    S = simple_module(p, f, w)
    n = S.dim
    x = np.zeros(n, dtype=np.int64)
    x[0] = 1
    basis = [x]
    words = [(-1, -1)]
    B = modp.row_basis(x.reshape(1, -1), p)
    i = 0
    while i < len(basis):
        for g in range(4):
            v = S.gens[g] @ basis[i] % p
            B2 = modp.row_basis(np.vstack([B, v]), p)
            if B2.shape[0] > B.shape[0]:
                B = B2
                basis.append(v)
                words.append((i, g))
        i += 1
    assert len(basis) == n, "highest weight vector does not generate"
    Bm = np.array(basis, dtype=np.int64)  # rows
    Binv = modp.inverse(Bm, p)
    coeffs = [(S.gens[g] @ Bm.T % p).T @ Binv % p for g in range(4)]
    return words, coeffs


def hom_from_simple(w: Weight, M: GModule, E: np.ndarray | None = None):
    """Hom(S_w, M) as the list of images of the highest weight vector.

    ``E`` (rows) restricts the search to a subspace known to contain every
    image; by default the weight space of M^U for w is used.
    Returns (Y, W): Y rows are image vectors, W[i] the image of word i.
    """
    p = M.p
    if E is None:
        q = M.q
        spaces = torus_eigenspaces(M)
        E = spaces.get(((w.S + w.d) % (q - 1), w.d))
        if E is None:
            return np.zeros((0, M.dim), dtype=np.int64), None
    words, coeffs = spinning_data(p, M.f, w)
    k = E.shape[0]
    W = np.zeros((len(words), M.dim, k), dtype=np.int64)
    W[0] = E.T
    for i, (parent, g) in enumerate(words):
        if parent >= 0:
            W[i] = M.gens[g] @ W[parent] % p
    rows = []
    for g in range(4):
        AW = np.matmul(M.gens[g], W) % p
        CW = np.tensordot(coeffs[g], W, axes=(1, 0)) % p
        rows.append(((AW - CW) % p).reshape(-1, k))
    Y = modp.nullspace(np.vstack(rows), p)
    return (Y @ E % p), W


def hom_dim(S_weight: Weight, M: GModule) -> int:
    """F_q-dimension of Hom(S_w, M)."""
    Y, _ = hom_from_simple(S_weight, M)
    return Y.shape[0] // M.f


# -- socles and radicals -----------------------------------------------------


def socle_parts(M: GModule) -> dict[Weight, np.ndarray]:
    """Isotypic components of the socle, keyed by weight."""
    p = M.p
    out = {}
    for (alpha, beta), E in sorted(torus_eigenspaces(M).items()):
        for w in candidate_weights(p, M.f, alpha, beta):
            Y, W = hom_from_simple(w, M, E)
            if Y.shape[0] == 0:
                continue
            # images of every word under every homomorphism
            sol = _coords_in(E, modp.row_basis(Y, p), p)
            imgs = np.einsum("iak,yk->yia", W, sol) % p
            out[w] = modp.row_basis(imgs.reshape(-1, M.dim), p)
    return out


def _coords_in(E: np.ndarray, vecs: np.ndarray, p: int) -> np.ndarray:
    """Coordinates of rows of vecs in the basis of rows of E."""
    R, piv = modp.rref(np.hstack([E.T, vecs.T]), p)
    k = E.shape[0]
    assert piv[:k] == list(range(k))
    return R[:k, k:].T % p


def socle(M: GModule) -> np.ndarray:
    parts = socle_parts(M)
    if not parts:
        return np.zeros((0, M.dim), dtype=np.int64)
    return modp.row_basis(np.vstack(list(parts.values())), M.p)


def socle_weights(M: GModule) -> Counter:
    return _counter(socle_parts(M), M.f)


def cosocle_parts(M: GModule) -> dict[Weight, np.ndarray]:
    """For each weight in the cosocle, the functionals (rows) cutting out
    the kernel of M onto that isotypic part."""
    return {dual_weight(w): V for w, V in socle_parts(dual(M)).items()}


def radical(M: GModule) -> np.ndarray:
    parts = cosocle_parts(M)
    if not parts:
        return np.eye(M.dim, dtype=np.int64)
    return modp.annihilator(np.vstack(list(parts.values())), M.dim, M.p)


def _counter(parts, f):
    return Counter({w: V.shape[0] // (f * w.dim) for w, V in parts.items()})


def cosocle_weights(M: GModule) -> Counter:
    return _counter(cosocle_parts(M), M.f)


def socle_series(M: GModule) -> list[Counter]:
    layers = []
    while M.dim:
        parts = socle_parts(M)
        layers.append(_counter(parts, M.f))
        V = modp.row_basis(np.vstack(list(parts.values())), M.p)
        M, _ = quotient(M, V)
    return layers


def radical_filtration(M: GModule) -> list[tuple[GModule, Counter]]:
    """The modules rad^i(M), each in its own basis, with their cosocles."""
    out = []
    while M.dim:
        parts = cosocle_parts(M)
        out.append((M, _counter(parts, M.f)))
        R = modp.annihilator(np.vstack(list(parts.values())), M.dim, M.p)
        if R.shape[0] == 0:
            break
        M = submodule(M, R)
    return out


def radical_series(M: GModule) -> list[Counter]:
    return [layer for _, layer in radical_filtration(M)]


def two_layer_quotient(M: GModule) -> GModule:
    """M / rad^2(M)."""
    R1 = radical(M)
    if R1.shape[0] == 0:
        return M
    M1 = submodule(M, R1)
    R2 = radical(M1)
    if R2.shape[0] == 0:
        return M
    return quotient(M, modp.row_basis(R2 @ R1 % M.p, M.p))[0]


def jh_multiset(M: GModule) -> Counter:
    total = Counter()
    for layer in radical_series(M):
        total += layer
    return total


def is_semisimple(M: GModule) -> bool:
    return socle(M).shape[0] == M.dim


def check_relations(M: GModule) -> bool:
    """Spot checks: orders of g1 and g3, zeta central, g3 an involution."""
    p, q = M.p, M.q
    I = np.eye(M.dim, dtype=np.int64)
    A1, _, A3, Z = M.gens
    ok = np.array_equal(A3 @ A3 % p, I)
    from .field import matpow_mod

    ok &= np.array_equal(matpow_mod(A1, q - 1, p), I)
    for A in M.gens[:3]:
        ok &= np.array_equal(A @ Z % p, Z @ A % p)
    return bool(ok)
