"""Semisimple mod p local Galois parameters and their Serre weight sets.

A reducible parameter restricted to inertia is w^m1 + w^m2 with w the level-f
fundamental character; an irreducible one is w2^M + w2^(qM) with w2 of level
2f. Unramified twists are invisible to weight sets and are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .core import Params, Weight, digits, from_digits, has, subsets_between
from .errors import (
    NotFoundError,
    ParameterError,
    PreconditionError,
    TheoremViolation,
    UnsupportedError,
)
from .tame import (
    CUSP,
    PS,
    TameType,
    _jh_shape,
    _p_tau,
    jh_factor,
    jh_factors,
)

RED = "red"
IRR = "irr"


@dataclass(frozen=True)
class RhoBar:
    params: Params
    kind: str
    exponents: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "p": self.params.p,
            "f": self.params.f,
            "exponents": list(self.exponents),
        }

    def spec(self) -> str:
        return f"{self.kind}:" + ",".join(str(a) for a in self.exponents)


def make_reducible(params: Params, m1: int, m2: int) -> RhoBar:
    e = params.e
    return RhoBar(params, RED, (m1 % e, m2 % e))


def make_irreducible(params: Params, M: int) -> RhoBar:
    q = params.q
    m = q * q - 1
    M %= m
    if (q * M - M) % m == 0:
        raise ParameterError(f"M = {M} is fixed by q-power: not irreducible")
    return RhoBar(params, IRR, (M,))


def parse_rhobar(text: str, params: Params) -> RhoBar:
    try:
        kind, _, rest = text.partition(":")
        nums = [int(x) for x in rest.split(",")]
    except ValueError:
        raise ParameterError(f"cannot parse {text!r}") from None
    if kind == RED and len(nums) == 2:
        return make_reducible(params, *nums)
    if kind == IRR and len(nums) == 1:
        return make_irreducible(params, nums[0])
    raise ParameterError(f"cannot parse {text!r}; use red:m1,m2 or irr:M")


def all_rhobars(params: Params):
    e, q = params.e, params.q
    for m1 in range(e):
        for m2 in range(e):
            yield RhoBar(params, RED, (m1, m2))
    m = q * q - 1
    for M in range(m):
        if (q * M - M) % m:
            yield RhoBar(params, IRR, (M,))


# -- genericity --------------------------------------------------------------


def generic_witness(rho: RhoBar):
    """(r, k) exhibiting rho as generic up to the twist k, or None."""
    p, f, q = rho.params.p, rho.params.f, rho.params.q
    if rho.kind == RED:
        m1, m2 = rho.exponents
        for a, k in (((m1 - m2) % (q - 1), m2), ((m2 - m1) % (q - 1), m1)):
            r = tuple(x - 1 for x in digits(a, p, f))
            if all(0 <= x <= p - 3 for x in r):
                if any(x != 0 for x in r) and any(x != p - 3 for x in r):
                    return r, k
        return None
    m = q * q - 1
    M = rho.exponents[0]
    for k in range(q - 1):
        for base in (M, q * M):
            v = (base + (1 + q) * k) % m
            if v >= q:
                continue
            r = tuple(x - 1 for x in digits(v, p, f))
            if 1 <= r[0] <= p - 2 and all(0 <= x <= p - 3 for x in r[1:]):
                return r, k
    return None


def is_generic(rho: RhoBar) -> bool:
    return generic_witness(rho) is not None


def restrict_rhobar(rho: RhoBar) -> RhoBar:
    q = rho.params.q
    big = rho.params.doubled()
    m = q * q - 1
    if rho.kind == RED:
        m1, m2 = rho.exponents
        return RhoBar(big, RED, ((1 + q) * m1 % m, (1 + q) * m2 % m))
    M = rho.exponents[0]
    return RhoBar(big, RED, (M, q * M % m))


# -- weight sets -------------------------------------------------------------


def _antisymmetric_subsets(f: int):
    for K in range(1 << f):
        yield K | ((~K & ((1 << f) - 1)) << f)


@lru_cache(maxsize=None)
def _weight_set(params: Params, kind: str, exponents: tuple[int, ...]):
    p, f, q = params.p, params.f, params.q
    out = set()
    if kind == RED:
        e = q - 1
        m1, m2 = exponents
        for s in product(range(p), repeat=f):
            for K in range(1 << f):
                a = sum((s[j] + 1) * p**j for j in range(f) if has(K, j, f))
                b = sum((s[j] + 1) * p**j for j in range(f) if not has(K, j, f))
                d = (m1 - a) % e
                if (d + b - m2) % e == 0:
                    out.add(Weight(p, s, d))
        return frozenset(out)
    m = q * q - 1
    M = exponents[0]
    for s in product(range(p), repeat=f):
        for K in _antisymmetric_subsets(f):
            a = sum((s[j % f] + 1) * p**j for j in range(2 * f) if has(K, j, 2 * f))
            # M = (1+q) d + a; the partner exponent qM follows by antisymmetry
            r = (M - a) % m
            if r % (1 + q) == 0:
                out.add(Weight(p, s, (r // (1 + q)) % (q - 1)))
    return frozenset(out)


def weight_set(rho: RhoBar) -> frozenset[Weight]:
    return _weight_set(rho.params, rho.kind, rho.exponents)


# -- extensions --------------------------------------------------------------


def _ext_one_way(w1: Weight, w2: Weight) -> bool:
    p, f = w1.p, w1.f
    q = p**f
    s, s2 = w1.s, w2.s
    dd = (w2.d - w1.d) % (q - 1)
    if f == 1:
        for sign in (1, -1):
            if s2[0] == p - 2 - s[0] + sign:
                if (dd - (s[0] + 1 - p * (1 + sign) // 2)) % (q - 1) == 0:
                    return True
        return False
    for k in range(f):
        k1 = (k + 1) % f
        if any(s[j] != s2[j] for j in range(f) if j not in (k, k1)):
            continue
        if s2[k] != p - 2 - s[k]:
            continue
        for sign in (1, -1):
            if s2[k1] != s[k1] + sign:
                continue
            rhs = p**k * (s[k] + 1) - p ** (k + 1) * (1 + sign) // 2
            if (dd - rhs) % (q - 1) == 0:
                return True
    return False


def ext_exists(w1: Weight, w2: Weight) -> bool:
    if w1.p != w2.p or w1.f != w2.f:
        raise ParameterError("weights over different fields")
    if w1.f == 1 and (w1.s[0] == w1.p - 1 or w2.s[0] == w2.p - 1):
        raise UnsupportedError("f = 1 with s = p - 1 is not covered")
    if w1 == w2:
        return False
    return _ext_one_way(w1, w2) or _ext_one_way(w2, w1)


# -- intervals ---------------------------------------------------------------


@dataclass(frozen=True)
class WeightInterval:
    j_min: int
    j_max: int

    def to_json(self, width: int) -> dict:
        return {
            "j_min": {"width": width, "bits": self.j_min},
            "j_max": {"width": width, "bits": self.j_max},
        }


def interval_of(A, tau: TameType) -> WeightInterval | None:
    """The interval spanned by the index set A, or a theorem violation."""
    A = set(A)
    if not A:
        return None
    lo = hi = next(iter(A))
    for J in A:
        lo &= J
        hi |= J
    if lo not in A or hi not in A or set(subsets_between(lo, hi)) != A:
        raise TheoremViolation(f"modular set {sorted(A)} of {tau} is not an interval")
    return WeightInterval(lo, hi)


def modular_indices(rho: RhoBar, tau: TameType) -> list[int]:
    D = weight_set(rho)
    return [J for J, w in jh_factors(tau).items() if w in D]


def weight_interval(rho: RhoBar, tau: TameType) -> WeightInterval | None:
    if rho.params != tau.params:
        raise ParameterError("rho and tau live over different fields")
    return interval_of(modular_indices(rho, tau), tau)


# -- type searches -----------------------------------------------------------


def types_with_factor(params: Params, w: Weight, J: int, kind: str) -> list[TameType]:
    """Types of the given kind with J in P_tau and jh_factor(tau, J) = w.

    Obtained by solving the JH formulas for the type parameters."""
    p, f, q = params.p, params.f, params.q
    e = q - 1
    if w.f != f:
        raise ParameterError("weight over the wrong field")
    J0 = J ^ (1 << (f - 1)) if kind == CUSP else J
    c = []
    for i in range(f):
        if has(J, i, f):
            c.append(p - 1 - w.s[i] - (1 - has(J0, i - 1, f)))
        else:
            c.append(w.s[i] + has(J0, i - 1, f))
    if any(not 0 <= ci <= p - 1 for ci in c):
        return []
    cval = from_digits(c, p)
    c = tuple(c)
    if kind == PS and not 0 < cval < e:
        return []
    if J not in _p_tau(kind, p, c):
        return []
    s, t, extra = _jh_shape(kind, p, c, J)
    assert s == w.s
    tw = (w.d - from_digits(t, p)) % e
    if kind == PS:
        tau = TameType(params, PS, ((tw + cval) % e, tw))
        out = [tau]
    else:
        b = (tw - extra) % e
        a = ((q + 1) * b + 1 + cval) % (q * q - 1)
        out = [TameType(params, CUSP, (a,))]
    for tau in out:
        assert jh_factor(tau, J) == w
    return out


def _candidates(rho: RhoBar, w: Weight):
    f = rho.params.f
    kinds = (CUSP, PS) if rho.kind == IRR else (PS, CUSP)
    for kind in kinds:
        seen = []
        for J in range(1 << f):
            seen.extend(types_with_factor(rho.params, w, J, kind))
        yield from sorted(set(seen), key=lambda t: t.exponents)


def _require_generic(rho: RhoBar):
    if not is_generic(rho):
        raise PreconditionError(f"{rho.spec()} is not generic")


def find_type_isolating(rho: RhoBar, w: Weight) -> TameType:
    _require_generic(rho)
    D = weight_set(rho)
    if w not in D:
        raise PreconditionError(f"{w} is not a weight of {rho.spec()}")
    for tau in _candidates(rho, w):
        if set(jh_factors(tau).values()) & D == {w}:
            return tau
    raise NotFoundError(f"no isolating type for {w} and {rho.spec()}")


def find_type_covering(rho: RhoBar) -> TameType:
    _require_generic(rho)
    D = weight_set(rho)
    assert D, rho
    w0 = min(D)
    for tau in _candidates(rho, w0):
        if D <= set(jh_factors(tau).values()):
            return tau
    raise NotFoundError(f"no covering type for {rho.spec()}")


def find_type_for_pair(rho: RhoBar, w1: Weight, w2: Weight) -> TameType:
    _require_generic(rho)
    D = weight_set(rho)
    if w1 not in D or w2 not in D:
        raise PreconditionError("both weights must lie in the weight set")
    if not ext_exists(w1, w2):
        raise PreconditionError("the two weights have no extension")
    for tau in _candidates(rho, w1):
        if set(jh_factors(tau).values()) & D == {w1, w2}:
            return tau
    raise NotFoundError(f"no type for the pair {w1}, {w2} and {rho.spec()}")
