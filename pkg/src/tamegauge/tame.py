"""Tame inertial types for GL2 and the Jordan-Hoelder factors of their reductions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .core import (
    Params,
    Weight,
    complement,
    digits,
    from_digits,
    full,
    has,
    is_regular_weight,
)
from .errors import (
    InvalidIndexError,
    KindError,
    NormFactorError,
    ParameterError,
    ScalarTypeError,
    UnsupportedError,
)

PS = "ps"
CUSP = "cusp"


@dataclass(frozen=True)
class TameType:
    """Principal series ``exponents = (a_eta, a_eta')`` mod q - 1, or
    cuspidal ``exponents = (a_psi,)`` mod q^2 - 1."""

    params: Params
    kind: str
    exponents: tuple[int, ...]

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def f(self) -> int:
        return self.params.f

    @cached_property
    def c(self) -> int:
        if self.kind == PS:
            a, a2 = self.exponents
            return (a - a2) % self.params.e
        return _cusp_decomposition(self.params.q, self.exponents[0])[1]

    @cached_property
    def b(self) -> int:
        if self.kind != CUSP:
            raise KindError("b is only defined for cuspidal types")
        return _cusp_decomposition(self.params.q, self.exponents[0])[0]

    @cached_property
    def c_digits(self) -> tuple[int, ...]:
        return digits(self.c, self.p, self.f)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "p": self.p,
            "f": self.f,
            "exponents": list(self.exponents),
        }

    def spec(self) -> str:
        return f"{self.kind}:" + ",".join(str(a) for a in self.exponents)

    def __str__(self):
        return f"{self.spec()} (p={self.p}, f={self.f}, c={list(self.c_digits)})"


def make_ps_type(params: Params, a_eta: int, a_eta2: int) -> TameType:
    e = params.e
    a_eta, a_eta2 = a_eta % e, a_eta2 % e
    if a_eta == a_eta2:
        raise ScalarTypeError("equal exponents give a scalar type")
    return TameType(params, PS, (a_eta, a_eta2))


@lru_cache(maxsize=None)
def _cusp_decomposition(q: int, a_psi: int) -> tuple[int, int]:
    # a_psi = (q+1) b + 1 + c mod q^2 - 1, 0 <= b <= q-2, 0 <= c <= q-1
    # c is forced mod q + 1; the residue q is exactly the norm-factoring case
    m = q * q - 1
    c = (a_psi - 1) % (q + 1)
    if c == q:
        raise NormFactorError(f"{a_psi} is divisible by q + 1 = {q + 1}")
    return ((a_psi - 1 - c) % m) // (q + 1), c


def make_cuspidal_type(params: Params, a_psi: int) -> TameType:
    q = params.q
    a_psi %= q * q - 1
    if a_psi % (q + 1) == 0:
        raise NormFactorError(f"{a_psi} is divisible by q + 1 = {q + 1}")
    return TameType(params, CUSP, (a_psi,))


def parse_type(text: str, params: Params) -> TameType:
    try:
        kind, _, rest = text.partition(":")
        nums = [int(x) for x in rest.split(",")]
    except ValueError:
        raise ParameterError(f"cannot parse type {text!r}") from None
    if kind == PS and len(nums) == 2:
        return make_ps_type(params, *nums)
    if kind == CUSP and len(nums) == 1:
        return make_cuspidal_type(params, nums[0])
    raise ParameterError(f"cannot parse type {text!r}; use ps:a,b or cusp:a")


def all_ps_types(params: Params):
    e = params.e
    for a in range(e):
        for a2 in range(e):
            if a != a2:
                yield TameType(params, PS, (a, a2))


def all_cuspidal_types(params: Params):
    q = params.q
    for a in range(q * q - 1):
        if a % (q + 1):
            yield TameType(params, CUSP, (a,))


def all_types(params: Params):
    yield from all_ps_types(params)
    yield from all_cuspidal_types(params)


# -- index sets --------------------------------------------------------------


@lru_cache(maxsize=None)
def _p_tau(kind: str, p: int, c: tuple[int, ...]) -> tuple[int, ...]:
    f = len(c)
    out = []
    for J in range(1 << f):
        J0 = J ^ (1 << (f - 1)) if kind == CUSP else J
        ok = True
        for j in range(f):
            inJ, prev = has(J, j, f), has(J0, j - 1, f)
            if inJ and not prev and c[j] == p - 1:
                ok = False
            if not inJ and prev and c[j] == 0:
                ok = False
        if ok:
            out.append(J)
    return tuple(out)


def p_tau(tau: TameType) -> list[int]:
    return list(_p_tau(tau.kind, tau.p, tau.c_digits))


def in_p_tau(tau: TameType, J: int) -> bool:
    return J in _p_tau(tau.kind, tau.p, tau.c_digits)


@lru_cache(maxsize=None)
def _jh_shape(kind: str, p: int, c: tuple[int, ...], J: int):
    """(s, t, extra) for the J-th factor before the global twist."""
    f = len(c)
    Jc = complement(J, f)
    J0 = J ^ (1 << (f - 1)) if kind == CUSP else J
    J0c = complement(J0, f)
    s, t = [], []
    for i in range(f):
        if has(J, i, f):
            s.append(p - 1 - c[i] - has(J0c, i - 1, f))
            t.append(c[i] + has(Jc, i - 1, f))
        else:
            s.append(c[i] - has(J0, i - 1, f))
            t.append(0)
    extra = 0
    if kind == CUSP:
        extra = has(J, 0, f) * has(J, f - 1, f) + has(Jc, 0, f) * has(Jc, f - 1, f)
    return tuple(s), tuple(t), extra


def jh_factor(tau: TameType, J: int) -> Weight:
    if not in_p_tau(tau, J):
        raise InvalidIndexError(f"J = {J} is not in P_tau for {tau}")
    s, t, extra = _jh_shape(tau.kind, tau.p, tau.c_digits, J)
    e = tau.params.e
    if tau.kind == PS:
        twist = tau.exponents[1]
    else:
        # the level-2f exponent (q+1)b factors through the norm: b at level f
        twist = tau.b + extra
    return Weight(tau.p, s, (from_digits(t, tau.p) + twist) % e)


def jh_factors(tau: TameType) -> dict[int, Weight]:
    return {J: jh_factor(tau, J) for J in p_tau(tau)}


@dataclass(frozen=True)
class CuspidalClass:
    regular: bool
    unique_regular_j: int | None = None


def classify_cuspidal(tau: TameType) -> CuspidalClass:
    if tau.kind != CUSP:
        raise KindError("classify_cuspidal needs a cuspidal type")
    if any(0 < ci < tau.p - 1 for ci in tau.c_digits):
        return CuspidalClass(True)
    regular = [J for J in p_tau(tau) if is_regular_weight(jh_factor(tau, J))]
    assert len(regular) == 1, (tau, regular)
    return CuspidalClass(False, regular[0])


def j_base(tau: TameType) -> int:
    if tau.kind == PS:
        return 0
    f = tau.f
    for i, ci in enumerate(tau.c_digits):
        if 0 < ci < tau.p - 1:
            base = full(f) & ~((1 << i) - 1)
            assert in_p_tau(tau, base) and in_p_tau(tau, complement(base, f))
            return base
    raise UnsupportedError("irregular cuspidal types have no J_base")


def j_base_choices(tau: TameType) -> list[int]:
    """Every admissible base {i..f-1}; the package uses the first."""
    if tau.kind == PS:
        return [0]
    f = tau.f
    return [full(f) & ~((1 << i) - 1) for i, ci in enumerate(tau.c_digits) if 0 < ci < tau.p - 1]


def iota(tau: TameType, J: int) -> int:
    return J ^ j_base(tau)


def iota_p_tau(tau: TameType, base: int | None = None) -> list[int]:
    """Labels J with iota(J) in P_tau, sorted."""
    if base is None:
        base = j_base(tau)
    return sorted(J ^ base for J in p_tau(tau))


# -- base change -------------------------------------------------------------


def bc_type(tau: TameType) -> TameType:
    q = tau.params.q
    big = tau.params.doubled()
    m = q * q - 1
    if tau.kind == PS:
        a, a2 = tau.exponents
        return make_ps_type(big, a * (1 + q) % m, a2 * (1 + q) % m)
    a = tau.exponents[0]
    return make_ps_type(big, a, q * a % m)


def bc_jset(tau: TameType, J: int) -> int:
    f = tau.f
    if tau.kind == PS:
        return J | (J << f)
    return J | (complement(J, f) << f)
