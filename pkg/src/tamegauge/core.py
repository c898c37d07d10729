"""Digits, cyclic index sets and Serre weights.

Subsets of the cyclic index set {0, ..., f-1} are plain ``int`` bitmasks
throughout the package; the helpers below do the cyclic bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import ParameterError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class Params:
    p: int
    f: int
    allow_p3: bool = False

    def __post_init__(self):
        if not is_prime(self.p) or self.p == 2:
            raise ParameterError(f"p must be an odd prime, got {self.p}")
        if self.p == 3 and not self.allow_p3:
            raise ParameterError("p = 3 requires allow_p3=True")
        if self.f < 1:
            raise ParameterError(f"f must be positive, got {self.f}")

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def e(self) -> int:
        return self.p**self.f - 1

    def doubled(self) -> "Params":
        return Params(self.p, 2 * self.f, self.allow_p3)

    def __eq__(self, other):
        # the p = 3 flag is a permission, not part of the value
        if not isinstance(other, Params):
            return NotImplemented
        return (self.p, self.f) == (other.p, other.f)

    def __hash__(self):
        return hash((self.p, self.f))


# -- bitmask subsets ---------------------------------------------------------


def jset(indices, width: int | None = None) -> int:
    J = 0
    for i in indices:
        if width is not None:
            if not 0 <= i < width:
                raise ParameterError(f"index {i} outside 0..{width - 1}")
        J |= 1 << i
    return J


def members(J: int) -> list[int]:
    out = []
    i = 0
    while J >> i:
        if (J >> i) & 1:
            out.append(i)
        i += 1
    return out


def has(J: int, j: int, width: int) -> int:
    """1 if the cyclic index j lies in J, else 0."""
    return (J >> (j % width)) & 1


def full(width: int) -> int:
    return (1 << width) - 1


def complement(J: int, width: int) -> int:
    return full(width) ^ J


def size(J: int) -> int:
    return bin(J).count("1")


def subsets_between(lo: int, hi: int):
    """All J with lo <= J <= hi (as sets), in increasing bitmask order."""
    free = hi & ~lo
    sub = 0
    out = []
    while True:
        out.append(lo | sub)
        if sub == free:
            break
        sub = (sub - free) & free
    return sorted(out)


def jset_to_json(J: int, width: int) -> dict:
    return {"width": width, "bits": J}


def jset_str(J: int) -> str:
    return "{" + ",".join(str(i) for i in members(J)) + "}"


# -- digits ------------------------------------------------------------------


def digits(n: int, p: int, f: int) -> tuple[int, ...]:
    """Base-p digits of n in [0, p^f - 1], least significant first."""
    if not 0 <= n <= p**f - 1:
        raise ParameterError(f"{n} outside [0, {p**f - 1}]")
    out = []
    for _ in range(f):
        n, r = divmod(n, p)
        out.append(r)
    return tuple(out)


def from_digits(ds, p: int) -> int:
    n = 0
    for d in reversed(ds):
        n = n * p + d
    return n


# -- weights -----------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Weight:
    """Serre weight with twist exponent d = sum t_j p^j mod p^f - 1."""

    p: int
    s: tuple[int, ...]
    d: int

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(int(x) for x in self.s))
        if not self.s:
            raise ParameterError("empty s-vector")
        if any(not 0 <= x <= self.p - 1 for x in self.s):
            raise ParameterError(f"s-digits out of range: {self.s}")
        if not 0 <= self.d < self.p ** len(self.s) - 1:
            raise ParameterError(f"d = {self.d} not reduced mod p^f - 1")

    @property
    def f(self) -> int:
        return len(self.s)

    @property
    def t(self) -> tuple[int, ...]:
        return digits(self.d, self.p, self.f)

    @property
    def S(self) -> int:
        return from_digits(self.s, self.p)

    @property
    def dim(self) -> int:
        n = 1
        for x in self.s:
            n *= x + 1
        return n

    def to_json(self) -> dict:
        return {"s": list(self.s), "d": self.d}

    def __str__(self):
        return f"(s={list(self.s)}, d={self.d})"


def normalize_weight(t, s, p: int) -> Weight:
    t, s = tuple(t), tuple(s)
    if len(t) != len(s):
        raise ParameterError("t and s must have the same length")
    if any(not 0 <= x <= p - 1 for x in t):
        raise ParameterError(f"t-digits out of range: {t}")
    if all(x == p - 1 for x in t):
        raise ParameterError("t-digits may not all equal p - 1")
    q = p ** len(s)
    return Weight(p, s, from_digits(t, p) % (q - 1))


def is_regular_weight(w: Weight) -> bool:
    return all(x <= w.p - 2 for x in w.s)


def bc_weight(w: Weight) -> Weight:
    q = w.p**w.f
    return Weight(w.p, w.s + w.s, w.d * (1 + q) % (q * q - 1))


def weight_from_json(obj, p: int) -> Weight:
    return Weight(p, tuple(obj["s"]), obj["d"])


def all_weights(params: Params):
    p, f = params.p, params.f
    for s in product(range(p), repeat=f):
        for d in range(params.e):
            yield Weight(p, s, d)
