"""Valuation-level model of the deformation space and the lattice predictor.

A point is recorded only through val(X_j) for j in Delta, with val(p) = 1 and
val(Y_j) = 1 - val(X_j). The predicted lattice is sum_J varpi_J * L_J over
labels J, where L_J is the cosocle lattice at iota(J) and varpi_J is a
product of p, X_j, Y_j and 1 chosen per index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import complement, members
from .errors import ParameterError, PreconditionError
from .gauges import GaugeVector, gauge_sum
from .tame import CUSP, TameType, classify_cuspidal, in_p_tau, iota_p_tau, j_base


@dataclass(frozen=True)
class DefSpaceData:
    tau: TameType
    j_min: int
    j_max: int

    def __post_init__(self):
        if self.j_min & ~self.j_max:
            raise ParameterError("need J_min contained in J_max")

    @property
    def base(self) -> int:
        return j_base(self.tau)

    @property
    def j_min_prime(self) -> int:
        f, B = self.tau.f, self.base
        Bc = complement(B, f)
        return (Bc & self.j_min) | (B & complement(self.j_max, f))

    @property
    def j_max_prime(self) -> int:
        f, B = self.tau.f, self.base
        Bc = complement(B, f)
        return (Bc & self.j_max) | (B & complement(self.j_min, f))

    @property
    def delta(self) -> int:
        return self.j_max & ~self.j_min


def relative_primes(j_min: int, j_max: int, J: int, f: int) -> tuple[int, int]:
    """J_min', J_max' reindexed around a fixed J rather than around J_base."""
    Jc = complement(J, f)
    return (J & j_min) | (Jc & complement(j_max, f)), (J & j_max) | (Jc & complement(j_min, f))


@dataclass(frozen=True)
class Point:
    x_val: tuple  # ((j, val X_j), ...) for j in Delta

    @classmethod
    def from_values(cls, data: DefSpaceData, values) -> "Point":
        js = members(data.delta)
        values = [Fraction(v) for v in values]
        if len(values) != len(js):
            raise ParameterError(f"expected {len(js)} valuations, got {len(values)}")
        for v in values:
            if not 0 <= v <= 1:
                raise ParameterError(f"valuation {v} outside [0, 1]")
        return cls(tuple(zip(js, values)))

    def x(self, j: int) -> Fraction:
        return dict(self.x_val)[j]


def varpi_valuation(data: DefSpaceData, lam: Point, j: int, primed: bool = False) -> Fraction:
    lo, hi = data.j_min_prime, data.j_max_prime
    if (lo >> j) & 1:
        v = Fraction(1)
    elif not (hi >> j) & 1:
        v = Fraction(0)
    elif (data.base >> j) & 1:
        v = 1 - lam.x(j)
    else:
        v = lam.x(j)
    # the primed element swaps every role: p <-> 1 and X_j <-> Y_j
    return 1 - v if primed else v


def varpi_J(data: DefSpaceData, lam: Point, J: int, primed: bool = False) -> Fraction:
    return sum((varpi_valuation(data, lam, j, primed) for j in members(J)), Fraction(0))


@dataclass(frozen=True)
class SocleLatticeMarker:
    """Prediction for irregular cuspidal types: the socle lattice at J."""

    J: int

    def to_json(self) -> dict:
        return {"socle_lattice": self.J}


def _check_interval(data: DefSpaceData):
    tau = data.tau
    for J in range(1 << tau.f):
        if data.j_min & ~J == 0 and J & ~data.j_max == 0 and not in_p_tau(tau, J):
            raise PreconditionError("the interval is not contained in P_tau")


def predict_lattice(data: DefSpaceData, lam: Point):
    tau = data.tau
    if tau.kind == CUSP:
        cls = classify_cuspidal(tau)
        if not cls.regular:
            return SocleLatticeMarker(cls.unique_regular_j)
    if [j for j, _ in lam.x_val] != members(data.delta):
        raise ParameterError("point does not match Delta")
    _check_interval(data)
    entries = [(varpi_J(data, lam, J), J) for J in iota_p_tau(tau)]
    return gauge_sum(tau, entries)


def describe(g: GaugeVector) -> str:
    """Readable form sum p^v L_J of a gauge."""
    terms = []
    for J, v in sorted(g.values.items()):
        terms.append(f"p^{{{v}}} L_{{{','.join(map(str, members(J)))}}}")
    return " + ".join(terms)


def annihilation_identity_check(data: DefSpaceData, lam: Point, J: int | None = None) -> dict:
    """Check that the predicted gauge at J equals v_J = val(varpi_J(lam))."""
    tau = data.tau
    g = predict_lattice(data, lam)
    if isinstance(g, SocleLatticeMarker):
        return {"pass": True, "checked": 0, "violations": []}
    labels = iota_p_tau(tau) if J is None else [J]
    v = {K: varpi_J(data, lam, K) for K in iota_p_tau(tau)}
    # v is additive over indices with each term in [0, 1], so v[K] <= v[K2] + |K - K2|
    # and the minimum defining the gauge is attained at K itself
    violations = [
        {"J": K, "gauge": str(g.values[K]), "v": str(v[K])}
        for K in labels
        if g.values[K] != v[K] - v[0]
    ]
    return {"pass": not violations, "checked": len(labels), "violations": violations}
