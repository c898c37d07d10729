"""Gauge calculus for the distinguished lattices in a tame type.

Lattices are indexed by labels J with iota(J) in P_tau. A gauge records, for
each label J, the least power of p moving the cosocle lattice at iota(J) into
the lattice in question.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import Weight, members, size
from .errors import (
    InvalidIndexError,
    ParameterError,
    PreconditionError,
    TheoremViolation,
)
from .tame import TameType, in_p_tau, iota, iota_p_tau, jh_factor

COSOCLE = "cosocle"
SOCLE = "socle"


@dataclass(frozen=True)
class GaugeVector:
    tau: TameType
    values: dict = field(hash=False)

    def check(self):
        """Raise TheoremViolation unless normalized and subadditive."""
        v = self.values
        if v.get(0) != 0:
            raise TheoremViolation(f"gauge not normalized at the base: {v.get(0)}")
        for J, x in v.items():
            if x < 0:
                raise TheoremViolation(f"negative gauge value at {J}")
            for J2, y in v.items():
                if y > x + size(J2 & ~J):
                    raise TheoremViolation(f"subadditivity fails at {J}, {J2}")
        top = (1 << self.tau.f) - 1
        if top in v and v[top] > self.tau.f:
            raise TheoremViolation("value at the full set exceeds f")

    def to_json(self) -> dict:
        return {
            "tau": self.tau.to_json(),
            "values": {str(J): _num(x) for J, x in sorted(self.values.items())},
        }


def _num(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


def _labels(tau: TameType, *Js):
    for J in Js:
        if not in_p_tau(tau, iota(tau, J)):
            raise InvalidIndexError(f"iota({J}) is not in P_tau")


def eps_cosocle(tau: TameType, J: int, J2: int) -> int:
    """Gauge of the cosocle lattice at iota(J), evaluated at iota(J2)."""
    _labels(tau, J, J2)
    return size(J2 & ~J)


def eps_socle(tau: TameType, J: int, J2: int) -> int:
    """Gauge of the socle lattice at iota(J2), evaluated at iota(J)."""
    _labels(tau, J, J2)
    return size(J & J2)


def gauge_sum(tau: TameType, entries) -> GaugeVector:
    """Gauge of sum_J p^(v_J) L_J, with L_J the cosocle lattice at iota(J).

    The value at J'' is min over entries of v_J + |J'' minus J|, shifted so the
    value at the empty label is 0.
    """
    entries = [(Fraction(v), J) for v, J in entries]
    if not entries:
        raise ParameterError("empty entry list")
    labels = iota_p_tau(tau)
    _labels(tau, *(J for _, J in entries))
    raw = {K: min(v + size(K & ~J) for v, J in entries) for K in labels}
    shift = raw[0]
    return GaugeVector(tau, {K: x - shift for K, x in raw.items()})


def socle_lattice_gauge(tau: TameType, J: int) -> GaugeVector:
    """Gauge of the socle lattice at iota(J) via its cosocle-lattice decomposition."""
    return gauge_sum(tau, [(size(J & K), K) for K in iota_p_tau(tau)])


def cokernel_weights(
    tau: TameType, J: int, j: int, which: str, lattices: str = SOCLE
) -> list[tuple[int, Weight]]:
    """JH factors of the cokernels of the inclusions

    socle lattices:   p L^J  <=  L^(J+j)  <=  L^J
    cosocle lattices: p L_(J+j)  <=  L_J  <=  L_(J+j)

    ``which="upper"`` is the right-hand inclusion, ``"lower"`` the left one.
    """
    if j in members(J) or not 0 <= j < tau.f:
        raise PreconditionError(f"{j} must be an index outside J")
    _labels(tau, J, J | (1 << j))
    if which not in ("upper", "lower") or lattices not in (SOCLE, COSOCLE):
        raise ParameterError("which is upper|lower, lattices is socle|cosocle")
    want = which == "upper"
    return [
        (K, jh_factor(tau, iota(tau, K))) for K in iota_p_tau(tau) if bool((K >> j) & 1) == want
    ]


def saturated_chain(tau: TameType, J: int, J2: int) -> list[int]:
    if J & ~J2:
        raise PreconditionError("need J contained in J'")
    _labels(tau, J, J2)
    ok = set(iota_p_tau(tau))

    def extend(cur):
        if cur == J2:
            return [cur]
        for i in members(J2 & ~cur):
            nxt = cur | (1 << i)
            if nxt in ok:
                rest = extend(nxt)
                if rest:
                    return [cur] + rest
        return None

    chain = extend(J)
    if chain is None:
        raise TheoremViolation(f"no saturated chain from {J} to {J2} for {tau}")
    return chain


@dataclass(frozen=True)
class FiltrationReport:
    direction: str
    layers: tuple
    nonsplit_edges: tuple

    def to_json(self) -> dict:
        return {
            "direction": self.direction,
            "layers": [
                [{"J": J, "weight": w.to_json()} for J, w in layer] for layer in self.layers
            ],
            "nonsplit_edges": [list(e) for e in self.nonsplit_edges],
        }


def predicted_filtration(tau: TameType, J: int, direction: str = COSOCLE) -> FiltrationReport:
    """Layers of the cosocle (or socle) filtration of the lattice at J,
    indexed directly by P_tau."""
    if not in_p_tau(tau, J):
        raise InvalidIndexError(f"{J} is not in P_tau")
    if direction not in (COSOCLE, SOCLE):
        raise ParameterError("direction is cosocle|socle")
    P = [K for K in range(1 << tau.f) if in_p_tau(tau, K)]
    depth = max(size(J ^ K) for K in P)
    layers = tuple(
        tuple((K, jh_factor(tau, K)) for K in P if size(J ^ K) == i) for i in range(depth + 1)
    )
    edges = tuple((a, b) for a in P for b in P if a < b and size(a ^ b) == 1)
    return FiltrationReport(direction, layers, edges)
