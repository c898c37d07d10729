"""Monomial ideals in F[X_j, Y_j : j in Delta] / (X_j Y_j).

A monomial is a tuple of signed exponents, one slot per element of Delta in
increasing order: +a means X_j^a, -b means Y_j^b, 0 means neither. Products
with both X_j and Y_j vanish and are represented by ``None``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .core import full, members, size, subsets_between
from .errors import ParameterError, PreconditionError, TheoremViolation

ZERO = None


@dataclass(frozen=True)
class RingSpec:
    j_min_prime: int
    j_max_prime: int
    labels: tuple | None = None

    def __post_init__(self):
        if self.j_min_prime & ~self.j_max_prime:
            raise ParameterError("need J_min' contained in J_max'")

    @property
    def delta(self) -> int:
        return self.j_max_prime & ~self.j_min_prime

    @property
    def slots(self) -> list[int]:
        return members(self.delta)

    @property
    def n(self) -> int:
        return size(self.delta)

    def W(self) -> list[int]:
        return subsets_between(self.j_min_prime, self.j_max_prime)

    def one(self):
        return (0,) * self.n

    def x(self, j: int, a: int = 1):
        return self._var(j, a)

    def y(self, j: int, b: int = 1):
        return self._var(j, -b)

    def _var(self, j, a):
        m = [0] * self.n
        m[self.slots.index(j)] = a
        return tuple(m)

    def fmt(self, m, latex: bool = False) -> str:
        """Plain form X'_j1*Y'_j2, or with latex=True X'_{j_1}Y'_{j_2}."""
        if m is ZERO:
            return "0"
        parts = []
        names = self.labels or [str(j) for j in self.slots]
        if latex:
            names = ["{" + re.sub(r"^([A-Za-z]+)(\d+)$", r"\1_\2", n) + "}" for n in names]
        for axis in (1, -1):
            for name, a in zip(names, m):
                if a * axis > 0:
                    v = ("X'" if a > 0 else "Y'") + f"_{name}"
                    if abs(a) > 1:
                        v += f"^{{{abs(a)}}}" if latex else f"^{abs(a)}"
                    parts.append(v)
        return ("" if latex else "*").join(parts) or "1"


def standard_ring(n: int, labels=None) -> RingSpec:
    """Delta = {0, ..., n-1} with J_min' empty."""
    return RingSpec(0, full(n), tuple(labels) if labels else None)


# -- monomials ---------------------------------------------------------------


def divides(a, b) -> bool:
    if b is ZERO:
        return True
    if a is ZERO:
        return False
    for x, y in zip(a, b):
        if x > 0 and y < x:
            return False
        if x < 0 and y > x:
            return False
    return True


def mono_lcm(a, b):
    if a is ZERO or b is ZERO:
        return ZERO
    out = []
    for x, y in zip(a, b):
        if x * y < 0:
            return ZERO
        out.append(x if abs(x) >= abs(y) else y)
    return tuple(out)


def mono_mul(a, b):
    if a is ZERO or b is ZERO:
        return ZERO
    out = []
    for x, y in zip(a, b):
        if x * y < 0:
            return ZERO
        out.append(x + y)
    return tuple(out)


def degree(m) -> int:
    return sum(abs(x) for x in m)


def _key(m):
    # total degree, then X-variables before Y-variables, then slot order
    vs = sorted((0 if a > 0 else 1, i, -abs(a)) for i, a in enumerate(m) if a)
    return (degree(m), vs)


# -- ideals ------------------------------------------------------------------


@dataclass(frozen=True)
class MonomialIdeal:
    ring: RingSpec
    gens: tuple

    def is_unit(self) -> bool:
        return any(degree(g) == 0 for g in self.gens)

    def is_zero(self) -> bool:
        return not self.gens

    def is_squarefree(self) -> bool:
        return all(abs(x) <= 1 for g in self.gens for x in g)

    def __str__(self):
        if self.is_zero():
            return "(0)"
        return "(" + ", ".join(self.ring.fmt(g) for g in self.gens) + ")"

    def latex(self) -> str:
        if self.is_zero():
            return "(0)"
        return "(" + ",".join(self.ring.fmt(g, latex=True) for g in self.gens) + ")"

    def to_json(self) -> list[str]:
        return [self.ring.fmt(g) for g in self.gens]


def ideal(ring: RingSpec, gens) -> MonomialIdeal:
    gens = {g for g in gens if g is not ZERO}
    minimal = [g for g in gens if not any(h != g and divides(h, g) for h in gens)]
    return MonomialIdeal(ring, tuple(sorted(minimal, key=_key)))


def unit_ideal(ring: RingSpec) -> MonomialIdeal:
    return MonomialIdeal(ring, (ring.one(),))


def zero_ideal(ring: RingSpec) -> MonomialIdeal:
    return MonomialIdeal(ring, ())


def _same_ring(I, J):
    if I.ring != J.ring:
        raise ParameterError("ideals live in different rings")


def ideal_sum(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _same_ring(I, J)
    return ideal(I.ring, I.gens + J.gens)


def ideal_intersect(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _same_ring(I, J)
    return ideal(I.ring, (mono_lcm(a, b) for a in I.gens for b in J.gens))


def ideal_contains(I: MonomialIdeal, m) -> bool:
    return any(divides(g, m) for g in I.gens)


def ideal_le(I: MonomialIdeal, J: MonomialIdeal) -> bool:
    """I contained in J."""
    _same_ring(I, J)
    return all(ideal_contains(J, g) for g in I.gens)


def ideal_colon(I: MonomialIdeal, m) -> MonomialIdeal:
    """(I : m) = {n : n m in I}."""
    ring = I.ring
    if m is ZERO:
        return unit_ideal(ring)
    gens = []
    for g in I.gens:
        out = []
        for x, y in zip(g, m):
            if x * y > 0:
                r = max(abs(x) - abs(y), 0)
                out.append(r if x > 0 else -r)
            else:
                out.append(x)
        gens.append(tuple(out))
    # X_j Y_j = 0: whatever kills the m-variable at j lies in the colon
    for i, y in enumerate(m):
        if y:
            v = [0] * ring.n
            v[i] = -1 if y > 0 else 1
            gens.append(tuple(v))
    return ideal(ring, gens)


# -- component ideals --------------------------------------------------------


def _check_in_W(ring: RingSpec, J: int):
    if (ring.j_min_prime & ~J) or (J & ~ring.j_max_prime):
        raise ParameterError(f"{J} is not between J_min' and J_max'")


def component_ideal(ring: RingSpec, J: int) -> MonomialIdeal:
    _check_in_W(ring, J)
    gens = [ring.x(j) for j in members(J & ~ring.j_min_prime)]
    gens += [ring.y(j) for j in members(ring.j_max_prime & ~J)]
    return ideal(ring, gens)


def ideal_of_family(ring: RingSpec, family) -> MonomialIdeal:
    return _ideal_of_family(ring, frozenset(family))


@lru_cache(maxsize=None)
def _ideal_of_family(ring: RingSpec, family: frozenset) -> MonomialIdeal:
    out = unit_ideal(ring)
    for J in sorted(family):
        out = ideal_intersect(out, component_ideal(ring, J))
    return out


def vanishes_on_component(ring: RingSpec, m, J: int) -> bool:
    """Evaluate m on the coordinate subspace of the component at J."""
    if m is ZERO:
        return True
    for j, a in zip(ring.slots, m):
        inJ = (J >> j) & 1
        if a > 0 and inJ:
            return True
        if a < 0 and not inJ:
            return True
    return False


# -- families ----------------------------------------------------------------


def faces(ring: RingSpec, J1: int, J2: int) -> list[int]:
    return [K for K in ring.W() if (J1 & ~K) == 0 and (K & ~J2) == 0]


def is_interval(family) -> bool:
    family = set(family)
    for a in family:
        for b in family:
            if a & ~b == 0:
                for K in subsets_between(a, b):
                    if K not in family:
                        return False
    return True


def maximal_elements(family) -> list[int]:
    return sorted(a for a in family if not any(a != b and a & ~b == 0 for b in family))


def minimal_elements(family) -> list[int]:
    return sorted(a for a in family if not any(a != b and b & ~a == 0 for b in family))


def is_capped_interval(family) -> bool:
    return bool(family) and is_interval(family) and len(maximal_elements(family)) == 1


def capped_intervals(ring: RingSpec) -> list[frozenset]:
    W = ring.W()
    out = []
    for r in range(1, len(W) + 1):
        for fam in combinations(W, r):
            if is_capped_interval(fam):
                out.append(frozenset(fam))
    return out


# -- lemma checks ------------------------------------------------------------


@dataclass
class Report:
    passed: bool = True
    checked: int = 0
    counterexamples: list = None

    def __post_init__(self):
        if self.counterexamples is None:
            self.counterexamples = []

    def fail(self, item):
        self.passed = False
        self.counterexamples.append(item)

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "checked": self.checked,
            "counterexamples": self.counterexamples,
        }


def x_product(ring: RingSpec, J: int):
    m = [0] * ring.n
    for j in members(J):
        m[ring.slots.index(j)] = 1
    return tuple(m)


def check_lemma_faces(ring: RingSpec, J1: int, J2: int, report: Report | None = None) -> Report:
    report = report or Report()
    _check_in_W(ring, J1)
    _check_in_W(ring, J2)
    if J1 & ~J2:
        raise PreconditionError("need J1 contained in J2")
    F = faces(ring, J1, J2)
    Fx = [K for K in F if K != J1]
    prod = x_product(ring, J2 & ~J1)
    I_F = ideal_of_family(ring, F)
    lhs = ideal_of_family(ring, Fx)
    rhs = ideal_sum(I_F, ideal(ring, [prod]))
    report.checked += 1
    if lhs != rhs:
        report.fail({"J1": J1, "J2": J2, "part": "generator", "lhs": str(lhs), "rhs": str(rhs)})
    ann = ideal_colon(I_F, prod)
    if ann != component_ideal(ring, J1):
        report.fail({"J1": J1, "J2": J2, "part": "annihilator", "got": str(ann)})
    return report


def check_lemma_ideals(ring: RingSpec, fam1, fam2, report: Report | None = None) -> Report:
    report = report or Report()
    fam1, fam2 = frozenset(fam1), frozenset(fam2)
    for fam in (fam1, fam2):
        if not is_interval(fam):
            raise PreconditionError(f"{sorted(fam)} is not an interval")
        if len(maximal_elements(fam)) != 1:
            raise PreconditionError(f"{sorted(fam)} is not capped")
    if maximal_elements(fam1) != maximal_elements(fam2):
        raise PreconditionError("the two intervals have different caps")
    lhs = ideal_sum(ideal_of_family(ring, fam1), ideal_of_family(ring, fam2))
    rhs = ideal_of_family(ring, fam1 & fam2)
    report.checked += 1
    if lhs != rhs:
        report.fail({"J1": sorted(fam1), "J2": sorted(fam2), "sum": str(lhs), "expected": str(rhs)})
    return report


def exhaustive_faces(n: int) -> Report:
    ring = standard_ring(n)
    report = Report()
    W = ring.W()
    for J1 in W:
        for J2 in W:
            if J1 & ~J2 == 0:
                check_lemma_faces(ring, J1, J2, report)
    return report


def exhaustive_ideals(n: int) -> Report:
    ring = standard_ring(n)
    report = Report()
    fams = capped_intervals(ring)
    for a in fams:
        for b in fams:
            if maximal_elements(a) == maximal_elements(b):
                check_lemma_ideals(ring, a, b, report)
    return report


# -- cyclicity induction -----------------------------------------------------


def cyclicity_induction_check(ring: RingSpec, family) -> tuple[Report, MonomialIdeal]:
    """Replay the cyclicity induction for a capped interval at ideal level.

    Returns the report and the verified annihilator I_family."""
    family = frozenset(family)
    if not is_interval(family) or len(maximal_elements(family)) != 1:
        raise PreconditionError("cyclicity needs a capped interval")
    report = Report()
    memo = {}
    ann = _induct(ring, family, report, memo)
    return report, ann


def _induct(ring, fam, report, memo):
    if fam in memo:
        return memo[fam]
    I = ideal_of_family(ring, fam)
    if len(fam) <= 2:
        memo[fam] = I
        return I
    (cap,) = maximal_elements(fam)
    mins = minimal_elements(fam)
    report.checked += 1
    if len(mins) == 1:
        (J0,) = mins
        rest = fam - {J0}
        I_rest = _induct(ring, rest, report, memo)
        # the quotient I_rest / I is cyclic with annihilator I_{J0}
        F = faces(ring, J0, cap)
        Fx = [K for K in F if K != J0]
        I_F = ideal_of_family(ring, F)
        if ideal_sum(I_rest, I_F) != ideal_of_family(ring, Fx):
            report.fail({"step": "sum", "family": sorted(fam)})
        if ideal_intersect(I_rest, I_F) != I:
            report.fail({"step": "intersection", "family": sorted(fam)})
        prod = x_product(ring, cap & ~J0)
        if ideal_colon(I_F, prod) != component_ideal(ring, J0):
            report.fail({"step": "annihilator", "family": sorted(fam)})
        if ideal_sum(I_F, ideal(ring, [prod])) != ideal_of_family(ring, Fx):
            report.fail({"step": "face generator", "family": sorted(fam)})
        below = [K for K in rest if J0 & ~K == 0 and size(K) == size(J0) + 1]
        for K in below:
            _induct(ring, frozenset({J0, K}), report, memo)
    else:
        J1, J2 = mins[0], mins[1]
        fam1, fam2 = fam - {J1}, fam - {J2}
        if not (is_capped_interval(fam1) and is_capped_interval(fam2)):
            report.fail({"step": "split", "family": sorted(fam)})
        I1 = _induct(ring, fam1, report, memo)
        I2 = _induct(ring, fam2, report, memo)
        _induct(ring, fam1 & fam2, report, memo)
        if ideal_sum(I1, I2) != ideal_of_family(ring, fam1 & fam2):
            report.fail({"step": "fibre sum", "family": sorted(fam)})
        if ideal_intersect(I1, I2) != I:
            report.fail({"step": "fibre intersection", "family": sorted(fam)})
    memo[fam] = I
    return I


def cyclicity_or_raise(ring: RingSpec, family) -> MonomialIdeal:
    report, ann = cyclicity_induction_check(ring, family)
    if not report.passed:
        raise TheoremViolation(f"cyclicity induction failed: {report.counterexamples}")
    return ann


# -- the worked example with two free directions -----------------------------


def nongeneric_example() -> list[dict]:
    """The three ideal computations for |Delta| = 2 where sums of
    component ideals fail to be component ideals."""
    ring = standard_ring(2, ("j1", "j2"))
    jmin, jmax = ring.j_min_prime, ring.j_max_prime
    j2 = 1 << 1
    cases = [
        ([jmax], [jmin]),
        ([jmax, jmax & ~j2], [jmin | j2, jmin]),
        ([jmax, jmax & ~j2], [jmax, jmin]),
    ]
    out = []
    for fam1, fam2 in cases:
        I1 = ideal_of_family(ring, fam1)
        I2 = ideal_of_family(ring, fam2)
        meet = set(fam1) & set(fam2)
        out.append(
            {
                "J1": sorted(fam1),
                "J2": sorted(fam2),
                "I_J1": str(I1),
                "I_J2": str(I2),
                "sum": str(ideal_sum(I1, I2)),
                "I_meet": str(ideal_of_family(ring, meet)),
                "latex": {
                    "I_J1": I1.latex(),
                    "I_J2": I2.latex(),
                    "sum": ideal_sum(I1, I2).latex(),
                },
                "equal": ideal_sum(I1, I2) == ideal_of_family(ring, meet),
            }
        )
    return out
