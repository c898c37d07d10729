"""Verification suites. Each returns a SuiteResult; nothing here raises on a
failed check, failures are collected instead."""

from __future__ import annotations

import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .core import Params, bc_weight, members, size, subsets_between
from .errors import NormFactorError, UnsupportedError
from .gauges import (
    COSOCLE,
    SOCLE,
    GaugeVector,
    cokernel_weights,
    eps_cosocle,
    eps_socle,
    predicted_filtration,
    saturated_chain,
)
from .monomial import (
    capped_intervals,
    cyclicity_induction_check,
    exhaustive_faces,
    exhaustive_ideals,
    nongeneric_example,
    standard_ring,
)
from .predictor import (
    DefSpaceData,
    Point,
    annihilation_identity_check,
    predict_lattice,
    varpi_J,
)
from .rhobar import (
    IRR,
    RED,
    all_rhobars,
    ext_exists,
    find_type_covering,
    find_type_for_pair,
    find_type_isolating,
    generic_witness,
    interval_of,
    is_generic,
    weight_set,
)
from .tame import (
    CUSP,
    TameType,
    all_types,
    bc_jset,
    bc_type,
    in_p_tau,
    iota,
    iota_p_tau,
    jh_factor,
    jh_factors,
    make_cuspidal_type,
    make_ps_type,
    p_tau,
)

MAX_FAILURES = 20

# printed forms of the three ideal computations with two free directions
EXAMPLE_IDEALS = [
    ("(X'_{j_1}, X'_{j_2})", "(Y'_{j_1},Y'_{j_2})", "(X'_{j_1},X'_{j_2},Y'_{j_1},Y'_{j_2})"),
    ("(X'_{j_1})", "(Y'_{j_1})", "(X'_{j_1},Y'_{j_1})"),
    ("(X'_{j_1})", "(X'_{j_1}Y'_{j_2},X'_{j_2}Y'_{j_1})", "(X'_{j_1},X'_{j_2}Y'_{j_1})"),
]


@dataclass
class SuiteResult:
    suite: str
    params: dict
    checked: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, item):
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(item)
        else:
            self.notes["failures_truncated"] = self.notes.get("failures_truncated", 0) + 1

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "pass": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "seconds": round(self.seconds, 3),
            "notes": self.notes,
        }


class _timed:
    def __init__(self, result: SuiteResult):
        self.result = result

    def __enter__(self):
        self.t = time.perf_counter()
        return self.result

    def __exit__(self, *exc):
        self.result.seconds = time.perf_counter() - self.t
        return False


def _w(w):
    return {"s": list(w.s), "d": w.d}


# -- type selections ---------------------------------------------------------


def class_representatives(params: Params):
    """One type for each (kind, c): P_tau, iota and the chain and partition
    statements depend on nothing else."""
    q = params.q
    for c in range(1, q - 1):
        yield make_ps_type(params, c, 0)
    for c in range(q):
        try:
            tau = make_cuspidal_type(params, 1 + c)
        except NormFactorError:
            continue
        assert tau.c == c
        yield tau


def ps_types(params: Params, scope: str = "all"):
    """PS types: every one, or one per c plus a fixed spread of twists."""
    e = params.e
    if scope == "all":
        return [make_ps_type(params, a, b) for b in range(e) for a in range(e) if a != b]
    out = [make_ps_type(params, c, 0) for c in range(1, e)]
    for c in range(1, e):
        b = (7 * c + 3) % e
        if b:
            out.append(make_ps_type(params, (c + b) % e, b))
    return out


# -- engine suites -----------------------------------------------------------


def _engine():
    from .engine import lattices

    return lattices


def suite_jh(p: int, f: int, scope: str = "all", types=None, N=None) -> SuiteResult:
    """Reduction of the induced lattice against the JH formulas."""
    lat = _engine()
    res = SuiteResult("jh", {"p": p, "f": f, "scope": scope})
    with _timed(res):
        params = Params(p, f)
        for tau in types or ps_types(params, scope):
            amb = lat.induced_lattice(tau, N)
            got = lat.reduction_jh(amb.whole())
            want = Counter(jh_factor(tau, J) for J in p_tau(tau))
            res.checked += 1
            if got != want or max(got.values()) != 1:
                res.fail({"tau": tau.spec(), "engine": [_w(w) for w in sorted(got)]})
    return res


def suite_filtration(p: int, f: int, scope: str = "all", types=None, N=None) -> SuiteResult:
    """Cosocle layers of the reduction of each cosocle lattice, and
    non-splitness of every two-factor subquotient across adjacent layers."""
    lat = _engine()
    res = SuiteResult("filtration", {"p": p, "f": f, "scope": scope})
    with _timed(res):
        params = Params(p, f)
        for tau in types or ps_types(params, scope):
            amb = lat.induced_lattice(tau, N)
            L0 = amb.whole()
            P = p_tau(tau)
            for J in P:
                rep = predicted_filtration(tau, J, COSOCLE)
                want = [Counter(w for _, w in layer) for layer in rep.layers]
                dist = {K: size(J ^ K) for K in P}
                pairs = [
                    (jh_factor(tau, B), jh_factor(tau, A))
                    for A, B in product(P, P)
                    if size(A ^ B) == 1 and dist[B] + 1 == dist[A]
                ]
                L = lat.sublattice_with_cosocle(L0, jh_factor(tau, J), check=False)
                layers, nonsplit = lat.cosocle_filtration_report(L, pairs)
                res.checked += 1
                bad = [k for k, v in nonsplit.items() if not v]
                if layers != want or bad:
                    res.fail(
                        {
                            "tau": tau.spec(),
                            "J": J,
                            "layers": [[_w(w) for w in sorted(c)] for c in layers],
                            "split_pairs": [[_w(a), _w(b)] for a, b in bad],
                        }
                    )
    return res


def suite_gauge(p: int, f: int, scope: str = "representatives", types=None, N=None) -> SuiteResult:
    """Measured gauges of both lattice families against the closed forms."""
    lat = _engine()
    res = SuiteResult("gauge", {"p": p, "f": f, "scope": scope})
    with _timed(res):
        params = Params(p, f)
        for tau in types or ps_types(params, scope):
            fam = lat.lattice_family(tau, N)
            P = p_tau(tau)
            for J in P:
                gc = fam.gauge(fam.cosocle[J])
                gs = fam.gauge(fam.socle[J])
                for K in P:
                    res.checked += 2
                    if gc[K] != eps_cosocle(tau, J, K):
                        res.fail({"tau": tau.spec(), "cosocle": J, "at": K, "measured": gc[K]})
                    if gs[K] != eps_socle(tau, K, J):
                        res.fail({"tau": tau.spec(), "socle": J, "at": K, "measured": gs[K]})
    return res


def suite_dual(p: int, f: int, scope: str = "representatives", types=None, N=None) -> SuiteResult:
    """p^f times the socle lattice at the empty set lies in the cosocle lattice there."""
    lat = _engine()
    res = SuiteResult("dual", {"p": p, "f": f, "scope": scope})
    with _timed(res):
        params = Params(p, f)
        exps = Counter()
        for tau in types or ps_types(params, scope):
            fam = lat.lattice_family(tau, N)
            n = lat.least_power(fam.socle[0], fam.cosocle[0])
            exps[n] += 1
            res.checked += 1
            if n > f:
                res.fail({"tau": tau.spec(), "exponent": n})
        res.notes["exponents"] = {str(k): v for k, v in sorted(exps.items())}
    return res


def suite_cokernel_engine(
    p: int, f: int, scope: str = "representatives", types=None, N=None
) -> SuiteResult:
    """JH factors of the cokernels of both inclusion chains, from the engine."""
    lat = _engine()
    res = SuiteResult("cokernel-engine", {"p": p, "f": f, "scope": scope})
    with _timed(res):
        params = Params(p, f)
        for tau in types or ps_types(params, scope):
            fam = lat.lattice_family(tau, N)
            P = set(p_tau(tau))
            for J in sorted(P):
                for j in range(f):
                    Jj = J | (1 << j)
                    if Jj == J or Jj not in P:
                        continue
                    S, Sj = fam.socle[J], fam.socle[Jj]
                    C, Cj = fam.cosocle[J], fam.cosocle[Jj]
                    got = {
                        (SOCLE, "upper"): lat.cokernel_jh(Sj, S),
                        (SOCLE, "lower"): lat.cokernel_jh(S.times_p(1), Sj),
                        (COSOCLE, "upper"): lat.cokernel_jh(C, Cj),
                        (COSOCLE, "lower"): lat.cokernel_jh(Cj.times_p(1), C),
                    }
                    for (kind, which), jh in got.items():
                        want = Counter(w for _, w in cokernel_weights(tau, J, j, which, kind))
                        res.checked += 1
                        if jh != want:
                            res.fail(
                                {
                                    "tau": tau.spec(),
                                    "J": J,
                                    "j": j,
                                    "lattices": kind,
                                    "which": which,
                                    "engine": [_w(w) for w in sorted(jh)],
                                }
                            )
    return res


# -- combinatorial suites ----------------------------------------------------


def suite_chains(p: int, f: int) -> SuiteResult:
    res = SuiteResult("chains", {"p": p, "f": f})
    with _timed(res):
        params = Params(p, f, allow_p3=True)
        irregular = 0
        for tau in class_representatives(params):
            if _irregular(tau):
                # no base: P_tau itself is checked with a plain chain search
                irregular += 1
                labels, relabel = p_tau(tau), (lambda K: K)
                search = lambda a, b, P=frozenset(labels): _plain_chain(P, a, b)  # noqa: E731
            else:
                labels, relabel = iota_p_tau(tau), (lambda K, t=tau: iota(t, K))
                search = lambda a, b, t=tau: saturated_chain(t, a, b)  # noqa: E731
            for J, J2 in product(labels, labels):
                if J & ~J2:
                    continue
                res.checked += 1
                try:
                    chain = search(J, J2)
                except Exception as exc:  # theorem violation
                    res.fail({"tau": tau.spec(), "J": J, "J'": J2, "error": str(exc)})
                    continue
                ok = (
                    chain is not None
                    and chain[0] == J
                    and chain[-1] == J2
                    and len(chain) == size(J2) - size(J) + 1
                    and all(size(b & ~a) == 1 and a & ~b == 0 for a, b in zip(chain, chain[1:]))
                    and all(in_p_tau(tau, relabel(K)) for K in chain)
                )
                if not ok:
                    res.fail({"tau": tau.spec(), "J": J, "J'": J2, "chain": chain})
        res.notes["irregular_cuspidal_classes"] = irregular
    return res


def _irregular(tau: TameType) -> bool:
    return tau.kind == CUSP and not any(0 < c < tau.p - 1 for c in tau.c_digits)


def _plain_chain(P, J, J2):
    if J == J2:
        return [J]
    for i in members(J2 & ~J):
        nxt = J | (1 << i)
        if nxt in P:
            rest = _plain_chain(P, nxt, J2)
            if rest:
                return [J] + rest
    return None


def suite_bc(p: int, f: int) -> SuiteResult:
    res = SuiteResult("bc", {"p": p, "f": f})
    with _timed(res):
        params = Params(p, f, allow_p3=True)
        for tau in all_types(params):
            big = bc_type(tau)
            for J in p_tau(tau):
                JJ = bc_jset(tau, J)
                res.checked += 1
                if not in_p_tau(big, JJ):
                    res.fail({"tau": tau.spec(), "J": J, "error": "bc_jset not in P"})
                elif bc_weight(jh_factor(tau, J)) != jh_factor(big, JJ):
                    res.fail({"tau": tau.spec(), "J": J, "error": "weights differ"})
    return res


def suite_cokernel(p: int, f: int) -> SuiteResult:
    """Upper and lower cokernel lists partition iota(P_tau) by membership of j."""
    res = SuiteResult("cokernel", {"p": p, "f": f})
    with _timed(res):
        params = Params(p, f, allow_p3=True)
        skipped = 0
        for tau in class_representatives(params):
            if _irregular(tau):
                skipped += 1
                continue
            labels = iota_p_tau(tau)
            lab = set(labels)
            for J in labels:
                for j in range(f):
                    if (J >> j) & 1 or (J | 1 << j) not in lab:
                        continue
                    for kind in (SOCLE, COSOCLE):
                        up = cokernel_weights(tau, J, j, "upper", kind)
                        low = cokernel_weights(tau, J, j, "lower", kind)
                        res.checked += 1
                        A = [K for K, _ in up]
                        B = [K for K, _ in low]
                        ok = (
                            sorted(A + B) == sorted(labels)
                            and not set(A) & set(B)
                            and all((K >> j) & 1 for K in A)
                            and not any((K >> j) & 1 for K in B)
                            and all(w == jh_factor(tau, iota(tau, K)) for K, w in up + low)
                        )
                        if not ok:
                            res.fail({"tau": tau.spec(), "J": J, "j": j, "lattices": kind})
        res.notes["irregular_cuspidal_skipped"] = skipped
    return res


def _weight_index(params: Params):
    """weight -> list of (type, J) with that JH factor."""
    index = defaultdict(list)
    for tau in all_types(params):
        for J, w in jh_factors(tau).items():
            index[w].append((tau, J))
    return index


def suite_interval(p: int, f: int) -> SuiteResult:
    """For generic semisimple rho and every type the modular set is empty or
    an interval inside P_tau. Types sharing no weight with D(rho) have an
    empty modular set, so only the types reached through D(rho) are visited."""
    res = SuiteResult("interval", {"p": p, "f": f})
    with _timed(res):
        params = Params(p, f)
        index = _weight_index(params)
        ntypes = sum(1 for _ in all_types(params))
        nrho = 0
        for rho in all_rhobars(params):
            if not is_generic(rho):
                continue
            nrho += 1
            hits = defaultdict(set)
            for w in weight_set(rho):
                for tau, J in index.get(w, ()):
                    hits[tau].add(J)
            res.checked += ntypes
            for tau, A in hits.items():
                try:
                    iv = interval_of(A, tau)
                except Exception as exc:
                    res.fail({"rho": rho.spec(), "tau": tau.spec(), "error": str(exc)})
                    continue
                if not all(in_p_tau(tau, J) for J in subsets_between(iv.j_min, iv.j_max)):
                    res.fail({"rho": rho.spec(), "tau": tau.spec(), "error": "outside P_tau"})
        res.notes["generic_rhobars"] = nrho
        res.notes["types"] = ntypes
    return res


def suite_search(p: int, f: int) -> SuiteResult:
    res = SuiteResult("search", {"p": p, "f": f})
    with _timed(res):
        params = Params(p, f)
        counts = Counter()
        for rho in all_rhobars(params):
            if not is_generic(rho):
                continue
            D = sorted(weight_set(rho))
            checks = []
            for w in D:
                checks.append(("isolating", (w,), lambda w=w: find_type_isolating(rho, w)))
            checks.append(("covering", (), lambda: find_type_covering(rho)))
            for i, w1 in enumerate(D):
                for w2 in D[i + 1 :]:
                    try:
                        eligible = ext_exists(w1, w2)
                    except UnsupportedError:
                        counts["pair_unsupported"] += 1
                        continue
                    if eligible:
                        checks.append(
                            ("pair", (w1, w2), lambda a=w1, b=w2: find_type_for_pair(rho, a, b))
                        )
            for name, ws, run in checks:
                res.checked += 1
                counts[name] += 1
                try:
                    tau = run()
                except Exception as exc:
                    res.fail({"rho": rho.spec(), "search": name, "error": str(exc)})
                    continue
                got = set(jh_factors(tau).values())
                Dset = set(D)
                ok = (
                    got & Dset == {ws[0]}
                    if name == "isolating"
                    else Dset <= got
                    if name == "covering"
                    else got & Dset == set(ws)
                )
                if not ok:
                    res.fail({"rho": rho.spec(), "search": name, "tau": tau.spec()})
        res.notes.update(counts)
    return res


def suite_genericity_p3(f: int) -> SuiteResult:
    res = SuiteResult("genericity-p3", {"p": 3, "f": f})
    with _timed(res):
        params = Params(3, f, allow_p3=True)
        n_irr = 0
        for rho in all_rhobars(params):
            res.checked += 1
            wit = generic_witness(rho)
            if rho.kind == RED and wit is not None:
                res.fail({"rho": rho.spec(), "error": "reducible generic"})
            if rho.kind == IRR and wit is not None:
                n_irr += 1
                r = wit[0]
                if r[0] != 1 or any(x != 0 for x in r[1:]):
                    res.fail({"rho": rho.spec(), "r": list(r)})
        res.notes["generic_irreducible"] = n_irr
    return res


def suite_ideals(n_max: int = 3) -> SuiteResult:
    """The worked example, both lemmas and the cyclicity induction."""
    res = SuiteResult("ideals", {"n_max": n_max})
    with _timed(res):
        norm = lambda s: s.replace(" ", "")  # noqa: E731
        for case, want in zip(nongeneric_example(), EXAMPLE_IDEALS):
            res.checked += 1
            got = (case["latex"]["I_J1"], case["latex"]["I_J2"], case["latex"]["sum"])
            if tuple(map(norm, got)) != tuple(map(norm, want)) or case["equal"]:
                res.fail({"example": case})
        for n in range(1, n_max + 1):
            for rep in (exhaustive_faces(n), exhaustive_ideals(n)):
                res.checked += rep.checked
                for c in rep.counterexamples[:MAX_FAILURES]:
                    res.fail({"n": n, "counterexample": c})
            ring = standard_ring(n)
            for fam in capped_intervals(ring):
                rep, _ = cyclicity_induction_check(ring, fam)
                res.checked += 1
                if not rep.passed:
                    res.fail({"n": n, "family": sorted(fam), "cyclicity": rep.counterexamples[:3]})
    return res


# -- predictor ---------------------------------------------------------------


def farey(n: int) -> list[Fraction]:
    return sorted({Fraction(a, b) for b in range(1, n + 1) for a in range(b + 1)})


def predictor_classes(params: Params):
    """Types grouped by what the predictor sees: kind, iota(P_tau), J_base and
    regularity. Yields one representative per group."""
    seen = set()
    for tau in class_representatives(params):
        try:
            labels = tuple(iota_p_tau(tau))
        except UnsupportedError:  # irregular cuspidal: no J_base
            labels = None
        key = (tau.kind, tuple(p_tau(tau)), labels)
        if key not in seen:
            seen.add(key)
            yield tau


def suite_predictor(p: int, f: int, denominators: int = 6) -> SuiteResult:
    res = SuiteResult("predictor", {"p": p, "f": f, "denominators": denominators})
    grid = farey(denominators)
    with _timed(res):
        params = Params(p, f)
        nclasses = 0
        for tau in predictor_classes(params):
            nclasses += 1
            P = set(p_tau(tau))
            for lo in range(1 << f):
                for hi in range(1 << f):
                    if lo & ~hi or not all(J in P for J in subsets_between(lo, hi)):
                        continue
                    data = DefSpaceData(tau, lo, hi)
                    n = size(data.delta)
                    for vals in product(grid, repeat=n):
                        lam = Point.from_values(data, vals)
                        res.checked += 1
                        _check_prediction(res, tau, data, lam)
        res.notes["classes"] = nclasses
    return res


def _check_prediction(res: SuiteResult, tau: TameType, data: DefSpaceData, lam: Point):
    where = {
        "tau": tau.spec(),
        "j_min": data.j_min,
        "j_max": data.j_max,
        "x": [str(x) for _, x in lam.x_val],
    }
    try:
        g = predict_lattice(data, lam)
    except Exception as exc:
        res.fail({**where, "error": str(exc)})
        return
    if not isinstance(g, GaugeVector):
        return
    try:
        g.check()
    except Exception as exc:
        res.fail({**where, "error": f"invalid gauge: {exc}"})
    labels = iota_p_tau(tau)
    v = {J: varpi_J(data, lam, J) for J in labels}
    # homothety: shifting every coefficient leaves the normalized gauge alone
    from .gauges import gauge_sum

    shifted = gauge_sum(tau, [(v[J] + 3, J) for J in labels])
    if shifted.values != g.values:
        res.fail({**where, "error": "not homothety invariant"})
    for J in range(1 << tau.f):
        if varpi_J(data, lam, J) + varpi_J(data, lam, J, primed=True) != size(J):
            res.fail({**where, "error": f"varpi_J varpi'_J != p^|J| at {J}"})
            break
    rep = annihilation_identity_check(data, lam)
    if not rep["pass"]:
        res.fail({**where, "error": "fibre identity", "violations": rep["violations"]})


SUITES = {
    "jh": suite_jh,
    "filtration": suite_filtration,
    "gauge": suite_gauge,
    "dual": suite_dual,
    "cokernel-engine": suite_cokernel_engine,
    "cokernel": suite_cokernel,
    "chains": suite_chains,
    "bc": suite_bc,
    "interval": suite_interval,
    "search": suite_search,
    "predictor": suite_predictor,
}
