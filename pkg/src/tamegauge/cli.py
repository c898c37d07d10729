"""Command line front end.

Exit codes: 0 success, 1 usage error, 2 computation error, 3 theorem violation
(including a failed verification suite).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .core import Params, jset_to_json, members
from .errors import ComputationError, ParameterError, TameGaugeError, TheoremViolation

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_VIOLATION = 0, 1, 2, 3
PRECISION_ENV = "TAMEGAUGE_PRECISION"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_jset(text: str, f: int) -> int:
    """A bitmask (``5``, ``0b101``) or a brace list of indices (``{0,2}``)."""
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        inner = text[1:-1].strip()
        idx = [int(x) for x in inner.split(",")] if inner else []
        if any(not 0 <= i < f for i in idx):
            raise ParameterError(f"index out of range in {text}")
        return sum(1 << i for i in set(idx))
    J = int(text, 0)
    if not 0 <= J < 1 << f:
        raise ParameterError(f"J-set {text} does not fit in width {f}")
    return J


def parse_lambda(text: str) -> list[Fraction]:
    if not text.strip():
        return []
    try:
        return [Fraction(x.strip()) for x in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise ParameterError(f"cannot parse lambda {text!r}") from None


def _params(args) -> Params:
    return Params(args.p, args.f, allow_p3=getattr(args, "allow_p3", False))


def _weight(w) -> dict:
    return w.to_json()


# -- subcommands -------------------------------------------------------------


def cmd_ptau(args):
    from .tame import p_tau, parse_type

    tau = parse_type(args.type, _params(args))
    return {"type": tau.to_json(), "c": list(tau.c_digits), "p_tau": p_tau(tau)}


def cmd_jh(args):
    from .tame import jh_factor, p_tau, parse_type

    params = _params(args)
    tau = parse_type(args.type, params)
    Js = [parse_jset(args.J, params.f)] if args.J is not None else p_tau(tau)
    return {
        "type": tau.to_json(),
        "factors": [
            {"J": jset_to_json(J, params.f), "weight": _weight(jh_factor(tau, J))} for J in Js
        ],
    }


def cmd_weights(args):
    from .rhobar import generic_witness, parse_rhobar, weight_set

    params = _params(args)
    rho = parse_rhobar(args.rho, params)
    wit = generic_witness(rho)
    return {
        "rho": rho.to_json(),
        "generic": wit is not None,
        "witness": None if wit is None else {"r": list(wit[0]), "twist": wit[1]},
        "weights": [_weight(w) for w in sorted(weight_set(rho))],
    }


def cmd_interval(args):
    from .rhobar import modular_indices, parse_rhobar, weight_interval
    from .tame import parse_type

    params = _params(args)
    rho = parse_rhobar(args.rho, params)
    tau = parse_type(args.type, params)
    iv = weight_interval(rho, tau)
    return {
        "rho": rho.to_json(),
        "type": tau.to_json(),
        "modular": modular_indices(rho, tau),
        "interval": None if iv is None else iv.to_json(params.f),
    }


def cmd_gauge(args):
    from .gauges import gauge_sum, socle_lattice_gauge
    from .tame import iota_p_tau, parse_type

    params = _params(args)
    tau = parse_type(args.type, params)
    J = parse_jset(args.J, params.f)
    if args.lattice == "socle":
        g = socle_lattice_gauge(tau, J)
    else:
        g = gauge_sum(tau, [(0, J)])
    g.check()
    out = {"type": tau.to_json(), "lattice": args.lattice, "J": J, "gauge": g.to_json()["values"]}
    if args.measure:
        from .engine.lattices import lattice_family

        fam = lattice_family(tau, args.precision)
        L = fam.socle[J] if args.lattice == "socle" else fam.cosocle[J]
        measured = fam.gauge(L)
        out["measured"] = {str(K): measured[K] for K in iota_p_tau(tau)}
        if any(measured[K] != g.values[K] for K in measured):
            raise TheoremViolation(f"measured gauge differs from the closed form: {out}")
    return out


def cmd_ideals(args):
    from .monomial import (
        capped_intervals,
        cyclicity_induction_check,
        exhaustive_faces,
        exhaustive_ideals,
        nongeneric_example,
        standard_ring,
    )

    if args.check == "example":
        if args.delta != 2:
            raise ParameterError("the worked example lives on |Delta| = 2")
        return {"example": nongeneric_example()}
    if args.check == "faces":
        return {"faces": exhaustive_faces(args.delta).to_json()}
    if args.check == "ideals":
        return {"ideals": exhaustive_ideals(args.delta).to_json()}
    ring = standard_ring(args.delta)
    reports = []
    for fam in capped_intervals(ring):
        rep, ann = cyclicity_induction_check(ring, fam)
        reports.append({"family": sorted(fam), "pass": rep.passed, "annihilator": str(ann)})
    return {"cyclicity": reports}


def cmd_predict(args):
    from .predictor import (
        DefSpaceData,
        Point,
        SocleLatticeMarker,
        describe,
        predict_lattice,
    )
    from .tame import parse_type

    params = _params(args)
    tau = parse_type(args.type, params)
    data = DefSpaceData(tau, parse_jset(args.jmin, params.f), parse_jset(args.jmax, params.f))
    lam = Point.from_values(data, parse_lambda(args.lam))
    g = predict_lattice(data, lam)
    if isinstance(g, SocleLatticeMarker):
        return {"type": tau.to_json(), "prediction": g.to_json()}
    g.check()
    return {
        "type": tau.to_json(),
        "delta": members(data.delta),
        "gauge": g.to_json()["values"],
        "lattice": describe(g),
    }


def cmd_verify(args):
    from . import verify as V

    suite = args.suite
    if suite == "ideals":
        res = V.suite_ideals(args.delta)
    elif suite == "genericity":
        res = V.suite_genericity_p3(args.f)
    elif suite in ("jh", "filtration", "gauge", "dual", "cokernel-engine"):
        params = Params(args.p, args.f)
        types = None
        if args.tau:
            from .tame import parse_type

            types = [parse_type(t, params) for t in args.tau]
        res = V.SUITES[suite](args.p, args.f, args.scope, types, args.precision)
    else:
        res = V.SUITES[suite](args.p, args.f)
    out = res.to_json()
    out["_exit"] = EXIT_OK if res.passed else EXIT_VIOLATION
    return out


# -- parser ------------------------------------------------------------------

SUITE_NAMES = [
    "jh",
    "filtration",
    "gauge",
    "dual",
    "cokernel-engine",
    "cokernel",
    "chains",
    "bc",
    "interval",
    "search",
    "predictor",
    "ideals",
    "genericity",
]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tamegauge", description=__doc__.splitlines()[0])
    common = _Parser(add_help=False)
    common.add_argument("--p", type=int, default=5)
    common.add_argument("--f", type=int, default=1)
    common.add_argument("--allow-p3", action="store_true")
    common.add_argument("--out", choices=["json", "table"], default="json")
    common.add_argument("--out-file")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("ptau", parents=[common], help="index set P_tau of a type")
    s.add_argument("--type", required=True)
    s.set_defaults(run=cmd_ptau)

    s = sub.add_parser("jh", parents=[common], help="JH factors of a type")
    s.add_argument("--type", required=True)
    s.add_argument("--J")
    s.set_defaults(run=cmd_jh)

    s = sub.add_parser("weights", parents=[common], help="weight set of rho-bar")
    s.add_argument("--rho", required=True)
    s.set_defaults(run=cmd_weights)

    s = sub.add_parser("interval", parents=[common], help="modular interval of a type")
    s.add_argument("--rho", required=True)
    s.add_argument("--type", required=True)
    s.set_defaults(run=cmd_interval)

    s = sub.add_parser("gauge", parents=[common], help="gauge of a distinguished lattice")
    s.add_argument("--type", required=True)
    s.add_argument("--J", required=True)
    s.add_argument("--lattice", choices=["cosocle", "socle"], default="cosocle")
    s.add_argument("--measure", action="store_true", help="also measure with the engine")
    s.add_argument("--precision", type=int, default=_env_precision())
    s.set_defaults(run=cmd_gauge)

    s = sub.add_parser("ideals", parents=[common], help="monomial ideal checks")
    s.add_argument("--delta", type=int, default=2)
    s.add_argument(
        "--check", choices=["example", "faces", "ideals", "cyclicity"], default="example"
    )
    s.set_defaults(run=cmd_ideals)

    s = sub.add_parser("predict", parents=[common], help="predicted lattice at a point")
    s.add_argument("--type", required=True)
    s.add_argument("--jmin", required=True)
    s.add_argument("--jmax", required=True)
    s.add_argument("--lambda", dest="lam", default="")
    s.set_defaults(run=cmd_predict)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("--suite", choices=SUITE_NAMES, required=True)
    s.add_argument("--tau", action="append", help="restrict engine suites to these types")
    s.add_argument("--scope", choices=["all", "representatives"], default="representatives")
    s.add_argument("--delta", type=int, default=3, help="largest |Delta| for the ideals suite")
    s.add_argument("--precision", type=int, default=_env_precision())
    s.set_defaults(run=cmd_verify)
    return parser


def _env_precision():
    env = os.environ.get(PRECISION_ENV)
    return int(env) if env else None


def _config(args) -> dict:
    skip = {"run", "out", "out_file", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def to_table(data, prefix: str = "") -> list[str]:
    """Flatten nested data into ``path<TAB>value`` lines."""
    if isinstance(data, dict):
        lines = []
        for k in sorted(data, key=str):
            lines += to_table(data[k], f"{prefix}.{k}" if prefix else str(k))
        return lines or [f"{prefix}\t{{}}"]
    if isinstance(data, list):
        lines = []
        for i, v in enumerate(data):
            lines += to_table(v, f"{prefix}[{i}]")
        return lines or [f"{prefix}\t[]"]
    return [f"{prefix}\t{json.dumps(data)}"]


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2)
    return "\n".join(to_table(payload))


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        result = args.run(args)
        code = result.pop("_exit", EXIT_OK)
    except TheoremViolation as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except ParameterError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ComputationError, TameGaugeError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    payload = {"command": args.command, "config": _config(args), "result": result}
    if "precision" in payload["config"] and payload["config"]["precision"] is None:
        from .engine.lattices import default_precision

        payload["config"]["precision"] = default_precision(args.f)
    text = render(payload, args.out)
    if args.out_file:
        with open(args.out_file, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=stdout)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
