"""Command-line driver: ``phinforge <module> <action> ...``.

Build commands print the constructed object as JSON (ready to be piped into
the matching ``verify``/``check`` command); check commands print a report
with one verdict per check.  Exit status: 0 all checks pass, 1 a check
failed, 2 usage or input error.  Rationals are always printed as "num/den".
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence, TextIO

from . import building, drinfeld, phin, repbuilder, residue, steenbrink, weights
from .scalars import FieldParams, PiScalar, fraction_from_str, fraction_to_str

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Check:
    name: str
    ok: bool
    witness: Any = None


@dataclass
class Report:
    command: list[str]
    checks: list[Check] = field(default_factory=list)
    payload: Any = None

    @property
    def exit_status(self) -> int:
        return EXIT_OK if all(c.ok for c in self.checks) else EXIT_FAIL

    def add(self, name: str, ok: bool, witness: Any = None) -> None:
        self.checks.append(Check(name, bool(ok), witness))

    def to_json(self) -> dict:
        out: dict[str, Any] = {"command": self.command, "status": self.exit_status}
        if self.checks:
            out["checks"] = [{"name": c.name, "pass": c.ok, "witness": c.witness} for c in self.checks]
        if self.payload is not None:
            out["result"] = self.payload
        return out


def to_plain(x: Any) -> Any:
    """Recursively convert to JSON-ready values with exact rational strings."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return fraction_to_str(x)
    if isinstance(x, float):
        return "inf" if x == float("inf") else repr(x)
    if isinstance(x, PiScalar):
        return x.to_json()
    if isinstance(x, dict):
        return {(k if isinstance(k, str) else json.dumps(to_plain(k))): to_plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        seq = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [to_plain(v) for v in seq]
    if hasattr(x, "to_json"):
        return to_plain(x.to_json())
    raise TypeError(f"cannot serialise {type(x).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(to_plain(obj), sort_keys=True, indent=2)


# -- argument helpers -------------------------------------------------------------------------


def int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def read_json(path: str, stdin: TextIO) -> Any:
    try:
        if path == "-":
            return json.load(stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from exc


def weight_arg(args: argparse.Namespace) -> weights.HighestWeight:
    lam = weights.HighestWeight(tuple(args.lam))
    if getattr(args, "d", None) is not None and args.d != lam.d:
        raise UsageError(f"--d {args.d} does not match a weight with {len(args.lam)} entries")
    return lam


# -- handlers ----------------------------------------------------------------------------------


def cmd_weights(args, report: Report, stdin) -> None:
    if args.action == "mu":
        report.payload = list(weights.mu_of(weight_arg(args), args.j).mu)
    elif args.action == "preimage":
        try:
            lam, j = weights.weight_from_mu(args.mu)
        except weights.NoPreimageError as exc:
            report.add("preimage", False, str(exc))
            return
        report.payload = {"lambda": list(lam.lam), "j": j}
    elif args.action == "jumps":
        report.payload = weights.hodge_jumps(weight_arg(args))
    elif args.action == "table":
        table = weights.predicted_cohomology_table(weight_arg(args), args.mu_value)
        report.payload = [[s, deg, dim] for s, (deg, dim) in sorted(table.items())]
    elif args.action == "dual":
        report.payload = weights.dual_weight(weight_arg(args)).to_json()


def cmd_rep(args, report: Report, stdin) -> None:
    lam = weight_arg(args)
    rep = repbuilder.build_irrep(lam)
    report.add("idempotent", rep.is_idempotent())
    report.add("weyl_dimension", rep.dim == weights.weyl_dimension(lam), {"dim": rep.dim})
    report.payload = {
        "dim": rep.dim,
        "grading": {str(s): n for s, n in repbuilder.weight_grading(rep).items()},
        "jumps": weights.hodge_jumps(lam),
    }


def _module_checks(m: phin.FilteredPhiNModule, report: Report) -> None:
    ok, witness = phin.is_weakly_admissible(m)
    report.add("weakly_admissible", ok, witness)
    report.payload = {
        "t_H": phin.t_H(m),
        "t_N": phin.t_N(m),
        "monodromy_graded_dims": {str(k): v for k, v in phin.monodromy_graded_dims(m.n_lists()).items()},
    }


def cmd_phin(args, report: Report, stdin) -> None:
    m = phin.FilteredPhiNModule.from_json(read_json(args.file, stdin))
    _module_checks(m, report)


def _drinfeld_params(args) -> drinfeld.DrinfeldParams:
    params = FieldParams(args.p, args.e, args.f)
    lam = weight_arg(args)
    twist = None
    if args.twist:
        head, _, alpha = args.twist.partition(",")
        if not alpha:
            raise UsageError("--twist expects m,alpha")
        twist = (int(head), PiScalar.of(fraction_from_str(alpha), params.p, params.e))
    return drinfeld.DrinfeldParams(params, lam, args.mu, twist)


def cmd_drinfeld(args, report: Report, stdin) -> None:
    if args.action == "build":
        dp = _drinfeld_params(args)
        m = drinfeld.build_twisted(dp) if dp.twist else drinfeld.build_D(dp)
        report.payload = m.to_json()
    elif args.action == "verify":
        m = phin.FilteredPhiNModule.from_json(read_json(args.file, stdin))
        for name, res in drinfeld.verify_module(m).items():
            report.add(name, res.ok, res.detail)
        report.payload = {"t_H": phin.t_H(m), "t_N": phin.t_N(m)}
    elif args.action == "dual":
        dp = _drinfeld_params(args)
        res = drinfeld.verify_dual_pair(dp)
        report.add("duality_pairing", res.ok, res.detail)


def cmd_building(args, report: Report, stdin) -> None:
    if args.action == "ball":
        cx = building.ball(args.d, args.p, args.r)
        report.payload = {"counts": {str(k): v for k, v in cx.counts().items()}}
        if args.emit:
            report.payload["complex"] = cx.to_json()
    elif args.action == "hodge":
        if args.cycle:
            cx = building.cycle_graph(args.cycle)
        elif args.file:
            cx = building.complex_from_json(read_json(args.file, stdin))
        else:
            raise UsageError("building hodge needs --cycle N or a FILE")
        dec = building.hodge_decompose(cx, coeff_dim=args.coeff_dim)
        report.add("direct_sum", dec.is_direct_sum(), {"harmonic": len(dec.harmonic), "exact": len(dec.exact)})
        report.add("res_gamma_bijective", building.res_gamma_is_bijective(cx, args.coeff_dim))
        report.payload = {"harmonic_dim": len(dec.harmonic), "exact_dim": len(dec.exact)}


def cmd_residue(args, report: Report, stdin) -> None:
    if args.action == "top-dim":
        dim = residue.annulus_top_cohomology_dim(args.d, args.W)
        report.add("one_dimensional", dim == 1, {"dim": dim})
        report.payload = dim
    elif args.action == "eval":
        form = residue.LogForm.from_json(read_json(args.file, stdin))
        report.payload = {"residue": residue.residue(form), "truncated": form.truncated}


def _datum_report(datum: steenbrink.LogToyDatum, report: Report) -> None:
    b = steenbrink.build_A(datum)
    try:
        b.check()
        report.add("total_differential_squares_to_zero", True)
    except steenbrink.DatumError as exc:
        report.add("total_differential_squares_to_zero", False, str(exc))
    n_conn = steenbrink.monodromy_via_connecting(datum)
    top = datum.cech.complex.d if datum.cech is not None else datum.top
    report.add("N_nilpotent", steenbrink.is_nilpotent_of_order(n_conn, top + 1))
    report.add("nu_equals_N", steenbrink.verify_nu_equals_N(datum))
    payload: dict[str, Any] = {
        "cohomology_dims": steenbrink.total_cohomology_dims(datum),
        "bicomplex_total_dims": [b.total_dim(n) for n in b.total_degrees()],
        "N": {str(k): v for k, v in n_conn.items() if v},
    }
    if datum.cech is not None and datum.cech.complex.d >= 1:
        res = steenbrink.verify_resmono(datum)
        report.add("alpha_res_beta_equals_N_power", res.ok, {"sign": res.sign})
        payload["resmono_sign"] = res.sign
    report.payload = payload


def cmd_steenbrink(args, report: Report, stdin) -> None:
    if args.action == "verify":
        datum = steenbrink.LogToyDatum.from_json(read_json(args.file, stdin))
        _datum_report(datum, report)
    elif args.action == "demo":
        makers = {
            "tate": lambda: steenbrink.tate_datum(args.n, args.coeff_dim),
            "torus": lambda: steenbrink.torus_datum(args.n, args.m, args.coeff_dim),
            "annulus": lambda: steenbrink.annulus_datum(args.d),
            "split": lambda: steenbrink.split_datum(args.n),
        }
        datum = makers[args.kind]()
        if args.emit:
            report.payload = datum.to_json()
            return
        _datum_report(datum, report)


# -- parser ------------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # keep argparse's exit status but route through run()
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="phinforge", description="Exact constructions and checks for filtered (phi, N)-modules.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="module", required=True, parser_class=_Parser)

    w = sub.add_parser("weights", help="highest-weight combinatorics")
    wsub = w.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("mu", "jumps", "table", "dual"):
        sp = wsub.add_parser(name)
        sp.add_argument("--d", type=int)
        sp.add_argument("--lambda", dest="lam", type=int_list, required=True)
        if name == "mu":
            sp.add_argument("--j", type=int, required=True)
        if name == "table":
            sp.add_argument("--mu-value", type=int, default=1)
    sp = wsub.add_parser("preimage")
    sp.add_argument("--mu", type=int_list, required=True)

    r = sub.add_parser("rep", help="irreducible representations")
    rsub = r.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = rsub.add_parser("build")
    sp.add_argument("--d", type=int)
    sp.add_argument("--lambda", dest="lam", type=int_list, required=True)

    ph = sub.add_parser("phin", help="filtered (phi, N)-modules")
    phsub = ph.add_subparsers(dest="action", required=True, parser_class=_Parser)
    phsub.add_parser("check").add_argument("file")

    dr = sub.add_parser("drinfeld", help="modules attached to the period domain")
    drsub = dr.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("build", "dual"):
        sp = drsub.add_parser(name)
        sp.add_argument("--d", type=int)
        sp.add_argument("--p", type=int, default=2)
        sp.add_argument("--f", type=int, default=1)
        sp.add_argument("--e", type=int, default=1)
        sp.add_argument("--lambda", dest="lam", type=int_list, required=True)
        sp.add_argument("--mu", type=int, default=1)
        sp.add_argument("--twist", help="m,alpha for the twisted model")
    drsub.add_parser("verify").add_argument("file")

    bu = sub.add_parser("building", help="truncated buildings and cochains")
    busub = bu.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = busub.add_parser("ball")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--emit", action="store_true", help="include the simplex lists")
    sp = busub.add_parser("hodge")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--cycle", type=int)
    sp.add_argument("--coeff-dim", type=int, default=1)

    re_ = sub.add_parser("residue", help="Laurent windows and residues")
    resub = re_.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = resub.add_parser("top-dim")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--W", type=int, required=True)
    resub.add_parser("eval").add_argument("file")

    st = sub.add_parser("steenbrink", help="weight double complex and monodromy")
    stsub = st.add_subparsers(dest="action", required=True, parser_class=_Parser)
    stsub.add_parser("verify").add_argument("file")
    sp = stsub.add_parser("demo")
    sp.add_argument("kind", choices=["tate", "torus", "annulus", "split"])
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--m", type=int, default=3)
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--coeff-dim", type=int, default=1, help="constant coefficient dimension (tate, torus)")
    sp.add_argument("--emit", action="store_true", help="print the datum JSON instead of a report")
    return parser


HANDLERS = {
    "weights": cmd_weights,
    "rep": cmd_rep,
    "phin": cmd_phin,
    "drinfeld": cmd_drinfeld,
    "building": cmd_building,
    "residue": cmd_residue,
    "steenbrink": cmd_steenbrink,
}

# commands whose output is an object to be re-ingested rather than a report
_RAW_PAYLOAD = {("drinfeld", "build"), ("residue", "eval")}


def render_text(report: Report) -> str:
    lines = [f"{c.name}: {'PASS' if c.ok else 'FAIL'}" for c in report.checks]
    if report.payload is not None:
        lines.append(dumps(report.payload))
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stdin: TextIO | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stdin = stdin or sys.stdin
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"phinforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    report = Report(argv)
    try:
        HANDLERS[args.module](args, report, stdin)
    except UsageError as exc:
        print(f"phinforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, TypeError) as exc:
        print(f"phinforge: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    emit_obj = args.emit if hasattr(args, "emit") and args.module == "steenbrink" else False
    if (args.module, args.action) in _RAW_PAYLOAD or emit_obj:
        stdout.write(dumps(report.payload) + "\n")
    elif args.json:
        stdout.write(dumps(report.to_json()) + "\n")
    else:
        stdout.write(render_text(report) + "\n")
    return report.exit_status


def main() -> None:
    sys.exit(run())
