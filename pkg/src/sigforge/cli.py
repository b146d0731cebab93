"""Command-line front end: ``sigforge sig | rho | certify``.

Every command builds a :class:`ResultRecord` and prints it as a table
(default), JSON (``--json``) or CSV (``--csv``).

Exit codes:
    0  success
    2  usage error (unknown flag, missing argument)
    3  malformed input (unparseable number, matrix, word, file or knot)
    4  omega = 1 where a nontrivial root of unity is required
    5  infection depth or rho index below 2
    6  any other precondition violation (negative sizes, bad coefficients)
    7  the knot table cannot realize a requested rho value
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .cyclo import CyclotomicNumber, _initial_precision, parse
from .cylinders import (
    InfectionScript,
    InsufficientKnotBasisError,
    density_sample,
    evaluate_combination,
    independence_witness,
    rho_n,
)
from .freegroup import GENUS2_NAMES, build_alpha_beta, fox_derivative
from .hermitian import HermitianMatrix, signature
from .knotsig import alexander_polynomial, knot_from_json, rho0
from .twistfamily import (
    TwistFamilySpec,
    defect_scan,
    independence_certificate,
    matrix_A,
    omega_k,
    rho_dehn_power,
    twist_inertia,
    twist_record,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MALFORMED = 3
EXIT_TRIVIAL_OMEGA = 4
EXIT_DEPTH = 5
EXIT_PRECONDITION = 6
EXIT_KNOT_BASIS = 7


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


@dataclass
class ResultRecord:
    command: str
    inputs: dict[str, Any]
    outputs: dict[str, Any]
    provenance: str
    timestamp: str | None = None
    rows: list[dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "provenance": self.provenance,
        }
        if self.rows:
            out["rows"] = self.rows
        if self.timestamp is not None:
            out["timestamp"] = self.timestamp
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> ResultRecord:
        data = json.loads(text)
        return cls(
            data["command"],
            data["inputs"],
            data["outputs"],
            data["provenance"],
            data.get("timestamp"),
            data.get("rows", []),
        )

    def to_table(self) -> str:
        lines = [f"command     {self.command}"]
        lines += [f"  {k:<10}{_show(v)}" for k, v in self.inputs.items()]
        lines += [f"{k:<12}{_show(v)}" for k, v in self.outputs.items()]
        lines.append(f"provenance  {self.provenance}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        rows = self.rows or [{**self.inputs, **self.outputs}]
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _show(v) for k, v in row.items()})
        return buf.getvalue()


def _show(v: Any) -> str:
    if isinstance(v, list):
        return ", ".join(_show(x) for x in v) if v else "-"
    if isinstance(v, dict):
        return "; ".join(f"{k}: {_show(x)}" for k, x in v.items())
    return str(v)


def _jsonable(v: Any) -> Any:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, CyclotomicNumber):
        return v.serialize()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


# -- argument helpers ----------------------------------------------------------


def _omega(text: str) -> CyclotomicNumber:
    try:
        w = parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"cannot parse omega {text!r}: {exc}", EXIT_MALFORMED) from exc
    if w == 1:
        raise CliError("precondition violated: omega must not be 1", EXIT_TRIVIAL_OMEGA)
    if w * w.conj() != 1:
        raise CliError(f"omega {text!r} is not on the unit circle", EXIT_MALFORMED)
    return w


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise CliError(f"expected comma-separated integers, got {text!r}", EXIT_MALFORMED) from exc


def _fraction_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(p.strip()) for p in text.split(",") if p.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"expected comma-separated rationals, got {text!r}", EXIT_MALFORMED) from exc


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"expected a rational number, got {text!r}", EXIT_MALFORMED) from exc


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read JSON from {path}: {exc}", EXIT_MALFORMED) from exc


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise CliError(f"missing required flag(s): {flags}", EXIT_USAGE)


# -- commands ------------------------------------------------------------------


def cmd_signature(args: argparse.Namespace) -> ResultRecord:
    if args.file is not None:
        try:
            h = HermitianMatrix.from_json(json.dumps(_read_json(args.file)))
        except (ValueError, TypeError, KeyError) as exc:
            raise CliError(f"malformed matrix in {args.file}: {exc}", EXIT_MALFORMED) from exc
        inputs: dict[str, Any] = {"file": args.file}
        inertia = signature(h)
        provenance = "exact congruence diagonalization over the cyclotomic field"
    elif args.family == "A":
        _require(args, "N")
        inputs = {"family": "A", "N": args.N}
        inertia = signature(matrix_A(args.N))
        provenance = "tridiagonal form A_N of the Dehn-twist intersection form; signature N"
    elif args.family == "C":
        _require(args, "m", "n", "N", "omega")
        spec = TwistFamilySpec(args.m, args.n, args.N, _omega(args.omega))
        inputs = {"family": "C", "m": args.m, "n": args.n, "N": args.N, "omega": spec.omega}
        inertia = twist_inertia(spec)
        provenance = "twisted intersection form C_(m,n,N)(omega) of the Dehn-twist family"
    else:
        raise CliError("sig needs --file or --family", EXIT_USAGE)
    return ResultRecord(
        "sig",
        _jsonable(inputs),
        {"inertia": list(inertia), "signature": inertia.signature},
        provenance,
    )


def cmd_rho(args: argparse.Namespace) -> ResultRecord:
    kind = args.kind
    if kind == "twist":
        if args.k is not None:
            _require(args, "N0")
            if args.j is not None:
                m, n = 4**args.j - 1, 4**args.j + 1
            else:
                _require(args, "m", "n")
                m, n = args.m, args.n
            spec = TwistFamilySpec(m, n, 2 * args.N0, omega_k(args.k))
            inputs: dict[str, Any] = {"m": m, "n": n, "N0": args.N0, "k": args.k}
        else:
            _require(args, "m", "n", "N", "omega")
            spec = TwistFamilySpec(args.m, args.n, args.N, _omega(args.omega))
            inputs = {"m": args.m, "n": args.n, "N": args.N}
        inputs["omega"] = spec.omega
        outputs: dict[str, Any] = twist_record(spec)
        provenance = "rho of (D_alpha D_beta)^(N+1) = sig C_(m,n,N)(omega) - 2(N+1)"
    elif kind == "dehn":
        _require(args, "M")
        w = _omega(args.omega or "zeta(2)")
        inputs = {"M": args.M, "omega": w}
        outputs = {"rho": rho_dehn_power(args.M, w)}
        provenance = "Dehn twist powers about a bounding curve: sig A_(M-1) - M = -1"
    elif kind == "knot-rho0":
        if args.seifert is not None:
            try:
                knot = knot_from_json(_read_json(args.seifert).get("seifert_matrix"))
            except (ValueError, AttributeError) as exc:
                raise CliError(f"malformed Seifert matrix: {exc}", EXIT_MALFORMED) from exc
            inputs = {"seifert": args.seifert}
        else:
            _require(args, "knot")
            try:
                knot = knot_from_json(args.knot)
            except KeyError as exc:
                raise CliError(str(exc.args[0]), EXIT_MALFORMED) from exc
            inputs = {"knot": args.knot}
        value = rho0(knot)
        outputs = {
            "alexander": list(alexander_polynomial(knot)),
            "rho0": value if isinstance(value, Fraction) else float(value),
        }
        provenance = "rho_0 = normalized integral of the Levine-Tristram signature over the circle"
    elif kind == "cylinder":
        _require(args, "script", "i")
        if args.i < 2:
            raise CliError(f"precondition violated: rho index must be >= 2, got {args.i}", EXIT_DEPTH)
        script = _load_script(args.script)
        inputs = {"script": args.script, "i": args.i}
        outputs = {"rho": rho_n(script, args.i), "ledger": script.ledger()}
        provenance = "infection formula: rho_i shifts by rho_0(K) for infections of depth <= i"
    else:  # pragma: no cover - argparse restricts choices
        raise CliError(f"unknown rho kind {kind}", EXIT_USAGE)
    return ResultRecord(f"rho {kind}", _jsonable(inputs), _jsonable(outputs), provenance)


def _load_script(path: str) -> InfectionScript:
    data = _read_json(path)
    if isinstance(data, dict):
        for rec in data.get("records", []):
            if isinstance(rec, dict) and isinstance(rec.get("depth"), int) and rec["depth"] < 2:
                raise CliError(
                    f"precondition violated: infection depth must be >= 2, got {rec['depth']}",
                    EXIT_DEPTH,
                )
    try:
        return InfectionScript.from_json(data)
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise CliError(f"malformed infection script {path}: {exc}", EXIT_MALFORMED) from exc


def cmd_certify(args: argparse.Namespace) -> ResultRecord:
    kind = args.kind
    rows: list[dict[str, Any]] = []
    if kind == "defect-bound":
        _require(args, "m", "n", "omega")
        w = _omega(args.omega)
        if args.max < 1:
            raise CliError("--max must be >= 1", EXIT_PRECONDITION)
        scan = defect_scan(args.m, args.n, w, args.max, genus=args.genus)
        t = scan.rho_table
        rows = [
            {"a": a, "b": b, "defect": t[a] + t[b] - t[a + b]}
            for a in range(1, args.max + 1)
            for b in range(1, args.max + 1)
        ]
        inputs: dict[str, Any] = {"m": args.m, "n": args.n, "omega": w, "max": args.max, "genus": args.genus}
        outputs: dict[str, Any] = {
            "max_abs_defect": scan.max_abs_defect,
            "argmax": list(scan.argmax),
            "bound": scan.bound,
            "within_bound": scan.within_bound,
        }
        provenance = "signature cocycle defect of rho on powers of D_alpha D_beta against 2 n beta_1"
    elif kind == "independence":
        _require(args, "coeffs", "bound")
        coeffs = _fraction_list(args.coeffs)
        bound = _fraction(args.bound)
        if args.indices is not None:
            indices = _int_list(args.indices)
            if indices and min(indices) < 2:
                raise CliError("precondition violated: rho indices must be >= 2", EXIT_DEPTH)
            script = independence_witness(indices, coeffs, bound, genus=args.genus)
            inputs = {"indices": indices, "coeffs": coeffs, "bound": bound}
            outputs = {
                "script": script.to_json(),
                "value": evaluate_combination(script, indices, coeffs),
            }
            provenance = "finite witness: trefoil infection at the top depth"
        else:
            _require(args, "ks")
            ks = _int_list(args.ks)
            wit = independence_certificate(ks, coeffs, bound)
            inputs = {"ks": ks, "coeffs": coeffs, "bound": bound}
            outputs = {
                "j": wit.j,
                "N0": wit.N0,
                "m": wit.m,
                "n": wit.n,
                "rho_values": list(wit.rho_values),
                "value": wit.value,
            }
            provenance = "finite witness f_(4^j-1, 4^j+1, 2 N0) for independence of the rho_k"
    elif kind == "fox-table":
        _require(args, "m", "n")
        try:
            alpha, beta = build_alpha_beta(args.m, args.n)
        except ValueError as exc:
            raise CliError(f"precondition violated: {exc}", EXIT_PRECONDITION) from exc
        table = {}
        for label, word in (("alpha", alpha), ("beta", beta)):
            for g, name in enumerate(GENUS2_NAMES):
                table[f"d{label}/d{name}"] = fox_derivative(word, g).to_str()
        rows = [{"derivative": k, "value": v} for k, v in table.items()]
        inputs = {"m": args.m, "n": args.n, "alpha": alpha.to_str(), "beta": beta.to_str()}
        outputs = table
        provenance = "left Fox derivatives of the based curves alpha and beta(m,n)"
    else:  # pragma: no cover
        raise CliError(f"unknown certify kind {kind}", EXIT_USAGE)
    return ResultRecord(f"certify {kind}", _jsonable(inputs), _jsonable(outputs), provenance, rows=_jsonable(rows))


def cmd_density(args: argparse.Namespace) -> ResultRecord:
    target, tol = _fraction(args.target), _fraction(args.tolerance)
    if args.depth < 2:
        raise CliError(f"precondition violated: infection depth must be >= 2, got {args.depth}", EXIT_DEPTH)
    script = density_sample(target, tol, depth=args.depth, genus=args.genus)
    return ResultRecord(
        "certify density",
        _jsonable({"target": target, "tolerance": tol, "depth": args.depth}),
        _jsonable({"script": script.to_json(), "rho": rho_n(script, args.depth)}),
        "finite witness: infections realizing a rho value within tolerance",
    )


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit JSON")
    fmt.add_argument("--csv", action="store_true", help="emit CSV (grid rows when available)")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")

    parser = argparse.ArgumentParser(
        prog="sigforge",
        description="Exact rho-invariants and signature cocycles for mapping classes and homology cylinders.",
    )
    parser.add_argument("--version", action="version", version=f"sigforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sig", parents=[common], help="inertia of a Hermitian matrix")
    p.add_argument("--file", help="JSON array of rows; entries are integers, rationals or cyclo/zeta strings")
    p.add_argument("--family", choices=("A", "C"))
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--omega", help='root of unity, e.g. "zeta(16)^3"')
    p.set_defaults(func=cmd_signature)

    p = sub.add_parser("rho", parents=[common], help="rho-invariants")
    p.add_argument("kind", choices=("twist", "dehn", "knot-rho0", "cylinder"))
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--N0", type=int, help="twist: use N = 2 N0 with omega = omega_k")
    p.add_argument("--k", type=int, help="twist: omega_k = zeta(4^k)")
    p.add_argument("--j", type=int, help="twist: m = 4^j - 1, n = 4^j + 1")
    p.add_argument("--omega")
    p.add_argument("--M", type=int, help="dehn: power of the twist")
    p.add_argument("--knot", help="knot-rho0: built-in knot name")
    p.add_argument("--seifert", help="knot-rho0: JSON file with a seifert_matrix field")
    p.add_argument("--script", help="cylinder: JSON infection script")
    p.add_argument("--i", type=int, help="cylinder: rho index (>= 2)")
    p.set_defaults(func=cmd_rho)

    p = sub.add_parser("certify", parents=[common], help="finite certificates")
    p.add_argument("kind", choices=("defect-bound", "independence", "fox-table", "density"))
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--omega")
    p.add_argument("--max", type=int, default=40)
    p.add_argument("--genus", type=int, default=2)
    p.add_argument("--ks", help="independence: comma-separated k values")
    p.add_argument("--indices", help="independence: rho_n indices for a cylinder witness")
    p.add_argument("--coeffs", help="independence: comma-separated rational coefficients")
    p.add_argument("--bound")
    p.add_argument("--target", default="0", help="density: target rho value")
    p.add_argument("--tolerance", default="1", help="density: allowed distance")
    p.add_argument("--depth", type=int, default=2, help="density: infection depth")
    p.set_defaults(func=cmd_certify)
    return parser


def _dispatch(args: argparse.Namespace) -> ResultRecord:
    if args.command == "certify" and args.kind == "density":
        return cmd_density(args)
    return args.func(args)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _initial_precision()
    except ValueError as exc:
        print(f"sigforge: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    try:
        record = _dispatch(args)
    except CliError as exc:
        print(f"sigforge: {exc}", file=sys.stderr)
        return exc.code
    except InsufficientKnotBasisError as exc:
        print(f"sigforge: {exc}", file=sys.stderr)
        return EXIT_KNOT_BASIS
    except ValueError as exc:
        # omega and depth checks happen up front; what remains is a size or coefficient check
        print(f"sigforge: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    if not args.no_timestamp:
        record.timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    if args.json:
        print(record.to_json())
    elif args.csv:
        sys.stdout.write(record.to_csv())
    else:
        print(record.to_table())
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
