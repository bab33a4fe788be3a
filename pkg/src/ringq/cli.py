"""Command-line front end.

    ringq modulus --n 2 --p 4 --r1 1 --r2 16 [--solver exact|grid|both]
    ringq verify  --map f1 --n 2 --p 4 --K 2 --alpha 1 --rings 1:2,1:16
    ringq sweep   --map f1 --n 2 --p 4 --K 2 --alpha 1 --R-start 10 --R-end 1e6 --R-steps 51 --out s.csv

Every command accepts ``--config doc.json`` (flags override it) and
``--json PATH`` to write the result document ('-' for stdout). A result
document can be fed back as ``--config``; its ``inputs`` section is used.

Exit codes: 0 all checks pass, 1 an inequality is violated, 2 bad input.
"""

from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import math
import platform
import sys

import numpy as np

from . import __version__
from .bounds import PowerLawMajorant, liminf_estimate
from .errors import ConvergenceError, DomainError
from .geometry import SphericalRing, check_exponent
from .maps import growth_sweep, make_f1, make_f2, profile_from_config, verify_ring_q
from .modulus import ring_modulus_exact, ring_modulus_grid
from .qfield import qfield_from_config, ring_inequality_sample_check
from .quadrature import QuadratureSpec

CSV_HEADER = ("R", "L", "normalizer", "ratio", "finite_bound", "asymptotic_constant")
DEFAULT_SEED = 42


class InputError(Exception):
    """Raised for anything that should end the process with exit code 2."""


def fmt(x) -> str:
    """17 significant digits, '.' decimal point regardless of locale."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def to_json(obj, indent=0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (f"{pad}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items())
        return "{\n" + ",\n".join(items) + f"\n{end}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.floating, np.integer)) for v in obj):
            return "[" + ", ".join(to_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + to_json(v, indent + 1) for v in obj) + f"\n{end}]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        s = fmt(obj)
        return s if math.isfinite(obj) else json.dumps(s)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


# -- configuration ----------------------------------------------------------

def load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("config document must be a JSON object")
    # accept a previous result document as a config
    return copy.deepcopy(doc["inputs"]) if "inputs" in doc and "results" in doc else doc


def _set(doc, section, key, value):
    if value is not None:
        doc.setdefault(section, {})[key] = value


def parse_rings(text) -> list[list[float]]:
    rings = []
    for part in text.split(","):
        try:
            a, b = part.split(":")
            rings.append([float(a), float(b)])
        except ValueError as exc:
            raise InputError(f"bad ring {part!r}; expected r1:r2") from exc
    return rings


def parse_kind_spec(text, kinds) -> dict:
    """'powerlaw:2,1' -> {"kind": "power_law", "params": {"K": 2.0, "alpha": 1.0}}."""
    name, _, rest = text.partition(":")
    if name not in kinds:
        raise InputError(f"unknown kind {name!r}; choose from {sorted(kinds)}")
    kind, names = kinds[name]
    try:
        vals = [float(v) for v in rest.split(",")] if rest else []
    except ValueError as exc:
        raise InputError(f"bad parameters in {text!r}") from exc
    if len(vals) != len(names):
        raise InputError(f"{name} takes {len(names)} parameters ({', '.join(names)})")
    return {"kind": kind, "params": dict(zip(names, vals))}


Q_KINDS = {"powerlaw": ("power_law", ("K", "alpha")), "power_law": ("power_law", ("K", "alpha")),
           "constant": ("constant", ("c",))}
PROFILE_KINDS = {"power": ("power", ("c", "beta")), "log_power": ("log_power", ("c", "gamma"))}


def merge_flags(args) -> dict:
    doc = load_config(args.config)
    _set(doc, "problem", "n", args.n)
    _set(doc, "problem", "p", args.p)
    _set(doc, "quadrature", "rel_tol", args.rel_tol)
    _set(doc, "quadrature", "samples", args.samples)
    _set(doc, "quadrature", "seed", args.seed)
    doc.setdefault("quadrature", {}).setdefault("seed", DEFAULT_SEED)
    if args.command in ("verify", "sweep"):
        _set(doc, "majorant", "K", args.K)
        _set(doc, "majorant", "alpha", args.alpha)
        _set(doc, "majorant", "r0", args.r0)
        if args.map in ("f1", "f2"):
            doc["profile"] = {"kind": args.map}
        if getattr(args, "profile", None):
            doc["profile"] = parse_kind_spec(args.profile, PROFILE_KINDS)
    if args.command == "modulus":
        if args.r1 is not None or args.r2 is not None:
            if args.r1 is None or args.r2 is None:
                raise InputError("--r1 and --r2 must be given together")
            doc["rings"] = [[args.r1, args.r2]]
        _set(doc, "modulus", "solver", args.solver)
        _set(doc, "modulus", "grid_points", args.grid_points)
    elif args.command == "verify":
        if args.q:
            doc["qfield"] = parse_kind_spec(args.q, Q_KINDS)
        if args.rings:
            doc["rings"] = parse_rings(args.rings)
        _set(doc, "verify", "tol", args.tol)
        _set(doc, "verify", "eta_trials", args.eta_trials)
    elif args.command == "sweep":
        _set(doc, "sweep", "R_start", args.R_start)
        _set(doc, "sweep", "R_end", args.R_end)
        _set(doc, "sweep", "steps", args.R_steps)
        _set(doc, "sweep", "spacing", args.spacing)
    return doc


def _num(doc, section, key, default=None, cast=float):
    value = doc.get(section, {}).get(key, default)
    if value is None:
        raise InputError(f"missing {section}.{key}")
    try:
        return cast(value)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{section}.{key} must be numeric, got {value!r}") from exc


def _problem(doc):
    n = _num(doc, "problem", "n", cast=float)
    if n != int(n):
        raise InputError(f"problem.n must be an integer, got {n}")
    n = int(n)
    p = check_exponent(_num(doc, "problem", "p"), n)
    return n, p


def _quad(doc) -> QuadratureSpec:
    q = doc.get("quadrature", {})
    return QuadratureSpec(rel_tol=float(q.get("rel_tol", 1e-10)),
                          samples=int(q.get("samples", 100_000)),
                          seed=int(q.get("seed", DEFAULT_SEED)))


def _majorant(doc) -> PowerLawMajorant:
    return PowerLawMajorant(_num(doc, "majorant", "K"), _num(doc, "majorant", "alpha"),
                            _num(doc, "majorant", "r0", 1.0))


def _profile(doc, n, p):
    spec = doc.get("profile")
    if not spec:
        raise InputError("no map given (use --map f1|f2 or a profile section)")
    if spec.get("kind") == "f1":
        return make_f1(_majorant(doc), p, n)
    if spec.get("kind") == "f2":
        return make_f2(_majorant(doc), p, n)
    return profile_from_config(spec)


def _rings(doc):
    rings = doc.get("rings")
    if not rings:
        raise InputError("no rings given")
    try:
        return [SphericalRing(float(a), float(b)) for a, b in rings]
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise InputError(f"rings must be [r1, r2] pairs: {exc}") from exc


# -- commands ---------------------------------------------------------------

def cmd_modulus(doc, out):
    n, p = _problem(doc)
    ring = _rings(doc)[0]
    solver = doc.get("modulus", {}).get("solver", "exact")
    if solver not in ("exact", "grid", "both"):
        raise InputError(f"unknown solver {solver!r}")
    points = int(doc.get("modulus", {}).get("grid_points", 10_000))
    results = {}
    if solver in ("exact", "both"):
        results["exact"] = ring_modulus_exact(ring, p, n).value
        print(f"modulus[exact] = {fmt(results['exact'])}", file=out)
    if solver in ("grid", "both"):
        res = ring_modulus_grid(ring, p, n, points)
        results["grid"] = res.value
        results["grid_points"] = points
        results["grid_iterations"] = res.iterations
        print(f"modulus[grid] = {fmt(res.value)}  (grid_points={points}, "
              f"iterations={res.iterations})", file=out)
    if solver == "both":
        results["relative_discrepancy"] = abs(results["grid"] - results["exact"]) / results["exact"]
        print(f"relative_discrepancy = {fmt(results['relative_discrepancy'])}", file=out)
    return results, 0


def cmd_verify(doc, out):
    n, p = _problem(doc)
    quad = _quad(doc)
    profile = _profile(doc, n, p)
    if "qfield" not in doc:
        maj = _majorant(doc)
        doc["qfield"] = {"kind": "power_law", "params": {"K": maj.K, "alpha": maj.alpha}}
    q = qfield_from_config(doc["qfield"])
    rings = _rings(doc)
    tol = float(doc.get("verify", {}).get("tol", 1e-10))
    trials = int(doc.get("verify", {}).get("eta_trials", 0))
    reports = verify_ring_q(profile, q, rings, p, n, tol, quad)
    rows = []
    ok = True
    for ring, rep in zip(rings, reports):
        entry = rep.as_dict()
        line = (f"ring {rep.label}  lhs={fmt(rep.lhs)}  rhs={fmt(rep.rhs)}  "
                f"residual={fmt(rep.residual)}  {'PASS' if rep.verdict else 'FAIL'}")
        ok &= rep.verdict
        if trials:
            eta = ring_inequality_sample_check(q, ring, p, n, rep.lhs, trials, quad.seed, quad)
            entry["eta_sampling"] = {k: v for k, v in eta.as_dict().items() if k != "rhs_values"}
            ok &= eta.verdict
            line += f"  eta[{trials}] min_rhs={fmt(eta.rhs)} {'PASS' if eta.verdict else 'FAIL'}"
        print(line, file=out)
        rows.append(entry)
    print("all checks pass" if ok else "inequality violated", file=out)
    return {"profile": profile.to_config(), "reports": rows, "all_pass": ok}, 0 if ok else 1


def sweep_grid(doc) -> np.ndarray:
    start = _num(doc, "sweep", "R_start")
    end = _num(doc, "sweep", "R_end")
    steps = _num(doc, "sweep", "steps", cast=int)
    spacing = doc.get("sweep", {}).get("spacing", "log")
    if steps < 10:
        raise InputError(f"sweep needs at least 10 rows for the liminf estimate, got {steps}")
    if not 0 < start < end:
        raise InputError(f"sweep needs 0 < R_start < R_end, got {start}, {end}")
    if spacing == "log":
        grid = np.geomspace(start, end, steps)
    elif spacing == "linear":
        grid = np.linspace(start, end, steps)
    else:
        raise InputError(f"spacing must be 'log' or 'linear', got {spacing!r}")
    grid[0], grid[-1] = start, end
    return grid


def cmd_sweep(doc, out, csv_path=None):
    n, p = _problem(doc)
    maj = _majorant(doc)
    profile = _profile(doc, n, p)
    sweep = growth_sweep(profile, maj, p, n, sweep_grid(doc))
    liminf = liminf_estimate(sweep)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in sweep.rows:
        writer.writerow([fmt(v) for v in (*row, sweep.constant)])
    if csv_path and csv_path != "-":
        try:
            with open(csv_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(buf.getvalue())
        except OSError as exc:
            raise InputError(f"cannot write {csv_path}: {exc}") from exc
        summary = out
    else:
        out.write(buf.getvalue())
        summary = sys.stderr
    print(f"liminf_estimate={fmt(liminf)}  asymptotic_constant={fmt(sweep.constant)}  "
          f"normalizer={sweep.asymptotics.description}", file=summary)
    results = {"rows": [list(r) for r in sweep.rows], "asymptotic_constant": sweep.constant,
               "normalizer": sweep.asymptotics.description, "liminf_estimate": liminf,
               "profile": profile.to_config()}
    return results, 0


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config (or earlier result document)")
    common.add_argument("--json", dest="json_out", help="write the result document here ('-' = stdout)")
    common.add_argument("--n", type=int)
    common.add_argument("--p", type=float)
    common.add_argument("--rel-tol", type=float)
    common.add_argument("--samples", type=int)
    common.add_argument("--seed", type=int)

    maps = argparse.ArgumentParser(add_help=False)
    maps.add_argument("--map", choices=("f1", "f2", "config"), default="config")
    maps.add_argument("--K", type=float)
    maps.add_argument("--alpha", type=float)
    maps.add_argument("--r0", type=float)
    maps.add_argument("--profile", help="explicit profile, e.g. power:2,0.5 or log_power:c,gamma")

    parser = argparse.ArgumentParser(prog="ringq", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"ringq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("modulus", parents=[common], help="p-modulus of a ring")
    m.add_argument("--r1", type=float)
    m.add_argument("--r2", type=float)
    m.add_argument("--solver", choices=("exact", "grid", "both"))
    m.add_argument("--grid-points", type=int)

    v = sub.add_parser("verify", parents=[common, maps], help="check the ring Q inequality")
    v.add_argument("--q", help="Q weight, e.g. powerlaw:K,alpha or constant:c")
    v.add_argument("--rings", help="comma list of r1:r2")
    v.add_argument("--tol", type=float)
    v.add_argument("--eta-trials", type=int, help="also test this many random eta per ring")

    s = sub.add_parser("sweep", parents=[common, maps], help="growth sweep to CSV")
    s.add_argument("--R-start", type=float)
    s.add_argument("--R-end", type=float)
    s.add_argument("--R-steps", type=int)
    s.add_argument("--spacing", choices=("log", "linear"))
    s.add_argument("--out", help="CSV path (default stdout)")
    return parser


COMMANDS = {"modulus": cmd_modulus, "verify": cmd_verify, "sweep": cmd_sweep}


def main(argv=None, stdout=None) -> int:
    out = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        doc = merge_flags(args)
        inputs = copy.deepcopy(doc)
        if args.command == "sweep":
            results, code = cmd_sweep(doc, out, args.out)
        else:
            results, code = COMMANDS[args.command](doc, out)
    except (InputError, DomainError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if "qfield" in doc and "qfield" not in inputs:
        inputs["qfield"] = doc["qfield"]
    if args.json_out:
        result_doc = {"command": args.command, "inputs": inputs, "results": results,
                      "versions": {"ringq": __version__, "python": platform.python_version(),
                                   "numpy": np.__version__},
                      "seed": inputs["quadrature"]["seed"]}
        text = to_json(result_doc) + "\n"
        if args.json_out == "-":
            out.write(text)
        else:
            try:
                with open(args.json_out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            except OSError as exc:
                print(f"error: cannot write {args.json_out}: {exc}", file=sys.stderr)
                return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
