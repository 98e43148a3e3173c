"""Command-line entry point: ``qjacobi {eval,spectrum,verify,sweep,report}``.

Exit codes: 0 all checks pass, 1 some check failed, 2 usage or domain
error, 3 series non-convergence, 4 eigensolver failure.

Output goes to stdout unless ``--output`` is given or the
``QJACOBI_OUTPUT_DIR`` environment variable names a directory, in which
case a file named after the command is written there.  Every JSON document
is validated against ``schema/report.schema.json`` before it is emitted.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Optional, Sequence

import jsonschema

from . import families as fam
from . import registry as reg
from . import spectral
from .exceptions import ConvergenceFailure, DenominatorPole, DomainError, NonConvergence
from .families import BigParams, LittleParams
from .qcore import QBase

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONV, EXIT_EIGEN = 0, 1, 2, 3, 4
ENV_OUTPUT_DIR = "QJACOBI_OUTPUT_DIR"
FAMILIES = ("little", "big", "dual-little", "dual-big", "asc2", "alt-qcharlier", "alt-qcharlier-dual")

IDENTITY_HEADER = ("identity_id", "params", "lhs", "rhs", "residual", "tolerance",
                   "pass", "terms_used", "wall_ms", "status", "detail")
EVAL_HEADER = ("family", "n", "point", "point_spec", "value")
SPECTRUM_HEADER = ("operator", "index", "computed", "predicted", "deviation", "pass")

_STATUS = {DomainError: "domain_error", DenominatorPole: "domain_error",
           NonConvergence: "non_convergence", ConvergenceFailure: "eigensolver_failure"}
_STATUS_EXIT = {"domain_error": EXIT_USAGE, "non_convergence": EXIT_NONCONV,
                "eigensolver_failure": EXIT_EIGEN}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: Dict[str, object] = field(default_factory=dict)
    tolerance: float = 1e-10
    tolerance_explicit: bool = False
    truncation: int = 200
    matrix_size: int = 300
    output_format: str = "json"
    output_path: Optional[str] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["params"] = {k: v for k, v in sorted(self.params.items()) if v is not None}
        return d


@lru_cache(maxsize=1)
def load_schema() -> dict:
    text = resources.files("qjacobi").joinpath("schema/report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_document(doc: dict) -> None:
    jsonschema.validate(doc, load_schema())


# ---------------------------------------------------------------- parsing helpers

_LAMBDA_RE = re.compile(r"^(?P<pre>[ac]?)q(?:\^(?P<k>-?\d+))?$")


def parse_lambda_spec(spec: str, q: float, a: Optional[float] = None, c: Optional[float] = None) -> float:
    """Symbolic point ``1``, ``q^k``, ``aq^k`` or ``cq^k`` (``aq`` means ``aq^1``)."""
    s = spec.replace(" ", "").replace("**", "^")
    if s == "1":
        return 1.0
    m = _LAMBDA_RE.match(s)
    if not m:
        raise UsageError(f"cannot parse --lambda-spec {spec!r}; expected 1, q^k, aq^k or cq^k")
    k = int(m.group("k")) if m.group("k") is not None else 1
    scale = 1.0
    if m.group("pre") == "a":
        if a is None:
            raise UsageError("--lambda-spec aq^k needs --a")
        scale = a
    elif m.group("pre") == "c":
        if c is None:
            raise UsageError("--lambda-spec cq^k needs --c")
        scale = c
    return scale * q ** k


def parse_grid(spec: str) -> Optional[Dict[str, List[float]]]:
    """``default`` -> None; else ``q=0.3,0.5;a=0.2;...`` -> value lists."""
    if spec.strip() == "default":
        return None
    out: Dict[str, List[float]] = {}
    for part in re.split(r"[;\s]+", spec.strip()):
        if not part:
            continue
        if "=" not in part:
            raise UsageError(f"grid entry {part!r} is not of the form name=v1,v2,...")
        name, values = part.split("=", 1)
        name = name.strip()
        if name not in ("q", "a", "b", "c"):
            raise UsageError(f"unknown grid parameter {name!r}; use q, a, b, c")
        try:
            out[name] = [float(v) for v in values.split(",") if v.strip()]
        except ValueError as exc:
            raise UsageError(f"bad number in grid entry {part!r}") from exc
    return out


def _point_from_args(args) -> Dict[str, float]:
    return {k: getattr(args, k) for k in ("q", "a", "b", "c") if getattr(args, k) is not None}


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise DomainError("missing parameter(s): " + ", ".join("--" + n for n in missing))
    return [getattr(args, n) for n in names]


def _little(args) -> LittleParams:
    q, a, b = _need(args, "q", "a", "b")
    return LittleParams(QBase(q), a, b)


def _big(args) -> BigParams:
    q, a, b, c = _need(args, "q", "a", "b", "c")
    return BigParams(QBase(q), a, b, c)


def _fmt_num(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


# ---------------------------------------------------------------- commands

def _eval_point(args) -> tuple:
    if args.lambda_spec is not None:
        q = _need(args, "q")[0]
        return parse_lambda_spec(args.lambda_spec, q, args.a, args.c), args.lambda_spec
    if args.lam is None:
        raise UsageError("give --lambda or --lambda-spec")
    return float(args.lam), None


def cmd_eval(args, config: RunConfig):
    family, n = args.family, args.n
    spec = None
    if family == "little":
        point, spec = _eval_point(args)
        value = fam.little_qjacobi_stable(n, point, _little(args))
    elif family == "big":
        point, spec = _eval_point(args)
        value = fam.big_qjacobi_stable(n, point, _big(args))
    elif family in ("dual-little", "dual-big"):
        p = _little(args) if family == "dual-little" else _big(args)
        if args.m is not None:
            point = args.m
            value = fam.dual_little(n, args.m, p) if family == "dual-little" else fam.dual_big(n, args.m, p)
        else:
            point, spec = _eval_point(args)
            value = fam.dual_little_at(n, point, p) if family == "dual-little" else fam.dual_big_at(n, point, p)
    elif family == "asc2":
        q, a = _need(args, "q", "a")
        x = _need(args, "m")[0]
        point, value = x, fam.asc2(n, x, a, q)
    elif family == "alt-qcharlier":
        q, a = _need(args, "q", "a")
        point, spec = _eval_point(args)
        value = fam.alt_qcharlier_recur(n, point, a, q)
    else:
        q, a = _need(args, "q", "a")
        point = _need(args, "m")[0]
        value = fam.alt_qcharlier_dual(point, n, a, q)
    row = {"family": family, "n": int(n), "point": point, "value": _fmt_num(float(value))}
    if spec is not None:
        row["point_spec"] = spec
    return [row], EXIT_PASS


def cmd_spectrum(args, config: RunConfig):
    size = args.size if args.size is not None else config.matrix_size
    if args.op == "I1":
        top = args.top if args.top is not None else 20
        rep = spectral.verify_spectrum_I1(size, _little(args), top)
    else:
        top = args.top if args.top is not None else 15
        rep = spectral.verify_spectrum_I2(size, _big(args), top)
    ok = rep.max_abs_dev <= config.tolerance
    row = dict(rep.to_dict(), operator=args.op, **{"pass": bool(ok)})
    return [row], EXIT_PASS if ok else EXIT_FAIL


def _ids(spec: str) -> List[str]:
    if spec == "all":
        return list(reg.IDS)
    ids = [s.strip() for s in spec.split(",") if s.strip()]
    unknown = [i for i in ids if i not in reg.REGISTRY]
    if unknown or not ids:
        raise UsageError(f"unknown identity id(s): {', '.join(unknown) or '(none)'}\n"
                         "valid ids: " + ", ".join(reg.IDS + ("all",)))
    return ids


def _options(args, config: RunConfig) -> reg.CheckOptions:
    return reg.CheckOptions(
        tolerance=config.tolerance if config.tolerance_explicit else None,
        truncation=config.truncation, matrix_size=config.matrix_size,
        k=getattr(args, "k", None), t=getattr(args, "t", None), x=getattr(args, "x", None),
        n=getattr(args, "n", None), timing=args.timing)


def _run_task(task):
    """Run one (id, point) pair; exceptions become skip records."""
    ident, point, opts = task
    try:
        return [r.to_dict() for r in reg.run_check(ident, point, opts)]
    except tuple(_STATUS) as exc:
        status = next(s for cls, s in _STATUS.items() if isinstance(exc, cls))
        return [{"identity_id": ident, "params": {k: float(v) for k, v in sorted(point.items())},
                 "status": status, "error": str(exc)}]


def _tasks(ids: Sequence[str], grid: Optional[Dict[str, List[float]]], single: Optional[Dict[str, float]], opts):
    tasks = []
    for ident in ids:
        kind = reg.REGISTRY[ident].kind
        if single is not None:
            points = [single]
        elif grid is None:
            points = reg.default_grid(kind)
        else:
            points = reg.grid_from_values(grid, kind)
        tasks.extend((ident, pt, opts) for pt in points)
    return tasks


def _execute(tasks, jobs: int) -> List[dict]:
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_task, tasks, chunksize=4))
    else:
        chunks = [_run_task(t) for t in tasks]
    return [r for chunk in chunks for r in chunk]


def _verdict(results: List[dict]) -> int:
    ran = [r for r in results if "pass" in r]
    skipped = [r for r in results if "status" in r]
    if any(not r["pass"] for r in ran):
        return EXIT_FAIL
    for status in ("eigensolver_failure", "non_convergence"):
        if any(r["status"] == status for r in skipped):
            return _STATUS_EXIT[status]
    if not ran:
        return _STATUS_EXIT[skipped[0]["status"]] if skipped else EXIT_USAGE
    return EXIT_PASS


def cmd_verify(args, config: RunConfig):
    ids = _ids(args.id)
    opts = _options(args, config)
    if args.grid is not None:
        tasks = _tasks(ids, parse_grid(args.grid), None, opts)
    else:
        point = _point_from_args(args)
        if "q" not in point:
            raise UsageError("give a parameter point (--q, --a, ...) or --grid")
        tasks = _tasks(ids, None, point, opts)
    if not tasks:
        raise UsageError("the parameter grid is empty")
    results = _execute(tasks, args.jobs)
    return results, _verdict(results)


def cmd_sweep(args, config: RunConfig):
    ids = _ids(args.id)
    opts = _options(args, config)
    tasks = _tasks(ids, parse_grid(args.grid), None, opts)
    if not tasks:
        raise UsageError("the parameter grid is empty")
    results = _execute(tasks, args.jobs)
    return results, _verdict(results)


def cmd_report(args, config: RunConfig):
    try:
        with open(args.input, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read report {args.input!r}: {exc}") from exc
    try:
        validate_document(doc)
    except jsonschema.ValidationError as exc:
        raise UsageError(f"report does not match the schema: {exc.message}") from exc
    config.params.update({"source_command": doc["config"]["command"]})
    results = doc["results"]
    failed = any(r.get("pass") is False for r in results)
    code = EXIT_FAIL if failed else int(doc["summary"]["exit_code"])
    return results, code


# ---------------------------------------------------------------- rendering

def _params_str(params: dict) -> str:
    return ";".join(f"{k}={v}" for k, v in sorted(params.items()))


def _summary(results: List[dict], code: int) -> dict:
    passed = sum(1 for r in results if r.get("pass") is True)
    failed = sum(1 for r in results if r.get("pass") is False)
    skipped = sum(1 for r in results if "status" in r)
    worst: Dict[str, float] = {}
    for r in results:
        if "identity_id" in r and "residual" in r:
            v = r["residual"]
            v = float(v) if not isinstance(v, str) else float(v)
            if r["identity_id"] not in worst or v > worst[r["identity_id"]]:
                worst[r["identity_id"]] = v
    out = {"total": len(results), "passed": passed, "failed": failed, "skipped": skipped,
           "exit_code": code}
    if worst:
        out["worst"] = {k: _fmt_num(v) for k, v in sorted(worst.items())}
    return out


def _point_rows(results: List[dict]) -> List[dict]:
    """One row per parameter point: pass/fail/skip counts."""
    rows: Dict[str, dict] = {}
    for r in results:
        if "identity_id" not in r:
            continue
        key = _params_str({k: v for k, v in r["params"].items() if k in ("q", "a", "b", "c")})
        row = rows.setdefault(key, {"point": key, "passed": 0, "failed": 0, "skipped": 0})
        if "status" in r:
            row["skipped"] += 1
        elif r["pass"]:
            row["passed"] += 1
        else:
            row["failed"] += 1
    return list(rows.values())


def render_json(config: RunConfig, results: List[dict], code: int, error: Optional[dict] = None) -> str:
    summary = _summary(results, code)
    if config.command == "sweep":
        summary["points"] = _point_rows(results)
    if error:
        summary["error"] = error
    doc = {"config": config.to_dict(), "results": results, "summary": summary}
    validate_document(doc)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def render_csv(config: RunConfig, results: List[dict], code: int, error: Optional[dict] = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if config.command == "eval":
        w.writerow(EVAL_HEADER)
        for r in results:
            w.writerow([r["family"], r["n"], repr(r["point"]), r.get("point_spec", ""), repr(r["value"])])
    elif config.command == "spectrum":
        w.writerow(SPECTRUM_HEADER)
        for r in results:
            for i, (cv, pv) in enumerate(zip(r["computed"], r["predicted"])):
                w.writerow([r["operator"], i, repr(cv), repr(pv), repr(abs(cv - pv)), r["pass"]])
    else:
        w.writerow(IDENTITY_HEADER)
        for r in results:
            if "status" in r:
                w.writerow([r["identity_id"], _params_str(r["params"])] + [""] * 7 + [r["status"], r["error"]])
            else:
                w.writerow([r["identity_id"], _params_str(r["params"]), repr(r["lhs"]), repr(r["rhs"]),
                            repr(r["residual"]), repr(r["tolerance"]), r["pass"], r["terms_used"],
                            repr(r["wall_ms"]), "ok", r.get("detail", "")])
    return buf.getvalue()


def render_human(config: RunConfig, results: List[dict], code: int, error: Optional[dict] = None) -> str:
    lines = []
    if error:
        lines.append(f"error ({error['type']}): {error['message']}")
    for r in results:
        if "family" in r:
            at = r.get("point_spec") or r["point"]
            lines.append(f"{r['family']}  n={r['n']}  at {at}:  {r['value']!r}")
        elif "operator" in r:
            verdict = "PASS" if r["pass"] else "FAIL"
            lines.append(f"{verdict}  {r['operator']}  N={r['truncation_size']}  matched={r['matched_count']}  "
                         f"max|dev|={r['max_abs_dev']:.3e}")
        elif "status" in r:
            lines.append(f"SKIP  {r['identity_id']:<18} {_params_str(r['params'])}  {r['status']}: {r['error']}")
        else:
            verdict = "PASS" if r["pass"] else "FAIL"
            res = r["residual"]
            res = f"{res:.3e}" if not isinstance(res, str) else res
            lines.append(f"{verdict}  {r['identity_id']:<18} {_params_str(r['params'])}  "
                         f"residual={res}  tol={r['tolerance']}")
    if config.command == "sweep" and results:
        lines.append("")
        lines.append("per point:")
        for row in _point_rows(results):
            lines.append(f"  {row['point']:<40} pass={row['passed']} fail={row['failed']} skip={row['skipped']}")
    if config.command != "eval":
        s = _summary(results, code)
        lines.append(f"{s['passed']} passed, {s['failed']} failed, {s['skipped']} skipped; exit {code}")
    return "\n".join(lines) + "\n"


RENDERERS = {"json": render_json, "csv": render_csv, "human": render_human}
EXTENSIONS = {"json": "json", "csv": "csv", "human": "txt"}


def _destination(config: RunConfig) -> Optional[str]:
    if config.output_path:
        return config.output_path
    out_dir = os.environ.get(ENV_OUTPUT_DIR)
    if out_dir:
        return os.path.join(out_dir, f"qjacobi-{config.command}.{EXTENSIONS[config.output_format]}")
    return None


def emit(config: RunConfig, text: str, stdout=None) -> None:
    dest = _destination(config)
    if dest is None:
        (stdout or sys.stdout).write(text)
        return
    parent = os.path.dirname(dest)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(dest, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------- argparse

def _common(parser: argparse.ArgumentParser, point=True) -> None:
    if point:
        g = parser.add_argument_group("parameters")
        for name in ("q", "a", "b", "c"):
            g.add_argument(f"--{name}", type=float)
    parser.add_argument("--tolerance", type=float)
    parser.add_argument("--truncation", type=int, default=200)
    parser.add_argument("--matrix-size", type=int, default=300)
    parser.add_argument("--format", choices=("json", "csv", "human"), default="json")
    parser.add_argument("--output", help="write here instead of stdout")
    parser.add_argument("--timing", action="store_true", help="record wall_ms (breaks byte-identical output)")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qjacobi", description="little/big q-Jacobi families and identity checks")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate one family member at one point")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, help="lattice index (dual families, asc2 exponent)")
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--lambda-spec", help="symbolic point: 1, q^k, aq^k or cq^k")
    _common(p)

    p = sub.add_parser("spectrum", help="truncated I1/I2 spectrum against its prediction")
    p.add_argument("--op", choices=("I1", "I2"), required=True)
    p.add_argument("--size", type=int)
    p.add_argument("--top", type=int)
    _common(p)

    for name, helptext in (("verify", "run identity checks at a point or over a grid"),
                           ("sweep", "run identity checks over a grid, summarised per point")):
        p = sub.add_parser(name, help=helptext)
        if name == "verify":
            p.add_argument("--id", required=True, help="identity id, comma list, or 'all'")
            p.add_argument("--grid", help="'default' or 'q=..;a=..;b=..;c=..'")
        else:
            p.add_argument("--id", default="all")
            p.add_argument("--grid", default="default")
        p.add_argument("--k", type=int)
        p.add_argument("--t", type=float)
        p.add_argument("--x", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--jobs", type=int, default=1)
        _common(p)

    p = sub.add_parser("report", help="re-render a saved JSON report")
    p.add_argument("--input", required=True)
    _common(p, point=False)
    return ap


COMMANDS = {"eval": cmd_eval, "spectrum": cmd_spectrum, "verify": cmd_verify,
            "sweep": cmd_sweep, "report": cmd_report}


def _config(args) -> RunConfig:
    skip = {"command", "tolerance", "truncation", "matrix_size", "format", "output", "timing", "jobs"}
    params = {k: v for k, v in vars(args).items() if k not in skip}
    if "lam" in params:
        params["lambda"] = params.pop("lam")
    cfg = RunConfig(command=args.command, params=params, truncation=args.truncation,
                    matrix_size=args.matrix_size, output_format=args.format, output_path=args.output)
    if args.tolerance is not None:
        cfg.tolerance, cfg.tolerance_explicit = args.tolerance, True
    if cfg.truncation < 1 or cfg.matrix_size < 1:
        raise UsageError("--truncation and --matrix-size must be positive")
    if getattr(args, "jobs", 1) < 1:
        raise UsageError("--jobs must be positive")
    return cfg


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(command=args.command, output_format=args.format, output_path=args.output)
    results: List[dict] = []
    error = None
    try:
        config = _config(args)
        results, code = COMMANDS[args.command](args, config)
    except UsageError as exc:
        code, error = EXIT_USAGE, {"type": "UsageError", "message": str(exc)}
    except (DomainError, DenominatorPole) as exc:
        code, error = EXIT_USAGE, {"type": type(exc).__name__, "message": str(exc)}
    except NonConvergence as exc:
        code, error = EXIT_NONCONV, {"type": "NonConvergence", "message": str(exc)}
    except ConvergenceFailure as exc:
        code, error = EXIT_EIGEN, {"type": "ConvergenceFailure", "message": str(exc)}
    if error:
        sys.stderr.write(f"qjacobi: {error['message']}\n")
    emit(config, RENDERERS[config.output_format](config, results, code, error), stdout)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
