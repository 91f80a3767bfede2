"""Command-line front end: ``unidisc <command> [options]``.

Every command emits one document. JSON output has the layout

    {"schema_version", "command", "inputs", "results", "diagnostics"}

with all floats written as decimal strings at 12 significant digits, so
identical runs give byte-identical files. Exit codes: 0 success, 1 numerical
failure (diagnostic JSON on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import enum
import io
import json
import math
import sys
from dataclasses import dataclass

from . import critical_params, disk_probe, st_criterion, zero_finder
from .core_series import EvalOptions, Family, FunctionId, NORMALIZED, eval_normalized, eval_raw_many
from .errors import DomainError, UnidiscError

SCHEMA_VERSION = "1"
COMMANDS = ("eval", "zeros", "criterion", "critical", "certify", "probe", "reproduce")
FORMATS = ("json", "csv", "text")

# values quoted in the source for the reproduce suite
PAPER_CRITICAL = {"nu_star": -0.7745, "nu0": -0.5623, "nu1": -0.1438}
PAPER_STRUVE_CONSTANT = 1.102495575
PAPER_LOMMEL_CONSTANT = 0.2391336269
STRUVE_GRID = (-0.5, -0.25, 0.0, 0.25, 0.5)
LOMMEL_GRID = (-0.9, -0.5, -0.1, 0.1, 0.5, 0.9)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    output_format: str = "json"
    output_path: str | None = None
    family: str | None = None
    param: float | None = None
    n: int = st_criterion.DEFAULT_ZEROS
    tol: float | None = None
    options: tuple = ()

    def option(self, name: str, default=None):
        return dict(self.options).get(name, default)


# ---------------------------------------------------------------- formatting


def fmt_float(x: float) -> str:
    return format(x, ".12g")


def to_jsonable(obj):
    """Recursively convert results to JSON values with floats as 12-digit strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)) and not isinstance(obj, enum.Enum):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, complex):
        return {"re": fmt_float(obj.real), "im": fmt_float(obj.imag)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render_json(document: dict) -> str:
    return json.dumps(to_jsonable(document), indent=2, ensure_ascii=True) + "\n"


def render_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else fmt_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _flatten(obj, prefix: str = "") -> list[tuple[str, object]]:
    obj = to_jsonable(obj)
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out.extend(_flatten(v, f"{prefix}{k}."))
        return out
    if isinstance(obj, list):
        out = []
        for i, v in enumerate(obj):
            out.extend(_flatten(v, f"{prefix}{i}."))
        return out
    return [(prefix.rstrip("."), obj)]


# ---------------------------------------------------------------- commands


@dataclass
class Outcome:
    results: dict
    diagnostics: dict
    csv_header: list[str] | None = None
    csv_rows: list[list] | None = None
    ok: bool = True


def _require_param(config: RunConfig) -> float:
    if config.param is None:
        raise UsageError(f"{config.command} needs a parameter (--nu / --mu / --param)")
    return config.param


def cmd_eval(config: RunConfig) -> Outcome:
    family = Family(config.family)
    fid = FunctionId(family, _require_param(config))
    x = complex(config.option("x"), config.option("y", 0.0))
    ks = config.option("k") or [0]
    opts = EvalOptions(tolerance=config.tol) if config.tol else EvalOptions()
    if family in NORMALIZED:
        values = [eval_normalized(fid, x, k, opts) for k in ks]
    else:
        if x.imag != 0.0:
            raise DomainError("raw functions are evaluated on the real axis only")
        values = eval_raw_many(fid, x.real, tuple(ks), opts)
    rows = []
    for k, v in zip(ks, values):
        value = v.value
        if isinstance(value, complex) and value.imag == 0.0 and x.imag == 0.0:
            value = value.real
        rows.append({"k": k, "value": value, "error_bound": v.error_bound, "terms_used": v.terms_used})
    csv_rows = [[r["k"], complex(r["value"]).real, complex(r["value"]).imag, r["error_bound"], r["terms_used"]] for r in rows]
    return Outcome(
        {"family": family.value, "param": fid.param, "x": x, "derivatives": rows},
        {},
        ["k", "value_re", "value_im", "error_bound", "terms_used"],
        csv_rows,
    )


def _zero_table(family: zero_finder.ZeroFamily, param: float, n: int, tol: float):
    if family is zero_finder.ZeroFamily.BESSEL:
        return zero_finder.bessel_zeros(param, n, tol)
    if family is zero_finder.ZeroFamily.DINI:
        return zero_finder.dini_zeros(param, n, tol)
    if family is zero_finder.ZeroFamily.STRUVE:
        return zero_finder.struve_zeros(param, n, tol)
    k = 0 if family is zero_finder.ZeroFamily.PHI0 else 1
    return zero_finder.lommel_zeros(param, k, n, tol)


def cmd_zeros(config: RunConfig) -> Outcome:
    family = zero_finder.ZeroFamily(config.family)
    table = _zero_table(family, _require_param(config), config.n, config.tol or zero_finder.DEFAULT_TOL)
    return Outcome(
        table.to_dict(),
        {},
        ["n", "zero"],
        [[i, z] for i, z in enumerate(table.zeros, start=1)],
    )


def cmd_criterion(config: RunConfig) -> Outcome:
    family = zero_finder.ZeroFamily(config.family)
    param = _require_param(config)
    table = _zero_table(family, param, config.n, config.tol or zero_finder.DEFAULT_TOL)
    result = st_criterion.st_sum(table)
    closed = None
    if family is zero_finder.ZeroFamily.BESSEL:
        closed = st_criterion.bessel_sum_closed_form(param)
    elif family is zero_finder.ZeroFamily.DINI:
        closed = st_criterion.dini_sum_closed_form(param)
    elif family is zero_finder.ZeroFamily.STRUVE:
        closed = st_criterion.normalized_sum_closed_form("struve", param)
    elif family is zero_finder.ZeroFamily.PHI0:
        closed = st_criterion.normalized_sum_closed_form("lommel", param)
    elif family is zero_finder.ZeroFamily.PHI1:
        closed = st_criterion.normalized_sum_closed_form("lommel", param - 1.0)
    results = {
        "family": family.value,
        "param": param,
        "partial_sum": result.partial_sum,
        "tail_bound": result.tail_bound,
        "n_used": result.n_used,
        "decision": result.decision,
        "rayleigh_sum": st_criterion.rayleigh_sum(family, param),
        "closed_form": closed,
    }
    rows = [[k, v] for k, v in _flatten(results)]
    return Outcome(results, {}, ["key", "value"], rows)


def cmd_critical(config: RunConfig) -> Outcome:
    cid = config.option("id")
    method = config.option("method", "bisection")
    res = critical_params.solve_critical(cid, config.tol or 1e-12, method)
    results = res.to_dict()
    results["method"] = method
    return Outcome(results, {}, ["key", "value"], [[k, v] for k, v in _flatten(results)])


def cmd_certify(config: RunConfig) -> Outcome:
    cert = st_criterion.certify(config.family, _require_param(config), config.option("mode"), config.n)
    results = {"certificate": cert.to_dict()}
    return Outcome(results, {}, ["key", "value"], [[k, v] for k, v in _flatten(results)])


def cmd_probe(config: RunConfig) -> Outcome:
    report = disk_probe.probe(
        config.family,
        _require_param(config),
        config.option("functional"),
        config.option("radii"),
        config.option("angles"),
        config.option("k", 0),
    )
    diagnostics = {}
    if report.heuristic:
        diagnostics["note"] = "deriv_re is heuristic corroboration, not a certificate"
    rows = [[p.r, p.theta, p.value] for p in report.points]
    return Outcome(report.to_dict(), diagnostics, ["r", "theta", "re_value"], rows)


def _check(name: str, value: float, expected: float, tolerance: float, **extra) -> dict:
    item = {
        "name": name,
        "value": value,
        "expected": expected,
        "tolerance": tolerance,
        "pass": abs(value - expected) <= tolerance,
    }
    item.update(extra)
    return item


def reproduce_items(n: int = st_criterion.DEFAULT_ZEROS) -> list[dict]:
    """The reproduction suite: critical orders, positivity constants, certificates."""
    items = []
    for cid, expected in PAPER_CRITICAL.items():
        res = critical_params.solve_critical(cid)
        item = _check(f"critical.{cid}", res.value, expected, 5e-4, residual=res.residual)
        item["pass"] = item["pass"] and abs(res.residual) <= critical_params.RESIDUAL_LIMIT
        items.append(item)
    items.append(
        _check("constant.struve_bracket_at_-1/2", st_criterion.struve_derivative_bracket(-0.5), PAPER_STRUVE_CONSTANT, 1e-8)
    )
    items.append(_check("constant.lommel_integrand_floor", st_criterion.lommel_integrand_floor(), PAPER_LOMMEL_CONSTANT, 1e-9))
    for cid in ("nu0", "nu1"):
        rep = critical_params.threshold_consistency(cid, 0.05, n)
        items.append(
            {"name": f"threshold.{cid}", "above": rep.above.decision, "below": rep.below.decision, "pass": rep.consistent}
        )
    for family, grid in (("struve", STRUVE_GRID), ("lommel", LOMMEL_GRID)):
        for param in grid:
            cert = st_criterion.certify(family, param, "starlike_ctc", n)
            items.append(
                {
                    "name": f"certify.{family}({fmt_float(param)})",
                    "partial_sum": cert.criterion.partial_sum,
                    "tail_bound": cert.criterion.tail_bound,
                    "decision": cert.decision,
                    "pass": cert.decision is st_criterion.Decision.HOLDS,
                }
            )
    return items


def cmd_reproduce(config: RunConfig) -> Outcome:
    items = reproduce_items(config.n)
    passed = sum(1 for it in items if it["pass"])
    results = {"items": items, "passed": passed, "total": len(items)}
    rows = [[it["name"], "pass" if it["pass"] else "fail"] for it in items]
    return Outcome(results, {}, ["name", "status"], rows, ok=passed == len(items))


HANDLERS = {
    "eval": cmd_eval,
    "zeros": cmd_zeros,
    "criterion": cmd_criterion,
    "critical": cmd_critical,
    "certify": cmd_certify,
    "probe": cmd_probe,
    "reproduce": cmd_reproduce,
}


# ---------------------------------------------------------------- argparse


def _radii(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(r) for r in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"radii must be comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unidisc", description=__doc__.split("\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=FORMATS, default=None)
    common.add_argument("--output", dest="output_path", default=None, help="write here instead of stdout")

    param = argparse.ArgumentParser(add_help=False)
    group = param.add_mutually_exclusive_group()
    for flag in ("--param", "--nu", "--mu"):
        group.add_argument(flag, dest="param", type=float)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common, param], help="evaluate a series")
    p.add_argument("--family", required=True, choices=[f.value for f in Family])
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, default=0.0, help="imaginary part (normalized families)")
    p.add_argument("--k", type=int, action="append", help="derivative order; repeatable")
    p.add_argument("--tol", type=float)

    zero_families = [f.value for f in zero_finder.ZeroFamily]
    for name, help_text in (("zeros", "tabulate positive zeros"), ("criterion", "zero-sum with tail bound")):
        p = sub.add_parser(name, parents=[common, param], help=help_text)
        p.add_argument("--family", required=True, choices=zero_families)
        p.add_argument("--n", type=int, default=st_criterion.DEFAULT_ZEROS)
        p.add_argument("--tol", type=float)

    p = sub.add_parser("critical", parents=[common], help="critical Bessel order")
    p.add_argument("--id", required=True, choices=[c.value for c in critical_params.CriticalId])
    p.add_argument("--method", choices=("bisection", "secant"), default="bisection")
    p.add_argument("--tol", type=float)

    p = sub.add_parser("certify", parents=[common, param], help="starlike/convex certificate")
    p.add_argument("--family", required=True, choices=[f.value for f in st_criterion.CertFamily])
    p.add_argument("--mode", choices=[m.value for m in st_criterion.Mode], default="starlike_ctc")
    p.add_argument("--n", type=int, default=st_criterion.DEFAULT_ZEROS)

    p = sub.add_parser("probe", parents=[common, param], help="sample a functional on the disk")
    p.add_argument("--family", required=True, choices=("bessel", "struve", "lommel"))
    p.add_argument("--functional", choices=[f.value for f in disk_probe.Functional], default="starlike_re")
    p.add_argument("--radii", type=_radii, default=disk_probe.DEFAULT_RADII)
    p.add_argument("--angles", type=int, default=disk_probe.DEFAULT_ANGLES)
    p.add_argument("--k", type=int, default=0)

    p = sub.add_parser("reproduce", parents=[common], help="run the reproduction suite")
    p.add_argument("--n", type=int, default=st_criterion.DEFAULT_ZEROS)
    return parser


_OPTION_KEYS = ("x", "y", "k", "id", "method", "mode", "functional", "radii", "angles")


def config_from_args(args: argparse.Namespace) -> RunConfig:
    ns = vars(args)
    default_format = "csv" if args.command == "zeros" else "json"
    options = tuple((key, ns[key]) for key in _OPTION_KEYS if key in ns)
    return RunConfig(
        command=args.command,
        output_format=ns.get("output_format") or default_format,
        output_path=ns.get("output_path"),
        family=ns.get("family"),
        param=ns.get("param"),
        n=ns.get("n", st_criterion.DEFAULT_ZEROS),
        tol=ns.get("tol"),
        options=options,
    )


def _inputs(config: RunConfig) -> dict:
    inputs = {"family": config.family, "param": config.param, "n": config.n, "tol": config.tol}
    inputs.update(dict(config.options))
    return {k: v for k, v in inputs.items() if v is not None}


def validate(config: RunConfig) -> None:
    if config.command not in COMMANDS:
        raise UsageError(f"unknown command {config.command!r}")
    if config.output_format not in FORMATS:
        raise UsageError(f"unknown format {config.output_format!r}")
    if config.tol is not None and not (config.tol > 0 and math.isfinite(config.tol)):
        raise UsageError(f"tol must be positive, got {config.tol}")
    if config.param is not None and not math.isfinite(config.param):
        raise UsageError(f"parameter must be finite, got {config.param}")
    if not 1 <= config.n <= zero_finder.MAX_ZEROS:
        raise UsageError(f"n must lie in [1, {zero_finder.MAX_ZEROS}], got {config.n}")


def render(config: RunConfig, outcome: Outcome) -> str:
    if config.output_format == "csv" and outcome.csv_header is not None:
        return render_csv(outcome.csv_header, outcome.csv_rows)
    document = {
        "schema_version": SCHEMA_VERSION,
        "command": config.command,
        "inputs": _inputs(config),
        "results": outcome.results,
        "diagnostics": outcome.diagnostics,
    }
    if config.output_format == "text":
        return "".join(f"{k}: {v}\n" for k, v in _flatten(document))
    return render_json(document)


def _diagnostic(config_or_command, exc: Exception, code: int) -> str:
    command = getattr(config_or_command, "command", config_or_command)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "error": type(exc).__name__,
        "message": str(exc),
        "exit_code": code,
    }
    return json.dumps(payload, sort_keys=False) + "\n"


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    """Dispatch ``config``, write the artifact, and return the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        validate(config)
        outcome = HANDLERS[config.command](config)
    except (UsageError, DomainError, ValueError) as exc:
        stderr.write(_diagnostic(config, exc, 2))
        return 2
    except UnidiscError as exc:
        stderr.write(_diagnostic(config, exc, 1))
        return 1
    text = render(config, outcome)
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if not outcome.ok:
        stderr.write(_diagnostic(config, UnidiscError("some reproduction items failed"), 1))
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
