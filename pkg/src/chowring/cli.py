"""Command-line front end.

Exit codes: 0 every check passed, 1 a mathematical check failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .constructions import bundle_model, curve_model, product_model
from .errors import InputError
from .modelspec import (
    SWEEP_SCHEMA,
    load_model,
    model_to_dict,
    report_document,
    save_model_file,
    write_report,
)
from .tasks import run_task, task_key

OUT_ENV = "CHOWRING_OUT"
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage already; keep messages on stderr."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(f"{self.prog}: {message}")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--out", default=None, help=f"report directory (default ${OUT_ENV} or ./reports)")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--no-write", action="store_true", help="do not write report files")
    p.add_argument("--timestamp", action="store_true", help="stamp report files with the current time")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="chowring", description="Exact Lefschetz-type checks on finite Chow-ring models.")
    ap.add_argument("--version", action="version", version=f"chowring {__version__}")
    sub = ap.add_subparsers(dest="group", required=True, parser_class=_Parser)

    check = sub.add_parser("check", help="conjecture checks on a model")
    csub = check.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("conj1", "conj2", "hl", "hl-target", "kunnemann", "descent", "2imply1"):
        c = csub.add_parser(name)
        c.add_argument("--model", required=True)
        c.add_argument("--p", type=int)
        c.add_argument("--k", type=int, help="cohomological degree (hl)")
        c.add_argument("--s", type=int)
        c.add_argument("--divisor")
        _common(c)

    sp = sub.add_parser("sympow", help="symmetric-product computations")
    ssub = sp.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = ssub.add_parser("minimal-eq")
    c.add_argument("--g", type=int, required=True)
    c.add_argument("--mode", choices=("theta", "formal"), default="theta")
    _common(c)
    c = ssub.add_parser("extract-system")
    c.add_argument("--g", type=int, required=True)
    c.add_argument("--p", type=int, required=True)
    _common(c)
    c = ssub.add_parser("pbig")
    c.add_argument("--g", type=int, required=True)
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--rows", choices=("tail", "head"), default="tail")
    _common(c)
    c = ssub.add_parser("stability")
    c.add_argument("--g", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--p", type=int, required=True)
    _common(c)

    bl = sub.add_parser("blowup", help="blow-up transfer checks")
    bsub = bl.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = bsub.add_parser("check")
    c.add_argument("--x", help="projective:n=N")
    c.add_argument("--center", help="point or projective:n=D")
    c.add_argument("--data", help="JSON file with explicit blow-up data")
    c.add_argument("--r", type=int)
    c.add_argument("--L", default="H")
    c.add_argument("--m", default="-1")
    c.add_argument("--p", type=int, required=True)
    _common(c)

    bu = sub.add_parser("bundle", help="projective bundles over a model")
    busub = bu.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = busub.add_parser("build")
    c.add_argument("--model", required=True)
    c.add_argument("--chern", default="1", help="comma-separated c_0,...,c_{r+1}")
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--save", help="model file to write")
    _common(c)

    c = sub.add_parser("product", help="X x P^m")
    c.add_argument("--model", required=True)
    c.add_argument("--pm", type=int, required=True)
    c.add_argument("--save", help="model file to write")
    _common(c)

    c = sub.add_parser("sweep", help="batch of checks")
    c.add_argument("--preset", choices=sorted(PRESETS))
    c.add_argument("--config", help="JSON sweep config")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--gmax", type=int, help="override the genus bound of a preset")
    _common(c)
    return ap


# --------------------------------------------------------------------------
# sweep presets


def _kunnemann(gmax=6):
    return [{"command": "kunnemann", "model": f"divisor:g={g}", "p": p, "s": s}
            for g in range(1, gmax + 1) for p in range(0, g + 1)
            for s in range(2 * p - g, 2 * p + 1)]


def _pbig(gmax=12):
    return [{"command": "pbig", "g": g, "p": p}
            for g in range(2, gmax + 1) for p in range(0, g) if 2 * p + 1 >= g and g - p - 1 >= 1]


def _hl(gmax=4):
    return [{"command": "hl", "model": f"cohomology:g={g}", "k": k}
            for g in range(1, gmax + 1) for k in range(0, 2 * g + 1)]


def _conj1_sympow(gmax=6):
    return [{"command": "conj1", "model": f"sympow:g={g},mode=theta", "divisor": "z", "p": p}
            for g in range(1, gmax + 1) for p in range(0, g) if 2 * g - 1 >= 2 * p]


def _descent(gmax=6):
    return [{"command": "descent", "model": f"divisor:g={g}", "p": p}
            for g in range(1, gmax + 1) for p in range(0, g // 2 + 1)]


def _minimal_eq(gmax=8):
    return [{"command": "minimal-eq", "g": g, "mode": m} for g in range(1, gmax + 1) for m in ("theta", "formal")]


def _stability(gmax=4):
    return [{"command": "stability", "g": g, "n": n, "p": p}
            for g in range(1, gmax + 1) for n in range(1, 2 * g) for p in range(0, (n - 1) // 2 + 1)]


def sweep_models(gmax=4) -> list[tuple[object, list[str]]]:
    """Models with a cycle class map and the divisors tried on each."""
    out: list[tuple[object, list[str]]] = []
    for g in range(1, gmax + 1):
        out.append((f"theta:g={g}", ["theta", "2*theta"]))
        out.append((f"divisor:g={g}", ["D0", "D0 + D1", "D0 - D1", "2*D0 + 3*D1", "D1"]))
    for n in range(1, 5):
        out.append((f"projective:n={n}", ["H"]))
    for h in range(0, 3):
        out.append((f"curve:hom={h}", ["pt"] + ([f"pt + v{h}"] if h else [])))
    c1 = curve_model(1)
    out.append((model_to_dict(product_model(c1, 1)), ["pt + t", "pt + v1 + t", "t"]))
    out.append((model_to_dict(bundle_model(c1, ["1", "pt + v1"], 1)), ["pt + xi", "v1 + xi", "2*pt + xi"]))
    out.append((model_to_dict(product_model(load_model("divisor:g=2"), 1)), ["D0 + t", "D0 + D1 + t"]))
    return out


def _2imply1(gmax=4):
    tasks = []
    for spec, divisors in sweep_models(gmax):
        n = load_model(spec).n
        for D in divisors:
            for p in range(0, n // 2 + 1):
                tasks.append({"command": "2imply1", "model": spec, "divisor": D, "p": p})
    return tasks


PRESETS = {
    "kunnemann": _kunnemann,
    "pbig": _pbig,
    "hl": _hl,
    "conj1-sympow": _conj1_sympow,
    "descent": _descent,
    "minimal-eq": _minimal_eq,
    "stability": _stability,
    "2imply1": _2imply1,
}


def preset_tasks(name: str, gmax: int | None = None) -> list[dict]:
    fn = PRESETS[name]
    return fn() if gmax is None else fn(gmax)


def _config_tasks(path) -> list[dict]:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read sweep config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"sweep config {path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("schema", SWEEP_SCHEMA) != SWEEP_SCHEMA:
        raise InputError(f"sweep config must be an object with schema {SWEEP_SCHEMA}")
    tasks = []
    for name in doc.get("presets", []):
        if name not in PRESETS:
            raise InputError(f"unknown preset {name!r}")
        tasks += preset_tasks(name, doc.get("gmax"))
    for entry in doc.get("checks", []):
        if not isinstance(entry, dict) or "command" not in entry:
            raise InputError("each check needs a command")
        grid = {k: (v if isinstance(v, list) else [v]) for k, v in entry.items()}
        keys = list(grid)
        combos = [{}]
        for k in keys:
            combos = [{**c, k: v} for c in combos for v in grid[k]]
        tasks += combos
    if not tasks:
        raise InputError("sweep config lists no checks")
    return tasks


def _safe_run(task):
    try:
        return run_task(task)
    except InputError as exc:
        return {"command": task.get("command"), "model": _model_name(task.get("model")),
                "parameters": {k: v for k, v in task.items() if k not in ("command", "model")},
                "passed": None, "verdict": "input-error", "summary": f"input error: {exc}", "result": {}}


def _model_name(spec):
    if isinstance(spec, dict):
        return spec.get("id", "custom")
    return spec


def run_sweep(tasks: list[dict], jobs: int = 1) -> list[dict]:
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_safe_run, tasks, chunksize=4))
    else:
        results = [_safe_run(t) for t in tasks]
    return sorted(results, key=task_key)


# --------------------------------------------------------------------------
# driver


def _out_dir(args) -> Path:
    return Path(args.out or os.environ.get(OUT_ENV) or "reports")


def _emit(args, result: dict) -> None:
    if args.format == "structured":
        print(json.dumps({k: result[k] for k in ("command", "model", "parameters", "passed", "verdict", "result")},
                         sort_keys=True))
    else:
        print(("PASS " if result["passed"] else "FAIL ") + result["summary"])
        kernel = result.get("result", {}).get("kernel") if isinstance(result.get("result"), dict) else None
        if kernel:
            for v in kernel:
                print(f"  kernel: {v}")


def _write(args, result: dict, command: str) -> None:
    if args.no_write:
        return
    doc = report_document(command, str(result["model"]), result["parameters"], result["result"],
                          bool(result["passed"]), timestamp=args.timestamp)
    write_report(_out_dir(args), doc)


def _single(args, task: dict, command: str) -> int:
    result = run_task(task)
    _emit(args, result)
    _write(args, result, command)
    return EXIT_OK if result["passed"] else EXIT_FAIL


def _model_output(args, model) -> int:
    doc = model_to_dict(model)
    if args.save:
        save_model_file(model, args.save)
    if args.format == "structured":
        print(json.dumps(doc, sort_keys=True))
    else:
        P = model.presentation
        print(f"{model.id}: generators {', '.join(P.names)}; n = {P.truncation_dim}; "
              f"dims {list(P.basis_dims())}")
        for lead, rhs in P.relation_strings():
            print(f"  {lead} = {rhs}")
    return EXIT_OK


def dispatch(args) -> int:
    g = args.group
    if g == "check":
        task = {"command": args.command, "model": args.model, "p": args.p, "divisor": args.divisor}
        if args.command == "hl":
            task["k"] = args.k if args.k is not None else args.p
        if args.command == "kunnemann":
            task["s"] = args.s
        return _single(args, task, f"check-{args.command}")
    if g == "sympow":
        task = {k: v for k, v in vars(args).items()
                if k in ("g", "p", "n", "mode", "rows") and v is not None}
        task["command"] = args.command
        return _single(args, task, f"sympow-{args.command}")
    if g == "blowup":
        task = {"command": "blowup", "x": args.x, "center": args.center, "r": args.r,
                "L": args.L, "m": args.m, "p": args.p}
        if args.data:
            try:
                task["data"] = json.loads(Path(args.data).read_text())
            except OSError as exc:
                raise InputError(f"cannot read {args.data}: {exc.strerror}") from None
            except json.JSONDecodeError as exc:
                raise InputError(f"{args.data} is not valid JSON: {exc}") from None
        elif not (args.x and args.center):
            raise InputError("blowup check needs --x and --center, or --data")
        return _single(args, task, "blowup-check")
    if g == "bundle":
        model = load_model(args.model)
        chern = [c.strip() for c in args.chern.split(",")] if args.chern else ["1"]
        return _model_output(args, bundle_model(model, chern, args.r))
    if g == "product":
        return _model_output(args, product_model(load_model(args.model), args.pm))
    if g == "sweep":
        if bool(args.preset) == bool(args.config):
            raise InputError("sweep needs exactly one of --preset or --config")
        tasks = preset_tasks(args.preset, args.gmax) if args.preset else _config_tasks(args.config)
        results = run_sweep(tasks, args.jobs)
        name = args.preset or Path(args.config).stem
        for r in results:
            if args.format == "text":
                tag = {True: "PASS ", False: "FAIL ", None: "ERROR"}[r["passed"]]
                print(f"{tag} {r['summary']}")
        n_fail = sum(r["passed"] is False for r in results)
        n_err = sum(r["passed"] is None for r in results)
        table = [{k: r[k] for k in ("command", "model", "parameters", "passed", "verdict")}
                 for r in results]
        for r in table:
            r["model"] = _model_name(r["model"])
        if args.format == "structured":
            print(json.dumps(table, sort_keys=True))
        else:
            print(f"{len(results)} checks: {len(results) - n_fail - n_err} passed, "
                  f"{n_fail} failed, {n_err} input errors")
        if not args.no_write:
            doc = report_document("sweep", name, {"preset": args.preset, "config": args.config},
                                  {"checks": table}, n_fail == 0 and n_err == 0, timestamp=args.timestamp)
            write_report(_out_dir(args), doc)
        if n_err:
            return EXIT_INPUT
        return EXIT_FAIL if n_fail else EXIT_OK
    raise InputError(f"unknown command group {g!r}")


def _glue_values(argv: list[str]) -> list[str]:
    """Let option values start with '-' (e.g. --m -1/2, --divisor -D1)."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in ("--m", "--divisor", "--L", "--chern") and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_glue_values(argv))
        return dispatch(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:
        # --help and --version
        return int(exc.code or 0)
    except (ValueError, ArithmeticError, KeyError, TypeError, RecursionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
