"""Uniform task runner shared by the CLI commands and sweeps.

A task is a plain dict ``{"command": ..., "model": ..., **params}`` so that it
can cross process boundaries; the result is a plain dict as well.
"""

from __future__ import annotations

from fractions import Fraction

from .constructions import BlowupData, BlowupRing, blowup_transfer_check, linear_blowup
from .errors import InputError
from .lefschetz import (
    check_2imply1,
    check_conj1,
    check_conj2,
    check_hl_cohomology,
    check_hl_target,
    check_kunnemann,
    check_triangular_descent,
)
from .modelspec import load_model, parse_model_spec
from .ring import normal_form
from .sympow import extract_system, minimal_equation, pbig_det, pbig_matrix, strong_stability_check, sympow_ring

__all__ = ["run_task", "COMMANDS", "task_key", "build_blowup"]


def _int(task, key, default=None):
    v = task.get(key, default)
    if v is None:
        raise InputError(f"missing parameter --{key}")
    if isinstance(v, bool):
        raise InputError(f"--{key} must be an integer")
    try:
        return int(v)
    except (TypeError, ValueError):
        raise InputError(f"--{key} must be an integer, got {v!r}") from None


def _report_result(rep, params) -> dict:
    return {
        "model": rep.model_id,
        "parameters": params,
        "passed": rep.passed,
        "verdict": rep.verdict,
        "summary": rep.summary(),
        "result": rep.to_dict(),
    }


def _lefschetz(task):
    cmd = task["command"]
    model = load_model(task.get("model") or _missing("model"))
    D = task.get("divisor")
    if cmd == "hl":
        k = _int(task, "k", task.get("p"))
        return _report_result(check_hl_cohomology(model, k), {"k": k})
    if cmd == "kunnemann":
        p, s = _int(task, "p"), _int(task, "s")
        return _report_result(check_kunnemann(model, p, s), {"p": p, "s": s})
    p = _int(task, "p")
    if cmd == "descent":
        rep = check_triangular_descent(model, p, D)
        return _report_result(rep, {"p": p, "divisor": D})
    if cmd == "2imply1":
        res = check_2imply1(model, D, p)
        return {
            "model": res["model"],
            "parameters": {"p": p, "divisor": res["divisor"]},
            "passed": res["holds"],
            "verdict": "holds" if res["holds"] else "counterexample",
            "summary": (f"2imply1 {res['model']} D={res['divisor']} p={p}: conj2 {res['conj2']}, "
                        f"hl {res['hl']}, conj1 {res['conj1']} => "
                        f"{'holds' if res['holds'] else 'COUNTEREXAMPLE'}"),
            "result": res,
        }
    fn = {"conj1": check_conj1, "conj2": check_conj2, "hl-target": check_hl_target}[cmd]
    return _report_result(fn(model, D, p), {"p": p, "divisor": D})


def _missing(key):
    raise InputError(f"missing parameter --{key}")


def _sympow(task):
    cmd = task["command"]
    if cmd == "minimal-eq":
        g, mode = _int(task, "g"), task.get("mode", "theta")
        R = sympow_ring(g, mode)
        alpha = minimal_equation(R)
        nf = normal_form(alpha)
        rule = R.presentation.relation_strings()[0]
        body = {"equation": str(alpha), "normal_form": str(nf), "rule": f"{rule[0]} -> {rule[1]}"}
        return {
            "model": R.id, "parameters": {"g": g, "mode": mode}, "passed": nf.is_zero(),
            "verdict": "vanishes" if nf.is_zero() else "nonzero",
            "summary": f"minimal-eq {R.id}: {alpha} = 0; rule {body['rule']}; normal form {nf}",
            "result": body,
        }
    if cmd == "extract-system":
        g, p = _int(task, "g"), _int(task, "p")
        rep = extract_system(g, p)
        d = rep.to_dict()
        eqs = "; ".join(f"{e} = 0" for e in d["equations"]) or "none"
        exprs = "; ".join(f"{y} = {e}" for y, e in d["expressions"].items()) or "none"
        return {
            "model": f"sympow:g={g},mode=formal", "parameters": {"g": g, "p": p},
            "passed": rep.shape_matches,
            "verdict": "shape-match" if rep.shape_matches else "shape-mismatch",
            "summary": f"extract-system g={g} p={p} k={rep.k}: equations {eqs}; expressions {exprs}",
            "result": d,
        }
    if cmd == "pbig":
        g, p = _int(task, "g"), _int(task, "p")
        rows = task.get("rows", "tail")
        M = pbig_matrix(g, p, rows)
        try:
            det = pbig_det(g, p, rows)
        except ArithmeticError:
            det = Fraction(0)
        return {
            "model": f"theta:g={g}", "parameters": {"g": g, "p": p, "rows": rows},
            "passed": det != 0,
            "verdict": "nonzero" if det else "zero",
            "summary": f"pbig g={g} p={p} k={g - p - 1}: det = {det}",
            "result": {"matrix": [[str(x) for x in r] for r in M.tolist()], "det": str(det)},
        }
    if cmd == "stability":
        g, n, p = _int(task, "g"), _int(task, "n"), _int(task, "p")
        rep = strong_stability_check(g, n, p)
        return _report_result(rep, {"g": g, "n": n, "p": p})
    raise InputError(f"unknown sympow command {cmd!r}")


def build_blowup(x: str, center: str, r=None) -> BlowupRing:
    """Blow-up of projective:n=N along a point or a linear projective:n=D."""
    kind, params = parse_model_spec(x)
    if kind != "projective" or "n" not in params:
        raise InputError("--x must be projective:n=N")
    n = params["n"]
    if center == "point":
        d = 0
    else:
        ck, cp = parse_model_spec(center)
        if ck != "projective" or "n" not in cp:
            raise InputError("--center must be 'point' or projective:n=D")
        d = cp["n"]
    ring = linear_blowup(n, d)
    if r is not None and int(r) != ring.r:
        raise InputError(f"--r {r} inconsistent with codim of the center (r = {ring.r})")
    return ring


def blowup_from_document(doc) -> BlowupRing:
    from .ring import build_presentation

    try:
        X = build_presentation(doc["X"])
        Y = build_presentation(doc["Y"])
        push = {}
        for entry in doc["pushforward_iota"]:
            push[tuple(entry["monomial"])] = entry["image"]
        data = BlowupData(X, Y, int(doc["r"]), dict(doc["pullback_iota"]), push,
                          list(doc.get("normal_chern", [])))
    except InputError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"malformed blow-up data: {exc!r}") from exc
    return BlowupRing(data, label=doc.get("label"))


def _blowup(task):
    if task.get("data") is not None:
        ring = blowup_from_document(task["data"])
    else:
        ring = build_blowup(task.get("x") or _missing("x"), task.get("center") or _missing("center"), task.get("r"))
    try:
        m = Fraction(str(task.get("m", "-1")))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"--m must be a rational number, got {task.get('m')!r}") from None
    p = _int(task, "p")
    L = task.get("L", "H")
    rep = blowup_transfer_check(ring, L, m, p)
    return _report_result(rep, {"L": L, "m": str(m), "p": p})


COMMANDS = {
    "conj1": _lefschetz,
    "conj2": _lefschetz,
    "hl": _lefschetz,
    "hl-target": _lefschetz,
    "kunnemann": _lefschetz,
    "descent": _lefschetz,
    "2imply1": _lefschetz,
    "minimal-eq": _sympow,
    "extract-system": _sympow,
    "pbig": _sympow,
    "stability": _sympow,
    "blowup": _blowup,
}


def run_task(task: dict) -> dict:
    """Run one task; InputError propagates, everything is exact and deterministic."""
    cmd = task.get("command")
    if cmd not in COMMANDS:
        raise InputError(f"unknown command {cmd!r}")
    out = COMMANDS[cmd](task)
    out["command"] = cmd
    return out


def _sort_value(v):
    if v is None:
        return (0, 0, "")
    if isinstance(v, int):
        return (1, v, "")
    return (2, 0, str(v))


def task_key(result: dict) -> tuple:
    params = result.get("parameters", {})
    return (
        str(result.get("model")),
        str(result.get("command")),
        _sort_value(params.get("p", params.get("k"))),
        _sort_value(params.get("s")),
        tuple((k, _sort_value(v)) for k, v in sorted(params.items())),
    )
