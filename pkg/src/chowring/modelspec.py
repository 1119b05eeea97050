"""Model spec strings, model files and report files.

Model spec strings::

    theta:g=3   divisor:g=4   cohomology:g=2   sympow:g=2,mode=theta
    projective:n=3   curve:hom=1   file:path/to/model.json

Model files and report files are JSON documents with a ``schema`` field.
"""

from __future__ import annotations

import hashlib
import json
import re
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .abelian import build_model
from .constructions import curve_model, projective_model
from .errors import InputError
from .model import Model, as_model
from .ring import RingHom, build_presentation
from .sympow import sympow_ring

MODEL_SCHEMA = "chowring.model/1"
REPORT_SCHEMA = "chowring.report/1"
SWEEP_SCHEMA = "chowring.sweep/1"

__all__ = [
    "MODEL_SCHEMA",
    "REPORT_SCHEMA",
    "SWEEP_SCHEMA",
    "parse_model_spec",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "load_model_file",
    "save_model_file",
    "report_document",
    "report_filename",
    "write_report",
]

_INT_KEYS = {"g", "n", "hom"}


def _parse_params(text: str) -> dict:
    params = {}
    for part in filter(None, text.split(",")):
        if "=" not in part:
            raise InputError(f"expected key=value in model spec, got {part!r}")
        k, v = (s.strip() for s in part.split("=", 1))
        if k in _INT_KEYS:
            try:
                v = int(v)
            except ValueError:
                raise InputError(f"{k} must be an integer, got {v!r}") from None
        params[k] = v
    return params


def parse_model_spec(spec: str) -> tuple[str, dict]:
    if not isinstance(spec, str) or ":" not in spec:
        raise InputError(f"model spec must look like kind:key=value, got {spec!r}")
    kind, rest = spec.split(":", 1)
    if kind == "file":
        return kind, {"path": rest}
    return kind, _parse_params(rest)


def _require(params: dict, kind: str, *keys: str) -> list:
    missing = [k for k in keys if k not in params]
    extra = set(params) - set(keys)
    if missing:
        raise InputError(f"{kind} model needs {', '.join(missing)}")
    if extra:
        raise InputError(f"unknown parameter(s) for {kind}: {', '.join(sorted(extra))}")
    return [params[k] for k in keys]


def load_model(spec) -> Model:
    """Model from a spec string, a model document, or an already-built model."""
    if isinstance(spec, dict):
        return model_from_dict(spec)
    if not isinstance(spec, str):
        return as_model(spec)
    kind, params = parse_model_spec(spec)
    if kind in ("theta", "divisor", "cohomology"):
        (g,) = _require(params, kind, "g")
        return build_model(kind, g)
    if kind == "sympow":
        params.setdefault("mode", "theta")
        g, mode = _require(params, kind, "g", "mode")
        return sympow_ring(g, mode).as_model()
    if kind == "projective":
        (n,) = _require(params, kind, "n")
        if n < 1:
            raise InputError("projective model needs n >= 1")
        return projective_model(n)
    if kind == "curve":
        params.setdefault("hom", 0)
        (h,) = _require(params, kind, "hom")
        return curve_model(h)
    if kind == "file":
        return load_model_file(params["path"])
    raise InputError(f"unknown model kind {kind!r}")


# --------------------------------------------------------------------------
# model files


def model_to_dict(model: Model) -> dict:
    model = as_model(model)
    d = {"schema": MODEL_SCHEMA, "id": model.id, "kind": model.kind}
    if model.g is not None:
        d["g"] = model.g
    d.update(model.presentation.describe())
    if model.cycle_class is not None:
        cl = model.cycle_class
        d["cycle_class"] = {
            "scale": cl.scale,
            "target": cl.target.describe(),
            "images": cl.describe(),
        }
    return d


def model_from_dict(doc) -> Model:
    if not isinstance(doc, dict):
        raise InputError("model document must be an object")
    schema = doc.get("schema", MODEL_SCHEMA)
    if schema != MODEL_SCHEMA:
        raise InputError(f"unsupported model schema {schema!r}")
    kind = doc.get("kind", "custom")
    if "generators" not in doc:
        if kind in ("theta", "divisor", "cohomology", "sympow", "projective", "curve"):
            params = {k: v for k, v in doc.items() if k in ("g", "n", "hom", "mode")}
            return load_model(f"{kind}:" + ",".join(f"{k}={v}" for k, v in params.items()))
        raise InputError("model document needs generators or a built-in kind")
    mid = doc.get("id") or doc.get("label") or "custom"
    P = build_presentation({**doc, "label": mid})
    cl = None
    if "cycle_class" in doc:
        c = doc["cycle_class"]
        if not isinstance(c, dict):
            raise InputError("cycle_class must be an object")
        try:
            target = build_presentation({**c["target"], "label": c["target"].get("label", "target")})
            images = dict(c["images"])
            scale = int(c.get("scale", 1))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise InputError(f"malformed cycle_class: {exc!r}") from exc
        cl = RingHom(P, target, images, scale=scale)
    g = doc.get("g")
    if g is not None and not isinstance(g, int):
        raise InputError("g must be an integer")
    return Model(mid, kind, P, g=g, cycle_class=cl)


def load_model_file(path) -> Model:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read model file {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"model file {path} is not valid JSON: {exc}") from None
    return model_from_dict(doc)


def save_model_file(model: Model, path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(model_to_dict(model), indent=2, sort_keys=True) + "\n")
    return p


# --------------------------------------------------------------------------
# report files


def report_document(command: str, model_id: str, parameters: dict, body: dict,
                    passed: bool, timestamp: bool = False) -> dict:
    doc = {
        "schema": REPORT_SCHEMA,
        "tool_version": __version__,
        "command": command,
        "model": model_id,
        "parameters": parameters,
        "passed": passed,
        "result": body,
    }
    if timestamp:
        doc["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return doc


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9=.+-]+", "_", str(text)).strip("_")


def report_filename(command: str, model_id: str, parameters: dict) -> str:
    parts = [_slug(command), _slug(model_id)]
    parts += [f"{k}={_slug(v)}" for k, v in sorted(parameters.items()) if v is not None]
    name = "__".join(p for p in parts if p)
    if len(name) > 180:
        name = name[:150] + "__" + hashlib.sha1(name.encode()).hexdigest()[:12]
    return name + ".json"


def write_report(out_dir, doc: dict) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / report_filename(doc["command"], doc["model"], doc["parameters"])
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path
