"""Scenario files and report serialization.

Scenario file layout::

    {"dim": 2,
     "tau":   {"vertices": [[...], ...], "facets": [{"normal": [...], "offset": r}, ...]},
     "sigma": {...same...},
     "omega": {"matrix": [[...]]} | {"angle_2d": a} | {"axis_3d": [x, y, z]},
     "seed": 7, "expected": "NotRotatable", "name": "..."}

``facets`` may be omitted for simplices. Output is canonical: fixed key order
and floats printed with 17 significant digits, so dump -> parse -> dump is
byte-identical.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .admissibility import AdmissibilityReport, CenterRegion, Verdict
from .errors import PolyrotError, ScenarioFormatError
from .geometry import Polytope, Simplex, polytope_from_h_and_v, simplex_from_vertices
from .scenarios import Scenario
from .skewlin import make_skew, skew_from_angle_2d, skew_from_axis_3d

TOP_KEYS = ("dim", "tau", "sigma", "omega", "seed", "expected", "name")


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    # adding 0.0 turns -0.0 into 0.0, which JSON would read back as 0 anyway
    return "%.17g" % (x + 0.0)


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON text; dict order is preserved, floats use %.17g."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent, _level)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (list, tuple, dict, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        inner = (",\n" + pad).join(dumps(v, indent, _level + 1) for v in obj)
        return "[\n" + pad + inner + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (json.dumps(str(k)) + ": " + dumps(v, indent, _level + 1) for k, v in obj.items())
        return "{\n" + pad + (",\n" + pad).join(items) + "\n" + end + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _body_to_dict(P: Polytope) -> dict:
    out = {"vertices": P.vertices.tolist()}
    if not isinstance(P, Simplex):
        out["facets"] = [{"normal": a.tolist(), "offset": float(b)} for a, b in zip(P.normals, P.offsets)]
    return out


def scenario_to_dict(sc: Scenario) -> dict:
    d = {
        "dim": sc.tau.n,
        "tau": _body_to_dict(sc.tau),
        "sigma": _body_to_dict(sc.sigma),
        "omega": {"matrix": sc.S.tolist()},
    }
    if sc.seed is not None:
        d["seed"] = int(sc.seed)
    if sc.expected is not None:
        d["expected"] = sc.expected.value
    if sc.name:
        d["name"] = sc.name
    return d


def dump_scenario(sc: Scenario) -> str:
    return dumps(scenario_to_dict(sc)) + "\n"


def _number(x, path):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ScenarioFormatError(f"expected a number, got {json.dumps(x)}", path)
    return float(x)


def _vector(v, n, path):
    if not isinstance(v, list) or len(v) != n:
        raise ScenarioFormatError(f"expected a list of {n} numbers", path)
    return [_number(x, f"{path}[{k}]") for k, x in enumerate(v)]


def _body(d, n, path) -> Polytope:
    if not isinstance(d, dict):
        raise ScenarioFormatError("expected an object", path)
    unknown = set(d) - {"vertices", "facets"}
    if unknown:
        raise ScenarioFormatError(f"unknown keys {sorted(unknown)}", path)
    verts = d.get("vertices")
    if not isinstance(verts, list) or not verts:
        raise ScenarioFormatError("missing or empty vertex list", f"{path}.vertices")
    V = [_vector(v, n, f"{path}.vertices[{k}]") for k, v in enumerate(verts)]
    try:
        if "facets" not in d:
            if len(V) != n + 1:
                raise ScenarioFormatError(
                    f"{len(V)} vertices is not a simplex in R^{n}; facets are required", f"{path}.facets"
                )
            return simplex_from_vertices(V)
        facets = []
        if not isinstance(d["facets"], list):
            raise ScenarioFormatError("expected a list", f"{path}.facets")
        for k, f in enumerate(d["facets"]):
            fp = f"{path}.facets[{k}]"
            if not isinstance(f, dict) or set(f) != {"normal", "offset"}:
                raise ScenarioFormatError('expected {"normal": [...], "offset": r}', fp)
            facets.append((_vector(f["normal"], n, fp + ".normal"), _number(f["offset"], fp + ".offset")))
        return polytope_from_h_and_v(V, facets)
    except ScenarioFormatError:
        raise
    except PolyrotError as exc:
        raise ScenarioFormatError(f"{type(exc).__name__}: {exc}", path) from exc


def _omega(d, n):
    path = "omega"
    if not isinstance(d, dict) or len(d) != 1:
        raise ScenarioFormatError('expected exactly one of "matrix", "angle_2d", "axis_3d"', path)
    (kind, value), = d.items()
    try:
        if kind == "matrix":
            if not isinstance(value, list) or len(value) != n:
                raise ScenarioFormatError(f"expected {n} rows", "omega.matrix")
            return make_skew([_vector(row, n, f"omega.matrix[{k}]") for k, row in enumerate(value)])
        if kind == "angle_2d":
            if n != 2:
                raise ScenarioFormatError("angle_2d needs dim 2", "omega.angle_2d")
            return skew_from_angle_2d(_number(value, "omega.angle_2d"))
        if kind == "axis_3d":
            if n != 3:
                raise ScenarioFormatError("axis_3d needs dim 3", "omega.axis_3d")
            return skew_from_axis_3d(_vector(value, 3, "omega.axis_3d"))
    except ScenarioFormatError:
        raise
    except PolyrotError as exc:
        raise ScenarioFormatError(f"{type(exc).__name__}: {exc}", f"omega.{kind}") from exc
    raise ScenarioFormatError(f"unknown direction kind {kind!r}", path)


def parse_scenario(text: str) -> Scenario:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(d, dict):
        raise ScenarioFormatError("top level must be an object")
    unknown = set(d) - set(TOP_KEYS)
    if unknown:
        raise ScenarioFormatError(f"unknown keys {sorted(unknown)}")
    for key in ("dim", "tau", "sigma", "omega"):
        if key not in d:
            raise ScenarioFormatError("missing required key", key)
    n = d["dim"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise ScenarioFormatError("expected an integer >= 2", "dim")
    tau = _body(d["tau"], n, "tau")
    sigma = _body(d["sigma"], n, "sigma")
    S = _omega(d["omega"], n)
    seed = d.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise ScenarioFormatError("expected an integer", "seed")
    expected = d.get("expected")
    if expected is not None:
        try:
            expected = Verdict(expected)
        except ValueError:
            raise ScenarioFormatError(f"unknown verdict {expected!r}", "expected") from None
    name = d.get("name", "")
    if not isinstance(name, str):
        raise ScenarioFormatError("expected a string", "name")
    try:
        return Scenario(name, sigma, tau, S, expected, seed)
    except PolyrotError as exc:
        raise ScenarioFormatError(f"{type(exc).__name__}: {exc}", "sigma") from exc


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def _region_dict(r: CenterRegion) -> dict:
    d = {
        "sense": r.sense,
        "status": r.status.value,
        "witness": None if r.witness is None else r.witness.tolist(),
        "slack": None if not math.isfinite(r.slack) else r.slack,
        "lp_value": r.lp_value,
        "resolved": r.resolved,
        "certificate": None,
        "notes": list(r.notes),
    }
    if r.certificate is not None:
        d["certificate"] = {
            "pairs": [list(p) for p in r.certificate.pairs],
            "weights": r.certificate.weights.tolist(),
            "constant": r.certificate.constant,
        }
    return d


def report_to_dict(rep: AdmissibilityReport) -> dict:
    deg = rep.degeneracy
    conc = None
    if deg.concurrent is not None:
        conc = {
            "point": deg.concurrent.point.tolist(),
            "inside_tau": deg.concurrent.inside_tau,
            "flat_dim": deg.concurrent.flat_dim,
        }
    return {
        "verdict": rep.verdict.value,
        "forward": _region_dict(rep.forward),
        "backward": _region_dict(rep.backward),
        "degeneracy": {
            "not_full_rank_S": deg.not_full_rank_S,
            "dependent_gradients": deg.dependent_gradients,
            "all_zero_sets_concurrent": conc,
            "spectral_rank": deg.spectral_rank,
            "zero_gradient_pairs": [list(p) for p in deg.zero_gradient_pairs],
        },
        "incidence": {
            "pairs": [list(p) for p in rep.incidence.pairs],
            "classes": [c.value for c in rep.incidence.classes],
        },
        "translation": {
            "translatable": rep.translation.translatable,
            "strict": rep.translation.strict,
            "witness": None if rep.translation.witness is None else rep.translation.witness.tolist(),
        },
        "notes": list(rep.notes),
    }


def _fmt_vec(v) -> str:
    return "(" + ", ".join(f"{x:.6g}" for x in v) + ")"


def report_to_text(rep: AdmissibilityReport) -> str:
    lines = [f"verdict: {rep.verdict.value}"]
    for label, r in (("omega", rep.forward), ("-omega", rep.backward)):
        line = f"  {label:>6}: {r.status.value}"
        if r.witness is not None:
            line += f"  centre {_fmt_vec(r.witness)}  slack {r.slack:.3g}"
        else:
            line += f"  max slack {r.lp_value:.3g}"
        lines.append(line)
        if r.certificate is not None:
            terms = " + ".join(f"{w:.4g}*f{p}" for p, w in zip(r.certificate.pairs, r.certificate.weights))
            lines.append(f"          certificate: {terms} = {r.certificate.constant:.6g} < 0")
        lines.extend(f"          note: {n}" for n in r.notes)
    deg = rep.degeneracy
    flags = []
    if deg.not_full_rank_S:
        flags.append("not_full_rank_S")
    if deg.dependent_gradients:
        flags.append("dependent_gradients")
    if deg.concurrent is not None:
        where = "inside" if deg.concurrent.inside_tau else "outside"
        flags.append(f"all_zero_sets_concurrent at {_fmt_vec(deg.concurrent.point)} ({where} tau)")
    lines.append(f"degeneracy: {', '.join(flags) if flags else 'none'}  (rank S = {deg.spectral_rank})")
    lines.append(f"contacts: {' '.join(f'P{i}-facet{j}' for i, j in rep.incidence.pairs) or 'none'}")
    t = rep.translation
    lines.append("translation: " + (f"possible along {_fmt_vec(t.witness)}" if t.translatable else "impossible"))
    lines.extend(f"note: {n}" for n in rep.notes)
    return "\n".join(lines)
