"""Model-file parsing and the per-kind analysis pipelines behind ``analyze``."""
from __future__ import annotations

import json
from enum import Enum
from fractions import Fraction
from importlib import resources
from typing import Any

import jsonschema

from . import __version__, gfh
from .acceptance import hypersurface_frame
from . import hypersurface as hs
from .curvature import (
    CurvatureTensor,
    DEFAULT_SAMPLES,
    change_frame,
    check_curvature_symmetries,
    einstein_check,
    jacobi_operator,
    osserman_test,
    ricci,
    ricci_by_trace,
    sample_unit_directions,
    trace_identity_residual,
    EmptyPseudoSphere,
)
from .degenerate import (
    AdaptedFrame,
    DegenerateForm,
    FrameError,
    associated_metric,
    build_adapted_frame,
    classify,
)
from .linalg import Matrix, char_poly, congruence_signature, fraction_str, solve_invert
from .poly import RationalPolynomial


class InputError(ValueError):
    """The model file is malformed or violates a data invariant."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def load_schema(name: str) -> dict:
    text = resources.files("lightlike").joinpath("schemas", name).read_text(encoding="utf-8")
    return json.loads(text)


def validate_document(doc: Any) -> None:
    validator = jsonschema.Draft202012Validator(load_schema("input.schema.json"))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if not errors:
        return
    err = errors[0]
    # oneOf failures hide the useful message in the branch matching the declared kind
    if err.validator == "oneOf" and isinstance(doc, dict) and err.context:
        kind_errors = [c for c in err.context
                       if not (c.validator == "const" and list(c.absolute_path) == ["kind"])]
        branch = _branch_for_kind(doc.get("kind"))
        picked = [c for c in kind_errors if c.schema_path and c.schema_path[0] == branch]
        if picked:
            err = max(picked, key=lambda c: len(list(c.absolute_path)))
    path = "/".join(str(p) for p in err.absolute_path) or "<root>"
    raise InputError(path, err.message)


def _branch_for_kind(kind) -> int | None:
    return {"gfh": 0, "hypersurface": 1, "raw-metric": 2}.get(kind)


def load_model_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(path, f"cannot read file ({exc.strerror})") from exc
    except json.JSONDecodeError as exc:
        raise InputError(path, f"not valid JSON (line {exc.lineno}: {exc.msg})") from exc
    validate_document(doc)
    return doc


def parse_rational(v) -> Fraction:
    if isinstance(v, int):
        return Fraction(v)
    return Fraction(v["num"], v["den"])


def parse_matrix(rows, path: str) -> Matrix:
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InputError(path, "rows have different lengths")
    return Matrix([[parse_rational(x) for x in r] for r in rows], width)


def parse_polynomial(terms, p: int, path: str) -> RationalPolynomial:
    items = []
    for i, t in enumerate(terms):
        if len(t["exponents"]) != p:
            raise InputError(f"{path}/{i}/exponents", f"expected {p} exponents")
        items.append((t["exponents"], Fraction(t["num"], t["den"])))
    return RationalPolynomial.from_terms(p, items)


# --------------------------------------------------------------------------- serialization

def plain(v):
    """JSON-ready copy: fractions become exact strings, matrices nested lists."""
    if isinstance(v, Enum):
        return v.value
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, (Fraction, float)):
        return fraction_str(v)
    if isinstance(v, Matrix):
        return [[plain(x) for x in r] for r in v.rows]
    if isinstance(v, dict):
        return {str(k): plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [plain(x) for x in v]
    raise TypeError(f"cannot serialize {type(v).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(plain(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _components(R: CurvatureTensor, names: list[str]) -> list[dict]:
    return [{"index": [names[i] for i in k], "value": v} for k, v in sorted(R.components.items())]


def _signature(mat: Matrix) -> list[int]:
    return list(congruence_signature(mat))


# --------------------------------------------------------------------------- gfh

def analyze_gfh(doc: dict, samples: int, seed: int, mode: str) -> list[dict]:
    p = doc["p"]
    f = parse_polynomial(doc["f"], p, "f")
    h = parse_polynomial(doc["h"], p, "h")
    out = []
    for i, raw in enumerate(doc["points"]):
        if len(raw) != 2 * p + 2:
            raise InputError(f"points/{i}", f"expected {2 * p + 2} coordinates")
        model = gfh.GfhModel(p, f, h, tuple(parse_rational(x) for x in raw))
        out.append(gfh_point_report(model, samples, seed, mode))
    return out


def gfh_point_report(model: gfh.GfhModel, samples: int, seed: int, mode: str) -> dict:
    names = gfh.frame_names(model.p)
    g = gfh.metric_matrix(model)
    if g.gram != gfh.pullback_gram(model):
        raise gfh.RouteDisagreement("metric vs embedding pullback", "Gram matrix")
    bad = gfh.frame_invariant_violations(model)
    if bad:
        raise gfh.RouteDisagreement("model frame invariants", bad[0])
    frame = build_adapted_frame(g, 2, hint=gfh.adapted_frame(model))
    fg = frame.frame_gram(g)
    gt = associated_metric(g, frame)

    F, H = gfh.hessians(model)
    h1, h2 = gfh.second_fundamental_ambient(model)
    for hl, hess in ((h1, F), (h2, H)):
        for a in range(model.m):
            for b in range(model.m):
                ua, ub = a - 2, b - 2
                want = hess[ua, ub] if 0 <= ua < model.p and 0 <= ub < model.p else 0
                if hl[a, b] != want:
                    raise gfh.RouteDisagreement("second fundamental form", (names[a], names[b]))
    tangent, _ = gfh.connection_ambient(model)
    if tangent != gfh.connection_coefficients(model):
        key = next(iter(set(tangent.items()) ^ set(gfh.connection_coefficients(model).items())))
        raise gfh.RouteDisagreement("induced connection", [names[i] for i in key[0]])

    R = gfh.curvature(model)
    key = gfh.compare_routes(R, gfh.curvature_gauss(model))
    if key is not None:
        raise gfh.RouteDisagreement("curvature", [names[i] for i in key])
    op_check = CurvatureTensor.from_operator(model.m, R.operator, fg)
    if op_check.components != R.components:
        raise gfh.RouteDisagreement("curvature operator vs scalar form", "contraction")
    status = check_curvature_symmetries(R)
    R = R.verified()

    rep = osserman_test(R, DegenerateForm(fg), gt, frame, samples, seed, mode)
    expected = tuple([Fraction(0)] * model.m + [Fraction(1)])

    x = sample_unit_directions(DegenerateForm(fg), 1, 1, seed)[0][0]
    jac = jacobi_operator(R, gt, x, r=2)
    closed = gfh.jacobi_matrix(model, x)
    if jac.matrix != closed.matrix:
        raise gfh.RouteDisagreement("pseudo-Jacobi operator", "block form")
    ric = ricci(R, frame, gt)
    if ric != ricci_by_trace(R, gt):
        raise gfh.RouteDisagreement("Ricci", "quasi-orthonormal formula vs trace")
    ein = einstein_check(ric, fg)

    greedy = build_adapted_frame(g, 2)
    T = solve_invert(frame.basis) @ greedy.basis
    Rg = change_frame(R, T).verified()
    gg = greedy.frame_gram(g)
    rep_g = osserman_test(Rg, DegenerateForm(gg), associated_metric(g, greedy), greedy,
                          samples, seed, mode)

    return {
        "point": list(model.point),
        "classification": classify(model.m, 2, g.radical_rank),
        "radical_rank": g.radical_rank,
        "signature": _signature(g.gram),
        "ambient_signature": _signature(gfh.ambient_gram(model.p)),
        "frame": {"labels": names, **frame.describe()},
        "g_tilde": gt.gram_tilde,
        "hessians": {"f": F, "h": H},
        "checks": {
            "metric_equals_embedding_pullback": True,
            "frame_invariants_hold": True,
            "second_fundamental_form_routes_agree": True,
            "connection_routes_agree": True,
            "curvature_routes_agree": True,
            "jacobi_block_form_matches": True,
            "jacobi_nilpotent": (jac.matrix @ jac.matrix).is_zero(),
            "ricci_routes_agree": True,
        },
        "curvature": {"symmetry_status": status.state,
                      "nonzero_components": _components(R, names)},
        "osserman": rep.to_dict(),
        "char_poly_matches_lambda_power": rep.verdict and all(
            rep.reference.get(s) is None or tuple(rep.reference[s]) == expected for s in (1, -1)),
        "einstein": {"lambda": ein.factor, "witness": ein.witness},
        "trace_identity_residual": trace_identity_residual(R, frame, gt, x),
        "greedy_screen_osserman": {"verdict": rep_g.verdict, "frame": greedy.describe()},
    }


# --------------------------------------------------------------------------- hypersurface

def analyze_hypersurface(doc: dict, samples: int, seed: int, mode: str) -> list[dict]:
    m = doc["m"]
    try:
        data = hs.HypersurfacePoint(m, parse_rational(doc["c"]), parse_matrix(doc["g"], "g"),
                                    parse_matrix(doc["B"], "B"), parse_matrix(doc["A_N"], "A_N"))
    except hs.HypersurfaceDataError as exc:
        raise InputError(exc.field, str(exc).split(": ", 1)[1]) from exc
    return [hypersurface_report(data, samples, seed, mode)]


def hypersurface_report(d: hs.HypersurfacePoint, samples: int, seed: int, mode: str) -> dict:
    names = hs.frame_labels(d.m)
    frame = hypersurface_frame(d)
    gt = associated_metric(d.form, frame)
    R = hs.induced_curvature(d)
    status = check_curvature_symmetries(R)
    sym = hs.symmetry_report(d)
    out = {
        "classification": classify(d.n, 1, 1),
        "radical_rank": 1,
        "signature": _signature(d.g),
        "frame": {"labels": names, **frame.describe()},
        "g_tilde": gt.gram_tilde,
        "curvature": {"symmetry_status": status.state,
                      "witness": None if status.witness is None
                      else [names[i] for i in status.witness],
                      "rule": status.rule},
        "ricci": hs.ricci_h(d),
        "einstein": {"lambda": sym.einstein_factor},
        "symmetry_report": sym.to_dict(d.m),
    }
    if status.ok:
        out["osserman"] = osserman_test(R.verified(), d.form, gt, frame, samples, seed,
                                        mode).to_dict()
    else:
        out["osserman"] = {"skipped": "curvature is not an algebraic curvature tensor"}
    return out


# --------------------------------------------------------------------------- raw metric

def analyze_raw(doc: dict, samples: int, seed: int, mode: str) -> list[dict]:
    gram = parse_matrix(doc["gram"], "gram")
    if not gram.is_square:
        raise InputError("gram", "must be square")
    try:
        g = DegenerateForm(gram)
    except ValueError as exc:
        raise InputError("gram", str(exc)) from exc
    m, r = g.dim, g.radical_rank
    n = doc.get("codim", max(r, 1))
    try:
        kind = classify(m, n, r)
    except ValueError as exc:
        raise InputError("codim", str(exc)) from exc
    hint = None
    if "frame_hint" in doc:
        fh = doc["frame_hint"]
        vecs = {k: tuple(tuple(parse_rational(x) for x in v) for v in fh[k])
                for k in ("radical", "screen", "eta")}
        if any(len(v) != m for k in vecs for v in vecs[k]):
            raise InputError("frame_hint", f"vectors must have {m} components")
        hint = AdaptedFrame(vecs["radical"], vecs["screen"], vecs["eta"], n)
    try:
        frame = build_adapted_frame(g, n, hint=hint)
    except FrameError as exc:
        raise InputError("frame_hint", str(exc)) from exc
    gt = associated_metric(g, frame)
    fg = frame.frame_gram(g)
    names = [f"xi{i + 1}" for i in range(frame.r)] + [f"E{i + 1}" for i in range(m - frame.r)]
    out = {
        "classification": kind,
        "radical_rank": r,
        "signature": _signature(gram),
        "frame": {"labels": names, **frame.describe()},
        "g_tilde": gt.gram_tilde,
        "g_tilde_inverse": gt.inverse,
    }
    if "curvature" in doc:
        comps: dict[tuple, Fraction] = {}
        for i, e in enumerate(doc["curvature"]):
            key = tuple(e["index"])
            if any(k >= m for k in key):
                raise InputError(f"curvature/{i}/index", f"indices must be < {m}")
            comps[key] = comps.get(key, Fraction(0)) + parse_rational(e["value"])
        R = change_frame(CurvatureTensor(m, comps), frame.basis)
        status = check_curvature_symmetries(R)
        out["curvature"] = {"symmetry_status": status.state, "rule": status.rule,
                            "witness": None if status.witness is None
                            else [names[i] for i in status.witness],
                            "frame_components": _components(R, names)}
        if status.ok:
            R = R.verified()
            out["osserman"] = osserman_test(R, DegenerateForm(fg), gt, frame, samples, seed,
                                            mode).to_dict()
            ric = ricci(R, frame, gt)
            ein = einstein_check(ric, fg)
            out["ricci"] = ric
            out["einstein"] = {"lambda": ein.factor, "witness": ein.witness}
    return [out]


PIPELINES = {"gfh": analyze_gfh, "hypersurface": analyze_hypersurface, "raw-metric": analyze_raw}


def analyze(doc: dict, samples: int | None = None, seed: int | None = None,
            mode: str | None = None) -> dict:
    """Full report for a validated model document; flags override the file's options."""
    opts = doc.get("options", {})
    samples = samples if samples is not None else opts.get("samples", DEFAULT_SAMPLES)
    seed = seed if seed is not None else opts.get("seed", 0)
    mode = mode or opts.get("mode", "exact")
    try:
        results = PIPELINES[doc["kind"]](doc, samples, seed, mode)
    except EmptyPseudoSphere as exc:
        raise InputError("", str(exc)) from exc
    return {"toolkit": "lightlike", "version": __version__, "command": "analyze",
            "kind": doc["kind"], "seed": seed, "samples": samples, "mode": mode,
            "results": results}


def text_summary(report: dict) -> str:
    """Plain-text rendering of an ``analyze`` or ``self-test`` report."""
    lines = [f"lightlike {report['version']} {report['command']}"]
    if report["command"] == "self-test":
        lines.append(f"seed {report['seed']}")
        for c in report["criteria"]:
            mark = "PASS" if c["passed"] else "FAIL"
            lines.append(f"[{mark}] criterion {c['criterion']}: {c['name']} ({c['checks']} checks)")
            if not c["passed"]:
                lines.append(f"       witness: {json.dumps(c['witness'], sort_keys=True)}")
        lines.append("all criteria passed" if report["passed"] else "acceptance FAILED")
        return "\n".join(lines) + "\n"
    r = plain(report)
    lines.append(f"kind {r['kind']}, seed {r['seed']}, {r['samples']} samples/sign, {r['mode']}")
    for i, res in enumerate(r["results"]):
        lines.append(f"-- result {i + 1}")
        lines.append(f"classification: {res['classification']}, radical rank {res['radical_rank']},"
                     f" signature {tuple(res['signature'])}")
        if "curvature" in res:
            lines.append(f"curvature symmetries: {res['curvature']['symmetry_status']}")
        osr = res.get("osserman")
        if osr and "verdict" in osr:
            polys = {k: v["reference_char_poly"] for k, v in osr["by_sign"].items()}
            lines.append(f"Osserman: {osr['verdict']}; reference char polys {polys}")
        if "einstein" in res:
            lines.append(f"Einstein lambda: {res['einstein']['lambda']}")
        if "symmetry_report" in res:
            flags = res["symmetry_report"]["flags"]
            lines.append("flags: " + ", ".join(f"{k}={v['value']}" for k, v in flags.items()))
    return "\n".join(lines) + "\n"
