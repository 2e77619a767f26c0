"""Seeded acceptance suite shared by ``self-test`` and the pytest acceptance file.

Each criterion returns a :class:`CriterionResult` whose content depends only
on the seed; wall-clock timings are returned separately so reports stay
byte-identical across runs.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from . import gfh
from . import hypersurface as hs
from .curvature import (
    CurvatureTensor,
    check_curvature_symmetries,
    einstein_check,
    jacobi_operator,
    osserman_test,
    trace_identity_residual,
    VIOLATED,
)
from .degenerate import (
    AdaptedFrame,
    DegenerateForm,
    associated_metric,
    build_adapted_frame,
    flat,
    sharp,
)
from .generators import (
    random_degenerate_gram,
    random_gfh_model,
    random_non_null,
    random_point,
    random_vector,
)
from .linalg import Matrix, det, fraction_str

MODELS = 20
POINTS_PER_MODEL = 5
SAMPLES_PER_SIGN = 16
HYPERSURFACE_INSTANCES = 50
GRAM_INSTANCES = 50
TRACE_PAIRS = 100
HOMOGENEITY_DRAWS = 100
MUTATIONS_PER_INSTANCE = 8


@dataclass
class CriterionResult:
    number: str
    name: str
    passed: bool
    checks: int
    witness: object = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "checks": self.checks, "witness": _plain(self.witness),
                "details": _plain(self.details)}


def _plain(v):
    if isinstance(v, (Fraction, float)):
        return fraction_str(v)
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


def _rng(seed: int, tag: str) -> random.Random:
    return random.Random(f"acceptance/{seed}/{tag}")


# --------------------------------------------------------------------------- instances

@dataclass(frozen=True)
class GfhInstance:
    model: gfh.GfhModel
    g: DegenerateForm
    frame: AdaptedFrame
    frame_gram: Matrix
    gt: object
    curvature: CurvatureTensor


def gfh_instance(model: gfh.GfhModel) -> GfhInstance:
    g = gfh.metric_matrix(model)
    frame = build_adapted_frame(g, 2, hint=gfh.adapted_frame(model))
    return GfhInstance(model, g, frame, frame.frame_gram(g), associated_metric(g, frame),
                       gfh.curvature(model))


@lru_cache(maxsize=8)
def gfh_instances(seed: int) -> tuple[GfhInstance, ...]:
    """20 random models (p cycling through 1..4), 5 random points each."""
    rng = _rng(seed, "gfh")
    out = []
    for k in range(MODELS):
        p = k % 4 + 1
        base = random_gfh_model(rng, p)
        for _ in range(POINTS_PER_MODEL):
            out.append(gfh_instance(base.with_point(random_point(rng, p))))
    return tuple(out)


@lru_cache(maxsize=8)
def hypersurface_instances(seed: int) -> dict[str, tuple]:
    rng = _rng(seed, "hypersurface")
    n = HYPERSURFACE_INSTANCES
    umb = tuple(hs.random_umbilical(rng) for _ in range(n))
    con = tuple(hs.random_constrained(rng) for _ in range(n))
    ein = tuple(hs.random_einstein(rng) for _ in range(n))
    prop = []
    for k in range(n):
        c = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2]))
        d = hs.random_generic(rng, c=c)
        if k % 2 == 0:
            d = hs.HypersurfacePoint(d.m, d.c, d.g, Matrix.zeros(d.n), d.A)
        elif d.B.is_zero():
            d = hs.HypersurfacePoint(d.m, d.c, d.g, d.g, d.A)
        prop.append(d)
    return {"umbilical": umb, "constrained": con, "einstein": ein, "prop": tuple(prop)}


def hypersurface_frame(d: hs.HypersurfacePoint) -> AdaptedFrame:
    n = d.n
    e = [tuple(Fraction(int(i == k)) for i in range(n)) for k in range(n)]
    return AdaptedFrame((e[0],), tuple(e[1:]), (e[0],), 1)


def _expected_poly(dim: int) -> tuple:
    return tuple(Fraction(0) for _ in range(dim)) + (Fraction((-1) ** dim),)


# --------------------------------------------------------------------------- criteria

def criterion_1(seed: int, samples: int = SAMPLES_PER_SIGN) -> CriterionResult:
    name = "gfh models: normalized char poly is lambda^(2p+2), Osserman verdict true"
    checks = 0
    first_dirs = None
    for idx, inst in enumerate(gfh_instances(seed)):
        rep = osserman_test(inst.curvature, DegenerateForm(inst.frame_gram), inst.gt,
                            inst.frame, samples, seed)
        want = _expected_poly(inst.model.m)
        if first_dirs is None:
            first_dirs = [list(x) for x, _, _ in rep.samples[1][:2]]
        for sign in (1, -1):
            for x, q, poly in rep.samples.get(sign, []):
                checks += 1
                if tuple(poly) != want:
                    return CriterionResult("1", name, False, checks,
                                           {"instance": idx, "direction": list(x),
                                            "char_poly": list(poly)})
        if not rep.verdict or rep.skipped:
            return CriterionResult("1", name, False, checks,
                                   {"instance": idx, "verdict": rep.verdict,
                                    "skipped": list(rep.skipped)})
    return CriterionResult("1", name, True, checks, None,
                           {"instances": len(gfh_instances(seed)), "samples_per_sign": samples,
                            "first_spacelike_directions": first_dirs})


def criterion_2(seed: int) -> CriterionResult:
    name = "Dual-route curvature: closed form equals Gauss-equation route"
    checks = 0
    for idx, inst in enumerate(gfh_instances(seed)):
        a, b = inst.curvature, gfh.curvature_gauss(inst.model)
        checks += 1
        key = gfh.compare_routes(a, b)
        if key is not None:
            return CriterionResult("2", name, False, checks,
                                   {"instance": idx, "index": list(key),
                                    "closed_form": a[key], "gauss": b[key]})
    return CriterionResult("2", name, True, checks)


def _symmetry_orbit(key: tuple) -> set:
    """Quadruples whose rule checks read ``key``; a mutation witness must be one of them."""
    x, y, z, w = key
    return {(x, y, z, w), (y, x, z, w), (z, w, x, y), (x, y, w, z),
            (y, z, x, w), (z, x, y, w)}


def criterion_3(seed: int) -> CriterionResult:
    name = "Algebraic symmetries verified; single-component mutations detected"
    rng = _rng(seed, "mutation")
    checks = 0
    for idx, inst in enumerate(gfh_instances(seed)):
        R = inst.curvature
        st = check_curvature_symmetries(R)
        checks += 1
        if not st.ok:
            return CriterionResult("3", name, False, checks,
                                   {"instance": idx, "rule": st.rule, "index": list(st.witness)})
        m = R.dim
        support = sorted(R.components)
        keys = rng.sample(support, min(len(support), MUTATIONS_PER_INSTANCE // 2))
        while len(keys) < MUTATIONS_PER_INSTANCE:
            keys.append(tuple(rng.randrange(m) for _ in range(4)))
        for key in keys:
            checks += 1
            bad = check_curvature_symmetries(R.perturbed(key, 1))
            if bad.state != VIOLATED or bad.witness not in _symmetry_orbit(key):
                return CriterionResult("3", name, False, checks,
                                       {"instance": idx, "mutated": list(key),
                                        "status": bad.state, "witness": bad.witness})
    return CriterionResult("3", name, True, checks)


def criterion_4(seed: int) -> CriterionResult:
    name = "Pseudo-inversion: g~ nonsingular, g~(xi,xi)=delta, g~=g on screen, flat/sharp inverse"
    rng = _rng(seed, "gram")
    checks = 0
    for idx in range(GRAM_INSTANCES):
        r = rng.randint(1, 3)
        dim = rng.randint(r + 1, 8)
        gm = DegenerateForm(random_degenerate_gram(rng, dim, r))
        frame = build_adapted_frame(gm)
        am = associated_metric(gm, frame)
        gtm, fg = am.gram_tilde, frame.frame_gram(gm)
        witness = None
        if frame.r != r:
            witness = {"radical_rank": frame.r, "expected": r}
        elif det(gtm) == 0:
            witness = {"g_tilde": "singular"}
        elif gtm @ am.inverse != Matrix.identity(dim):
            witness = {"inverse": "product is not the identity"}
        else:
            for i in range(dim):
                for j in range(dim):
                    if i < r and j < r:
                        want = Fraction(int(i == j))
                    elif i < r or j < r:
                        want = Fraction(0)
                    else:
                        want = fg[i, j]
                    if gtm[i, j] != want:
                        witness = {"entry": [i, j], "g_tilde": gtm[i, j], "expected": want}
                        break
                if witness:
                    break
        if witness is None:
            for _ in range(3):
                x = random_vector(rng, dim)
                if sharp(gm, frame, flat(gm, frame, x)) != x or \
                        flat(gm, frame, sharp(gm, frame, x)) != x:
                    witness = {"vector": list(x)}
                    break
        checks += 1
        if witness is not None:
            witness.update({"instance": idx, "dim": dim})
            return CriterionResult("4", name, False, checks, witness)
    return CriterionResult("4", name, True, checks)


def _trace_pool(seed: int) -> list[tuple]:
    pool = [(f"gfh[{i}]", inst.curvature, inst.frame, inst.gt, inst.frame_gram)
            for i, inst in enumerate(gfh_instances(seed))]
    hsi = hypersurface_instances(seed)
    for kind in ("umbilical", "einstein"):
        for i, d in enumerate(hsi[kind]):
            frame = hypersurface_frame(d)
            pool.append((f"{kind}[{i}]", hs.induced_curvature(d), frame,
                         associated_metric(d.form, frame), d.g))
    return pool


def criterion_5(seed: int) -> CriterionResult:
    name = "Trace identity: trace J - sum eta(R(x,xi)x) + Ric(x,x) = 0"
    rng = _rng(seed, "trace")
    pool = _trace_pool(seed)
    gfh_part = [p for p in pool if p[0].startswith("gfh")]
    hyp_part = [p for p in pool if not p[0].startswith("gfh")]
    checks = 0
    for k in range(TRACE_PAIRS):
        label, R, frame, gt, g = rng.choice(gfh_part if k % 2 == 0 else hyp_part)
        x = random_non_null(rng, g)
        res = trace_identity_residual(R, frame, gt, x)
        checks += 1
        if res != 0:
            return CriterionResult("5", name, False, checks,
                                   {"instance": label, "direction": list(x), "residual": res})
    return CriterionResult("5", name, True, checks)


def _first(t):
    return hs._first_nonzero(t)


def criterion_6(seed: int) -> list[CriterionResult]:
    hsi = hypersurface_instances(seed)
    out = []

    name = "Umbilical instances are semi-symmetric"
    witness, checks = None, 0
    for i, d in enumerate(hsi["umbilical"]):
        w = _first(hs.semi_symmetry_tensor(d))
        checks += d.n ** 6
        if w is not None:
            witness = {"instance": i, "tuple": list(w)}
            break
    out.append(CriterionResult("6a", name, witness is None, checks, witness))

    name = "Constraint, non-null A_N xi, B != 0: semi-symmetry fails; closed-form oracle agrees"
    witness, checks, found = None, 0, 0
    for i, d in enumerate(hsi["constrained"]):
        if any(hs.osserman_constraint_residual(d)) or hs.a_xi_norm(d) == 0 or d.B.is_zero():
            witness = {"instance": i, "problem": "generator broke its own preconditions"}
            break
        t = hs.semi_symmetry_tensor(d)
        mismatch = _first(t[:, :, 0] - hs.semi_symmetry_xi_tensor(d))
        checks += d.n ** 5
        if mismatch is not None:
            witness = {"instance": i, "oracle_mismatch": list(mismatch)}
            break
        if _first(t) is None:
            witness = {"instance": i, "problem": "no nonzero semi-symmetry witness"}
            break
        found += 1
    out.append(CriterionResult("6b", name, witness is None, checks, witness,
                               {"instances_with_witness": found}))

    name = "Einstein instances are Ricci semi-symmetric"
    witness, checks = None, 0
    for i, d in enumerate(hsi["einstein"]):
        ein = einstein_check(hs.ricci_h(d), d.g)
        alg = check_curvature_symmetries(hs.induced_curvature(d))
        if not ein.is_einstein or not alg.ok:
            witness = {"instance": i, "problem": "instance is not Einstein with algebraic curvature"}
            break
        w = _first(hs.ricci_semi_symmetry_tensor(d))
        checks += d.n ** 4
        if w is not None:
            witness = {"instance": i, "tuple": list(w)}
            break
    out.append(CriterionResult("6c", name, witness is None, checks, witness))

    name = "c != 0: local-symmetry obstruction vanishes iff B = 0"
    witness, checks = None, 0
    geodesic = 0
    for i, d in enumerate(hsi["prop"]):
        vanishes = _first(hs.local_symmetry_tensor(d)) is None
        checks += 1
        geodesic += d.B.is_zero()
        if vanishes != d.B.is_zero():
            witness = {"instance": i, "obstruction_vanishes": vanishes,
                       "totally_geodesic": d.B.is_zero()}
            break
    out.append(CriterionResult("6d", name, witness is None, checks, witness,
                               {"totally_geodesic_instances": geodesic}))
    return out


def criterion_7(seed: int) -> CriterionResult:
    name = "Homogeneity J(cx) = c^2 J(x) and g~-self-adjointness"
    rng = _rng(seed, "homogeneity")
    pool = _trace_pool(seed)
    checks = 0
    for _ in range(HOMOGENEITY_DRAWS):
        label, R, frame, gt, g = rng.choice(pool)
        x = random_vector(rng, R.dim)
        c = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2, 5]))
        j = jacobi_operator(R, gt, x).matrix
        jc = jacobi_operator(R, gt, tuple(c * v for v in x)).matrix
        checks += 1
        if jc != j.scale(c * c):
            return CriterionResult("7", name, False, checks,
                                   {"instance": label, "direction": list(x), "c": c,
                                    "failure": "homogeneity"})
        if not (gt.gram_tilde @ j).is_symmetric():
            return CriterionResult("7", name, False, checks,
                                   {"instance": label, "direction": list(x),
                                    "failure": "self-adjointness"})
    return CriterionResult("7", name, True, checks)


def run_suite(seed: int, samples: int | None = None,
              probe: Callable[[], bool] | None = None) -> tuple[list[CriterionResult], dict]:
    """Run criteria 1-7 (plus an optional determinism probe as 8); return results and timings."""
    results: list[CriterionResult] = []
    timings: dict[str, float] = {}
    steps = [("1", lambda: criterion_1(seed, samples or SAMPLES_PER_SIGN)),
             ("2", lambda: criterion_2(seed)),
             ("3", lambda: criterion_3(seed)),
             ("4", lambda: criterion_4(seed)),
             ("5", lambda: criterion_5(seed)),
             ("6", lambda: criterion_6(seed)),
             ("7", lambda: criterion_7(seed))]
    for label, fn in steps:
        t0 = time.perf_counter()
        try:
            res = fn()
        except Exception as exc:          # a crash is a failed criterion with its message
            res = CriterionResult(label, "crashed", False, 0,
                                  {"error": f"{type(exc).__name__}: {exc}"})
        timings[label] = time.perf_counter() - t0
        results.extend(res if isinstance(res, list) else [res])
    if probe is not None:
        t0 = time.perf_counter()
        ok = probe()
        timings["8"] = time.perf_counter() - t0
        results.append(CriterionResult("8", "Determinism: repeated analysis is byte-identical",
                                       ok, 1, None if ok else {"problem": "reports differ"}))
    return results, timings
