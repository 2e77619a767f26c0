"""Algebraic curvature tensors, pseudo-Jacobi operators and the Osserman test.

All components are taken in an adapted frame ``(xi_1..xi_r, E_{r+1}..E_m)``:
``R[(a, b, c, d)] = R(e_a, e_b, e_c, e_d) = g(R(e_a, e_b) e_c, e_d)``.
Tensors are stored sparsely (nonzero entries only).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .degenerate import AdaptedFrame, AssociatedMetric, DegenerateForm
from .linalg import (
    Matrix,
    char_poly,
    congruence_diagonalize,
    fraction_str,
    is_zero,
    polys_close,
    solve_invert,
)

UNVERIFIED = "unverified"
VERIFIED = "verified"
VIOLATED = "violated"

DEFAULT_SAMPLES = 64
SAMPLE_BOX = 9
MAX_ATTEMPTS_PER_SAMPLE = 10_000


class NotAlgebraicError(ValueError):
    """The tensor fails the algebraic curvature symmetries."""


class EmptyPseudoSphere(ValueError):
    """No vector of the requested causal sign exists for this form."""


@dataclass(frozen=True)
class SymmetryStatus:
    state: str
    witness: tuple | None = None
    rule: str | None = None

    @property
    def ok(self) -> bool:
        return self.state == VERIFIED


def _clean(d: Mapping) -> dict:
    return {k: Fraction(v) if not isinstance(v, (Fraction, float)) else v
            for k, v in d.items() if not is_zero(v)}


@dataclass(frozen=True)
class CurvatureTensor:
    """Rank-4 covariant components plus, optionally, the (1,3) operator form.

    ``operator[(a, b, c, d)]`` is the coefficient of ``e_d`` in
    ``R(e_a, e_b) e_c``.  The operator carries information the degenerate
    metric cannot see (radical components), which the Ricci formula and the
    trace identity need.
    """

    dim: int
    components: Mapping[tuple, Fraction]
    operator: Mapping[tuple, Fraction] | None = None
    status: SymmetryStatus = field(default=SymmetryStatus(UNVERIFIED))

    def __post_init__(self):
        object.__setattr__(self, "components", _clean(self.components))
        if self.operator is not None:
            object.__setattr__(self, "operator", _clean(self.operator))

    @classmethod
    def zero(cls, dim: int) -> "CurvatureTensor":
        return cls(dim, {}, {})

    @classmethod
    def from_operator(cls, dim: int, operator: Mapping[tuple, Fraction],
                      frame_gram: Matrix) -> "CurvatureTensor":
        comps: dict[tuple, Fraction] = {}
        for (a, b, c, e), v in operator.items():
            for d in range(dim):
                gv = frame_gram[e, d]
                if gv != 0:
                    key = (a, b, c, d)
                    comps[key] = comps.get(key, Fraction(0)) + v * gv
        return cls(dim, comps, operator)

    def __getitem__(self, key: tuple):
        return self.components.get(key, Fraction(0))

    def perturbed(self, key: tuple, delta) -> "CurvatureTensor":
        comps = dict(self.components)
        comps[key] = comps.get(key, Fraction(0)) + delta
        return CurvatureTensor(self.dim, comps, None)

    def dense(self) -> list:
        m = self.dim
        out = [[[[Fraction(0)] * m for _ in range(m)] for _ in range(m)] for _ in range(m)]
        for (a, b, c, d), v in self.components.items():
            out[a][b][c][d] = v
        return out

    def verified(self) -> "CurvatureTensor":
        return replace(self, status=check_curvature_symmetries(self))


@dataclass(frozen=True)
class JacobiOperator:
    direction: tuple
    q: Fraction
    matrix: Matrix


@dataclass(frozen=True)
class OssermanReport:
    verdict: bool
    reference: dict            # sign -> CharPoly (or None when skipped)
    samples: dict              # sign -> list of (direction, q, charpoly)
    verdict_by_sign: dict      # sign -> bool | None
    frame: dict | None
    seed: int
    mode: str
    skipped: tuple = ()

    def to_dict(self) -> dict:
        def poly(p):
            return None if p is None else [fraction_str(c) for c in p]
        return {
            "verdict": self.verdict,
            "mode": self.mode,
            "seed": self.seed,
            "frame": self.frame,
            "skipped_signs": list(self.skipped),
            "by_sign": {
                _sign_name(s): {
                    "verdict": self.verdict_by_sign.get(s),
                    "reference_char_poly": poly(self.reference.get(s)),
                    "sample_count": len(self.samples.get(s, [])),
                    "distinct_char_polys": len({tuple(fraction_str(c) for c in p)
                                                for _, _, p in self.samples.get(s, [])}),
                }
                for s in (1, -1)
            },
        }


@dataclass(frozen=True)
class EinsteinResult:
    factor: Fraction | None
    witness: tuple | None = None

    @property
    def is_einstein(self) -> bool:
        return self.factor is not None


def _sign_name(sign: int) -> str:
    return "spacelike" if sign > 0 else "timelike"


def _rules(q: tuple) -> Iterator[tuple[str, tuple, int]]:
    x, y, z, w = q
    yield "antisymmetry", (y, x, z, w), -1
    yield "pair symmetry", (z, w, x, y), 1


def check_curvature_symmetries(R: CurvatureTensor) -> SymmetryStatus:
    """Exact check of antisymmetry, pair symmetry and the first Bianchi identity.

    A violation must involve a nonzero entry, so scanning the support (and
    the cyclic images of each support entry) is exhaustive.
    """
    comps = R.components
    for q in sorted(comps):
        v = comps[q]
        for rule, other, sgn in _rules(q):
            if v != sgn * comps.get(other, 0):
                return SymmetryStatus(VIOLATED, q, rule)
    seen = set()
    for q in sorted(comps):
        x, y, z, w = q
        for cand in ((x, y, z, w), (y, z, x, w), (z, x, y, w)):
            if cand in seen:
                continue
            seen.add(cand)
            a, b, c, d = cand
            total = (comps.get((a, b, c, d), 0) + comps.get((b, c, a, d), 0)
                     + comps.get((c, a, b, d), 0))
            if total != 0:
                return SymmetryStatus(VIOLATED, cand, "first Bianchi identity")
    return SymmetryStatus(VERIFIED)


def _require_algebraic(R: CurvatureTensor) -> CurvatureTensor:
    if R.status.state == UNVERIFIED:
        R = R.verified()
    if not R.status.ok:
        raise NotAlgebraicError(
            f"curvature tensor violates {R.status.rule} at {R.status.witness}")
    return R


def degenerate_gram(gt: AssociatedMetric, r: int) -> Matrix:
    """Frame components of ``g`` recovered from ``g~`` (radical block zeroed)."""
    m = gt.gram_tilde.nrows
    return Matrix([[Fraction(0) if (i < r or j < r) else gt.gram_tilde[i, j]
                    for j in range(m)] for i in range(m)], m)


def jacobi_tensor(R: CurvatureTensor, x: Sequence) -> Matrix:
    """``T[w][y] = R(y, x, x, w)``."""
    m = R.dim
    t = [[Fraction(0)] * m for _ in range(m)]
    for (y, b, c, w), v in R.components.items():
        xb, xc = x[b], x[c]
        if xb != 0 and xc != 0:
            t[w][y] += v * xb * xc
    return Matrix(t, m)


def jacobi_operator(R: CurvatureTensor, gt: AssociatedMetric, x: Sequence,
                    r: int | None = None) -> JacobiOperator:
    """Pseudo-Jacobi operator: ``g~(J y, w) = R(y, x, x, w)``, so ``J = g~^{-1} T``.

    ``r`` (radical rank of the frame) is only used to report ``q = g(x, x)``.
    """
    R = _require_algebraic(R)
    x = tuple(x)
    j = gt.inverse @ jacobi_tensor(R, x)
    q = None
    if r is not None:
        g = degenerate_gram(gt, r)
        q = sum((g[a, b] * x[a] * x[b] for a in range(len(x)) for b in range(len(x))
                 if x[a] != 0 and x[b] != 0), Fraction(0))
    return JacobiOperator(x, q, j)


def sample_unit_directions(g: DegenerateForm, sign: int, n: int,
                           seed: int) -> list[tuple[tuple, Fraction]]:
    """``n`` rational directions with ``sign(g(x, x)) == sign``; not normalized.

    Rejection sampling over integer boxes ``[-9, 9]^m`` taken in a
    congruence-diagonal basis ``C`` of ``g`` (``C^T G C = diag(d)``), so
    ``q = sum d_k z_k^2``; columns are rescaled by rational
    approximations of ``1/sqrt|d_k|`` so causal signs stay well populated even when
    the Gram entries are large.  The directions returned are ``x = C z``.
    Each causal sign draws from its own generator seeded by ``(seed, sign)``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    c, d = congruence_diagonalize(g.gram)
    plus = sum(1 for v in d if not is_zero(v) and v > 0)
    minus = sum(1 for v in d if not is_zero(v) and v < 0)
    if (plus if sign > 0 else minus) == 0:
        raise EmptyPseudoSphere(f"no {_sign_name(sign)} vectors for signature "
                                f"({plus}, {minus})")
    # rescale columns so |d_k| is close to 1; the scale is rational, so q stays exact
    scale = [Fraction(1) if is_zero(v) else
             Fraction(1 / math.sqrt(abs(float(v)))).limit_denominator(1000) for v in d]
    d = [v * t * t for v, t in zip(d, scale)]
    m = g.dim
    c = Matrix([[c[i, k] * scale[k] for k in range(m)] for i in range(m)], m)
    rng = random.Random(f"{seed}/{sign:+d}")
    out = []
    attempts = 0
    while len(out) < n:
        attempts += 1
        if attempts > MAX_ATTEMPTS_PER_SAMPLE * max(n, 1):
            raise RuntimeError("rejection sampler exhausted its attempt budget")
        z = [rng.randint(-SAMPLE_BOX, SAMPLE_BOX) for _ in range(m)]
        q = sum((dk * zk * zk for dk, zk in zip(d, z) if zk), Fraction(0))
        if q != 0 and (q > 0) == (sign > 0):
            x = tuple(sum((c[i, k] * z[k] for k in range(m) if z[k] and c[i, k]), Fraction(0))
                      for i in range(m))
            out.append((x, q))
    return out


def _to_float_tensor(R: CurvatureTensor) -> CurvatureTensor:
    comps = {k: float(v) for k, v in R.components.items()}
    t = CurvatureTensor.__new__(CurvatureTensor)
    object.__setattr__(t, "dim", R.dim)
    object.__setattr__(t, "components", comps)
    object.__setattr__(t, "operator", None)
    object.__setattr__(t, "status", R.status)
    return t


def osserman_test(R: CurvatureTensor, g: DegenerateForm, gt: AssociatedMetric,
                  frame: AdaptedFrame | None = None, n_samples: int = DEFAULT_SAMPLES,
                  seed: int = 0, mode: str = "exact") -> OssermanReport:
    """Compare char polys of ``J_R(x) / |g(x, x)|`` over sampled directions.

    ``g`` must be given in the same (frame) components as ``R`` and ``gt``.
    By homogeneity ``J_R(x / sqrt|q|) = J_R(x) / |q|``, so this is the char
    poly on the unit pseudo-sphere without leaving rational arithmetic.
    """
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown arithmetic mode {mode!r}")
    R = _require_algebraic(R)
    exact = mode == "exact"
    inv = gt.inverse if exact else solve_invert(gt.gram_tilde.to_float())
    Rw = R if exact else _to_float_tensor(R)

    samples: dict[int, list] = {}
    reference: dict[int, tuple | None] = {}
    by_sign: dict[int, bool | None] = {}
    skipped = []
    for sign in (1, -1):
        try:
            dirs = sample_unit_directions(g, sign, n_samples, seed)
        except EmptyPseudoSphere:
            skipped.append(_sign_name(sign))
            reference[sign] = None
            by_sign[sign] = None
            continue
        polys = []
        for x, q in dirs:
            xs = x if exact else tuple(float(c) for c in x)
            scale = 1 / abs(q) if exact else 1.0 / abs(float(q))
            j = (inv @ jacobi_tensor(Rw, xs)).scale(scale)
            polys.append((x, q, char_poly(j)))
        samples[sign] = polys
        ref = polys[0][2] if polys else None
        reference[sign] = ref
        by_sign[sign] = all(polys_close(p, ref) for _, _, p in polys)
    checked = [v for v in by_sign.values() if v is not None]
    verdict = bool(checked) and all(checked)
    return OssermanReport(verdict, reference, samples, by_sign,
                          frame.describe() if frame is not None else None,
                          seed, mode, tuple(skipped))


def operator_components(R: CurvatureTensor, gt: AssociatedMetric) -> dict:
    """The (1,3) form; lifted through ``g~`` when only covariant data is known."""
    if R.operator is not None:
        return dict(R.operator)
    m = R.dim
    inv = gt.inverse
    out: dict[tuple, Fraction] = {}
    for (a, b, c, e), v in R.components.items():
        for d in range(m):
            coef = inv[d, e]
            if coef != 0:
                key = (a, b, c, d)
                out[key] = out.get(key, Fraction(0)) + coef * v
    return {k: v for k, v in out.items() if v != 0}


def ricci(R: CurvatureTensor, frame: AdaptedFrame, gt: AssociatedMetric) -> Matrix:
    """``Ric(X,Y) = sum_screen eps_i g(R(X,E_i)Y,E_i) + sum_i eta_i(R(X,xi_i)Y)``.

    The screen block of ``g`` is diagonalized by congruence (``C^T S C = D``);
    the orthogonal vectors are not normalized, so each term is divided by
    ``g(E'_k, E'_k) = d_k`` which equals ``eps_k`` after rescaling.
    """
    m = R.dim
    r = frame.r
    s = gt.gram_tilde.submatrix(range(r, m), range(r, m))
    weight = [[Fraction(0)] * m for _ in range(m)]
    if m > r:
        c, d = congruence_diagonalize(s)
        k_count = m - r
        for si in range(k_count):
            for ti in range(k_count):
                w = sum((c[si, k] * c[ti, k] / d[k] for k in range(k_count)
                         if c[si, k] != 0 and c[ti, k] != 0), Fraction(0))
                weight[r + si][r + ti] = w
    ric = [[Fraction(0)] * m for _ in range(m)]
    for (a, s_, b, t), v in R.components.items():
        w = weight[s_][t]
        if w != 0:
            ric[a][b] += w * v
    op = operator_components(R, gt)
    for (a, i, b, d), v in op.items():
        if i < r and d == i:
            ric[a][b] += v
    return Matrix(ric, m)


def ricci_by_trace(R: CurvatureTensor, gt: AssociatedMetric) -> Matrix:
    """Independent route: ``Ric(X, Y) = tr(Z -> R(X, Z) Y)``."""
    m = R.dim
    ric = [[Fraction(0)] * m for _ in range(m)]
    for (a, z, b, d), v in operator_components(R, gt).items():
        if z == d:
            ric[a][b] += v
    return Matrix(ric, m)


def _quad(mat: Matrix, x: Sequence):
    n = len(x)
    return sum((mat[a, b] * x[a] * x[b] for a in range(n) for b in range(n)
                if x[a] != 0 and x[b] != 0), Fraction(0))


def radical_term(R: CurvatureTensor, frame: AdaptedFrame, gt: AssociatedMetric,
                 x: Sequence) -> Fraction:
    """``sum_i eta_i(R(x, xi_i) x)``."""
    op = operator_components(R, gt)
    total = Fraction(0)
    for (a, i, b, d), v in op.items():
        if i < frame.r and d == i and x[a] != 0 and x[b] != 0:
            total += v * x[a] * x[b]
    return total


def trace_identity_residual(R: CurvatureTensor, frame: AdaptedFrame, gt: AssociatedMetric,
                            x: Sequence) -> Fraction:
    """``trace J_R(x) - sum_i eta_i(R(x, xi_i) x) + Ric(x, x)``; zero when the identity holds."""
    j = jacobi_operator(R, gt, x)
    return j.matrix.trace() - radical_term(R, frame, gt, x) + _quad(ricci(R, frame, gt), x)


def einstein_check(ric: Matrix, g: Matrix) -> EinsteinResult:
    """Find ``lam`` with ``ric == lam * g`` exactly, else report the first failing entry."""
    if ric.shape != g.shape:
        raise ValueError("Ricci and metric shapes differ")
    n, m = g.shape
    lam = None
    for i in range(n):
        for j in range(m):
            if not is_zero(g[i, j]):
                lam = ric[i, j] / g[i, j]
                break
        if lam is not None:
            break
    if lam is None:
        lam = Fraction(0)
    for i in range(n):
        for j in range(m):
            if ric[i, j] != lam * g[i, j]:
                return EinsteinResult(None, (i, j))
    return EinsteinResult(lam)


def radical_hypotheses(R: CurvatureTensor, frame: AdaptedFrame,
                       gt: AssociatedMetric) -> tuple | None:
    """First frame witness against ``R(x, xi_i) xi_j = 0`` and ``R(xi_i, xi_j) x = 0``."""
    r = frame.r
    for (a, b, c, d), v in sorted(operator_components(R, gt).items()):
        if b < r and c < r:
            return ("R(x,xi)xi", (a, b, c, d), v)
        if a < r and b < r:
            return ("R(xi,xi)x", (a, b, c, d), v)
    return None


def change_frame(R: CurvatureTensor, T: Matrix) -> CurvatureTensor:
    """Components in a new basis whose vectors are the columns of ``T`` (old components).

    ``R'(a,b,c,d) = sum R(i,j,k,l) T[i,a] T[j,b] T[k,c] T[l,d]``, contracted one
    slot at a time.  The operator form is not carried over.
    """
    m = R.dim
    cur: dict[tuple, Fraction] = dict(R.components)
    cols = [[(a, T[i, a]) for a in range(m) if T[i, a] != 0] for i in range(m)]
    for slot in range(4):
        nxt: dict[tuple, Fraction] = {}
        for key, v in cur.items():
            for a, t in cols[key[slot]]:
                k2 = key[:slot] + (a,) + key[slot + 1:]
                nxt[k2] = nxt.get(k2, Fraction(0)) + v * t
        cur = {k: v for k, v in nxt.items() if v != 0}
    return CurvatureTensor(m, cur)
