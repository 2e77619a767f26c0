"""Pointwise lightlike hypersurface data in a constant-curvature ambient.

Data lives in an adapted basis ``e_0 = xi, e_1..e_m`` (screen), so
``eta = e^0`` and ``P = diag(0, 1, ..., 1)``.  ``A`` is the matrix of the
shape operator acting on column vectors: ``A_N e_a = sum_d A[d, a] e_d``.

The exhaustive checkers scale ``c, g, B, A`` by one common denominator
``L``.  Every semi-symmetry term is homogeneous of degree 5 in these four
inputs, so all tuple tensors are computed on Python integers and compared
at a common scale.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np

from .curvature import CurvatureTensor, check_curvature_symmetries, einstein_check
from .degenerate import DegenerateForm
from .linalg import Matrix, det, fraction_str, solve_invert

MAX_EXHAUSTIVE_SCREEN_DIM = 6


class HypersurfaceDataError(ValueError):
    """Input data violates a HypersurfacePoint invariant."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


class ImplicationViolation(RuntimeError):
    """A theorem implication failed on a concrete instance."""


class OracleMismatch(RuntimeError):
    """The closed-form xi-slot oracle disagrees with the four-term action."""

    def __init__(self, witness):
        super().__init__(f"closed-form oracle disagrees with the derivation action at {witness}")
        self.witness = witness


def _fr_matrix(rows, n: int, name: str) -> Matrix:
    try:
        mat = Matrix.of(rows)
    except (TypeError, ValueError) as exc:
        raise HypersurfaceDataError(name, str(exc)) from exc
    if mat.shape != (n, n):
        raise HypersurfaceDataError(name, f"expected {n}x{n}, got {mat.shape[0]}x{mat.shape[1]}")
    return mat


@dataclass(frozen=True)
class HypersurfacePoint:
    m: int
    c: Fraction
    g: Matrix
    B: Matrix
    A: Matrix

    def __post_init__(self):
        n = self.m + 1
        if self.m < 1:
            raise HypersurfaceDataError("m", "screen dimension must be >= 1")
        object.__setattr__(self, "c", Fraction(self.c))
        for name in ("g", "B", "A"):
            val = getattr(self, name)
            if not isinstance(val, Matrix):
                val = _fr_matrix(val, n, name)
            elif val.shape != (n, n):
                raise HypersurfaceDataError(name, f"expected {n}x{n}, got {val.shape}")
            object.__setattr__(self, name, val)
        g, B, A = self.g, self.B, self.A
        if not g.is_symmetric():
            raise HypersurfaceDataError("g", "must be symmetric")
        if any(g[0, j] for j in range(n)):
            raise HypersurfaceDataError("g", "g(xi, .) must vanish (row/column 0)")
        if det(self.screen_gram) == 0:
            raise HypersurfaceDataError("g", "screen block is singular")
        if not B.is_symmetric():
            raise HypersurfaceDataError("B", "must be symmetric")
        if any(B[0, j] for j in range(n)):
            raise HypersurfaceDataError("B", "B(xi, .) must vanish (row/column 0)")
        if any(A[0, j] for j in range(n)):
            raise HypersurfaceDataError("A_N", "eta(A_N X) must vanish (row 0)")

    @property
    def n(self) -> int:
        return self.m + 1

    @property
    def screen_gram(self) -> Matrix:
        return self.g.submatrix(range(1, self.n), range(1, self.n))

    @property
    def xi(self) -> tuple:
        return tuple(Fraction(int(i == 0)) for i in range(self.n))

    @property
    def eta(self) -> tuple:
        return self.xi

    @property
    def P(self) -> Matrix:
        return Matrix.diag([0] + [1] * self.m)

    @property
    def form(self) -> DegenerateForm:
        return DegenerateForm(self.g)

    @property
    def a_xi(self) -> tuple:
        """``A_N xi``."""
        return self.A.col(0)

    @cached_property
    def scaled(self) -> "_Scaled":
        return _Scaled.of(self)

    def to_dict(self) -> dict:
        return {"m": self.m, "c": fraction_str(self.c),
                "g": _mat_str(self.g), "B": _mat_str(self.B), "A_N": _mat_str(self.A)}


def _mat_str(mat: Matrix) -> list:
    return [[fraction_str(v) for v in row] for row in mat.rows]


def _obj(rows) -> np.ndarray:
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[i, j] = v
    return out


@dataclass(frozen=True)
class _Scaled:
    """Integer copies ``L*c, L*g, L*B, L*A`` as numpy object arrays."""

    L: int
    c: int
    g: np.ndarray
    B: np.ndarray
    A: np.ndarray

    @classmethod
    def of(cls, d: HypersurfacePoint) -> "_Scaled":
        vals = [d.c, *d.g.rows, *d.B.rows, *d.A.rows]
        dens = [Fraction(d.c).denominator]
        for row in vals[1:]:
            dens.extend(Fraction(v).denominator for v in row)
        L = math.lcm(*dens)

        def ints(mat: Matrix) -> np.ndarray:
            return _obj([[int(v * L) for v in row] for row in mat.rows])

        return cls(L, int(d.c * L), ints(d.g), ints(d.B), ints(d.A))

    @cached_property
    def op(self) -> np.ndarray:
        """``L^2 *`` coefficient of ``e_d`` in ``R(e_a, e_b) e_c``, indexed ``[a, b, c, d]``."""
        n = self.g.shape[0]
        eye = _obj([[int(i == j) for j in range(n)] for i in range(n)])
        t = self.c * (self.g[None, :, :, None] * eye[:, None, None, :]
                      - self.g[:, None, :, None] * eye[None, :, None, :])
        t = t + (self.B[None, :, :, None] * self.A.T[:, None, None, :]
                 - self.B[:, None, :, None] * self.A.T[None, :, None, :])
        return t

    @cached_property
    def r4(self) -> np.ndarray:
        """``L^3 * R(e_a, e_b, e_c, e_d)``."""
        return np.tensordot(self.op, self.g, axes=([3], [0]))

    @cached_property
    def ricci(self) -> np.ndarray:
        """``L^2 *`` the :func:`ricci_h` matrix."""
        m = self.g.shape[0] - 1
        tr = sum(self.A[i, i] for i in range(self.A.shape[0]))
        return m * self.c * self.g + tr * self.B - self.A.T.dot(self.B)


def _unscale(value: int, power: int, L: int) -> Fraction:
    return Fraction(value, L ** power)


# --------------------------------------------------------------------------- curvature

def induced_curvature(d: HypersurfacePoint) -> CurvatureTensor:
    """``R(X,Y)Z = c{g(Y,Z)X - g(X,Z)Y} + B(Y,Z)A_N X - B(X,Z)A_N Y`` with operator form kept."""
    n = d.n
    g, B, A, c = d.g, d.B, d.A, d.c
    op = {}
    for a, b, cc in product(range(n), repeat=3):
        gbc, gac, bbc, bac = g[b, cc], g[a, cc], B[b, cc], B[a, cc]
        if not (gbc or gac or bbc or bac):
            continue
        for e in range(n):
            v = Fraction(0)
            if e == a:
                v += c * gbc
            if e == b:
                v -= c * gac
            v += bbc * A[e, a] - bac * A[e, b]
            if v:
                op[(a, b, cc, e)] = v
    return CurvatureTensor.from_operator(n, op, g)


def ricci_h(d: HypersurfacePoint) -> Matrix:
    """``Ric(X,Y) = m c g(X,Y) + B(X,Y) tr A_N - B(A_N X, Y)``."""
    n, m = d.n, d.m
    tr = d.A.trace()
    bt = d.A.T @ d.B          # [a][b] = B(A_N e_a, e_b)
    return Matrix([[m * d.c * d.g[a, b] + d.B[a, b] * tr - bt[a, b] for b in range(n)]
                   for a in range(n)], n)


def asymmetry_witness(mat: Matrix) -> tuple | None:
    n = mat.nrows
    for a in range(n):
        for b in range(a + 1, n):
            if mat[a, b] != mat[b, a]:
                return (a, b)
    return None


def osserman_constraint_residual(d: HypersurfacePoint) -> tuple:
    """The covector ``X -> B(A_N xi, X)``."""
    s = d.a_xi
    return tuple(sum((s[k] * d.B[k, b] for k in range(d.n) if s[k]), Fraction(0))
                 for b in range(d.n))


def a_xi_norm(d: HypersurfacePoint) -> Fraction:
    s = d.a_xi
    return sum((s[a] * d.g[a, b] * s[b] for a in range(d.n) for b in range(d.n)
                if s[a] and s[b]), Fraction(0))


def _vec(v: Sequence, n: int) -> tuple:
    if len(v) != n:
        raise ValueError(f"expected a vector with {n} components, got {len(v)}")
    return tuple(Fraction(x) for x in v)


def _bil(mat: Matrix, u: Sequence, v: Sequence) -> Fraction:
    n = mat.nrows
    return sum((u[a] * mat[a, b] * v[b] for a in range(n) if u[a] for b in range(n) if v[b]),
               Fraction(0))


def local_symmetry_obstruction(d: HypersurfacePoint, V: Sequence, X: Sequence,
                               Y: Sequence) -> Fraction:
    """``c{B(V,Y) eta(X) - B(V,X) eta(Y)}``, the xi-component of ``(nabla_V R)(X,Y)xi``."""
    V, X, Y = (_vec(v, d.n) for v in (V, X, Y))
    return d.c * (_bil(d.B, V, Y) * X[0] - _bil(d.B, V, X) * Y[0])


# --------------------------------------------------------------------------- per-tuple residuals

def _op_matrix(d: HypersurfacePoint, V1: tuple, V2: tuple) -> Matrix:
    """Matrix of ``R(V1, V2)`` acting on column vectors."""
    n = d.n
    A, B, g, c = d.A, d.B, d.g, d.c
    gv2, gv1 = d.g @ V2, d.g @ V1           # covectors g(V, .)
    bv2, bv1 = d.B @ V2, d.B @ V1
    av1, av2 = A @ V1, A @ V2
    rows = [[c * (gv2[z] * V1[e] - gv1[z] * V2[e]) + bv2[z] * av1[e] - bv1[z] * av2[e]
             for z in range(n)] for e in range(n)]
    return Matrix(rows, n)


def _r4(d: HypersurfacePoint, X, Y, Z, T) -> Fraction:
    return _bil(d.g, _op_matrix(d, X, Y) @ Z, T)


def semi_symmetry_residual(d: HypersurfacePoint, V1, V2, X, Y, Z, T) -> Fraction:
    """``(R(V1,V2).R)(X,Y,Z,T)`` as the four-term derivation action on the (0,4) tensor.

    When ``X`` is ``xi`` the closed form :func:`semi_symmetry_xi_closed_form`
    is evaluated too, and a mismatch raises :class:`OracleMismatch`.
    """
    V1, V2, X, Y, Z, T = (_vec(v, d.n) for v in (V1, V2, X, Y, Z, T))
    M = _op_matrix(d, V1, V2)
    val = -(_r4(d, M @ X, Y, Z, T) + _r4(d, X, M @ Y, Z, T)
            + _r4(d, X, Y, M @ Z, T) + _r4(d, X, Y, Z, M @ T))
    if X == d.xi:
        oracle = semi_symmetry_xi_closed_form(d, V1, V2, Y, Z, T)
        if oracle != val:
            raise OracleMismatch((V1, V2, X, Y, Z, T))
    return val


def semi_symmetry_xi_closed_form(d: HypersurfacePoint, V1, V2, X, Y, Z) -> Fraction:
    """Closed form of ``(R(V1,V2).R)(xi, X, Y, Z)`` for data obeying the curvature formula."""
    V1, V2, X, Y, Z = (_vec(v, d.n) for v in (V1, V2, X, Y, Z))
    g, B, c = d.g, d.B, d.c
    s = d.a_xi
    gsz = _bil(g, s, Z)
    av1, av2 = d.A @ V1, d.A @ V2
    cpart = c * (_bil(B, V2, Y) * _bil(g, V1, X) * gsz
                 - _bil(B, V1, Y) * _bil(g, V2, X) * gsz
                 - _bil(B, X, V1) * _bil(g, V2, Y) * gsz
                 + _bil(B, X, V2) * _bil(g, V1, Y) * gsz
                 - _bil(B, X, Y) * _bil(g, s, V1) * _bil(g, V2, Z)
                 + _bil(B, X, Y) * _bil(g, s, V2) * _bil(g, V1, Z))
    return (cpart
            - _bil(B, V2, X) * _bil(B, av1, Y) * gsz
            + _bil(B, V1, X) * _bil(B, av2, Y) * gsz
            - _bil(B, X, av1) * _bil(B, V2, Y) * gsz
            + _bil(B, X, av2) * _bil(B, V1, Y) * gsz
            - _bil(B, X, Y) * _bil(B, V2, Z) * _bil(g, s, av1)
            + _bil(B, X, Y) * _bil(B, V1, Z) * _bil(g, s, av2))


def ricci_semi_symmetry_residual(d: HypersurfacePoint, V1, V2, X, Y) -> Fraction:
    """``-Ric(R(V1,V2)X, Y) - Ric(X, R(V1,V2)Y)`` with the :func:`ricci_h` Ricci tensor."""
    V1, V2, X, Y = (_vec(v, d.n) for v in (V1, V2, X, Y))
    M = _op_matrix(d, V1, V2)
    ric = ricci_h(d)
    return -(_bil(ric, M @ X, Y) + _bil(ric, X, M @ Y))


# --------------------------------------------------------------------------- exhaustive tensors

def _check_exhaustive_size(d: HypersurfacePoint) -> None:
    if d.m > MAX_EXHAUSTIVE_SCREEN_DIM:
        raise ValueError(f"exhaustive tuple search is capped at m <= {MAX_EXHAUSTIVE_SCREEN_DIM}")


def semi_symmetry_tensor(d: HypersurfacePoint) -> np.ndarray:
    """``L^5 * (R(e_v1,e_v2).R)(e_x,e_y,e_z,e_t)`` over all frame 6-tuples, as integers."""
    _check_exhaustive_size(d)
    op, r4 = d.scaled.op, d.scaled.r4
    t1 = np.tensordot(op, r4, axes=([3], [0]))
    t2 = np.tensordot(op, r4, axes=([3], [1])).transpose(0, 1, 3, 2, 4, 5)
    t3 = np.tensordot(op, r4, axes=([3], [2])).transpose(0, 1, 3, 4, 2, 5)
    t4 = np.tensordot(op, r4, axes=([3], [3])).transpose(0, 1, 3, 4, 5, 2)
    return -(t1 + t2 + t3 + t4)


def semi_symmetry_tensor_via_operator(d: HypersurfacePoint) -> np.ndarray:
    """``L^5 *`` right-hand side of the (1,3)/(0,4) relation:

    ``g((R(V1,V2).R)(X,Y)Z, T) + (R(V1,V2).g)(R(X,Y)Z, T)``.
    """
    _check_exhaustive_size(d)
    op, g = d.scaled.op, d.scaled.g
    # (R(V).R)(X,Y)Z as an operator: index [v1,v2,x,y,z,out]
    q = np.tensordot(op, op, axes=([3], [2]))                        # [x,y,z,v1,v2,out]
    q = q.transpose(3, 4, 0, 1, 2, 5)
    q = q - np.tensordot(op, op, axes=([3], [0])).transpose(0, 1, 2, 3, 4, 5)
    q = q - np.tensordot(op, op, axes=([3], [1])).transpose(0, 1, 3, 2, 4, 5)
    q = q - np.tensordot(op, op, axes=([3], [2])).transpose(0, 1, 3, 4, 2, 5)
    first = np.tensordot(q, g, axes=([5], [0]))
    # (R(V).g)(U, T) = -g(R(V)U, T) - g(U, R(V)T) with U = R(X,Y)Z
    rv_g = np.tensordot(op, g, axes=([3], [0]))                     # [v1,v2,u,t] = g(R(V)e_u, e_t)
    sym = rv_g + rv_g.transpose(0, 1, 3, 2)
    second = -np.tensordot(op, sym, axes=([3], [2])).transpose(3, 4, 0, 1, 2, 5)
    return first + second


def semi_symmetry_xi_tensor(d: HypersurfacePoint) -> np.ndarray:
    """``L^5 *`` closed form over basis tuples ``(v1, v2, x, y, z)`` with the first slot ``xi``."""
    _check_exhaustive_size(d)
    sc = d.scaled
    g, B, A, c = sc.g, sc.B, sc.A, sc.c
    gs = A[:, 0].dot(g)                # g(A xi, e_z), scale L^2
    ba = A.T.dot(B)                    # B(A e_v, e_y), scale L^2
    gaa = gs.dot(A)                    # g(A xi, A e_v), scale L^3
    es = np.einsum
    cpart = (es("by,ax,z->abxyz", B, g, gs) - es("ay,bx,z->abxyz", B, g, gs)
             - es("xa,by,z->abxyz", B, g, gs) + es("xb,ay,z->abxyz", B, g, gs)
             - es("xy,a,bz->abxyz", B, gs, g) + es("xy,b,az->abxyz", B, gs, g))
    rest = (-es("bx,ay,z->abxyz", B, ba, gs) + es("ax,by,z->abxyz", B, ba, gs)
            - es("ax,by,z->abxyz", ba, B, gs) + es("bx,ay,z->abxyz", ba, B, gs)
            - es("xy,bz,a->abxyz", B, B, gaa) + es("xy,az,b->abxyz", B, B, gaa))
    return c * cpart + rest


def ricci_semi_symmetry_tensor(d: HypersurfacePoint) -> np.ndarray:
    """``L^4 *`` residual over all frame 4-tuples ``(v1, v2, x, y)``."""
    op, ric = d.scaled.op, d.scaled.ricci
    t1 = np.tensordot(op, ric, axes=([3], [0]))                      # [v1,v2,x,y]
    t2 = np.tensordot(op, ric, axes=([3], [1])).transpose(0, 1, 3, 2)
    return -(t1 + t2)


def local_symmetry_tensor(d: HypersurfacePoint) -> np.ndarray:
    """``L^2 *`` obstruction over basis triples ``(v, x, y)``."""
    sc = d.scaled
    n = d.n
    eta = np.array([int(i == 0) for i in range(n)], dtype=object)
    return sc.c * (np.einsum("vy,x->vxy", sc.B, eta) - np.einsum("vx,y->vxy", sc.B, eta))


def _first_nonzero(t: np.ndarray) -> tuple | None:
    idx = np.argwhere(t != 0)
    return tuple(int(i) for i in idx[0]) if len(idx) else None


def check_xi_oracle(d: HypersurfacePoint) -> tuple | None:
    """First basis tuple where the closed form and the four-term action differ, or None."""
    action = semi_symmetry_tensor(d)[:, :, 0]
    return _first_nonzero(action - semi_symmetry_xi_tensor(d))


# --------------------------------------------------------------------------- screen data

@dataclass(frozen=True)
class ProportionalityResult:
    state: str                  # "holds", "fails", "indeterminate"
    factor: Fraction | None = None
    witness: tuple | None = None


def screen_conformal_check(d: HypersurfacePoint) -> ProportionalityResult:
    """Is ``g(A_N X, PY) = phi B(X, PY)`` for one scalar ``phi`` on all frame pairs?"""
    n = d.n
    ga = d.A.T @ d.g                # [x][y] = g(A_N e_x, e_y)
    if d.B.is_zero():
        return ProportionalityResult("indeterminate")
    phi = None
    for x in range(n):
        for y in range(1, n):
            if d.B[x, y]:
                phi = ga[x, y] / d.B[x, y]
                break
        if phi is not None:
            break
    for x in range(n):
        for y in range(1, n):
            if ga[x, y] != phi * d.B[x, y]:
                return ProportionalityResult("fails", None, (x, y))
    return ProportionalityResult("holds", phi)


def proportional_to_metric(mat: Matrix, g: Matrix) -> ProportionalityResult:
    res = einstein_check(mat, g)
    if res.is_einstein:
        return ProportionalityResult("holds", res.factor)
    return ProportionalityResult("fails", None, res.witness)


def screen_umbilical_check(d: HypersurfacePoint) -> ProportionalityResult:
    """``A_N = lam P``?"""
    lam = d.A[1, 1]
    target = d.P.scale(lam)
    for a in range(d.n):
        for b in range(d.n):
            if d.A[a, b] != target[a, b]:
                return ProportionalityResult("fails", None, (a, b))
    return ProportionalityResult("holds", lam)


def build_umbilical(m: int, c, rho, lam, screen_gram) -> HypersurfacePoint:
    """``B = rho g`` and ``A_N = lam P`` over the given screen Gram matrix."""
    s = screen_gram if isinstance(screen_gram, Matrix) else Matrix.of(screen_gram)
    if s.shape != (m, m):
        raise HypersurfaceDataError("screen_gram", f"expected {m}x{m}")
    if not s.is_symmetric():
        raise HypersurfaceDataError("screen_gram", "must be symmetric")
    if det(s) == 0:
        raise HypersurfaceDataError("screen_gram", "singular screen Gram rejected")
    g = _embed_screen(s)
    return HypersurfacePoint(m, Fraction(c), g, g.scale(Fraction(rho)),
                             Matrix.diag([0] + [Fraction(lam)] * m))


def _embed_screen(s: Matrix) -> Matrix:
    m = s.nrows
    return Matrix([[Fraction(0)] * (m + 1)]
                  + [[Fraction(0)] + list(s.row(i)) for i in range(m)], m + 1)


# --------------------------------------------------------------------------- report

@dataclass(frozen=True)
class Flag:
    value: bool
    witness: tuple | None = None
    detail: dict = field(default_factory=dict)

    def to_dict(self, names: list[str]) -> dict:
        out = {"value": self.value}
        if self.witness is not None:
            out["witness"] = [names[i] if isinstance(i, int) else i for i in self.witness]
        for k, v in sorted(self.detail.items()):
            out[k] = _jsonable(v)
        return out


def _jsonable(v):
    if isinstance(v, Fraction):
        return fraction_str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


@dataclass(frozen=True)
class Implication:
    name: str
    applies: bool
    holds: bool | None


@dataclass(frozen=True)
class SymmetryReport:
    flags: dict
    einstein_factor: Fraction | None
    implications: tuple

    def to_dict(self, m: int) -> dict:
        names = frame_labels(m)
        return {
            "flags": {k: f.to_dict(names) for k, f in sorted(self.flags.items())},
            "einstein_factor": None if self.einstein_factor is None
            else fraction_str(self.einstein_factor),
            "implications": [{"name": i.name, "applies": i.applies, "holds": i.holds}
                             for i in self.implications],
        }


def frame_labels(m: int) -> list[str]:
    return ["xi"] + [f"E{i}" for i in range(1, m + 1)]


def symmetry_report(d: HypersurfacePoint) -> SymmetryReport:
    """Every checker evaluated exhaustively over basis tuples, with theorem cross-checks.

    Raises :class:`OracleMismatch` if the closed-form xi-slot oracle disagrees
    with the derivation action and :class:`ImplicationViolation` if a theorem
    implication fails on this instance.
    """
    R = induced_curvature(d)
    status = check_curvature_symmetries(R)
    flags: dict[str, Flag] = {}

    geodesic = d.B.is_zero()
    flags["totally_geodesic"] = Flag(geodesic, None if geodesic else _first_nonzero(
        np.array([[v for v in row] for row in d.B.rows], dtype=object)))
    umb = proportional_to_metric(d.B, d.g)
    flags["totally_umbilical"] = Flag(umb.state == "holds", umb.witness,
                                      {"rho": umb.factor} if umb.factor is not None else {})
    scr = screen_umbilical_check(d)
    flags["screen_umbilical"] = Flag(scr.state == "holds", scr.witness,
                                     {"lambda": scr.factor} if scr.factor is not None else {})
    conf = screen_conformal_check(d)
    flags["screen_conformal"] = Flag(conf.state == "holds", conf.witness,
                                     {"state": conf.state,
                                      **({"phi": conf.factor} if conf.factor is not None else {})})
    flags["algebraic_curvature"] = Flag(status.ok, status.witness,
                                        {"rule": status.rule} if status.rule else {})

    resid = osserman_constraint_residual(d)
    bad = next((i for i, v in enumerate(resid) if v), None)
    flags["osserman_constraint"] = Flag(bad is None, None if bad is None else (bad,),
                                        {"residual": list(resid)})
    q = a_xi_norm(d)
    flags["a_xi_non_null"] = Flag(q != 0, None, {"g(A_N xi, A_N xi)": q})

    ric = ricci_h(d)
    asym = asymmetry_witness(ric)
    flags["ricci_symmetric"] = Flag(asym is None, asym)
    ein = einstein_check(ric, d.g)
    flags["einstein"] = Flag(ein.is_einstein, ein.witness,
                             {"lambda": ein.factor} if ein.is_einstein else {})

    L = d.scaled.L
    loc = local_symmetry_tensor(d)
    w = _first_nonzero(loc)
    flags["local_symmetry_obstruction_vanishes"] = Flag(
        w is None, w, {} if w is None else {"witness_value": _unscale(loc[w], 2, L)})

    semi = semi_symmetry_tensor(d)
    oracle = semi_symmetry_xi_tensor(d)
    mismatch = _first_nonzero(semi[:, :, 0] - oracle)
    if mismatch is not None:
        raise OracleMismatch(mismatch[:2] + (0,) + mismatch[2:])
    w = _first_nonzero(semi)
    flags["semi_symmetric"] = Flag(w is None, w, {} if w is None
                                   else {"witness_value": _unscale(semi[w], 5, L)})

    rs = ricci_semi_symmetry_tensor(d)
    w = _first_nonzero(rs)
    flags["ricci_semi_symmetric"] = Flag(w is None, w, {} if w is None
                                         else {"witness_value": _unscale(rs[w], 4, L)})

    implications = _implications(d, flags, geodesic, q)
    broken = [i.name for i in implications if i.applies and i.holds is False]
    if broken:
        raise ImplicationViolation(f"implications violated: {', '.join(broken)}")
    return SymmetryReport(flags, ein.factor if ein.is_einstein else None, tuple(implications))


def _implications(d: HypersurfacePoint, flags: dict, geodesic: bool, q) -> list[Implication]:
    v = {k: f.value for k, f in flags.items()}
    out = []
    applies = d.c != 0
    out.append(Implication("locally symmetric iff totally geodesic (c != 0)", applies,
                           (v["local_symmetry_obstruction_vanishes"] == geodesic) if applies else None))
    applies = v["totally_umbilical"] and v["screen_umbilical"]
    out.append(Implication("umbilical implies semi-symmetric", applies,
                           v["semi_symmetric"] if applies else None))
    applies = v["osserman_constraint"] and q != 0
    out.append(Implication("constraint and non-null A_N xi: semi-symmetric iff totally geodesic",
                           applies, (v["semi_symmetric"] == geodesic) if applies else None))
    applies = v["osserman_constraint"] and q != 0 and d.c != 0
    out.append(Implication("constraint and non-null A_N xi: locally symmetric iff semi-symmetric",
                           applies, (v["local_symmetry_obstruction_vanishes"] == v["semi_symmetric"])
                           if applies else None))
    applies = v["einstein"] and v["algebraic_curvature"]
    out.append(Implication("Einstein with algebraic curvature implies Ricci semi-symmetric",
                           applies, v["ricci_semi_symmetric"] if applies else None))
    return out


# --------------------------------------------------------------------------- generators

def _rand_frac(rng: random.Random, lo=-3, hi=3, nonzero=False) -> Fraction:
    while True:
        v = Fraction(rng.randint(lo, hi), rng.choice((1, 1, 2, 3)))
        if v or not nonzero:
            return v


def random_screen_gram(rng: random.Random, m: int) -> Matrix:
    while True:
        rows = [[0] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                rows[i][j] = rows[j][i] = rng.randint(-3, 3)
        s = Matrix.of(rows)
        if det(s) != 0:
            return s


def random_symmetric(rng: random.Random, m: int) -> Matrix:
    rows = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            rows[i][j] = rows[j][i] = rng.randint(-3, 3)
    return Matrix.of(rows)


def random_umbilical(rng: random.Random, m: int | None = None) -> HypersurfacePoint:
    m = m or rng.randint(1, 5)
    return build_umbilical(m, _rand_frac(rng), _rand_frac(rng, nonzero=True),
                           _rand_frac(rng, nonzero=True), random_screen_gram(rng, m))


def _screen_valued(rng: random.Random, m: int) -> list[list[Fraction]]:
    rows = [[Fraction(0)] * (m + 1)]
    rows += [[Fraction(rng.randint(-3, 3)) for _ in range(m + 1)] for _ in range(m)]
    return rows


def random_generic(rng: random.Random, m: int | None = None, c=None) -> HypersurfacePoint:
    m = m or rng.randint(1, 5)
    s = random_screen_gram(rng, m)
    b = _embed_screen(random_symmetric(rng, m))
    return HypersurfacePoint(m, _rand_frac(rng) if c is None else Fraction(c),
                             _embed_screen(s), b, Matrix(_screen_valued(rng, m), m + 1))


def random_constrained(rng: random.Random, m: int | None = None) -> HypersurfacePoint:
    """``B(A_N xi, .) = 0`` imposed, ``A_N xi`` non-null and ``B != 0`` (so ``m >= 2``)."""
    m = m or rng.randint(2, 5)
    if m < 2:
        raise ValueError("B != 0 with B(A_N xi, .) = 0 and A_N xi non-null needs m >= 2")
    s_gram = random_screen_gram(rng, m)
    while True:
        s = [Fraction(rng.randint(-3, 3)) for _ in range(m)]
        q = sum(s[i] * s_gram[i, j] * s[j] for i in range(m) for j in range(m))
        if q != 0:
            break
    ss = sum(x * x for x in s)
    proj = Matrix([[Fraction(int(i == j)) - s[i] * s[j] / ss for j in range(m)]
                   for i in range(m)], m)
    while True:
        bs = proj @ random_symmetric(rng, m) @ proj
        if not bs.is_zero():
            break
    a = _screen_valued(rng, m)
    for i in range(m):
        a[i + 1][0] = s[i]
    return HypersurfacePoint(m, _rand_frac(rng), _embed_screen(s_gram), _embed_screen(bs),
                             Matrix(a, m + 1))


def _random_invertible(rng: random.Random, m: int) -> Matrix:
    while True:
        q = Matrix.of([[rng.randint(-2, 2) for _ in range(m)] for _ in range(m)])
        if det(q) != 0:
            return q


def _einstein_spectrum(rng: random.Random, m: int) -> list[Fraction]:
    """Eigenvalues with ``tr(K) K - K^2`` scalar: all equal, any pair when ``m = 2``,
    or ``alpha`` (multiplicity k) with ``beta = -(k-1) alpha / (m-k-1)``."""
    alpha = _rand_frac(rng, nonzero=True)
    choices = ["umbilical", "zero"]
    if m == 2:
        choices.append("pair")
    if m >= 3:
        choices.append("split")
    kind = rng.choice(choices)
    if kind == "umbilical":
        return [alpha] * m
    if kind == "zero":
        return [Fraction(0)] * m
    if kind == "pair":
        return [alpha, _rand_frac(rng)]
    k = rng.randint(1, m - 2)
    beta = -(k - 1) * alpha / (m - k - 1)
    return [alpha] * k + [beta] * (m - k)


def random_einstein(rng: random.Random, m: int | None = None) -> HypersurfacePoint:
    """Screen-conformal data ``A_N = phi S^{-1} B`` on the screen with ``A_N xi = 0``.

    With ``K = S^{-1} B_s`` satisfying ``tr(K) K - K^2 = nu I`` the :func:`ricci_h`
    Ricci tensor is ``(m c + phi nu) g`` and the curvature is algebraic.
    """
    m = m or rng.randint(1, 5)
    q = _random_invertible(rng, m)
    dvals = [Fraction(rng.choice((-3, -2, -1, 1, 2, 3))) for _ in range(m)]
    lam = _einstein_spectrum(rng, m)
    s = q.T @ Matrix.diag(dvals) @ q
    bs = q.T @ Matrix.diag([a * b for a, b in zip(dvals, lam)]) @ q
    phi = _rand_frac(rng)
    k = solve_invert(s) @ bs
    a = [[Fraction(0)] * (m + 1)] + [[Fraction(0)] + [phi * k[i, j] for j in range(m)]
                                     for i in range(m)]
    return HypersurfacePoint(m, _rand_frac(rng), _embed_screen(s), _embed_screen(bs),
                             Matrix(a, m + 1))
