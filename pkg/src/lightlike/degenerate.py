"""Degenerate symmetric forms: radical, classification, adapted frames, pseudo-inverse."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .linalg import (
    Matrix,
    bilinear,
    det,
    dot,
    is_zero,
    matvec,
    null_space,
    rank,
    solve_invert,
)


class FrameError(ValueError):
    """A supplied or constructed frame violates an adapted-frame invariant."""


class SubmanifoldKind(str, Enum):
    NONDEGENERATE = "nondegenerate"
    R_LIGHTLIKE = "r-lightlike"
    COISOTROPIC = "coisotropic"
    ISOTROPIC = "isotropic"
    TOTALLY_LIGHTLIKE = "totally lightlike"


@dataclass(frozen=True)
class DegenerateForm:
    gram: Matrix

    def __post_init__(self):
        if not self.gram.is_square:
            raise ValueError(f"Gram matrix must be square, got {self.gram.shape}")
        if not self.gram.is_symmetric():
            raise ValueError("Gram matrix must be symmetric")

    @classmethod
    def of(cls, rows) -> "DegenerateForm":
        return cls(Matrix.of(rows))

    @property
    def dim(self) -> int:
        return self.gram.nrows

    @property
    def radical_rank(self) -> int:
        return self.dim - rank(self.gram)

    def __call__(self, u: Sequence, v: Sequence):
        return bilinear(self.gram, u, v)


@dataclass(frozen=True)
class AdaptedFrame:
    """Radical vectors, screen vectors and transversal one-forms in the working basis.

    Frame components elsewhere in the package use the ordering
    ``(xi_1..xi_r, screen_1..screen_{m-r})``.
    """

    radical: tuple[tuple, ...]
    screen: tuple[tuple, ...]
    eta: tuple[tuple, ...]
    codim: int

    @property
    def dim(self) -> int:
        return len(self.radical) + len(self.screen)

    @property
    def r(self) -> int:
        return len(self.radical)

    @property
    def basis(self) -> Matrix:
        """Columns are the frame vectors in working coordinates."""
        return Matrix.from_columns(list(self.radical) + list(self.screen))

    def frame_gram(self, g: DegenerateForm) -> Matrix:
        e = self.basis
        return e.T @ g.gram @ e

    def to_frame(self, v: Sequence) -> tuple:
        """Frame components of a working-basis vector."""
        return matvec(solve_invert(self.basis), v)

    def from_frame(self, comps: Sequence) -> tuple:
        return matvec(self.basis, comps)

    def describe(self) -> dict:
        return {
            "radical": [list(v) for v in self.radical],
            "screen": [list(v) for v in self.screen],
            "eta": [list(w) for w in self.eta],
            "codim": self.codim,
        }


@dataclass(frozen=True)
class AssociatedMetric:
    """``g~`` and its inverse, both in adapted-frame components."""

    gram_tilde: Matrix
    inverse: Matrix


def compute_radical(g: DegenerateForm) -> list[tuple]:
    return null_space(g.gram)


def classify(m: int, n: int, r: int) -> SubmanifoldKind:
    if m < 1 or n < 1:
        raise ValueError(f"dimension and codimension must be >= 1 (m={m}, n={n})")
    if r < 0 or r > min(m, n):
        raise ValueError(f"radical rank {r} inconsistent with m={m}, n={n}")
    if r == 0:
        return SubmanifoldKind.NONDEGENERATE
    if r == m == n:
        return SubmanifoldKind.TOTALLY_LIGHTLIKE
    if r == m:
        return SubmanifoldKind.ISOTROPIC
    if r == n:
        return SubmanifoldKind.COISOTROPIC
    return SubmanifoldKind.R_LIGHTLIKE


def _unit(m: int, k: int) -> tuple:
    return tuple(Fraction(int(i == k)) for i in range(m))


def _greedy_screen(g: DegenerateForm, r: int) -> list[tuple]:
    m = g.dim
    gram = g.gram
    chosen: list[tuple] = []
    # g-orthogonal copies of the chosen screen vectors, for residual pivots
    ortho: list[tuple[tuple, Fraction]] = []

    def residual(v: tuple) -> tuple:
        out = list(v)
        for w, norm in ortho:
            coef = bilinear(gram, out, w) / norm
            if coef != 0:
                out = [a - coef * b for a, b in zip(out, w)]
        return tuple(out)

    def push(v: tuple) -> None:
        res = residual(v)
        ortho.append((res, bilinear(gram, res, res)))

    while len(chosen) < m - r:
        cands = [(k, residual(_unit(m, k))) for k in range(m)]
        best = None
        for k, res in cands:
            piv = bilinear(gram, res, res)
            if not is_zero(piv) and (best is None or abs(piv) > best[0]):
                best = (abs(piv), k)
        if best is not None:
            v = _unit(m, best[1])
            chosen.append(v)
            push(v)
            continue
        pair = next(((k, l) for (k, rk) in cands for (l, rl) in cands
                     if k < l and not is_zero(bilinear(gram, rk, rl))), None)
        if pair is None:
            raise FrameError("cannot complete a nondegenerate screen")
        k, l = pair
        vk, vl = _unit(m, k), _unit(m, l)
        chosen.extend([vk, vl])
        # replace the null pair by a g-orthogonal nondegenerate pair for residuals
        rk, rl = residual(vk), residual(vl)
        s = rk
        t = tuple(a + b for a, b in zip(rk, rl))
        # g(t, t) = 2 g(rk, rl) != 0 since rk, rl are null
        ortho.append((t, bilinear(gram, t, t)))
        coef = bilinear(gram, s, t) / bilinear(gram, t, t)
        s = tuple(a - coef * b for a, b in zip(s, t))
        ortho.append((s, bilinear(gram, s, s)))
    return chosen


def build_adapted_frame(g: DegenerateForm, n: int | None = None,
                        hint: AdaptedFrame | None = None) -> AdaptedFrame:
    """Deterministic adapted frame for ``g``, or validation of a caller-supplied one.

    Without a hint the radical is the RREF kernel basis, the screen is a
    greedy completion by standard basis vectors and each ``eta_i`` is the
    dual covector of ``xi_i`` relative to the completed basis.
    """
    if hint is not None:
        validate_frame(g, hint)
        return hint
    radical = compute_radical(g)
    r = len(radical)
    codim = r if n is None else n
    screen = _greedy_screen(g, r)
    m = g.dim
    if r == 0:
        frame = AdaptedFrame((), tuple(screen), (), codim)
    else:
        basis = Matrix.from_columns(radical + screen)
        inv = solve_invert(basis)
        eta = tuple(inv.row(i) for i in range(r))
        frame = AdaptedFrame(tuple(radical), tuple(screen), eta, codim)
    if frame.dim != m:
        raise FrameError("frame does not span the tangent space")
    validate_frame(g, frame)
    return frame


def validate_frame(g: DegenerateForm, frame: AdaptedFrame) -> None:
    m = g.dim
    if frame.dim != m:
        raise FrameError(f"frame has {frame.dim} vectors for a {m}-dimensional space")
    if len(frame.eta) != frame.r:
        raise FrameError("need exactly one eta covector per radical vector")
    if frame.r != g.radical_rank:
        raise FrameError(f"frame radical has {frame.r} vectors, form has radical rank "
                         f"{g.radical_rank}")
    for xi in frame.radical:
        if any(not is_zero(x) for x in matvec(g.gram, xi)):
            raise FrameError("radical vector not annihilated by the Gram matrix")
    if frame.screen:
        s = Matrix([[g(u, v) for v in frame.screen] for u in frame.screen])
        if is_zero(det(s)):
            raise FrameError("screen-restricted Gram matrix is singular")
    if is_zero(det(frame.basis)):
        raise FrameError("frame vectors are linearly dependent")
    for i, eta in enumerate(frame.eta):
        for j, xi in enumerate(frame.radical):
            if dot(eta, xi) != (1 if i == j else 0):
                raise FrameError(f"eta_{i + 1}(xi_{j + 1}) != delta")
        for k, e in enumerate(frame.screen):
            if not is_zero(dot(eta, e)):
                raise FrameError(f"eta_{i + 1} does not annihilate screen vector {k + 1}")


def tilde_gram_working(g: DegenerateForm, frame: AdaptedFrame) -> Matrix:
    """``g~`` in working coordinates: ``G + sum_i eta_i eta_i^T`` (or the eta sum alone when r = m)."""
    m = g.dim
    if frame.r == m:
        base = Matrix.zeros(m)
    else:
        base = g.gram
    rows = [list(r) for r in base.rows]
    for eta in frame.eta:
        for a in range(m):
            if eta[a] == 0:
                continue
            for b in range(m):
                rows[a][b] += eta[a] * eta[b]
    return Matrix(rows, m)


def associated_metric(g: DegenerateForm, frame: AdaptedFrame) -> AssociatedMetric:
    e = frame.basis
    gt = e.T @ tilde_gram_working(g, frame) @ e
    return AssociatedMetric(gt, solve_invert(gt))


def flat(g: DegenerateForm, frame: AdaptedFrame, x: Sequence) -> tuple:
    """Covector ``Y -> g(X, Y) + sum_i eta_i(X) eta_i(Y)``, working coordinates."""
    return matvec(tilde_gram_working(g, frame), x)


def sharp(g: DegenerateForm, frame: AdaptedFrame, omega: Sequence) -> tuple:
    return matvec(solve_invert(tilde_gram_working(g, frame)), omega)
