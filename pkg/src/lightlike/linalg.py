"""Dense exact linear algebra over rationals (with a float fallback).

Every routine works on :class:`Matrix` values whose entries are
``fractions.Fraction`` (exact mode) or ``float`` (float mode).  In exact
mode nothing is ever rounded; float mode only exists for the sampled
Osserman comparison and uses :data:`FLOAT_RTOL` / :data:`FLOAT_ATOL`.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

FLOAT_RTOL = 1e-9
FLOAT_ATOL = 1e-12


class SingularMatrixError(ValueError):
    """Raised by :func:`solve_invert`; ``kernel`` holds a nonzero witness vector."""

    def __init__(self, message: str, kernel: tuple):
        super().__init__(message)
        self.kernel = kernel


def as_scalar(x, exact: bool = True):
    if not exact:
        return float(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"refusing to convert {type(x).__name__} to an exact rational")


def is_zero(x) -> bool:
    if isinstance(x, float):
        return abs(x) <= FLOAT_ATOL
    return x == 0


class Matrix:
    """Immutable dense matrix.  ``rows`` is a tuple of equal-length tuples."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def of(cls, rows, exact: bool = True) -> "Matrix":
        rows = [list(r) for r in rows]
        return cls([[as_scalar(x, exact) for x in r] for r in rows],
                   len(rows[0]) if rows else 0)

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "Matrix":
        m = n if m is None else m
        z = Fraction(0)
        return cls([[z] * m for _ in range(n)], m)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], n)

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        return cls([[as_scalar(values[i]) if i == j else Fraction(0) for j in range(n)]
                    for i in range(n)], n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Matrix":
        if not cols:
            raise ValueError("no columns")
        return cls(zip(*cols), len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        return Matrix(zip(*self.rows), self.nrows) if self.nrows else Matrix([], 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"

    def __add__(self, other: "Matrix") -> "Matrix":
        _same_shape(self, other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        _same_shape(self, other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        return Matrix([[c * a for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return matmul(self, other)
        return matvec(self, other)

    def trace(self):
        if not self.is_square:
            raise ValueError("trace of a non-square matrix")
        return sum((self.rows[i][i] for i in range(self.nrows)), Fraction(0))

    def is_symmetric(self) -> bool:
        if not self.is_square:
            return False
        n = self.nrows
        return all(self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i + 1, n))

    def is_zero(self) -> bool:
        return all(is_zero(x) for r in self.rows for x in r)

    def to_float(self) -> "Matrix":
        return Matrix([[float(x) for x in r] for r in self.rows], self.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]


def _same_shape(a: Matrix, b: Matrix) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a.ncols != b.nrows:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    zero = Fraction(0)
    brows = b.rows
    out = []
    for r in a.rows:
        acc = [zero] * b.ncols
        for k, x in enumerate(r):
            if x == 0:
                continue
            bk = brows[k]
            for j, y in enumerate(bk):
                if y != 0:
                    acc[j] += x * y
        out.append(acc)
    return Matrix(out, b.ncols)


def _raw_matmul(a_rows, b_rows, ncols: int) -> list[list]:
    out = []
    for r in a_rows:
        acc = [0] * ncols
        for k, x in enumerate(r):
            if x == 0:
                continue
            for j, y in enumerate(b_rows[k]):
                if y != 0:
                    acc[j] += x * y
        out.append(acc)
    return out


def matvec(a: Matrix, v: Sequence) -> tuple:
    if a.ncols != len(v):
        raise ValueError(f"cannot apply {a.shape} matrix to length-{len(v)} vector")
    zero = Fraction(0)
    out = []
    for r in a.rows:
        s = zero
        for x, y in zip(r, v):
            if x != 0 and y != 0:
                s += x * y
        out.append(s)
    return tuple(out)


def dot(u: Sequence, v: Sequence):
    return sum((x * y for x, y in zip(u, v) if x != 0 and y != 0), Fraction(0))


def bilinear(g: Matrix, u: Sequence, v: Sequence):
    """``u^T g v``."""
    return dot(u, matvec(g, v))


def _rref(m: Matrix) -> tuple[list[list], list[int]]:
    a = [list(r) for r in m.rows]
    nr, nc = m.shape
    pivots: list[int] = []
    row = 0
    for col in range(nc):
        if row >= nr:
            break
        best = None
        for i in range(row, nr):
            if not is_zero(a[i][col]) and (best is None or abs(a[i][col]) > abs(a[best][col])):
                best = i
        if best is None:
            continue
        a[row], a[best] = a[best], a[row]
        p = a[row][col]
        a[row] = [x / p for x in a[row]]
        for i in range(nr):
            if i != row and not is_zero(a[i][col]):
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        pivots.append(col)
        row += 1
    return a, pivots


def rank(m: Matrix) -> int:
    return len(_rref(m)[1])


def null_space(m: Matrix) -> list[tuple]:
    """Basis of ``{v : m v = 0}``, one vector per free column of the RREF."""
    a, pivots = _rref(m)
    nc = m.ncols
    free = [j for j in range(nc) if j not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * nc
        v[fcol] = Fraction(1)
        for i, pcol in enumerate(pivots):
            v[pcol] = -a[i][fcol]
        basis.append(tuple(v))
    return basis


def det(m: Matrix):
    if not m.is_square:
        raise ValueError("determinant of a non-square matrix")
    a = [list(r) for r in m.rows]
    n = m.nrows
    sign = 1
    result = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if not is_zero(a[i][col])), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for i in range(col + 1, n):
            if not is_zero(a[i][col]):
                f = a[i][col] / p
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return sign * result


def solve_invert(m: Matrix) -> Matrix:
    """Gauss-Jordan inverse; a singular input raises with a kernel witness."""
    if not m.is_square:
        raise ValueError(f"cannot invert a {m.shape} matrix")
    n = m.nrows
    one, zero = Fraction(1), Fraction(0)
    a = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(m.rows)]
    for col in range(n):
        best = None
        for i in range(col, n):
            if not is_zero(a[i][col]) and (best is None or abs(a[i][col]) > abs(a[best][col])):
                best = i
        if best is None:
            kernel = null_space(m)
            raise SingularMatrixError("matrix is singular", kernel[0] if kernel else ())
        a[col], a[best] = a[best], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and not is_zero(a[i][col]):
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return Matrix([r[n:] for r in a], n)


def char_poly(a: Matrix) -> tuple:
    """Coefficients ``(c_0, ..., c_n)`` of ``det(A - λI)``, ascending; ``c_n = (-1)^n``.

    Faddeev-LeVerrier: ``M_k = A M_{k-1} + c_{n-k+1} I`` and
    ``c_{n-k} = -tr(A M_k) / k`` give the monic ``det(λI - A)``; the only
    divisions are by the integers ``k``, so rationals stay exact.
    """
    if not a.is_square:
        raise ValueError(f"char_poly needs a square matrix, got {a.shape}")
    n = a.nrows
    if n == 0:
        return (Fraction(1),)
    rows = a.rows
    zero = 0.0 if any(isinstance(x, float) for r in rows for x in r) else Fraction(0)
    monic = [zero] * (n + 1)
    monic[n] = zero + 1
    am = [[zero] * n for _ in range(n)]      # A M_{k-1}; M_0 = 0
    for k in range(1, n + 1):
        m = [list(r) for r in am]
        coef = monic[n - k + 1]
        for i in range(n):
            m[i][i] += coef
        am = _raw_matmul(rows, m, n)
        monic[n - k] = zero - sum((am[i][i] for i in range(n)), zero) / k
    sign = -1 if n % 2 else 1
    return tuple(zero + sign * c for c in monic)


def poly_eval(coeffs: Sequence, x):
    acc = Fraction(0) if not isinstance(x, float) else 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def polys_close(p: Sequence, q: Sequence, rtol: float = FLOAT_RTOL,
                atol: float = FLOAT_ATOL) -> bool:
    """Coefficientwise comparison; exact unless either side holds floats."""
    if len(p) != len(q):
        return False
    for a, b in zip(p, q):
        if isinstance(a, float) or isinstance(b, float):
            a, b = float(a), float(b)
            if b == 0:
                if abs(a) > atol:
                    return False
            elif abs(a - b) > rtol * abs(b):
                return False
        elif a != b:
            return False
    return True


def congruence_diagonalize(s: Matrix) -> tuple[Matrix, tuple]:
    """Return ``(C, d)`` with ``C^T S C = diag(d)`` by symmetric Gaussian congruence.

    Pivots on the largest diagonal entry; when every remaining diagonal entry
    vanishes but an off-diagonal one does not, the basis vector ``e_i`` is
    replaced by ``e_i + e_j`` which puts ``2 s_ij`` on the diagonal.
    """
    if not s.is_square:
        raise ValueError("congruence needs a square matrix")
    if not s.is_symmetric():
        raise ValueError("congruence_signature needs a symmetric matrix")
    n = s.nrows
    a = [list(r) for r in s.rows]
    c = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def add_col_row(dst: int, src: int, f) -> None:
        # e_dst <- e_dst + f e_src  (columns of C; symmetric update of a)
        for i in range(n):
            a[i][dst] += f * a[i][src]
        for j in range(n):
            a[dst][j] += f * a[src][j]
        for i in range(n):
            c[i][dst] += f * c[i][src]

    def swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in c:
            r[i], r[j] = r[j], r[i]

    for k in range(n):
        piv = None
        for i in range(k, n):
            if not is_zero(a[i][i]) and (piv is None or abs(a[i][i]) > abs(a[piv][piv])):
                piv = i
        if piv is None:
            off = next(((i, j) for i in range(k, n) for j in range(i + 1, n)
                        if not is_zero(a[i][j])), None)
            if off is None:
                break
            i, j = off
            add_col_row(i, j, Fraction(1))
            piv = i
        if piv != k:
            swap(k, piv)
        p = a[k][k]
        for j in range(k + 1, n):
            if not is_zero(a[k][j]):
                add_col_row(j, k, -a[k][j] / p)
    d = tuple(a[i][i] for i in range(n))
    return Matrix(c, n), d


def congruence_signature(s: Matrix) -> tuple[int, int, int]:
    """``(n_plus, n_minus, n_zero)`` inertia of a symmetric matrix."""
    _, d = congruence_diagonalize(s)
    plus = sum(1 for x in d if not is_zero(x) and x > 0)
    minus = sum(1 for x in d if not is_zero(x) and x < 0)
    return plus, minus, len(d) - plus - minus


def fraction_str(x) -> str:
    if isinstance(x, float):
        return repr(x)
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
