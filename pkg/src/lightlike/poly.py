"""Sparse multivariate polynomials with rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class RationalPolynomial:
    """Immutable polynomial in ``nvars`` variables, ``{exponent tuple: coefficient}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, Fraction] | None = None):
        clean: dict[tuple, Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent tuple {exps} has wrong length for {nvars} variables")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", {k: v for k, v in clean.items() if v})

    def __setattr__(self, name, value):
        raise AttributeError("RationalPolynomial is immutable")

    @classmethod
    def constant(cls, nvars: int, c) -> "RationalPolynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "RationalPolynomial":
        return cls(nvars, {tuple(int(k == i) for k in range(nvars)): 1})

    @classmethod
    def from_terms(cls, nvars: int, items: Iterable[tuple[Sequence[int], Fraction]]):
        acc: dict[tuple, Fraction] = {}
        for exps, c in items:
            exps = tuple(exps)
            acc[exps] = acc.get(exps, Fraction(0)) + Fraction(c)
        return cls(nvars, acc)

    def __eq__(self, other) -> bool:
        return (isinstance(other, RationalPolynomial) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in sorted(self.terms.items()):
            mono = "*".join(f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}"
                            for i, e in enumerate(exps) if e)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def _coerce(self, other) -> "RationalPolynomial":
        if isinstance(other, RationalPolynomial):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return RationalPolynomial.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, Fraction(0)) + v
        return RationalPolynomial(self.nvars, acc)

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial(self.nvars, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        acc: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(e1, e2))
                acc[k] = acc.get(k, Fraction(0)) + c1 * c2
        return RationalPolynomial(self.nvars, acc)

    __rmul__ = __mul__

    def derivative(self, i: int) -> "RationalPolynomial":
        acc = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e:
                k = exps[:i] + (e - 1,) + exps[i + 1:]
                acc[k] = c * e
        return RationalPolynomial(self.nvars, acc)

    def __call__(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for x, e in zip(point, exps):
                if e:
                    term *= Fraction(x) ** e
            total += term
        return total

    def embed(self, nvars: int, positions: Sequence[int]) -> "RationalPolynomial":
        """Same polynomial viewed in ``nvars`` variables; variable ``i`` moves to ``positions[i]``."""
        acc = {}
        for exps, c in self.terms.items():
            k = [0] * nvars
            for i, e in enumerate(exps):
                k[positions[i]] = e
            acc[tuple(k)] = c
        return RationalPolynomial(nvars, acc)

    def to_json(self) -> list[dict]:
        return [{"exponents": list(e), "num": c.numerator, "den": c.denominator}
                for e, c in sorted(self.terms.items())]
