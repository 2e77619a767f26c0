"""Seeded random instances for the property and acceptance suites."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from .gfh import GfhModel
from .linalg import Matrix, bilinear, det
from .poly import RationalPolynomial


def random_rational(rng: random.Random, bound: int = 5, dens=(1, 1, 2, 3)) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.choice(dens))


def random_polynomial(rng: random.Random, p: int, max_degree: int = 3,
                      max_terms: int = 6) -> RationalPolynomial:
    """Random rational polynomial in ``p`` variables of degree at most ``max_degree``.

    At least one term of degree >= 2 is included so Hessians are not identically zero.
    """
    monos = [e for e in product(range(max_degree + 1), repeat=p) if sum(e) <= max_degree]
    curved = [e for e in monos if sum(e) >= 2]
    picks = [rng.choice(curved)] + rng.sample(monos, min(len(monos), rng.randint(1, max_terms - 1)))
    terms = {}
    for e in picks:
        c = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice((1, 1, 2, 3)))
        terms[e] = terms.get(e, Fraction(0)) + c
    return RationalPolynomial(p, terms)


def random_point(rng: random.Random, p: int) -> tuple:
    return tuple(random_rational(rng, 3) for _ in range(2 * p + 2))


def random_gfh_model(rng: random.Random, p: int | None = None) -> GfhModel:
    p = p or rng.randint(1, 4)
    return GfhModel(p, random_polynomial(rng, p), random_polynomial(rng, p), random_point(rng, p))


def random_invertible(rng: random.Random, n: int, bound: int = 2) -> Matrix:
    while True:
        e = Matrix.of([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)])
        if det(e) != 0:
            return e


def random_degenerate_gram(rng: random.Random, dim: int, r: int) -> Matrix:
    """``E^T diag(0..0, d) E`` with radical rank exactly ``r``."""
    if not 0 <= r <= dim:
        raise ValueError("need 0 <= r <= dim")
    d = [0] * r + [rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(dim - r)]
    e = random_invertible(rng, dim)
    return e.T @ Matrix.diag(d) @ e


def random_vector(rng: random.Random, n: int, bound: int = 5) -> tuple:
    return tuple(random_rational(rng, bound) for _ in range(n))


def random_non_null(rng: random.Random, g: Matrix, bound: int = 5) -> tuple:
    """Random vector with ``g(x, x) != 0``."""
    for _ in range(10_000):
        x = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(g.nrows))
        if bilinear(g, x, x) != 0:
            return x
    raise RuntimeError("no non-null vector found; the form may be zero")
