import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lightlike import gfh
from lightlike.degenerate import (
    AdaptedFrame, DegenerateForm, FrameError, SubmanifoldKind, associated_metric,
    build_adapted_frame, classify, compute_radical, flat, sharp, validate_frame,
)
from lightlike.generators import random_degenerate_gram, random_gfh_model, random_vector
from lightlike.linalg import Matrix, dot, matvec, rank

from strategies import seeds


def E(m, k):
    return tuple(Fraction(int(i == k)) for i in range(m))


def test_gfh_radical_is_xi_pair():
    rng = random.Random(2)
    for _ in range(5):
        model = random_gfh_model(rng)
        g = gfh.metric_matrix(model)
        rad = compute_radical(g)
        fr = gfh.frames(model)
        assert len(rad) == 2
        both = Matrix.of(rad + [fr.xi1, fr.xi2])
        assert rank(both) == 2


def test_radical_of_nondegenerate_and_zero_forms():
    assert compute_radical(DegenerateForm(Matrix.identity(3))) == []
    assert len(compute_radical(DegenerateForm(Matrix.zeros(4)))) == 4


@pytest.mark.parametrize("m,n,r,kind", [
    (6, 2, 2, SubmanifoldKind.COISOTROPIC),
    (4, 1, 1, SubmanifoldKind.COISOTROPIC),
    (3, 5, 3, SubmanifoldKind.ISOTROPIC),
    (3, 3, 3, SubmanifoldKind.TOTALLY_LIGHTLIKE),
    (5, 3, 2, SubmanifoldKind.R_LIGHTLIKE),
    (4, 2, 0, SubmanifoldKind.NONDEGENERATE),
])
def test_classify(m, n, r, kind):
    assert classify(m, n, r) is kind


@pytest.mark.parametrize("args", [(3, 2, 3), (0, 1, 0), (2, 2, -1)])
def test_classify_rejects_inconsistent_counts(args):
    with pytest.raises(ValueError):
        classify(*args)


def test_frame_for_diagonal():
    g = DegenerateForm(Matrix.diag([0, 0, 1, -1]))
    fr = build_adapted_frame(g, 2)
    assert fr.radical == (E(4, 0), E(4, 1))
    assert set(fr.screen) == {E(4, 2), E(4, 3)}
    assert fr.eta == (E(4, 0), E(4, 1))


def test_model_frame_hint_is_kept():
    model = random_gfh_model(random.Random(4), 3)
    hint = gfh.adapted_frame(model)
    assert build_adapted_frame(gfh.metric_matrix(model), 2, hint=hint) is hint


def test_nondegenerate_frame():
    g = DegenerateForm(Matrix.diag([1, -1, 2]))
    fr = build_adapted_frame(g)
    assert fr.radical == () and fr.eta == () and len(fr.screen) == 3
    assert associated_metric(g, fr).gram_tilde == fr.frame_gram(g)


def test_bad_hint_rejected():
    g = DegenerateForm(Matrix.diag([0, 1, 1]))
    hint = AdaptedFrame((E(3, 1),), (E(3, 0), E(3, 2)), (E(3, 1),), 1)
    with pytest.raises(FrameError):
        build_adapted_frame(g, 1, hint=hint)


def test_null_screen_pair_handled():
    # only off-diagonal entries: the greedy step must fall back to a pair
    g = DegenerateForm(Matrix.of([[0, 0, 0], [0, 0, 1], [0, 1, 0]]))
    fr = build_adapted_frame(g)
    validate_frame(g, fr)


def test_totally_lightlike_g_tilde_is_identity():
    g = DegenerateForm(Matrix.zeros(3))
    fr = build_adapted_frame(g, 3)
    assert associated_metric(g, fr).gram_tilde == Matrix.identity(3)


@given(seeds, st.integers(1, 8), st.integers(0, 3))
def test_frame_and_pseudo_inverse_properties(seed, dim, r):
    r = min(r, dim)
    rng = random.Random(seed)
    g = DegenerateForm(random_degenerate_gram(rng, dim, r))
    fr = build_adapted_frame(g)
    assert fr.r == r == g.radical_rank
    for i, eta in enumerate(fr.eta):
        assert [dot(eta, xi) for xi in fr.radical] == [int(i == j) for j in range(r)]
    for xi in fr.radical:
        assert not any(matvec(g.gram, xi))
    gt = associated_metric(g, fr)
    fg = fr.frame_gram(g)
    assert gt.gram_tilde @ gt.inverse == Matrix.identity(dim)
    for i in range(dim):
        for j in range(dim):
            if i < r and j < r:
                assert gt.gram_tilde[i, j] == int(i == j)
            elif i >= r and j >= r:
                assert gt.gram_tilde[i, j] == fg[i, j]
    x = random_vector(rng, dim)
    assert sharp(g, fr, flat(g, fr, x)) == x
    for i, xi in enumerate(fr.radical):
        assert flat(g, fr, xi) == fr.eta[i]


def test_flat_is_g_when_nondegenerate():
    g = DegenerateForm(Matrix.of([[2, 1], [1, -1]]))
    fr = build_adapted_frame(g)
    x, y = (Fraction(1), Fraction(3)), (Fraction(-2), Fraction(5))
    assert dot(flat(g, fr, x), y) == g(x, y)


def test_asymmetric_gram_rejected():
    with pytest.raises(ValueError):
        DegenerateForm(Matrix.of([[0, 1], [0, 0]]))
