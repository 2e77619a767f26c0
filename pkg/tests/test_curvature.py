import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from lightlike import gfh
from lightlike import hypersurface as hs
from lightlike.acceptance import hypersurface_frame
from lightlike.curvature import (
    VERIFIED, VIOLATED, CurvatureTensor, EmptyPseudoSphere, NotAlgebraicError, change_frame,
    check_curvature_symmetries, einstein_check, jacobi_operator, osserman_test, ricci,
    ricci_by_trace, sample_unit_directions, trace_identity_residual,
)
from lightlike.degenerate import AdaptedFrame, DegenerateForm, associated_metric, build_adapted_frame
from lightlike.generators import random_gfh_model, random_invertible, random_non_null
from lightlike.linalg import Matrix, bilinear, char_poly, solve_invert

from strategies import seeds


def constant_curvature(g: Matrix, c) -> CurvatureTensor:
    """``c (g(y,z) g(x,w) - g(x,z) g(y,w))``."""
    m = g.nrows
    comps = {}
    for x, y, z, w in product(range(m), repeat=4):
        v = Fraction(c) * (g[y, z] * g[x, w] - g[x, z] * g[y, w])
        if v:
            comps[(x, y, z, w)] = v
    return CurvatureTensor(m, comps)


def block_sum(r1: CurvatureTensor, r2: CurvatureTensor) -> CurvatureTensor:
    off = r1.dim
    comps = dict(r1.components)
    comps.update({tuple(i + off for i in k): v for k, v in r2.components.items()})
    return CurvatureTensor(r1.dim + r2.dim, comps)


def nondegenerate_setup(g: Matrix):
    """Standard basis as the frame, so working and frame components coincide."""
    form = DegenerateForm(g)
    m = g.nrows
    std = tuple(tuple(Fraction(int(i == k)) for i in range(m)) for k in range(m))
    frame = build_adapted_frame(form, hint=AdaptedFrame((), std, (), 0))
    return form, frame, associated_metric(form, frame)


def gfh_setup(model):
    g = gfh.metric_matrix(model)
    frame = gfh.adapted_frame(model)
    fg = frame.frame_gram(g)
    return DegenerateForm(fg), frame, associated_metric(g, frame)


class TestSymmetries:
    def test_zero_tensor(self):
        assert check_curvature_symmetries(CurvatureTensor.zero(4)).state == VERIFIED

    def test_gfh_curvature_verified(self):
        rng = random.Random(5)
        for _ in range(5):
            R = gfh.curvature(random_gfh_model(rng))
            assert check_curvature_symmetries(R).state == VERIFIED

    def test_perturbation_reported_with_witness(self):
        model = random_gfh_model(random.Random(6), 2)
        R = gfh.curvature(model)
        key = next(iter(sorted(R.components)))
        status = check_curvature_symmetries(R.perturbed(key, 1))
        assert status.state == VIOLATED
        assert set(status.witness) == set(key)

    def test_bianchi_only_violation(self):
        # antisymmetric and pair symmetric, but R(0,1,2,3) alone breaks Bianchi
        comps = {}
        for (a, b, c, d) in [(0, 1, 2, 3)]:
            for k, s in [((a, b, c, d), 1), ((b, a, c, d), -1), ((a, b, d, c), -1),
                         ((b, a, d, c), 1)]:
                comps[k] = s
                comps[k[2:] + k[:2]] = s
        status = check_curvature_symmetries(CurvatureTensor(4, comps))
        assert status.state == VIOLATED and status.rule == "first Bianchi identity"

    def test_unverified_tensor_refused_by_jacobi(self):
        R = CurvatureTensor(2, {(0, 1, 0, 1): Fraction(1)})
        g, frame, gt = nondegenerate_setup(Matrix.identity(2))
        with pytest.raises(NotAlgebraicError):
            jacobi_operator(R, gt, (1, 0))


class TestJacobi:
    def test_zero_tensor(self):
        _, _, gt = nondegenerate_setup(Matrix.identity(3))
        j = jacobi_operator(CurvatureTensor.zero(3).verified(), gt, (1, 2, 3))
        assert j.matrix.is_zero()

    def test_gfh_block_form(self):
        rng = random.Random(7)
        for _ in range(5):
            model = random_gfh_model(rng)
            form, frame, gt = gfh_setup(model)
            R = gfh.curvature(model).verified()
            x = random_non_null(rng, form.gram)
            assert jacobi_operator(R, gt, x).matrix == gfh.jacobi_matrix(model, x).matrix

    @pytest.mark.parametrize("dim", [3, 4])
    def test_constant_curvature_spectrum(self, dim):
        g = Matrix.diag([1] + [1, -1, 2][: dim - 1])
        c = Fraction(3, 2)
        _, _, gt = nondegenerate_setup(g)
        R = constant_curvature(g, c).verified()
        x = tuple(Fraction(int(i == 0)) for i in range(dim))       # unit spacelike
        j = jacobi_operator(R, gt, x).matrix
        assert not any(j @ Matrix.from_columns([x]).col(0))
        poly = char_poly(j)
        # det(J - lam I) = (-lam) (c - lam)^(dim-1)
        expected = char_poly(Matrix.diag([0] + [c] * (dim - 1)))
        assert poly == expected

    @given(seeds)
    def test_homogeneity_and_self_adjointness(self, seed):
        rng = random.Random(seed)
        model = random_gfh_model(rng)
        form, frame, gt = gfh_setup(model)
        R = gfh.curvature(model).verified()
        x = tuple(Fraction(rng.randint(-4, 4), rng.choice([1, 2])) for _ in range(model.m))
        c = Fraction(rng.randint(-5, 5), rng.choice([1, 3]))
        j = jacobi_operator(R, gt, x).matrix
        assert jacobi_operator(R, gt, tuple(c * v for v in x)).matrix == j.scale(c * c)
        s = gt.gram_tilde @ j
        assert s == s.T


class TestSampler:
    def test_degenerate_diag(self):
        g = DegenerateForm(Matrix.diag([0, 0, 1, -1]))
        for x, q in sample_unit_directions(g, 1, 32, 0):
            assert q > 0 and q == x[2] ** 2 - x[3] ** 2

    def test_empty_pseudo_sphere(self):
        with pytest.raises(EmptyPseudoSphere):
            sample_unit_directions(DegenerateForm(Matrix.identity(3)), -1, 4, 0)

    def test_gfh_reproducible(self):
        model = random_gfh_model(random.Random(9), 2)
        form, _, _ = gfh_setup(model)
        a = sample_unit_directions(form, 1, 64, 11)
        assert a == sample_unit_directions(form, 1, 64, 11)
        assert len(a) == 64 and all(q > 0 and bilinear(form.gram, x, x) == q for x, q in a)
        assert a != sample_unit_directions(form, 1, 64, 12)

    @given(seeds, st.sampled_from([1, -1]))
    def test_sign_and_q_are_exact(self, seed, sign):
        rng = random.Random(seed)
        e = random_invertible(rng, 4)
        g = DegenerateForm(e.T @ Matrix.diag([0, 5, -7, Fraction(1, 9)]) @ e)
        for x, q in sample_unit_directions(g, sign, 8, seed):
            assert bilinear(g.gram, x, x) == q and (q > 0) == (sign > 0)


class TestOsserman:
    def test_gfh_model(self):
        model = random_gfh_model(random.Random(10), 3)
        form, frame, gt = gfh_setup(model)
        rep = osserman_test(gfh.curvature(model).verified(), form, gt, frame, 16, 0)
        assert rep.verdict
        lam = tuple([Fraction(0)] * model.m + [Fraction(1)])
        assert all(p == lam for s in (1, -1) for _, _, p in rep.samples[s])

    def test_zero_tensor(self):
        form, frame, gt = nondegenerate_setup(Matrix.diag([1, -1, 1]))
        rep = osserman_test(CurvatureTensor.zero(3).verified(), form, gt, frame, 8, 0)
        assert rep.verdict and rep.reference[1] == (0, 0, 0, -1)

    def test_product_of_distinct_constant_blocks_fails(self):
        i2 = Matrix.identity(2)
        R = block_sum(constant_curvature(i2, 1), constant_curvature(i2, 2)).verified()
        form, frame, gt = nondegenerate_setup(Matrix.identity(4))
        # brute force: e1 and e3 give different spectra
        p1 = char_poly(jacobi_operator(R, gt, (1, 0, 0, 0)).matrix)
        p3 = char_poly(jacobi_operator(R, gt, (0, 0, 1, 0)).matrix)
        assert p1 != p3
        rep = osserman_test(R, form, gt, frame, 16, 0)
        assert not rep.verdict and rep.skipped == ("timelike",)

    def test_float_mode_agrees_on_gfh(self):
        model = random_gfh_model(random.Random(13), 2)
        form, frame, gt = gfh_setup(model)
        R = gfh.curvature(model).verified()
        assert osserman_test(R, form, gt, frame, 8, 0, mode="float").verdict

    def test_constant_curvature_is_osserman(self):
        g = Matrix.diag([1, -1, 2])
        form, frame, gt = nondegenerate_setup(g)
        assert osserman_test(constant_curvature(g, -2).verified(), form, gt, frame, 12, 3).verdict


class TestRicciAndTrace:
    def test_zero(self):
        form, frame, gt = nondegenerate_setup(Matrix.identity(3))
        R = CurvatureTensor.zero(3).verified()
        assert ricci(R, frame, gt).is_zero()
        assert trace_identity_residual(R, frame, gt, (1, 1, 0)) == 0

    def test_umbilical_hypersurface(self):
        rng = random.Random(14)
        for _ in range(5):
            m = rng.randint(1, 4)
            c, rho, lam = (Fraction(rng.randint(-3, 3), rng.choice([1, 2])) for _ in range(3))
            d = hs.build_umbilical(m, c, rho, lam, hs.random_screen_gram(rng, m))
            R = hs.induced_curvature(d).verified()
            frame = hypersurface_frame(d)
            gt = associated_metric(d.form, frame)
            # the frame-sum convention is the negative of the hypersurface Ricci tensor
            ric = ricci(R, frame, gt)
            assert ric == d.g.scale(-(m * c + (m - 1) * rho * lam))
            assert ric == -hs.ricci_h(d) == ricci_by_trace(R, gt)
            assert einstein_check(hs.ricci_h(d), d.g).factor == m * c + (m - 1) * rho * lam

    def test_gfh_ricci_two_routes(self):
        model = gfh.GfhModel(2, *_degree_two(), (Fraction(1), Fraction(2), Fraction(-1),
                                                   Fraction(3), Fraction(1, 2), Fraction(0)))
        form, frame, gt = gfh_setup(model)
        R = gfh.curvature(model).verified()
        assert ricci(R, frame, gt) == ricci_by_trace(R, gt)

    def test_constant_curvature_trace_identity(self):
        g = Matrix.diag([1, 2, -1])
        form, frame, gt = nondegenerate_setup(g)
        R = constant_curvature(g, 5).verified()
        assert trace_identity_residual(R, frame, gt, (1, 0, 0)) == 0
        assert trace_identity_residual(R, frame, gt, (1, 2, 3)) == 0

    @given(seeds)
    def test_gfh_trace_identity(self, seed):
        rng = random.Random(seed)
        model = random_gfh_model(rng)
        form, frame, gt = gfh_setup(model)
        x = random_non_null(rng, form.gram)
        assert trace_identity_residual(gfh.curvature(model).verified(), frame, gt, x) == 0

    def test_einstein_zero(self):
        assert einstein_check(Matrix.zeros(3), Matrix.diag([0, 1, 1])).factor == 0

    def test_einstein_radical_witness(self):
        ric = Matrix.of([[1, 0], [0, 1]])
        res = einstein_check(ric, Matrix.diag([0, 1]))
        assert res.factor is None and res.witness == (0, 0)


def _degree_two():
    from lightlike.poly import RationalPolynomial as P
    f = P.from_terms(2, [((2, 0), Fraction(1)), ((1, 1), Fraction(3))])
    h = P.from_terms(2, [((0, 2), Fraction(-2)), ((1, 0), Fraction(1))])
    return f, h


class TestChangeFrame:
    @given(seeds)
    def test_round_trip_and_invariance(self, seed):
        rng = random.Random(seed)
        g = Matrix.diag([1, -1, 2])
        R = constant_curvature(g, Fraction(rng.randint(1, 4)))
        T = random_invertible(rng, 3)
        R2 = change_frame(R, T)
        assert check_curvature_symmetries(R2).state == VERIFIED
        assert change_frame(R2, solve_invert(T)).components == R.components
        # constant curvature transforms with the transformed Gram
        assert R2.components == constant_curvature(T.T @ g @ T, R.components[(1, 0, 0, 1)]
                                                   / (g[0, 0] * g[1, 1])).components
