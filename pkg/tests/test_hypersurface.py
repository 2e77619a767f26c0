import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from lightlike import hypersurface as hs
from lightlike.curvature import VERIFIED, VIOLATED, check_curvature_symmetries
from lightlike.linalg import Matrix

from strategies import seeds


def basis(n):
    return [tuple(Fraction(int(i == k)) for i in range(n)) for k in range(n)]


def point(m, c, g_screen, B_screen, A):
    return hs.HypersurfacePoint(m, Fraction(c), hs._embed_screen(Matrix.of(g_screen)),
                                hs._embed_screen(Matrix.of(B_screen)), Matrix.of(A))


def zero_b(rng, m):
    d = hs.random_generic(rng, m)
    return hs.HypersurfacePoint(m, d.c, d.g, Matrix.zeros(m + 1), d.A)


class TestData:
    def test_rejects_b_on_xi(self):
        with pytest.raises(hs.HypersurfaceDataError) as exc:
            hs.HypersurfacePoint(1, 1, Matrix.diag([0, 1]), Matrix.of([[0, 1], [1, 0]]),
                                 Matrix.zeros(2))
        assert exc.value.field == "B"

    def test_rejects_non_screen_valued_a(self):
        with pytest.raises(hs.HypersurfaceDataError) as exc:
            hs.HypersurfacePoint(1, 1, Matrix.diag([0, 1]), Matrix.zeros(2),
                                 Matrix.of([[1, 0], [0, 0]]))
        assert exc.value.field == "A_N"

    def test_rejects_singular_screen(self):
        with pytest.raises(hs.HypersurfaceDataError):
            hs.build_umbilical(2, 1, 1, 1, [[1, 1], [1, 1]])


class TestCurvature:
    def test_flat_like_when_geodesic(self):
        d = zero_b(random.Random(1), 3)
        R = hs.induced_curvature(d)
        for (x, y, z, w), v in R.components.items():
            assert v == d.c * (d.g[y, z] * d.g[x, w] - d.g[x, z] * d.g[y, w])

    def test_zero_when_c_and_b_vanish(self):
        d = zero_b(random.Random(2), 2)
        d = hs.HypersurfacePoint(d.m, 0, d.g, d.B, d.A)
        assert hs.induced_curvature(d).components == {}

    def test_umbilical_closed_form(self):
        d = hs.build_umbilical(3, 2, Fraction(1, 2), -3, [[1, 0, 1], [0, -1, 0], [1, 0, 2]])
        R = hs.induced_curvature(d)
        g, P = d.g, d.P
        for x, y, z, w in product(range(4), repeat=4):
            want = (d.c * (g[y, z] * g[x, w] - g[x, z] * g[y, w])
                    + Fraction(1, 2) * -3 * (g[y, z] * (P @ g)[x, w] - g[x, z] * (P @ g)[y, w]))
            assert R[(x, y, z, w)] == want

    @given(seeds)
    def test_umbilical_is_algebraic(self, seed):
        d = hs.random_umbilical(random.Random(seed))
        assert check_curvature_symmetries(hs.induced_curvature(d)).state == VERIFIED

    def test_generic_pair_symmetry_failure_reported(self):
        rng = random.Random(3)
        found = 0
        for _ in range(20):
            st_ = check_curvature_symmetries(hs.induced_curvature(hs.random_generic(rng, 3)))
            if st_.state == VIOLATED:
                assert st_.witness is not None and st_.rule
                found += 1
        assert found


class TestRicci:
    def test_geodesic(self):
        d = zero_b(random.Random(4), 3)
        assert hs.ricci_h(d) == d.g.scale(3 * d.c)

    def test_umbilical(self):
        d = hs.build_umbilical(2, 1, 1, 1, [[1, 0], [0, 1]])
        assert hs.ricci_h(d) == d.g.scale(3)

    def test_generic_asymmetry_witness(self):
        rng = random.Random(5)
        for _ in range(20):
            d = hs.random_generic(rng, 3)
            w = hs.asymmetry_witness(hs.ricci_h(d))
            if w is not None:
                ric = hs.ricci_h(d)
                assert ric[w] != ric[w[1], w[0]]
                return
        pytest.fail("no asymmetric instance found")


class TestConstraintAndObstruction:
    def test_constraint(self):
        rng = random.Random(6)
        d = zero_b(rng, 2)
        assert not any(hs.osserman_constraint_residual(d))
        d = hs.build_umbilical(2, 1, 2, 3, [[1, 0], [0, -1]])   # A_N xi = 0
        assert not any(hs.osserman_constraint_residual(d))
        d = point(2, 1, [[1, 0], [0, 1]], [[1, 0], [0, 0]],
                  [[0, 0, 0], [1, 0, 0], [0, 0, 0]])
        assert hs.osserman_constraint_residual(d)[1] == 1

    def test_obstruction_values(self):
        d = point(2, 3, [[1, 0], [0, 1]], [[2, 1], [1, 0]], [[0] * 3] * 3)
        xi, e1, e2 = basis(3)
        assert hs.local_symmetry_obstruction(d, e1, xi, e1) == 3 * 2
        assert hs.local_symmetry_obstruction(d, e1, xi, e2) == 3 * 1
        d0 = hs.HypersurfacePoint(2, 0, d.g, d.B, d.A)
        assert not hs.local_symmetry_tensor(d0).any()
        assert not hs.local_symmetry_tensor(zero_b(random.Random(7), 3)).any()

    @given(seeds)
    def test_prop_local_symmetry_iff_geodesic(self, seed):
        rng = random.Random(seed)
        d = hs.random_generic(rng, rng.randint(1, 4), c=rng.choice([-2, 1, Fraction(1, 3)]))
        if rng.random() < 0.5:
            d = hs.HypersurfacePoint(d.m, d.c, d.g, Matrix.zeros(d.n), d.A)
        assert (not hs.local_symmetry_tensor(d).any()) == d.B.is_zero()


class TestSemiSymmetry:
    def test_geodesic_is_semi_symmetric(self):
        assert not hs.semi_symmetry_tensor(zero_b(random.Random(8), 3)).any()

    @given(seeds)
    def test_umbilical(self, seed):
        d = hs.random_umbilical(random.Random(seed), 3)
        assert not hs.semi_symmetry_tensor(d).any()

    @given(seeds)
    def test_constrained_has_witness_and_oracle_agrees(self, seed):
        d = hs.random_constrained(random.Random(seed), 3)
        assert hs.a_xi_norm(d) != 0 and not d.B.is_zero()
        assert hs.check_xi_oracle(d) is None
        t = hs.semi_symmetry_tensor(d)
        w = hs._first_nonzero(t)
        assert w is not None
        vecs = [basis(d.n)[i] for i in w]
        assert hs.semi_symmetry_residual(d, *vecs) == Fraction(t[w]) / d.scaled.L ** 5

    @given(seeds)
    def test_operator_route_matches_action(self, seed):
        d = hs.random_generic(random.Random(seed), 2)
        a = hs.semi_symmetry_tensor(d)
        assert (a == hs.semi_symmetry_tensor_via_operator(d)).all()

    def test_per_tuple_matches_exhaustive(self):
        d = hs.random_constrained(random.Random(9), 2)
        t = hs.semi_symmetry_tensor(d)
        e = basis(d.n)
        L = d.scaled.L
        for idx in product(range(d.n), repeat=6):
            assert hs.semi_symmetry_residual(d, *(e[i] for i in idx)) * L ** 5 == t[idx]

    def test_oracle_mismatch_raised_on_corruption(self, monkeypatch):
        d = hs.random_constrained(random.Random(10), 2)
        monkeypatch.setattr(hs, "semi_symmetry_xi_closed_form",
                            lambda *a: Fraction(10**9))
        e = basis(d.n)
        with pytest.raises(hs.OracleMismatch):
            hs.semi_symmetry_residual(d, e[1], e[2], e[0], e[1], e[1], e[2])


class TestRicciSemiSymmetry:
    @given(seeds)
    def test_einstein(self, seed):
        d = hs.random_einstein(random.Random(seed))
        assert hs.symmetry_report(d).flags["einstein"].value
        assert not hs.ricci_semi_symmetry_tensor(d).any()

    def test_geodesic(self):
        assert not hs.ricci_semi_symmetry_tensor(zero_b(random.Random(11), 3)).any()

    def test_generic_witness(self):
        rng = random.Random(12)
        for _ in range(20):
            d = hs.random_generic(rng, 3)
            t = hs.ricci_semi_symmetry_tensor(d)
            w = hs._first_nonzero(t)
            if w is not None:
                e = basis(d.n)
                assert hs.ricci_semi_symmetry_residual(d, *(e[i] for i in w)) != 0
                return
        pytest.fail("no witness found")


class TestScreenChecks:
    def test_umbilical_conformal_factor(self):
        d = hs.build_umbilical(2, 1, 2, 3, [[1, 0], [0, -1]])
        res = hs.screen_conformal_check(d)
        assert res.state == "holds" and res.factor == Fraction(3, 2)

    def test_geodesic_indeterminate(self):
        assert hs.screen_conformal_check(zero_b(random.Random(13), 2)).state == "indeterminate"

    def test_violation_witness(self):
        d = point(2, 1, [[1, 0], [0, 1]], [[1, 0], [0, 1]], [[0, 0, 0], [0, 1, 0], [0, 0, 2]])
        res = hs.screen_conformal_check(d)
        assert res.state == "fails" and res.witness is not None

    def test_rho_zero_is_geodesic(self):
        d = hs.build_umbilical(2, 1, 0, 1, [[1, 0], [0, 1]])
        assert hs.symmetry_report(d).flags["totally_geodesic"].value


class TestReport:
    def test_umbilical_example(self):
        rep = hs.symmetry_report(hs.build_umbilical(2, 1, 1, 1, [[1, 0], [0, 1]]))
        f = rep.flags
        assert rep.einstein_factor == 3
        assert f["semi_symmetric"].value and f["einstein"].value
        assert not f["local_symmetry_obstruction_vanishes"].value
        assert f["local_symmetry_obstruction_vanishes"].witness is not None

    def test_geodesic_all_obstructions_vanish(self):
        rep = hs.symmetry_report(zero_b(random.Random(14), 3))
        for k in ("semi_symmetric", "ricci_semi_symmetric",
                  "local_symmetry_obstruction_vanishes", "totally_geodesic"):
            assert rep.flags[k].value

    def test_constrained_not_semi_symmetric(self):
        d = hs.random_constrained(random.Random(15), 3)
        rep = hs.symmetry_report(d)
        assert not rep.flags["semi_symmetric"].value
        assert rep.to_dict(3)["flags"]["semi_symmetric"]["witness"]

    @given(seeds, st.sampled_from(["umbilical", "constrained", "einstein", "generic"]))
    def test_implications_never_violated(self, seed, kind):
        rng = random.Random(seed)
        d = getattr(hs, f"random_{kind}")(rng, 2)
        rep = hs.symmetry_report(d)
        assert all(i.holds is not False for i in rep.implications if i.applies)

    def test_size_cap(self):
        d = hs.random_generic(random.Random(16), 7)
        with pytest.raises(ValueError):
            hs.semi_symmetry_tensor(d)
