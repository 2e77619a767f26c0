"""The 2-degenerate metric g_(f,h) on R x O x R^{p+1}, computed exactly.

Index conventions used throughout this module:

* coordinates (tangent working basis): ``x_0, x_1..x_p, y_0, y_1..y_p``
* ambient basis: ``u_0..u_p, v_0..v_p, w_1, w_2``
* adapted frame: ``xi_1, xi_2, U_1..U_p, V_1..V_p``

``f`` and ``h`` are polynomials in ``x_1..x_p`` so every quantity is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .curvature import CurvatureTensor, JacobiOperator
from .degenerate import AdaptedFrame, DegenerateForm
from .linalg import Matrix, bilinear, dot, matvec, solve_invert
from .poly import RationalPolynomial

HALF = Fraction(1, 2)


class RouteDisagreement(RuntimeError):
    """Two independent computations of the same object differ."""

    def __init__(self, what: str, witness):
        super().__init__(f"{what}: routes disagree at {witness}")
        self.what = what
        self.witness = witness


@dataclass(frozen=True)
class GfhFrames:
    xi1: tuple
    xi2: tuple
    U: tuple[tuple, ...]
    V: tuple[tuple, ...]
    N1: tuple                  # ambient components
    N2: tuple
    eta1: tuple                # covectors on coordinate vectors
    eta2: tuple

    def frame_vectors(self) -> list[tuple]:
        return [self.xi1, self.xi2, *self.U, *self.V]

    def adapted(self) -> AdaptedFrame:
        return AdaptedFrame((self.xi1, self.xi2), (*self.U, *self.V),
                            (self.eta1, self.eta2), 2)


@dataclass(frozen=True)
class GfhModel:
    p: int
    f: RationalPolynomial
    h: RationalPolynomial
    point: tuple

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")
        for name, poly in (("f", self.f), ("h", self.h)):
            if poly.nvars != self.p:
                raise ValueError(f"{name} must be a polynomial in {self.p} variables")
        if len(self.point) != 2 * self.p + 2:
            raise ValueError(f"point needs {2 * self.p + 2} coordinates")
        object.__setattr__(self, "point", tuple(Fraction(c) for c in self.point))

    @property
    def m(self) -> int:
        return 2 * self.p + 2

    @property
    def xs(self) -> tuple:
        return self.point[1:self.p + 1]

    # coordinate / frame / ambient index helpers
    def cx(self, i: int) -> int:
        return i

    def cy(self, i: int) -> int:
        return self.p + 1 + i

    def fu(self, i: int) -> int:
        """Frame index of U_i (1-based i)."""
        return 1 + i

    def fv(self, i: int) -> int:
        return self.p + 1 + i

    @cached_property
    def grad_f(self) -> tuple:
        return tuple(self.f.derivative(i)(self.xs) for i in range(self.p))

    @cached_property
    def grad_h(self) -> tuple:
        return tuple(self.h.derivative(i)(self.xs) for i in range(self.p))

    def with_point(self, point: Sequence) -> "GfhModel":
        return GfhModel(self.p, self.f, self.h, tuple(point))


def hessians(model: GfhModel) -> tuple[Matrix, Matrix]:
    p, xs = model.p, model.xs
    out = []
    for poly in (model.f, model.h):
        firsts = [poly.derivative(i) for i in range(p)]
        out.append(Matrix([[firsts[i].derivative(j)(xs) for j in range(p)]
                           for i in range(p)], p))
    return out[0], out[1]


def metric_matrix(model: GfhModel) -> DegenerateForm:
    """Coordinate Gram: ``g(d0x, dix) = f_i``, ``g(dix, djx) = f_i f_j + h_i h_j``,
    ``g(dix, d0y) = h_i``, ``g(dix, djy) = delta_ij``; all other entries vanish."""
    p, m = model.p, model.m
    fg, hg = model.grad_f, model.grad_h
    g = [[Fraction(0)] * m for _ in range(m)]

    def put(a, b, v):
        g[a][b] = v
        g[b][a] = v

    for i in range(1, p + 1):
        put(0, model.cx(i), fg[i - 1])
        put(model.cx(i), model.cy(0), hg[i - 1])
        put(model.cx(i), model.cy(i), Fraction(1))
        for j in range(1, p + 1):
            put(model.cx(i), model.cx(j), fg[i - 1] * fg[j - 1] + hg[i - 1] * hg[j - 1])
    return DegenerateForm(Matrix(g, m))


def ambient_gram(p: int) -> Matrix:
    n = 2 * p + 4
    w1, w2 = 2 * p + 2, 2 * p + 3
    g = [[Fraction(0)] * n for _ in range(n)]

    def put(a, b, v):
        g[a][b] = Fraction(v)
        g[b][a] = Fraction(v)

    put(0, w1, 1)
    put(p + 1, w2, 1)
    for i in range(1, p + 1):
        put(i, p + 1 + i, 1)
    put(w1, w1, 1)
    put(w2, w2, 1)
    return Matrix(g, n)


class Embedding:
    """The map ``F(x, y) = sum x_i u_i + sum y_i v_i + f w_1 + h w_2`` as polynomial data.

    Vector fields are lists of ambient components, each a polynomial in the
    ``2p + 2`` coordinates.  Ambient derivatives are plain partial derivatives
    because the ambient space is flat with a constant basis.
    """

    def __init__(self, model: GfhModel):
        self.model = model
        p = model.p
        self.n = n = model.m
        positions = list(range(1, p + 1))
        self.f = model.f.embed(n, positions)
        self.h = model.h.embed(n, positions)
        zero = RationalPolynomial(n)
        amb = [zero] * (2 * p + 4)
        for i in range(p + 1):
            amb[i] = RationalPolynomial.variable(n, model.cx(i))
            amb[p + 1 + i] = RationalPolynomial.variable(n, model.cy(i))
        amb[2 * p + 2] = self.f
        amb[2 * p + 3] = self.h
        self.F = amb
        self.gbar = ambient_gram(p)
        self.coordinate_fields = [[c.derivative(k) for c in amb] for k in range(n)]
        self._jac: dict = {}

    def at(self, field) -> tuple:
        return tuple(c(self.model.point) for c in field)

    def combine(self, coeffs) -> list:
        """``sum_k coeffs[k] * coordinate_field_k`` with polynomial coefficients."""
        zero = RationalPolynomial(self.n)
        out = [zero] * len(self.F)
        for k, c in enumerate(coeffs):
            if c is None or c.is_zero():
                continue
            for a, comp in enumerate(self.coordinate_fields[k]):
                if not comp.is_zero():
                    out[a] = out[a] + c * comp
        return out

    def jacobian(self, field) -> list[tuple]:
        """Partial derivatives of ``field`` at the point, one ambient vector per coordinate."""
        key = id(field)
        hit = self._jac.get(key)
        if hit is None or hit[0] is not field:
            jac = [tuple(comp.derivative(k)(self.model.point) for comp in field)
                   for k in range(self.n)]
            hit = self._jac[key] = (field, jac)
        return hit[1]

    def derivative_along(self, x_coords: Sequence, field) -> tuple:
        """Ambient derivative of ``field`` along the tangent vector with coordinates ``x``."""
        jac = self.jacobian(field)
        out = [Fraction(0)] * len(field)
        for k, xk in enumerate(x_coords):
            if xk == 0:
                continue
            for a, v in enumerate(jac[k]):
                if v:
                    out[a] += xk * v
        return tuple(out)

    def pushforward(self, v: Sequence) -> tuple:
        pts = [self.at(f) for f in self.coordinate_fields]
        return tuple(sum((v[k] * pts[k][a] for k in range(self.n) if v[k] != 0), Fraction(0))
                     for a in range(len(self.F)))

    def ip(self, a: Sequence, b: Sequence):
        return bilinear(self.gbar, a, b)

    def frame_fields(self) -> dict[str, list]:
        """Model frame as polynomial ambient fields, keyed ``xi1, xi2, U1.., V1.., N1, N2``."""
        m, n = self.model, self.n
        p = m.p
        one = RationalPolynomial.constant(n, 1)
        df = [self.f.derivative(m.cx(i)) for i in range(1, p + 1)]
        dh = [self.h.derivative(m.cx(i)) for i in range(1, p + 1)]
        fields: dict[str, list] = {}
        c = [None] * n
        c[m.cx(0)] = one
        for i in range(1, p + 1):
            c[m.cy(i)] = -df[i - 1]
        fields["xi1"] = self.combine(c)
        c = [None] * n
        c[m.cy(0)] = one
        for i in range(1, p + 1):
            c[m.cy(i)] = -dh[i - 1]
        fields["xi2"] = self.combine(c)
        for i in range(1, p + 1):
            c = [None] * n
            c[m.cx(i)] = one
            c[m.cx(0)] = -df[i - 1]
            c[m.cy(0)] = -dh[i - 1]
            fields[f"U{i}"] = self.combine(c)
        for i in range(1, p + 1):
            c = [None] * n
            c[m.cy(i)] = one
            fields[f"V{i}"] = self.combine(c)
        w = 2 * p + 2
        for a, xi in ((1, "xi1"), (2, "xi2")):
            comps = [(-HALF) * comp for comp in fields[xi]]
            comps[w + a - 1] = comps[w + a - 1] + one
            fields[f"N{a}"] = comps
        return fields


def frame_names(p: int) -> list[str]:
    return ["xi1", "xi2"] + [f"U{i}" for i in range(1, p + 1)] + [f"V{i}" for i in range(1, p + 1)]


def frames(model: GfhModel) -> GfhFrames:
    """Radical and screen frames at the model point, plus the lightlike transversal vectors."""
    p, m = model.p, model.m
    fg, hg = model.grad_f, model.grad_h
    z = Fraction(0)

    def vec(entries: dict) -> tuple:
        return tuple(entries.get(k, z) for k in range(m))

    xi1 = vec({0: Fraction(1), **{model.cy(i): -fg[i - 1] for i in range(1, p + 1)}})
    xi2 = vec({model.cy(0): Fraction(1), **{model.cy(i): -hg[i - 1] for i in range(1, p + 1)}})
    U = tuple(vec({model.cx(i): Fraction(1), 0: -fg[i - 1], model.cy(0): -hg[i - 1]})
              for i in range(1, p + 1))
    V = tuple(vec({model.cy(i): Fraction(1)}) for i in range(1, p + 1))
    na = 2 * p + 4
    n1 = [z] * na
    n2 = [z] * na
    n1[2 * p + 2] = Fraction(1)
    n1[0] = -HALF
    n2[2 * p + 3] = Fraction(1)
    n2[p + 1] = -HALF
    for k in range(1, p + 1):
        n1[p + 1 + k] = HALF * fg[k - 1]
        n2[p + 1 + k] = HALF * hg[k - 1]
    gbar = ambient_gram(p)
    # eta_a(d_k) = gbar(N_a, dF(d_k)); dF is evaluated from the closed-form tangent basis
    push = _closed_form_pushforward(model)
    eta1 = tuple(bilinear(gbar, n1, push[k]) for k in range(m))
    eta2 = tuple(bilinear(gbar, n2, push[k]) for k in range(m))
    return GfhFrames(xi1, xi2, U, V, tuple(n1), tuple(n2), eta1, eta2)


def _closed_form_pushforward(model: GfhModel) -> list[tuple]:
    p = model.p
    na = 2 * p + 4
    fg, hg = model.grad_f, model.grad_h
    out = []
    for k in range(model.m):
        v = [Fraction(0)] * na
        v[k] = Fraction(1)         # d_{x_i} -> u_i, d_{y_i} -> v_i share index order
        if 1 <= k <= p:
            v[2 * p + 2] = fg[k - 1]
            v[2 * p + 3] = hg[k - 1]
        out.append(tuple(v))
    return out


def adapted_frame(model: GfhModel) -> AdaptedFrame:
    return frames(model).adapted()


def frame_gram(model: GfhModel) -> Matrix:
    return adapted_frame(model).frame_gram(metric_matrix(model))


def second_fundamental(model: GfhModel) -> tuple[Matrix, Matrix]:
    """``h^l_1(U_i, U_j) = f_;ij`` and ``h^l_2(U_i, U_j) = h_;ij`` (all other components vanish)."""
    return hessians(model)


def second_fundamental_ambient(model: GfhModel) -> tuple[Matrix, Matrix]:
    """Full frame tables ``h^l_a(X, Y) = -gbar(dbar_X xi_a, Y)`` from the embedding."""
    emb = Embedding(model)
    fields = emb.frame_fields()
    names = frame_names(model.p)
    fr = frames(model).frame_vectors()
    amb = [emb.pushforward(v) for v in fr]
    out = []
    for xi in ("xi1", "xi2"):
        rows = []
        for x in fr:
            d = emb.derivative_along(x, fields[xi])
            rows.append([-emb.ip(d, amb[b]) for b in range(len(names))])
        out.append(Matrix(rows, len(names)))
    return out[0], out[1]


def connection_coefficients(model: GfhModel) -> dict[tuple[int, int], tuple]:
    """Nonzero ``nabla_{e_a} e_b`` as frame-component vectors (frame indices)."""
    p, m = model.p, model.m
    F, H = hessians(model)
    fg, hg = model.grad_f, model.grad_h
    table: dict[tuple[int, int], tuple] = {}
    for i in range(1, p + 1):
        for j in range(1, p + 1):
            v = [Fraction(0)] * m
            fij, hij = F[i - 1, j - 1], H[i - 1, j - 1]
            v[0] = -HALF * fij
            v[1] = -HALF * hij
            for k in range(1, p + 1):
                v[model.fv(k)] = -(fij * fg[k - 1] + hij * hg[k - 1])
            if any(v):
                table[(model.fu(i), model.fu(j))] = tuple(v)
        for a, hess in ((0, F), (1, H)):
            v = [Fraction(0)] * m
            for j in range(1, p + 1):
                v[model.fv(j)] = -hess[i - 1, j - 1]
            if any(v):
                table[(model.fu(i), a)] = tuple(v)
    return table


def connection_ambient(model: GfhModel) -> tuple[dict, dict]:
    """Gauss split of ``dbar_{e_a} e_b``: (tangent frame components, ltr components)."""
    emb = Embedding(model)
    fields = emb.frame_fields()
    names = frame_names(model.p)
    fr = frames(model).frame_vectors()
    basis = [emb.at(fields[n]) for n in names] + [emb.at(fields["N1"]), emb.at(fields["N2"])]
    inv = solve_invert(Matrix.from_columns(basis))
    tangent, transversal = {}, {}
    m = model.m
    for a, x in enumerate(fr):
        for b, name in enumerate(names):
            d = emb.derivative_along(x, fields[name])
            comps = matvec(inv, d)
            if any(comps[:m]):
                tangent[(a, b)] = tuple(comps[:m])
            if any(comps[m:]):
                transversal[(a, b)] = tuple(comps[m:])
    return tangent, transversal


def _curv_value(F: Matrix, H: Matrix, i: int, j: int, k: int, l: int) -> Fraction:
    return HALF * (F[i, k] * F[j, l] - F[j, k] * F[i, l] + H[i, k] * H[j, l] - H[j, k] * H[i, l])


def curvature(model: GfhModel) -> CurvatureTensor:
    """Closed form: ``R(U_i,U_j,U_k,U_l) = 1/2 {f_ik f_jl - f_jk f_il + h_ik h_jl - h_jk h_il}``.

    The operator form ``R(U_i,U_j)U_k = sum_l (same) V_l`` is attached.
    """
    p = model.p
    F, H = hessians(model)
    comps, op = {}, {}
    for i in range(p):
        for j in range(p):
            for k in range(p):
                for l in range(p):
                    v = _curv_value(F, H, i, j, k, l)
                    if v:
                        ui, uj, uk = model.fu(i + 1), model.fu(j + 1), model.fu(k + 1)
                        comps[(ui, uj, uk, model.fu(l + 1))] = v
                        op[(ui, uj, uk, model.fv(l + 1))] = v
    return CurvatureTensor(model.m, comps, op)


def curvature_gauss(model: GfhModel) -> CurvatureTensor:
    """Gauss-equation route from the embedding with a flat ambient and ``h^s = 0``:

    ``R(X,Y,Z,PW) = gbar(h*(X,PW), h^l(Y,Z)) - gbar(h*(Y,PW), h^l(X,Z))`` where
    ``h^l_a(X,Z) = gbar(dbar_X Z, xi_a)`` and ``h*_a(X,W) = gbar(dbar_X W, N_a)``.
    Components with a radical vector in the last slot vanish since ``g(., xi) = 0``.
    """
    emb = Embedding(model)
    fields = emb.frame_fields()
    names = frame_names(model.p)
    fr = frames(model).frame_vectors()
    m = model.m
    xi = [emb.at(fields["xi1"]), emb.at(fields["xi2"])]
    nn = [emb.at(fields["N1"]), emb.at(fields["N2"])]
    deriv = [[emb.derivative_along(fr[a], fields[names[b]]) for b in range(m)]
             for a in range(m)]
    hl = [[[emb.ip(deriv[x][z], xi[a]) for z in range(m)] for x in range(m)] for a in range(2)]
    hs = [[[emb.ip(deriv[x][w], nn[a]) for w in range(m)] for x in range(m)] for a in range(2)]
    comps: dict[tuple, Fraction] = {}
    for a in range(2):
        hs_nz = [(x, w, hs[a][x][w]) for x in range(m) for w in range(2, m) if hs[a][x][w]]
        hl_nz = [(y, z, hl[a][y][z]) for y in range(m) for z in range(m) if hl[a][y][z]]
        for x, w, s_val in hs_nz:
            for y, z, l_val in hl_nz:
                v = s_val * l_val
                comps[(x, y, z, w)] = comps.get((x, y, z, w), Fraction(0)) + v
                comps[(y, x, z, w)] = comps.get((y, x, z, w), Fraction(0)) - v
    return CurvatureTensor(m, comps)


def compare_routes(a: CurvatureTensor, b: CurvatureTensor) -> tuple | None:
    """First index quadruple where two tensors differ, or None."""
    for key in sorted(set(a.components) | set(b.components)):
        if a[key] != b[key]:
            return key
    return None


def jacobi_matrix(model: GfhModel, X: Sequence) -> JacobiOperator:
    """Block form: ``Phi_li = 1/2 sum_jk X_j X_k (f_ik f_jl - f_jk f_il + h_ik h_jl - h_jk h_il)``
    in the V-rows / U-columns block, zero elsewhere.  ``X`` is in frame components."""
    p, m = model.p, model.m
    F, H = hessians(model)
    xu = [Fraction(X[model.fu(j)]) for j in range(1, p + 1)]
    rows = [[Fraction(0)] * m for _ in range(m)]
    for l in range(p):
        for i in range(p):
            phi = Fraction(0)
            for j in range(p):
                if not xu[j]:
                    continue
                for k in range(p):
                    if xu[k]:
                        phi += xu[j] * xu[k] * _curv_value(F, H, i, j, k, l)
            rows[model.fv(l + 1)][model.fu(i + 1)] = phi
    g = frame_gram(model)
    q = bilinear(g, X, X)
    return JacobiOperator(tuple(Fraction(c) for c in X), q, Matrix(rows, m))


def pullback_gram(model: GfhModel) -> Matrix:
    """Oracle for :func:`metric_matrix`: ``gbar(dF e_a, dF e_b)`` from the embedding."""
    emb = Embedding(model)
    vecs = [emb.at(f) for f in emb.coordinate_fields]
    return Matrix([[emb.ip(a, b) for b in vecs] for a in vecs], model.m)


def frame_invariant_violations(model: GfhModel) -> list[str]:
    """Checks the frame relations that hold exactly for the model frames."""
    fr = frames(model)
    g = metric_matrix(model)
    gbar = ambient_gram(model.p)
    bad = []
    for name, xi in (("xi1", fr.xi1), ("xi2", fr.xi2)):
        if any(matvec(g.gram, xi)):
            bad.append(f"g({name}, .) != 0")
    emb_xi = [bilinear(gbar, fr.N1, v) for v in (_push(model, fr.xi1), _push(model, fr.xi2))]
    emb_xi2 = [bilinear(gbar, fr.N2, v) for v in (_push(model, fr.xi1), _push(model, fr.xi2))]
    if emb_xi != [1, 0] or emb_xi2 != [0, 1]:
        bad.append("gbar(N_i, xi_j) != delta_ij")
    if (bilinear(gbar, fr.N1, fr.N1), bilinear(gbar, fr.N1, fr.N2),
            bilinear(gbar, fr.N2, fr.N2)) != (0, 0, 0):
        bad.append("gbar(N_i, N_j) != 0")
    p = model.p
    fg, hg = model.grad_f, model.grad_h
    for i in range(p):
        for j in range(p):
            if g(fr.U[i], fr.V[j]) != (1 if i == j else 0):
                bad.append(f"g(U{i + 1}, V{j + 1}) != delta")
            if g(fr.V[i], fr.V[j]) != 0:
                bad.append(f"g(V{i + 1}, V{j + 1}) != 0")
            if g(fr.U[i], fr.U[j]) != -(fg[i] * fg[j] + hg[i] * hg[j]):
                bad.append(f"g(U{i + 1}, U{j + 1}) != -(f_i f_j + h_i h_j)")
    for name, n in (("N1", fr.N1), ("N2", fr.N2)):
        for k, v in enumerate(fr.U + fr.V):
            if bilinear(gbar, n, _push(model, v)) != 0:
                bad.append(f"gbar({name}, screen_{k + 1}) != 0")
    return bad


def _push(model: GfhModel, v: Sequence) -> tuple:
    pts = _closed_form_pushforward(model)
    na = 2 * model.p + 4
    return tuple(sum((v[k] * pts[k][a] for k in range(model.m) if v[k]), Fraction(0))
                 for a in range(na))
