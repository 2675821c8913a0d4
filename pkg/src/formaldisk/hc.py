"""Actions of formal vector fields, forms, and GL_n on the state space.

A vector field f(t) d/dt_j embeds as the weight-one state f(c) b^j_{-1}
and acts through its zero mode; a one-form f(t) dt_j embeds as
f(c) T(c^j_0) and likewise acts through the zero mode, which kills exact
forms, so closed two-forms act through any de Rham primitive (the radial
one by default, with the direct first-mode formula kept as an independent
cross-check).  The failure of the vector-field action to be a Lie map is
the extension cocycle; :func:`msv_defect` computes it as an operator and
the tests match it against the explicit second Chern-character cocycle.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ClosednessError, InvertibilityError, ShapeError
from .gf import ch2_gf
from .jets import (FormalForm, FormalVectorField, JetSeries, de_rham,
                   lie_derivative, poincare_homotopy, staircase_primitive,
                   _scalar_matrix_inverse)
from .vertex import (KIND_B, KIND_C, VAState, mode_apply, translate)


def jet_to_state(f: JetSeries, policy) -> VAState:
    """Substitute c^i_0 for t_i: the dimension-zero embedding of functions."""
    terms = {}
    for e, c in f.coeffs.items():
        mono = []
        for i, k in enumerate(e):
            mono.extend([(KIND_C, i + 1, 0)] * k)
        terms[tuple(mono)] = c
    return VAState(f.n, policy, terms)


def state_to_jet(v: VAState, order) -> JetSeries:
    """Inverse of jet_to_state on weight-zero states."""
    coeffs = {}
    for mono, c in v.terms.items():
        e = [0] * v.n
        for kind, j, m in mono:
            if kind != KIND_C or m != 0:
                raise ShapeError("state is not of conformal weight zero")
            e[j - 1] += 1
        coeffs[tuple(e)] = c
    return JetSeries(v.n, order, coeffs)


def tau_w(x: FormalVectorField, policy) -> VAState:
    """f(t) d_j  |->  f(c) b^j_{-1}, in conformal weight one."""
    out = VAState.zero(x.n, policy)
    for j in range(1, x.n + 1):
        f = x.comps[j - 1]
        if f.is_zero():
            continue
        out = out + jet_to_state(f, policy) * \
            VAState.generator(x.n, policy, KIND_B, j, -1)
    return out


def rho_w(x: FormalVectorField, v: VAState) -> VAState:
    """Zero mode of tau_w(x); a grading-preserving derivation of products."""
    return mode_apply(tau_w(x, v.policy), 0, v)


def tau_omega1(theta: FormalForm, policy) -> VAState:
    """f(t) dt_j  |->  f(c) T(c^j_0) = f(c) c^j_{-1}."""
    if theta.degree != 1:
        raise ShapeError("tau_omega1 expects a one-form")
    out = VAState.zero(theta.n, policy)
    for (j,), f in theta.comps.items():
        out = out + jet_to_state(f, policy) * \
            VAState.generator(theta.n, policy, KIND_C, j, -1)
    return out


def rho_omega1(theta: FormalForm, v: VAState) -> VAState:
    """Zero mode of tau_omega1(theta); vanishes when theta is exact."""
    return mode_apply(tau_omega1(theta, v.policy), 0, v)


def rho_omega2(omega: FormalForm, v: VAState, path="homotopy") -> VAState:
    """Action of a closed two-form, i.e. of any de Rham primitive.

    ``homotopy`` feeds the radial primitive to the zero mode of tau_omega1;
    ``direct`` is the first-mode route: (T u)_(1) = -u_(0) turns the zero
    mode of a primitive into the first mode of a weight-two state, and the
    primitive is built by staircase integration rather than radially, so
    the two paths share no intermediate.  They agree as operators because
    exact one-forms act by zero; the tests hold them against each other.
    """
    if omega.degree != 2:
        raise ShapeError("rho_omega2 expects a two-form")
    if v.n == 1:
        return VAState.zero(v.n, v.policy)
    if not de_rham(omega).is_zero():
        raise ClosednessError("rho_omega2 requires a closed two-form")
    if path == "homotopy":
        theta = poincare_homotopy(omega, check=False)
        return rho_omega1(theta, v)
    if path != "direct":
        raise ShapeError(f"unknown rho_omega2 path {path!r}")
    theta = staircase_primitive(omega, check=False)
    weight_two = translate(tau_omega1(theta, v.policy))
    return -mode_apply(weight_two, 1, v)


def gl_act(a_matrix, v: VAState) -> VAState:
    """Linear change of frame: c-modes transform by A, b-modes by (A^T)^{-1},
    extended multiplicatively over monomials; commutes with T.

    Substitution into symbols is contravariant, so a left action on states
    (gl_act(A) gl_act(B) = gl_act(AB)) replaces c^j by sum_k A[k][j] c^k,
    i.e. the row-vector reading of "c goes to A c".
    """
    n = v.n
    rows = [[Fraction(x) for x in row] for row in a_matrix]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ShapeError("matrix must be n x n")
    inv = _scalar_matrix_inverse(rows)
    if inv is None:
        raise InvertibilityError("gl_act requires an invertible matrix")
    # substitution matrices, indexed [old j][new k]
    c_sub = [[rows[k][j] for k in range(n)] for j in range(n)]
    b_sub = [[inv[j][k] for k in range(n)] for j in range(n)]
    out = VAState.zero(n, v.policy)
    for mono, coef in v.terms.items():
        acc = VAState(n, v.policy, {(): coef}, _clean=True)
        for kind, j, m in mono:
            mat = c_sub if kind == KIND_C else b_sub
            sym_sum = VAState.zero(n, v.policy)
            for k in range(1, n + 1):
                if mat[j - 1][k - 1]:
                    sym_sum = sym_sum + VAState.generator(
                        n, v.policy, kind, k, m, mat[j - 1][k - 1])
            acc = acc * sym_sum
        out = out + acc
    return out


def msv_defect(x: FormalVectorField, y: FormalVectorField,
               v: VAState) -> VAState:
    """D(X,Y)v = [rho_W(X), rho_W(Y)] v - rho_W([X,Y]) v.

    Nonzero exactly because the vector fields act only projectively; the
    defect is the extension cocycle applied to v.
    """
    from .jets import vf_bracket
    first = rho_w(x, rho_w(y, v)) - rho_w(y, rho_w(x, v))
    return first - rho_w(vf_bracket(x, y), v)


class ExtendedVectorField:
    """Pair (X, omega) in the extension of W_n by closed two-forms."""

    __slots__ = ("field", "form")

    def __init__(self, field: FormalVectorField, form: FormalForm):
        if form.degree != 2 and not form.is_zero():
            raise ShapeError("extension component must be a two-form")
        if not de_rham(form).is_zero():
            raise ClosednessError("extension component must be closed")
        if field.n != form.n:
            raise ShapeError("rank mismatch in extended field")
        self.field = field
        self.form = form

    @classmethod
    def lift(cls, field: FormalVectorField):
        return cls(field, FormalForm.zero(field.n, field.order, 2))

    def __eq__(self, other):
        if not isinstance(other, ExtendedVectorField):
            return NotImplemented
        return self.field == other.field and self.form == other.form

    def __repr__(self):
        return f"ExtendedVectorField({self.field!r}, {self.form!r})"


def tilde_bracket(a: ExtendedVectorField, b: ExtendedVectorField) -> ExtendedVectorField:
    """[(X,w),(Y,e)] = ([X,Y], L_X e - L_Y w + ch2(X,Y))."""
    from .jets import vf_bracket
    x, y = a.field, b.field
    form = lie_derivative(x, b.form) - lie_derivative(y, a.form) + ch2_gf(x, y)
    return ExtendedVectorField(vf_bracket(x, y), form)
