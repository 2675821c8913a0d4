"""The group two-cocycle of formal automorphisms valued in closed two-forms.

Built from Jacobian currents: with g the Jacobian jet of an automorphism,
alpha3 is the Chern-Simons-type 3-form (1/3) tr((g^{-1} dg)^3), alpha2 the
two-argument current pairing, mu a radial primitive of alpha3, and the
lifted cocycle combines them so that the Polyakov-Wiegmann identity makes
it closed.  The derivative at the identity is taken with two square-zero
parameters and lands on the Lie-level cocycle up to one calibrated scale.

Everything is computed at a raised working order internally so that the
exterior derivatives lose nothing below the reported truncation; reported
residuals are then exactly zero, not zero-up-to-top-degree.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ShapeError
from .gf import ch2_gf
from .jets import (FormalForm, FormalVectorField, FormMatrix, JetAutomorphism,
                   JetSeries, de_rham, jacobian, jet_compose, jet_invert,
                   poincare_homotopy, pullback_form)
from .scalars import NilpotentPair

_HEADROOM = 2


def _lift(phi: JetAutomorphism, order) -> JetAutomorphism:
    return JetAutomorphism(phi.n, order,
                           [f.with_order(order) for f in phi.comps])


def _check_pair(f1, f2):
    if f1.n != f2.n or f1.order != f2.order:
        raise ShapeError("automorphisms must share rank and order")


def _currents(phi: JetAutomorphism):
    """(g^{-1} dg, dg g^{-1}) for g = Jac(phi), as matrices of one-forms."""
    g = jacobian(phi)
    ginv = jet_invert(g)
    dg = FormMatrix.de_rham_of(g)
    return dg.scale_jet_left(ginv), dg.scale_jet_right(ginv)


def _alpha2_raw(f1: JetAutomorphism, f2: JetAutomorphism) -> FormalForm:
    # tr( f1^*(g2^{-1} dg2) ^ dg1 g1^{-1} ); the pullback placement is the
    # one that satisfies Polyakov-Wiegmann exactly (tests pin it down).
    left_inv_d2, _ = _currents(f2)
    _, d_right_inv1 = _currents(f1)
    pulled = left_inv_d2.map_entries(lambda w: pullback_form(f1, w))
    return pulled.wedge_mul(d_right_inv1).trace()


def _alpha3_raw(phi: JetAutomorphism) -> FormalForm:
    if phi.n < 3:
        return FormalForm.zero(phi.n, phi.order, min(3, phi.n))
    cur, _ = _currents(phi)
    cube = cur.wedge_mul(cur).wedge_mul(cur)
    return cube.trace().scale(Fraction(1, 3))


def _mu_raw(phi: JetAutomorphism) -> FormalForm:
    a3 = _alpha3_raw(phi)
    if a3.is_zero():
        return FormalForm.zero(phi.n, phi.order, 2)
    return poincare_homotopy(a3, check=False).with_order(phi.order)


def alpha2(f1: JetAutomorphism, f2: JetAutomorphism) -> FormalForm:
    """Two-argument Jacobian-current pairing; bilinear in the jets."""
    _check_pair(f1, f2)
    order = f1.order
    w = order + _HEADROOM
    return _alpha2_raw(_lift(f1, w), _lift(f2, w)).with_order(order)


def alpha3(phi: JetAutomorphism) -> FormalForm:
    """(1/3) tr((g^{-1} dg)^3); zero below rank three, de Rham closed."""
    w = phi.order + _HEADROOM
    return _alpha3_raw(_lift(phi, w)).with_order(phi.order)


def mu(phi: JetAutomorphism) -> FormalForm:
    """Radial primitive of alpha3: d mu(f) = alpha3(f) exactly.

    Reported at order K+1, like the homotopy it is built from.
    """
    a3 = alpha3(phi)
    if a3.is_zero():
        return FormalForm.zero(phi.n, phi.order + 1, 2)
    return poincare_homotopy(a3, check=False)


def pw_check(f1: JetAutomorphism, f2: JetAutomorphism):
    """Polyakov-Wiegmann identity
        alpha3(f2 o f1) = alpha3(f1) + f1^* alpha3(f2) - d alpha2(f1, f2);
    returns (holds, residual-at-input-order)."""
    _check_pair(f1, f2)
    order = f1.order
    w = order + _HEADROOM
    g1, g2 = _lift(f1, w), _lift(f2, w)
    lhs = _alpha3_raw(jet_compose(g2, g1))
    rhs = _alpha3_raw(g1) + pullback_form(g1, _alpha3_raw(g2)) \
        - de_rham(_alpha2_raw(g1, g2))
    residual = (lhs - rhs).with_order(order)
    return residual.is_zero(), residual


def alpha_tilde(f1: JetAutomorphism, f2: JetAutomorphism) -> FormalForm:
    """Lifted two-cocycle: alpha2 corrected by the coboundary of mu,

        alpha~(f1,f2) = alpha2(f1,f2) - mu(f1) - f1^* mu(f2) + mu(f2 o f1),

    the sign of the mu-terms being forced by closedness: with the
    Polyakov-Wiegmann orientation satisfied by alpha2 here, d(mu-coboundary)
    equals +d alpha2, so the correction must be subtracted.  Closed, and a
    group cocycle for the pullback-twisted product
    (f1, w1)(f2, w2) = (f2 o f1, w1 + f1^* w2 + alpha~(f1,f2))."""
    _check_pair(f1, f2)
    order = f1.order
    w = order + _HEADROOM
    g1, g2 = _lift(f1, w), _lift(f2, w)
    total = _alpha2_raw(g1, g2) - _mu_raw(g1) \
        - pullback_form(g1, _mu_raw(g2)) + _mu_raw(jet_compose(g2, g1))
    return total.with_order(order)


def group_cocycle_residual(f1, f2, f3) -> FormalForm:
    """Associativity form of the extension product:
        alpha~(f1,f2) + alpha~(f2 o f1, f3) - f1^* alpha~(f2,f3)
          - alpha~(f1, f3 o f2)."""
    _check_pair(f1, f2)
    _check_pair(f2, f3)
    order = f1.order
    w = order + _HEADROOM
    g1, g2, g3 = (_lift(f, w) for f in (f1, f2, f3))

    def at(a, b):
        return _alpha2_raw(a, b) - _mu_raw(a) - pullback_form(a, _mu_raw(b)) \
            + _mu_raw(jet_compose(b, a))

    res = at(g1, g2) + at(jet_compose(g2, g1), g3) \
        - pullback_form(g1, at(g2, g3)) - at(g1, jet_compose(g3, g2))
    return res.with_order(order)


def _nilpotent_deform(x: FormalVectorField, which) -> JetAutomorphism:
    """id + s X (which='s') or id + u X (which='u') over Q[s,u]/(s^2,u^2)."""
    unit = NilpotentPair.S if which == "s" else NilpotentPair.U
    n, order = x.n, x.order
    comps = []
    for i in range(1, n + 1):
        f = JetSeries.variable(n, order, i) + x.comps[i - 1].map_coeffs(
            lambda c: unit * c)
        comps.append(f)
    return JetAutomorphism(n, order, comps)


def d1_compare(x: FormalVectorField, y: FormalVectorField):
    """Van Est derivative of alpha_tilde at the identity against ch2.

    Deforms along (id + sX, id + uY) with s^2 = u^2 = 0, extracts the s*u
    coefficient, antisymmetrizes in (X, Y), and compares with the calibrated
    multiple of ch2(X,Y).  Both fields must vanish at the origin.
    Returns (lie_level_form, ch2_form, verdict).
    """
    from .constants import GMS_D1_SCALE
    if not (x.vanishes_at_origin() and y.vanishes_at_origin()):
        raise ShapeError("d1_compare needs fields vanishing at the origin")
    if x.n != y.n or x.order != y.order:
        raise ShapeError("rank/order mismatch")

    def su_part(form: FormalForm) -> FormalForm:
        return form.map_coeffs(
            lambda c: c.d if isinstance(c, NilpotentPair) else Fraction(0))

    mxy = su_part(alpha_tilde(_nilpotent_deform(x, "s"),
                              _nilpotent_deform(y, "u")))
    myx = su_part(alpha_tilde(_nilpotent_deform(y, "s"),
                              _nilpotent_deform(x, "u")))
    lie_level = mxy - myx
    target = ch2_gf(x, y).scale(GMS_D1_SCALE)
    return lie_level, ch2_gf(x, y), lie_level == target
